/// Size limits for resolutions and intermediate presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest total number of generators (summed over objects) allowed in
    /// any free module built while resolving.
    pub max_generators: usize,
    /// Largest number of dense action matrix entries (summed over
    /// morphisms) of such a module. Bounds memory.
    pub max_action_entries: usize,
    /// Largest ambient dimension of a single coend built for a bicomplex.
    pub max_tensor_dim: usize,
}

impl Budget {
    pub const ENV_VAR: &'static str = "BREDON_BUDGET";
    const DEFAULT_ACTION_ENTRIES: usize = 4_000_000;
    const DEFAULT_TENSOR_DIM: usize = 2_500;

    pub fn new(max_generators: usize) -> Self {
        Budget {
            max_generators,
            max_action_entries: Self::DEFAULT_ACTION_ENTRIES,
            max_tensor_dim: Self::DEFAULT_TENSOR_DIM,
        }
    }

    /// Default budget, overridden by `BREDON_BUDGET` when it parses as a count.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(20_000)
    }
}
