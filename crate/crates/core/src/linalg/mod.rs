//! Exact integer linear algebra.
//!
//! Everything here works over ℤ with arbitrary-precision entries. Outputs are
//! canonical (Hermite pivots positive and reduced, Smith diagonals forming a
//! divisibility chain, kernel bases in Hermite form) so that results
//! downstream are reproducible bit for bit.

mod abelian;
mod chain;
mod lattice;
mod matrix;
mod normal_form;

use thiserror::Error;

pub use abelian::{
    cokernel_invariants, fp_cokernel, fp_kernel, map_is_injective, map_is_isomorphism,
    map_is_surjective, map_is_well_defined, map_is_zero, maps_agree, preimage_lattice,
    AbelianGroupInvariants, AbelianQuotient, FpAbelianGroup,
};
pub use chain::ChainComplex;
pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use normal_form::{
    hermite_normal_form, kernel_basis, smith_normal_form, smith_normal_form_with, HermiteForm,
    LinearSolver, SmithForm, SmithTransforms,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("consecutive boundaries ending in degree {degree} do not compose to zero")]
    CompositionNonzero { degree: i64 },
    #[error("boundary in degree {degree} does not respect relations")]
    NotWellDefined { degree: i64 },
    #[error("maps do not commute with boundaries in degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
}
