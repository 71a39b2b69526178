//! Equivariant Bredon homology `H_*^𝔉(X, M)` through the bicomplex
//! `(C_*(X) ⊗ Q_*) ⊗_𝔉 M`, comparison checks against independent
//! computations, and the consistency harness for the finiteness criterion.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{
    essentially_trivial, homology_system, inclusion_chain_map, BredonChainComplex, ComplexError,
    EssentialTriviality, Filtration, GammaComplex, GoodnessReport, SimplicialComplex,
};
use crate::group::Subgroup;
use crate::linalg::{
    fp_cokernel, fp_kernel, map_is_isomorphism, maps_agree, AbelianGroupInvariants, ChainComplex, FpAbelianGroup,
    IntMatrix,
};
use crate::module::{fp_n_report_with, resolve_with, same_category, BredonModule, CoverStrategy, ModuleError, Resolution, Variance};
use crate::orbit::{GammaSet, OrbitCategory};
use crate::tensor::{bredon_homology_of_group, tensor_over_family, tensor_over_z, TensorError, TensorResult};
use crate::Budget;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivariantError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("complex and module live over different groups or categories")]
    CategoryMismatch,
    #[error("H_{degree} changed from {short} to {long} when the resolution was lengthened")]
    Unstable {
        degree: usize,
        short: AbelianGroupInvariants,
        long: AbelianGroupInvariants,
    },
    #[error("bicomplex entry ({p}, {q}) needs a coend of dimension {dim}, budget allows {limit}")]
    TooLarge { p: usize, q: usize, dim: usize, limit: usize },
    #[error("no vertex of the stage is fixed by {0}")]
    NoFixedPoint(String),
    #[error("the family intersected with the stabilizer {0} is not contained in the family")]
    FamilyNotContained(String),
}

/// One entry `(C_p ⊗ Q_q) ⊗_𝔉 M` of the bicomplex.
#[derive(Clone, Debug)]
struct Entry {
    p: usize,
    q: usize,
    tensor: TensorResult,
    /// Offset of this entry's generators inside its total degree.
    offset: usize,
}

/// The bicomplex `(C_p ⊗_ℤ Q_q) ⊗_𝔉 M` truncated to total degree `top`, and
/// its total complex. The vertical differential carries the sign `(−1)^p`.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    top: usize,
    entries: Vec<Vec<Entry>>,
    index: HashMap<(usize, usize), (usize, usize)>,
    c_dims: Vec<Vec<usize>>,
    q_dims: Vec<Vec<usize>>,
    m_dims: Vec<usize>,
    total: ChainComplex,
}

impl Bicomplex {
    /// `c` must start in degree 0; `q_diffs[q - 1]` holds the per-object
    /// matrices of `Q_q → Q_{q−1}`.
    pub fn new(
        c: &BredonChainComplex,
        q_terms: &[BredonModule],
        q_diffs: &[Vec<IntMatrix>],
        m: &BredonModule,
        top: usize,
    ) -> Result<Self, EquivariantError> {
        assert_eq!(c.min_degree(), 0, "bicomplex needs a non-augmented chain complex");
        let cat = m.category();
        if !same_category(c.category(), cat) {
            return Err(EquivariantError::CategoryMismatch);
        }
        let pmax = c.max_degree() as usize;
        let c_dims: Vec<Vec<usize>> = c
            .modules()
            .iter()
            .map(|mm| mm.values().iter().map(|v| v.generators).collect())
            .collect();
        let q_dims: Vec<Vec<usize>> = q_terms
            .iter()
            .map(|mm| mm.values().iter().map(|v| v.generators).collect())
            .collect();
        let m_dims: Vec<usize> = m.values().iter().map(|v| v.generators).collect();
        let limit = Budget::from_env().max_tensor_dim;
        let mut entries: Vec<Vec<Entry>> = vec![Vec::new(); top + 1];
        let mut index = HashMap::new();
        for (d, slot) in entries.iter_mut().enumerate() {
            let mut offset = 0;
            for p in 0..=d.min(pmax) {
                let q = d - p;
                if q >= q_terms.len() {
                    continue;
                }
                let dim: usize = cat.objects().map(|o| c_dims[p][o] * q_dims[q][o] * m_dims[o]).sum();
                if dim > limit {
                    return Err(EquivariantError::TooLarge { p, q, dim, limit });
                }
                let cq = tensor_over_z(c.module(p as i64), &q_terms[q])?;
                let tensor = tensor_over_family(&cq, m)?;
                index.insert((p, q), (d, slot.len()));
                let g = tensor.generator_count();
                slot.push(Entry { p, q, tensor, offset });
                offset += g;
            }
        }
        let terms: Vec<FpAbelianGroup> = entries
            .iter()
            .map(|es| FpAbelianGroup::direct_sum_all(&es.iter().map(|e| e.tensor.presentation()).collect::<Vec<_>>()))
            .collect();
        let mut boundaries = Vec::with_capacity(top);
        for d in 1..=top {
            let mut bd = IntMatrix::zeros(terms[d - 1].generators, terms[d].generators);
            for e in &entries[d] {
                if e.p >= 1 {
                    if let Some(&(_, j)) = index.get(&(e.p - 1, e.q)) {
                        let t = &entries[d - 1][j];
                        let blocks: Vec<IntMatrix> = cat
                            .objects()
                            .map(|o| {
                                c.differential(e.p as i64)
                                    .component(o)
                                    .kron(&IntMatrix::identity(q_dims[e.q][o]))
                                    .kron(&IntMatrix::identity(m_dims[o]))
                            })
                            .collect();
                        bd.set_block(t.offset, e.offset, &e.tensor.induced(&t.tensor, &blocks));
                    }
                }
                if e.q >= 1 {
                    if let Some(&(_, j)) = index.get(&(e.p, e.q - 1)) {
                        let t = &entries[d - 1][j];
                        let sign = if e.p % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                        let blocks: Vec<IntMatrix> = cat
                            .objects()
                            .map(|o| {
                                IntMatrix::identity(c_dims[e.p][o])
                                    .kron(&q_diffs[e.q - 1][o])
                                    .kron(&IntMatrix::identity(m_dims[o]))
                                    .scale(&sign)
                            })
                            .collect();
                        bd.set_block(t.offset, e.offset, &e.tensor.induced(&t.tensor, &blocks));
                    }
                }
            }
            boundaries.push(bd);
        }
        let total = ChainComplex::new(0, terms, boundaries)
            .map_err(|e| TensorError::Inconsistent(format!("total complex: {e}")))?;
        Ok(Bicomplex {
            top,
            entries,
            index,
            c_dims,
            q_dims,
            m_dims,
            total,
        })
    }

    /// Bicomplex for a free resolution `Q → ℤ̲`.
    pub fn from_resolution(
        c: &BredonChainComplex,
        q: &Resolution,
        m: &BredonModule,
        top: usize,
    ) -> Result<Self, EquivariantError> {
        let diffs: Vec<Vec<IntMatrix>> = (1..=q.length()).map(|k| q.differential(k).components().to_vec()).collect();
        Self::new(c, q.terms(), &diffs, m, top)
    }

    /// `C_* ⊗_𝔉 M`, the bicomplex with `Q = ℤ̲` concentrated in degree 0.
    pub fn coefficients_only(c: &BredonChainComplex, m: &BredonModule, top: usize) -> Result<Self, EquivariantError> {
        let z = BredonModule::trivial(m.category(), Variance::Right);
        Self::new(c, &[z], &[], m, top)
    }

    pub fn total(&self) -> &ChainComplex {
        &self.total
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn entry(&self, p: usize, q: usize) -> Option<&TensorResult> {
        self.index.get(&(p, q)).map(|&(d, j)| &self.entries[d][j].tensor)
    }

    /// Homology of the total complex; reliable for `k < top`.
    pub fn homology(&self, k: usize) -> AbelianGroupInvariants {
        self.total.homology_invariants(k as i64)
    }

    /// Map of total complexes induced by per-object maps on `C` (indexed by
    /// `p`) and on `Q` (indexed by `q`); `None` means the identity. Entries
    /// with no counterpart in `target` map to zero.
    pub fn chain_map(
        &self,
        target: &Bicomplex,
        c_maps: Option<&[Vec<IntMatrix>]>,
        q_maps: Option<&[Vec<IntMatrix>]>,
    ) -> Vec<IntMatrix> {
        let objects = self.m_dims.len();
        (0..=self.top.min(target.top))
            .map(|d| {
                let rows = target.total.rank(d as i64);
                let mut f = IntMatrix::zeros(rows, self.total.rank(d as i64));
                for e in &self.entries[d] {
                    let Some(&(_, j)) = target.index.get(&(e.p, e.q)) else {
                        continue;
                    };
                    let t = &target.entries[d][j];
                    let blocks: Vec<IntMatrix> = (0..objects)
                        .map(|o| {
                            let cm = match c_maps {
                                Some(maps) => maps
                                    .get(e.p)
                                    .map(|m| m[o].clone())
                                    .unwrap_or_else(|| IntMatrix::zeros(target.c_dims[e.p][o], self.c_dims[e.p][o])),
                                None => IntMatrix::identity(self.c_dims[e.p][o]),
                            };
                            let qm = match q_maps {
                                Some(maps) => maps
                                    .get(e.q)
                                    .map(|m| m[o].clone())
                                    .unwrap_or_else(|| IntMatrix::zeros(target.q_dims[e.q][o], self.q_dims[e.q][o])),
                                None => IntMatrix::identity(self.q_dims[e.q][o]),
                            };
                            cm.kron(&qm).kron(&IntMatrix::identity(self.m_dims[o]))
                        })
                        .collect();
                    f.set_block(t.offset, e.offset, &e.tensor.induced(&t.tensor, &blocks));
                }
                f
            })
            .collect()
    }

    /// `H_k` of a chain map produced by [`Bicomplex::chain_map`], on the
    /// canonical homology generators; `k < top` of both.
    pub fn induced_on_homology(&self, target: &Bicomplex, maps: &[IntMatrix], k: usize) -> InducedMap {
        let matrix = self
            .total
            .induced_map(&target.total, maps, k as i64)
            .expect("bicomplex maps are chain maps");
        InducedMap {
            source: self.total.homology(k as i64).presentation(),
            target: target.total.homology(k as i64).presentation(),
            matrix,
        }
    }
}

/// A homomorphism between presented groups.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: FpAbelianGroup,
    pub target: FpAbelianGroup,
    pub matrix: IntMatrix,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        map_is_isomorphism(&self.matrix, &self.source, &self.target)
    }

    pub fn is_zero(&self) -> bool {
        maps_agree(&self.matrix, &IntMatrix::zeros(self.matrix.rows(), self.matrix.cols()), &self.target)
    }

    pub fn kernel(&self) -> AbelianGroupInvariants {
        fp_kernel(&self.matrix, &self.source, &self.target).0.invariants()
    }

    pub fn cokernel(&self) -> AbelianGroupInvariants {
        fp_cokernel(&self.matrix, &self.target).invariants()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &InducedMap) -> InducedMap {
        InducedMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.mul(&self.matrix),
        }
    }

    pub fn agrees_with(&self, other: &InducedMap) -> bool {
        maps_agree(&self.matrix, &other.matrix, &self.target)
    }
}

fn resolution_of_trivial(category: &Arc<OrbitCategory>, length: usize, budget: Budget) -> Result<Resolution, ModuleError> {
    let z = BredonModule::trivial(category, Variance::Right);
    resolve_with(&z, length, CoverStrategy::Greedy, budget)
}

fn check_left(m: &BredonModule) -> Result<(), EquivariantError> {
    if m.variance() != Variance::Left {
        return Err(TensorError::VarianceMismatch {
            expected: Variance::Left,
            got: m.variance(),
        }
        .into());
    }
    Ok(())
}

/// `H_k^𝔉(X, M)` with a resolution of length `k + 2`, re-checked at `k + 3`.
pub fn equivariant_homology(x: &GammaComplex, m: &BredonModule, k: usize) -> Result<AbelianGroupInvariants, EquivariantError> {
    let budget = Budget::from_env();
    let short = equivariant_homology_with(x, m, k, k + 2, CoverStrategy::Greedy, budget)?;
    let long = equivariant_homology_with(x, m, k, k + 3, CoverStrategy::Greedy, budget)?;
    if short != long {
        return Err(EquivariantError::Unstable { degree: k, short, long });
    }
    Ok(short)
}

/// `H_k^𝔉(X, M)` from a resolution of `ℤ̲` of the given length (at least `k + 1`).
pub fn equivariant_homology_with(
    x: &GammaComplex,
    m: &BredonModule,
    k: usize,
    length: usize,
    strategy: CoverStrategy,
    budget: Budget,
) -> Result<AbelianGroupInvariants, EquivariantError> {
    assert!(length > k, "resolution must reach degree k + 1");
    check_left(m)?;
    let cat = m.category();
    let z = BredonModule::trivial(cat, Variance::Right);
    let q = resolve_with(&z, length, strategy, budget)?;
    let c = x.bredon_chain_complex(cat, false);
    let b = Bicomplex::from_resolution(&c, &q, m, length)?;
    Ok(b.homology(k))
}

/// The one-point complex.
pub fn point_complex(category: &OrbitCategory) -> GammaComplex {
    let g = category.group().clone();
    let pt = GammaSet::point(&g);
    GammaComplex::new(g, pt, vec![vec![0]]).expect("a point is a complex")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux1Degree {
    pub degree: usize,
    /// `H_k^𝔉(X, M)` from the bicomplex of `X`.
    pub complex: AbelianGroupInvariants,
    /// `H_k^𝔉(pt, M)` from the bicomplex of a point.
    pub point: AbelianGroupInvariants,
    /// `Tor_k^𝔉(ℤ̲, M)` from a separate resolution.
    pub group: AbelianGroupInvariants,
    pub projection_is_isomorphism: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux1Report {
    pub n: usize,
    /// Whether `X` is 𝔉-acyclic up to `n − 1`.
    pub applicable: bool,
    pub degrees: Vec<Aux1Degree>,
}

impl Aux1Report {
    pub fn holds(&self) -> bool {
        self.applicable && self.degrees.iter().all(|d| d.holds)
    }
}

/// Compares `H_k^𝔉(X, M) → H_k^𝔉(pt, M)` with `H_k^𝔉(Γ, M)` for `k < n`.
pub fn verify_aux1(x: &GammaComplex, m: &BredonModule, n: usize) -> Result<Aux1Report, EquivariantError> {
    check_left(m)?;
    let cat = m.category();
    if !x.is_family_acyclic(cat, n as i64 - 1).acyclic {
        return Ok(Aux1Report {
            n,
            applicable: false,
            degrees: Vec::new(),
        });
    }
    if n == 0 {
        return Ok(Aux1Report {
            n,
            applicable: true,
            degrees: Vec::new(),
        });
    }
    let q = resolution_of_trivial(cat, n, Budget::from_env())?;
    let cx = x.bredon_chain_complex(cat, false);
    let pt = point_complex(cat);
    let cp = pt.bredon_chain_complex(cat, false);
    let bx = Bicomplex::from_resolution(&cx, &q, m, n)?;
    let bp = Bicomplex::from_resolution(&cp, &q, m, n)?;
    let eps: Vec<IntMatrix> = cat
        .objects()
        .map(|o| {
            let c0 = cx.module(0).value(o).generators;
            IntMatrix::from_big_rows(vec![vec![BigInt::one(); c0]], c0)
        })
        .collect();
    let projection = bx.chain_map(&bp, Some(&[eps]), None);
    let tor = bredon_homology_of_group(m, n - 1)?;
    let degrees = (0..n)
        .map(|k| {
            let complex = bx.homology(k);
            let point = bp.homology(k);
            let group = tor.degrees[k].clone();
            let iso = bx.induced_on_homology(&bp, &projection, k).is_isomorphism();
            Aux1Degree {
                degree: k,
                holds: iso && complex == group && point == group,
                complex,
                point,
                group,
                projection_is_isomorphism: iso,
            }
        })
        .collect();
    Ok(Aux1Report {
        n,
        applicable: true,
        degrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux3Report {
    pub degree: usize,
    pub stages: Vec<AbelianGroupInvariants>,
    pub colimit: AbelianGroupInvariants,
    pub whole: AbelianGroupInvariants,
    /// The last stage maps isomorphically onto `H_k^𝔉(X, M)`.
    pub last_stage_isomorphism: bool,
    /// `H(X_α) → H(X_last)` factors through `H(X_β)` for all `α ≤ β`.
    pub coherent: bool,
}

impl Aux3Report {
    pub fn holds(&self) -> bool {
        self.last_stage_isomorphism && self.coherent && self.colimit == self.whole
    }
}

/// Colimit of `H_k^𝔉(X_α, M)` over a finite chain against `H_k^𝔉(X, M)`.
pub fn verify_aux3(category: &Arc<OrbitCategory>, filtration: &Filtration, m: &BredonModule, k: usize) -> Result<Aux3Report, EquivariantError> {
    check_left(m)?;
    let q = resolution_of_trivial(category, k + 1, Budget::from_env())?;
    let chains: Vec<BredonChainComplex> = filtration
        .stages()
        .iter()
        .map(|s| s.bredon_chain_complex(category, false))
        .collect();
    let bis = chains
        .iter()
        .map(|c| Bicomplex::from_resolution(c, &q, m, k + 1))
        .collect::<Result<Vec<_>, _>>()?;
    let x = filtration.complex();
    let bx = Bicomplex::from_resolution(&x.bredon_chain_complex(category, false), &q, m, k + 1)?;
    let stages = filtration.stages();
    let last = stages.len() - 1;
    let induced = |a: usize, b: usize| {
        let cm = inclusion_chain_map(category, &stages[a], &stages[b], false);
        let tm = bis[a].chain_map(&bis[b], Some(&cm), None);
        bis[a].induced_on_homology(&bis[b], &tm, k)
    };
    let to_last: Vec<InducedMap> = (0..=last).map(|a| induced(a, last)).collect();
    let mut coherent = true;
    for a in 0..=last {
        for b in a..=last {
            if !induced(a, b).then(&to_last[b]).agrees_with(&to_last[a]) {
                coherent = false;
            }
        }
    }
    let cm = inclusion_chain_map(category, &stages[last], x, false);
    let tm = bis[last].chain_map(&bx, Some(&cm), None);
    let last_stage_isomorphism = bis[last].induced_on_homology(&bx, &tm, k).is_isomorphism();
    Ok(Aux3Report {
        degree: k,
        stages: bis.iter().map(|b| b.homology(k)).collect(),
        colimit: bis[last].homology(k),
        whole: bx.homology(k),
        last_stage_isomorphism,
        coherent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux2Degree {
    pub degree: usize,
    /// `H_k^𝔉(X, M)` from the bicomplex.
    pub equivariant: AbelianGroupInvariants,
    /// `⊕_Λ H_k(X^Λ)^{j_Λ}` from the fixed-point complexes.
    pub fixed_points: AbelianGroupInvariants,
    /// The augmentation `Q → ℤ̲` gives an isomorphism onto `H_k(C_* ⊗_𝔉 M)`.
    pub augmentation_is_isomorphism: bool,
    /// Degree `n` is reported but not required.
    pub informational: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Aux2Report {
    pub n: usize,
    pub multiplicities: Vec<usize>,
    pub hypotheses: bool,
    pub degrees: Vec<Aux2Degree>,
}

impl Aux2Report {
    pub fn holds(&self) -> bool {
        self.degrees.iter().filter(|d| !d.informational).all(|d| d.holds)
    }
}

fn sum_power(parts: impl Iterator<Item = (AbelianGroupInvariants, usize)>) -> AbelianGroupInvariants {
    parts.fold(AbelianGroupInvariants::trivial(), |acc, (h, j)| acc.direct_sum(&h.power(j)))
}

/// The free left module `⊕_o ℤ[Γ/Λ_o, −]^{j_o}`.
pub fn free_coefficients(category: &Arc<OrbitCategory>, multiplicities: &[usize]) -> BredonModule {
    assert_eq!(multiplicities.len(), category.object_count());
    let basis = category
        .objects()
        .flat_map(|o| std::iter::repeat_n(o, multiplicities[o]))
        .collect();
    BredonModule::free(category, Variance::Left, basis)
}

/// `H_k^𝔉(X, ⊕ ℤ[Γ/Λ, −]^{j_Λ})` against `⊕ H_k(X^Λ)^{j_Λ}` for `k ≤ n`.
pub fn verify_aux2(
    category: &Arc<OrbitCategory>,
    x: &GammaComplex,
    multiplicities: &[usize],
    n: usize,
) -> Result<Aux2Report, EquivariantError> {
    let hypotheses = x.is_family_n_good(category, n)?.good;
    let m = free_coefficients(category, multiplicities);
    let q = resolution_of_trivial(category, n + 1, Budget::from_env())?;
    let c = x.bredon_chain_complex(category, false);
    let total = Bicomplex::from_resolution(&c, &q, &m, n + 1)?;
    let coeff = Bicomplex::coefficients_only(&c, &m, n + 1)?;
    let eps = vec![q.augmentation().components().to_vec()];
    let aug = total.chain_map(&coeff, None, Some(&eps));
    let fixed: Vec<SimplicialComplex> = category
        .objects()
        .map(|o| x.fixed_subcomplex(category.subgroup(o)))
        .collect();
    let degrees = (0..=n)
        .map(|k| {
            let equivariant = total.homology(k);
            let fixed_points = sum_power(
                fixed
                    .iter()
                    .zip(multiplicities)
                    .map(|(f, &j)| (f.homology(k as i64), j)),
            );
            let iso = total.induced_on_homology(&coeff, &aug, k).is_isomorphism();
            Aux2Degree {
                degree: k,
                holds: iso && equivariant == fixed_points,
                equivariant,
                fixed_points,
                augmentation_is_isomorphism: iso,
                informational: k == n,
            }
        })
        .collect();
    Ok(Aux2Report {
        n,
        multiplicities: multiplicities.to_vec(),
        hypotheses,
        degrees,
    })
}

/// Compares kernel and cokernel of `H_k^𝔉(X_α, M) → H_k^𝔉(X_β, M)` with
/// those of `⊕ H_k(X_α^Λ)^{j} → ⊕ H_k(X_β^Λ)^{j}`.
pub fn aux2_naturality(
    category: &Arc<OrbitCategory>,
    small: &GammaComplex,
    big: &GammaComplex,
    multiplicities: &[usize],
    k: usize,
) -> Result<bool, EquivariantError> {
    let m = free_coefficients(category, multiplicities);
    let q = resolution_of_trivial(category, k + 1, Budget::from_env())?;
    let bs = Bicomplex::from_resolution(&small.bredon_chain_complex(category, false), &q, &m, k + 1)?;
    let bb = Bicomplex::from_resolution(&big.bredon_chain_complex(category, false), &q, &m, k + 1)?;
    let cm = inclusion_chain_map(category, small, big, false);
    let map = bs.induced_on_homology(&bb, &bs.chain_map(&bb, Some(&cm), None), k);
    let mut ker = AbelianGroupInvariants::trivial();
    let mut coker = AbelianGroupInvariants::trivial();
    for o in category.objects() {
        let lambda = category.subgroup(o);
        let (fs, fb) = (small.fixed_subcomplex(lambda), big.fixed_subcomplex(lambda));
        let (cs, cb) = (fs.chain_complex(false), fb.chain_complex(false));
        let maps = simplicial_inclusion(&fs, &fb, &cs);
        let f = cs.induced_map(&cb, &maps, k as i64).expect("inclusions are chain maps");
        let (src, tgt) = (cs.homology(k as i64).presentation(), cb.homology(k as i64).presentation());
        ker = ker.direct_sum(&fp_kernel(&f, &src, &tgt).0.invariants().power(multiplicities[o]));
        coker = coker.direct_sum(&fp_cokernel(&f, &tgt).invariants().power(multiplicities[o]));
    }
    Ok(map.kernel() == ker && map.cokernel() == coker)
}

fn simplicial_inclusion(small: &SimplicialComplex, big: &SimplicialComplex, cs: &ChainComplex) -> Vec<IntMatrix> {
    (0..=cs.max_degree() as usize)
        .map(|p| {
            let (s, b) = (small.simplices(p), big.simplices(p));
            let mut m = IntMatrix::zeros(b.len(), s.len());
            for (c, simplex) in s.iter().enumerate() {
                let r = b.binary_search(simplex).expect("subcomplex");
                m[(r, c)] = BigInt::one();
            }
            m
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BrownVerdict {
    Consistent,
    Inapplicable,
    TheoremViolation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrownInputs {
    pub group_order: usize,
    pub family: Vec<String>,
    pub simplices: usize,
    pub stages: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpSummary {
    pub holds: bool,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemVerdict {
    pub degree: i64,
    pub stage_homology: Vec<Vec<AbelianGroupInvariants>>,
    pub essentially_trivial: EssentialTriviality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrownReport {
    pub inputs: BrownInputs,
    pub goodness: GoodnessReport,
    /// Finite complexes always have cocompact skeleta.
    pub finite_n_type: bool,
    pub fp: FpSummary,
    pub systems: Vec<SystemVerdict>,
    pub all_essentially_trivial: bool,
    pub verdict: BrownVerdict,
    pub note: String,
}

/// Checks the hypotheses of the finiteness criterion on `X` and its filtration,
/// computes both sides, and classifies the outcome. For a finite group `FP_n`
/// always holds, so only the direction "good ⇒ essentially trivial" can fail.
pub fn brown_check(category: &Arc<OrbitCategory>, filtration: &Filtration, n: usize) -> Result<BrownReport, EquivariantError> {
    let x = filtration.complex();
    let budget = Budget::from_env();
    let goodness = x.is_family_n_good_with(category, n, budget)?;
    let z = BredonModule::trivial(category, Variance::Right);
    let fp = fp_n_report_with(&z, n, CoverStrategy::Greedy, budget)?;
    let systems: Vec<SystemVerdict> = (-1..n as i64)
        .map(|k| {
            let sys = homology_system(category, filtration, k);
            SystemVerdict {
                degree: k,
                stage_homology: sys
                    .modules
                    .iter()
                    .map(|m| m.values().iter().map(|v| v.invariants()).collect())
                    .collect(),
                essentially_trivial: essentially_trivial(&sys),
            }
        })
        .collect();
    let all_trivial = systems.iter().all(|s| s.essentially_trivial.trivial);
    let good = goodness.good;
    let verdict = if !good {
        BrownVerdict::Inapplicable
    } else if fp.holds == all_trivial {
        BrownVerdict::Consistent
    } else {
        BrownVerdict::TheoremViolation
    };
    let group = category.group();
    Ok(BrownReport {
        inputs: BrownInputs {
            group_order: group.order(),
            family: category.family().members().iter().map(|h| h.display(group)).collect(),
            simplices: x.simplex_count(),
            stages: filtration.len(),
            n,
        },
        goodness,
        finite_n_type: true,
        fp: FpSummary {
            holds: fp.holds,
            ranks: fp.ranks,
        },
        systems,
        all_essentially_trivial: all_trivial,
        verdict,
        note: "finite group: FP_n always holds, so only good ⇒ essentially trivial is tested".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalWitness {
    pub vertex: usize,
    pub stabilizer: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fp0Construction {
    pub local: Vec<LocalWitness>,
    /// `𝔉₀`, in canonical subgroup order.
    pub family: Vec<Subgroup>,
    pub verified: bool,
}

/// Assembles `𝔉₀` from minimal covers of `𝔉 ∩ Γ_x` over orbit
/// representatives `x` of the vertices of `stage`.
pub fn fp0_constructive_witness(category: &Arc<OrbitCategory>, stage: &GammaComplex) -> Result<Fp0Construction, EquivariantError> {
    let group = category.group();
    let family = category.family();
    for h in family.members() {
        if stage.fixed_simplices(h, 0).is_empty() {
            return Err(EquivariantError::NoFixedPoint(h.display(group)));
        }
    }
    let mut chosen: BTreeSet<Subgroup> = BTreeSet::new();
    let mut local = Vec::new();
    for orbit in stage.orbits(0) {
        let i = orbit[0];
        let stab = stage.stabilizer(0, i);
        let (sub, contained) = family.intersect(group, &stab);
        if !contained {
            return Err(EquivariantError::FamilyNotContained(stab.display(group)));
        }
        let w = sub.fp0_witness(group);
        local.push(LocalWitness {
            vertex: stage.simplices(0)[i][0],
            stabilizer: stab.display(group),
            witness: w.iter().map(|h| h.display(group)).collect(),
        });
        chosen.extend(w);
    }
    let family0: Vec<Subgroup> = chosen.into_iter().collect();
    let verified = family0.iter().all(|h| family.contains(h)) && family.is_covered_by(group, &family0);
    Ok(Fp0Construction {
        local,
        family: family0,
        verified,
    })
}
