//! Tensor products of Bredon modules and Tor over the orbit category.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{
    map_is_isomorphism, map_is_surjective, AbelianGroupInvariants, AbelianQuotient, ChainComplex, FpAbelianGroup,
    IntMatrix,
};
use crate::module::{
    free_layout, resolve_with, same_category, BredonModule, BredonMorphism, CoverStrategy, ModuleError, Resolution,
    Variance,
};
use crate::orbit::ObjectId;
use crate::Budget;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("expected a {expected:?} module, got a {got:?} module")]
    VarianceMismatch { expected: Variance, got: Variance },
    #[error("modules live over different orbit categories")]
    CategoryMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

fn expect_variance(m: &BredonModule, v: Variance) -> Result<(), TensorError> {
    if m.variance() == v {
        Ok(())
    } else {
        Err(TensorError::VarianceMismatch {
            expected: v,
            got: m.variance(),
        })
    }
}

/// `N ⊗_𝔉 M` as a quotient of `⊕_o N(o) ⊗ M(o)`.
///
/// In the ambient `ℤ^D` the block of object `o` starts at `offset(o)` and the
/// generator `eᵢ ⊗ eⱼ` sits at `offset(o) + i·m_o + j`.
#[derive(Clone, Debug)]
pub struct TensorResult {
    quotient: AbelianQuotient,
    dims: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl TensorResult {
    pub fn invariants(&self) -> &AbelianGroupInvariants {
        self.quotient.invariants()
    }

    pub fn presentation(&self) -> FpAbelianGroup {
        self.quotient.presentation()
    }

    pub fn quotient(&self) -> &AbelianQuotient {
        &self.quotient
    }

    pub fn generator_count(&self) -> usize {
        self.quotient.generator_count()
    }

    pub fn ambient_dim(&self) -> usize {
        self.quotient.ambient_dim()
    }

    pub fn offset(&self, o: ObjectId) -> usize {
        self.offsets[o]
    }

    /// `(n_o, m_o)`
    pub fn dims(&self, o: ObjectId) -> (usize, usize) {
        self.dims[o]
    }

    /// Coordinates of an ambient vector on the canonical generators.
    pub fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.quotient.coords(v).expect("ambient is the full lattice")
    }

    /// Map `N(o) ⊗ M(o) → N ⊗_𝔉 M` on the canonical generators.
    pub fn component_embedding(&self, o: ObjectId) -> IntMatrix {
        let (n, m) = self.dims[o];
        let mut block = IntMatrix::zeros(self.ambient_dim(), n * m);
        for k in 0..n * m {
            block[(self.offsets[o] + k, k)] = BigInt::one();
        }
        self.quotient.coords_matrix(&block).expect("ambient is the full lattice")
    }

    /// Ambient vector of `x ⊗ y` in the block of `o`.
    pub fn elementary(&self, o: ObjectId, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ambient_dim()];
        let m = self.dims[o].1;
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                v[self.offsets[o] + i * m + j] += a * b;
            }
        }
        v
    }

    /// Matrix of the map into `target` induced by per-object ambient maps
    /// `N(o)⊗M(o) → N'(o)⊗M'(o)`.
    pub fn induced(&self, target: &TensorResult, blocks: &[IntMatrix]) -> IntMatrix {
        let f = IntMatrix::block_diagonal(blocks);
        self.quotient
            .induced_matrix(&target.quotient, &f)
            .expect("ambient is the full lattice")
    }

    /// `α ⊗ 1` for a morphism of right modules.
    pub fn map_first(&self, target: &TensorResult, alpha: &BredonMorphism) -> IntMatrix {
        let blocks: Vec<IntMatrix> = (0..self.dims.len())
            .map(|o| alpha.component(o).kron(&IntMatrix::identity(self.dims[o].1)))
            .collect();
        self.induced(target, &blocks)
    }

    /// `1 ⊗ β` for a morphism of left modules.
    pub fn map_second(&self, target: &TensorResult, beta: &BredonMorphism) -> IntMatrix {
        let blocks: Vec<IntMatrix> = (0..self.dims.len())
            .map(|o| IntMatrix::identity(self.dims[o].0).kron(beta.component(o)))
            .collect();
        self.induced(target, &blocks)
    }
}

/// The coend `N ⊗_𝔉 M` of a right module `N` and a left module `M`.
///
/// Relations `N(f)n ⊗ m − n ⊗ M(f)m` are imposed for generating morphisms
/// only; composites follow by bilinearity, identities from the relations of
/// the values.
pub fn tensor_over_family(n: &BredonModule, m: &BredonModule) -> Result<TensorResult, TensorError> {
    expect_variance(n, Variance::Right)?;
    expect_variance(m, Variance::Left)?;
    if !same_category(n.category(), m.category()) {
        return Err(TensorError::CategoryMismatch);
    }
    let cat = n.category();
    let dims: Vec<(usize, usize)> = cat
        .objects()
        .map(|o| (n.value(o).generators, m.value(o).generators))
        .collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for &(a, b) in &dims {
        offsets.push(total);
        total += a * b;
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for o in cat.objects() {
        let (a, b) = dims[o];
        let rel_n = n.value(o).relations.kron(&IntMatrix::identity(b));
        let rel_m = IntMatrix::identity(a).kron(&m.value(o).relations);
        for r in [rel_n, rel_m] {
            for j in 0..r.cols() {
                let mut v = vec![BigInt::zero(); total];
                for (i, x) in r.column(j).into_iter().enumerate() {
                    v[offsets[o] + i] = x;
                }
                cols.push(v);
            }
        }
    }
    for &f in cat.generating_morphisms() {
        let mf = cat.morphism(f);
        let (a, b) = (mf.source, mf.target);
        let (nf, mfm) = (n.action(f), m.action(f));
        for i in 0..dims[b].0 {
            for j in 0..dims[a].1 {
                // N(f)eᵢ ⊗ eⱼ at a, minus eᵢ ⊗ M(f)eⱼ at b
                let mut v = vec![BigInt::zero(); total];
                for p in 0..dims[a].0 {
                    let c = &nf[(p, i)];
                    if !c.is_zero() {
                        v[offsets[a] + p * dims[a].1 + j] += c;
                    }
                }
                for q in 0..dims[b].1 {
                    let c = &mfm[(q, j)];
                    if !c.is_zero() {
                        v[offsets[b] + i * dims[b].1 + q] -= c;
                    }
                }
                cols.push(v);
            }
        }
    }
    let rel = IntMatrix::from_columns(total, &cols);
    Ok(TensorResult {
        quotient: AbelianQuotient::of_relations(total, &rel),
        dims,
        offsets,
    })
}

/// The coend with one relation for every morphism and every pair of
/// generators; slower, used to cross-check [`tensor_over_family`].
pub fn tensor_over_family_all_morphisms(n: &BredonModule, m: &BredonModule) -> Result<TensorResult, TensorError> {
    let base = tensor_over_family(n, m)?;
    let cat = n.category();
    let total = base.ambient_dim();
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for o in cat.objects() {
        let (a, b) = base.dims[o];
        let r = n
            .value(o)
            .relations
            .kron(&IntMatrix::identity(b))
            .hstack(&IntMatrix::identity(a).kron(&m.value(o).relations));
        for j in 0..r.cols() {
            let mut v = vec![BigInt::zero(); total];
            for (i, x) in r.column(j).into_iter().enumerate() {
                v[base.offsets[o] + i] = x;
            }
            cols.push(v);
        }
    }
    for f in 0..cat.morphism_count() {
        let mf = cat.morphism(f);
        let (a, b) = (mf.source, mf.target);
        for i in 0..base.dims[b].0 {
            for j in 0..base.dims[a].1 {
                let x = n.action(f).column(i);
                let y = m.action(f).column(j);
                let mut ei = vec![BigInt::zero(); base.dims[b].0];
                ei[i] = BigInt::one();
                let mut ej = vec![BigInt::zero(); base.dims[a].1];
                ej[j] = BigInt::one();
                let lhs = base.elementary(a, &x, &ej);
                let rhs = base.elementary(b, &ei, &y);
                cols.push(lhs.iter().zip(&rhs).map(|(p, q)| p - q).collect());
            }
        }
    }
    let rel = IntMatrix::from_columns(total, &cols);
    Ok(TensorResult {
        quotient: AbelianQuotient::of_relations(total, &rel),
        dims: base.dims,
        offsets: base.offsets,
    })
}

/// Objectwise tensor product over ℤ with the diagonal action.
pub fn tensor_over_z(m: &BredonModule, n: &BredonModule) -> Result<BredonModule, TensorError> {
    expect_variance(n, m.variance())?;
    if !same_category(m.category(), n.category()) {
        return Err(TensorError::CategoryMismatch);
    }
    let values = m
        .values()
        .iter()
        .zip(n.values())
        .map(|(a, b)| a.tensor(b))
        .collect();
    let actions = m
        .actions()
        .iter()
        .zip(n.actions())
        .map(|(a, b)| a.kron(b))
        .collect();
    Ok(BredonModule::new(m.category().clone(), m.variance(), values, actions)?)
}

/// The isomorphism `N(Γ/Λ_o) → N ⊗_𝔉 ℤ[Γ/Λ_o, −]`, `x ↦ x ⊗ id`, together
/// with the tensor product it lands in.
pub fn yoneda_tensor_map(n: &BredonModule, o: ObjectId) -> Result<(TensorResult, IntMatrix), TensorError> {
    let rep = BredonModule::represented(n.category(), Variance::Left, o);
    let t = tensor_over_family(n, &rep)?;
    let cat = n.category();
    let mut id = vec![BigInt::zero(); rep.value(o).generators];
    id[cat.position_in_hom(cat.identity(o))] = BigInt::one();
    let cols: Vec<Vec<BigInt>> = (0..n.value(o).generators)
        .map(|i| {
            let mut e = vec![BigInt::zero(); n.value(o).generators];
            e[i] = BigInt::one();
            t.coords(&t.elementary(o, &e, &id))
        })
        .collect();
    let map = IntMatrix::from_columns(t.generator_count(), &cols);
    Ok((t, map))
}

/// `P ⊗_𝔉 M` for a free resolution `P`, using `ℤ[−, Γ/Λ] ⊗_𝔉 M ≅ M(Γ/Λ)`:
/// degree `k` is `⊕ᵢ M(o_i)` over the basis of `P_k`.
pub fn tensor_resolution(res: &Resolution, m: &BredonModule, top: usize) -> ChainComplex {
    assert!(top <= res.length(), "resolution too short");
    let cat = m.category();
    let terms: Vec<FpAbelianGroup> = (0..=top)
        .map(|k| {
            let parts: Vec<FpAbelianGroup> = res.basis(k).iter().map(|&o| m.value(o).clone()).collect();
            FpAbelianGroup::direct_sum_all(&parts)
        })
        .collect();
    let mut boundaries = Vec::with_capacity(top);
    for k in 1..=top {
        let (src, tgt) = (res.basis(k), res.basis(k - 1));
        let src_off = offsets(src.iter().map(|&o| m.value(o).generators));
        let tgt_off = offsets(tgt.iter().map(|&o| m.value(o).generators));
        let mut d = IntMatrix::zeros(terms[k - 1].generators, terms[k].generators);
        let dk = res.differential(k);
        for (i, &oi) in src.iter().enumerate() {
            let layout_src = free_layout(cat, Variance::Right, src, oi);
            let pos = layout_src
                .iter()
                .position(|&(b, f)| b == i && cat.is_identity(f))
                .expect("identity generator");
            let image = dk.component(oi).column(pos);
            let layout_tgt = free_layout(cat, Variance::Right, tgt, oi);
            for (c, &(j, f)) in image.iter().zip(&layout_tgt) {
                if c.is_zero() {
                    continue;
                }
                // f: o_i → o'_j acts as M(f): M(o_i) → M(o'_j)
                let block = m.action(f).scale(c);
                for r in 0..block.rows() {
                    for s in 0..block.cols() {
                        d[(tgt_off[j] + r, src_off[i] + s)] += &block[(r, s)];
                    }
                }
            }
        }
        boundaries.push(d);
    }
    ChainComplex::new(0, terms, boundaries).expect("tensoring a resolution gives a complex")
}

fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = 0;
    for s in sizes {
        out.push(t);
        t += s;
    }
    out
}

/// `Tor_k^𝔉(N, M)` for `k = 0 … n`.
#[derive(Clone, Debug)]
pub struct TorTable {
    pub degrees: Vec<AbelianGroupInvariants>,
    resolution: Resolution,
    complex: ChainComplex,
}

impl TorTable {
    pub fn resolution(&self) -> &Resolution {
        &self.resolution
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }
}

impl Serialize for TorTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.degrees.serialize(s)
    }
}

pub fn tor(n: &BredonModule, m: &BredonModule, max_degree: usize) -> Result<TorTable, TensorError> {
    tor_with(n, m, max_degree, CoverStrategy::Greedy, Budget::from_env())
}

/// Resolves `N` to degree `n + 1`, tensors with `M` and takes homology.
/// Fails if `Tor_0` disagrees with the coend.
pub fn tor_with(
    n: &BredonModule,
    m: &BredonModule,
    max_degree: usize,
    strategy: CoverStrategy,
    budget: Budget,
) -> Result<TorTable, TensorError> {
    expect_variance(n, Variance::Right)?;
    expect_variance(m, Variance::Left)?;
    if !same_category(n.category(), m.category()) {
        return Err(TensorError::CategoryMismatch);
    }
    let resolution = resolve_with(n, max_degree + 1, strategy, budget)?;
    let complex = tensor_resolution(&resolution, m, max_degree + 1);
    let degrees: Vec<AbelianGroupInvariants> = (0..=max_degree as i64)
        .map(|k| complex.homology_invariants(k))
        .collect();
    let coend = tensor_over_family(n, m)?;
    if degrees[0] != *coend.invariants() {
        return Err(TensorError::Inconsistent(format!(
            "Tor_0 = {} but the tensor product is {}",
            degrees[0],
            coend.invariants()
        )));
    }
    Ok(TorTable {
        degrees,
        resolution,
        complex,
    })
}

/// `H_k^𝔉(Γ; M) = Tor_k^𝔉(ℤ̲, M)`.
pub fn bredon_homology_of_group(m: &BredonModule, max_degree: usize) -> Result<TorTable, TensorError> {
    let z = BredonModule::trivial(m.category(), Variance::Right);
    tor(&z, m, max_degree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Isomorphism,
    Epimorphism,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonDegree {
    pub degree: usize,
    pub lhs: AbelianGroupInvariants,
    pub rhs: AbelianGroupInvariants,
    pub isomorphism: bool,
    pub epimorphism: bool,
    pub expected: Expected,
    pub holds: bool,
}

/// Comparison `Tor_k(N, ⊕ M_s) → ⊕ Tor_k(N, M_s)` for
/// `M = ⊕_o ℤ[Γ/Λ_o, −]^{j_o}`, a finite stand-in for products.
#[derive(Clone, Debug, Serialize)]
pub struct BieriEckmannReport {
    pub n: usize,
    pub multiplicities: Vec<usize>,
    pub finite_multiplicities_only: bool,
    pub degrees: Vec<ComparisonDegree>,
}

impl BieriEckmannReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|d| d.holds)
    }
}

pub fn bieri_eckmann_finite_check(
    nmod: &BredonModule,
    n: usize,
    multiplicities: &[usize],
) -> Result<BieriEckmannReport, TensorError> {
    expect_variance(nmod, Variance::Right)?;
    let cat = nmod.category();
    assert_eq!(multiplicities.len(), cat.object_count(), "one multiplicity per object");
    let summands: Vec<ObjectId> = cat
        .objects()
        .flat_map(|o| std::iter::repeat_n(o, multiplicities[o]))
        .collect();
    let m = BredonModule::free(cat, Variance::Left, summands.clone());
    let res = resolve_with(nmod, n + 1, CoverStrategy::Greedy, Budget::from_env())?;
    let lhs = tensor_resolution(&res, &m, n + 1);
    let parts: Vec<(ChainComplex, Vec<IntMatrix>)> = summands
        .iter()
        .enumerate()
        .map(|(s, &o)| {
            let rep = BredonModule::represented(cat, Variance::Left, o);
            let c = tensor_resolution(&res, &rep, n + 1);
            // projection of ⊕ M(o_i) onto the summand s, degree by degree
            let maps = (0..=n + 1)
                .map(|k| {
                    let blocks: Vec<IntMatrix> = res
                        .basis(k)
                        .iter()
                        .map(|&oi| {
                            let layout = free_layout(cat, Variance::Left, &summands, oi);
                            let rows: Vec<usize> = layout
                                .iter()
                                .enumerate()
                                .filter(|(_, &(b, _))| b == s)
                                .map(|(p, _)| p)
                                .collect();
                            IntMatrix::identity(layout.len()).select_rows(&rows)
                        })
                        .collect();
                    IntMatrix::block_diagonal(&blocks)
                })
                .collect();
            (c, maps)
        })
        .collect();
    let mut degrees = Vec::new();
    for k in 0..=n {
        let kk = k as i64;
        let h = lhs.homology(kk);
        let src = h.presentation();
        let mut stacked = IntMatrix::zeros(0, h.generator_count());
        let mut rhs_parts = Vec::new();
        for (c, maps) in &parts {
            let induced = lhs
                .induced_map(c, maps, kk)
                .map_err(|e| TensorError::Inconsistent(e.to_string()))?;
            stacked = stacked.vstack(&induced);
            rhs_parts.push(c.homology(kk).presentation());
        }
        let tgt = FpAbelianGroup::direct_sum_all(&rhs_parts);
        let isomorphism = map_is_isomorphism(&stacked, &src, &tgt);
        let epimorphism = map_is_surjective(&stacked, &tgt);
        let expected = if k < n {
            Expected::Isomorphism
        } else {
            Expected::Epimorphism
        };
        let holds = match expected {
            Expected::Isomorphism => isomorphism,
            Expected::Epimorphism => epimorphism,
        };
        degrees.push(ComparisonDegree {
            degree: k,
            lhs: h.invariants().clone(),
            rhs: tgt.invariants(),
            isomorphism,
            epimorphism,
            expected,
            holds,
        });
    }
    Ok(BieriEckmannReport {
        n,
        multiplicities: multiplicities.to_vec(),
        finite_multiplicities_only: true,
        degrees,
    })
}
