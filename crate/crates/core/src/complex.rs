//! Finite admissible Γ-simplicial complexes, their Bredon chains and homology,
//! and filtrations by Γ-invariant subcomplexes.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::group::{Element, FiniteGroup, Subgroup};
use crate::induction::{InductionError, SubgroupContext};
use crate::linalg::{AbelianGroupInvariants, ChainComplex, FpAbelianGroup, IntMatrix};
use crate::module::{
    fp_n_report_with, BredonModule, BredonMorphism, CoverStrategy, ModuleError, Variance,
};
use crate::orbit::{GammaSet, ObjectId, OrbitCategory};
use crate::Budget;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex {simplex:?} uses vertex {vertex}, but there are only {count} vertices")]
    BadVertex { simplex: Vec<usize>, vertex: usize, count: usize },
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("simplex {0:?} is listed twice")]
    Duplicate(Vec<usize>),
    #[error("face {face:?} of simplex {simplex:?} is missing")]
    NotClosedUnderFaces { simplex: Vec<usize>, face: Vec<usize> },
    #[error("element {element} sends simplex {simplex:?} outside the complex")]
    NotEquivariant { simplex: Vec<usize>, element: Element },
    #[error("element {element} stabilizes simplex {simplex:?} without fixing it pointwise")]
    NotAdmissible { simplex: Vec<usize>, element: Element },
    #[error("vertex action is defined for a different group")]
    GroupMismatch,
    #[error("filtration stage {stage} does not contain stage {previous}")]
    NotMonotone { stage: usize, previous: usize },
    #[error("last filtration stage is not the whole complex")]
    LastStageIncomplete,
    #[error("filtration has no stages")]
    NoStages,
    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<ComplexError>,
    },
    #[error("simplex id {0} out of range")]
    BadSimplexId(usize),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A simplex given by its dimension and index among simplices of that dimension.
pub type SimplexRef = (usize, usize);

/// Whether a stabilizer's trivial module is FP_n, with the resolution ranks.
type FpOutcome = (bool, Option<Vec<usize>>);

/// A finite simplicial complex with a simplicial Γ-action.
///
/// Simplices are sorted vertex tuples; within each dimension they are listed
/// lexicographically. Orientation follows the global vertex order.
#[derive(Clone, Debug)]
pub struct GammaComplex {
    group: Arc<FiniteGroup>,
    vertices: GammaSet,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    /// `action[p][g][i] = (j, ε)`: `g` sends simplex `i` to `ε·(simplex j)`.
    action: Vec<Vec<Vec<(usize, i8)>>>,
    admissible: bool,
}

impl GammaComplex {
    /// Validates closure under faces, equivariance and admissibility.
    pub fn new(group: Arc<FiniteGroup>, vertices: GammaSet, simplices: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        let c = Self::build(group, vertices, simplices)?;
        c.check_admissible()?;
        Ok(GammaComplex { admissible: true, ..c })
    }

    /// Like [`GammaComplex::new`] but accepts actions that flip simplices.
    pub fn equivariant(
        group: Arc<FiniteGroup>,
        vertices: GammaSet,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        let c = Self::build(group, vertices, simplices)?;
        let admissible = c.check_admissible().is_ok();
        Ok(GammaComplex { admissible, ..c })
    }

    /// Adds all faces of the given simplices first.
    pub fn from_facets(group: Arc<FiniteGroup>, vertices: GammaSet, facets: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        Self::new(group, vertices, close_under_faces(&facets))
    }

    /// Builds a complex from its vertex Γ-set and the facets of one orbit
    /// representative each, closing under the action and faces.
    pub fn from_orbit_facets(
        group: Arc<FiniteGroup>,
        vertices: GammaSet,
        facets: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        let mut all = BTreeSet::new();
        for f in &facets {
            for g in group.elements() {
                let mut s: Vec<usize> = f.iter().map(|&v| vertices.act(g, v)).collect();
                s.sort_unstable();
                all.insert(s);
            }
        }
        Self::from_facets(group, vertices, all.into_iter().collect())
    }

    fn build(group: Arc<FiniteGroup>, vertices: GammaSet, simplices: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        if vertices.action().len() != group.order() {
            return Err(ComplexError::GroupMismatch);
        }
        let nv = vertices.size();
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for s in simplices {
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.iter().find(|&&v| v >= nv) {
                return Err(ComplexError::BadVertex {
                    simplex: s,
                    vertex: v,
                    count: nv,
                });
            }
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(ComplexError::RepeatedVertex(s));
            }
            let p = t.len() - 1;
            if by_dim.len() <= p {
                by_dim.resize(p + 1, BTreeSet::new());
            }
            if !by_dim[p].insert(t.clone()) {
                return Err(ComplexError::Duplicate(t));
            }
        }
        let simplices: Vec<Vec<Vec<usize>>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        for p in 1..simplices.len() {
            for s in &simplices[p] {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    if !index[p - 1].contains_key(&face) {
                        return Err(ComplexError::NotClosedUnderFaces {
                            simplex: s.clone(),
                            face,
                        });
                    }
                }
            }
        }
        let mut action = Vec::with_capacity(simplices.len());
        for p in 0..simplices.len() {
            let mut per_g = Vec::with_capacity(group.order());
            for g in group.elements() {
                let mut row = Vec::with_capacity(simplices[p].len());
                for s in &simplices[p] {
                    let image: Vec<usize> = s.iter().map(|&v| vertices.act(g, v)).collect();
                    let (sorted, sign) = sort_with_sign(&image);
                    match index[p].get(&sorted) {
                        Some(&j) => row.push((j, sign)),
                        None => {
                            return Err(ComplexError::NotEquivariant {
                                simplex: s.clone(),
                                element: g,
                            })
                        }
                    }
                }
                per_g.push(row);
            }
            action.push(per_g);
        }
        Ok(GammaComplex {
            group,
            vertices,
            simplices,
            index,
            action,
            admissible: false,
        })
    }

    fn check_admissible(&self) -> Result<(), ComplexError> {
        for p in 0..self.simplices.len() {
            for (i, s) in self.simplices[p].iter().enumerate() {
                for g in self.group.elements() {
                    if self.action[p][g][i].0 == i && s.iter().any(|&v| self.vertices.act(g, v) != v) {
                        return Err(ComplexError::NotAdmissible {
                            simplex: s.clone(),
                            element: g,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn vertex_set(&self) -> &GammaSet {
        &self.vertices
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    /// Top dimension, or −1 for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], |s| s.as_slice())
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<SimplexRef> {
        let p = s.len().checked_sub(1)?;
        self.index.get(p)?.get(s).map(|&i| (p, i))
    }

    /// `g·σ` with the orientation sign.
    pub fn act(&self, g: Element, p: usize, i: usize) -> (usize, i8) {
        self.action[p][g][i]
    }

    /// Vertices of the 0-simplices.
    pub fn vertex_list(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn stabilizer(&self, p: usize, i: usize) -> Subgroup {
        self.group
            .subgroup(&self.group.elements().filter(|&g| self.action[p][g][i].0 == i).collect::<Vec<_>>())
            .expect("stabilizers are subgroups")
    }

    /// Orbits of `p`-simplices, each sorted, ordered by least index.
    pub fn orbits(&self, p: usize) -> Vec<Vec<usize>> {
        let n = self.simplices(p).len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.action[p][g][i].0).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &j in &orbit {
                seen[j] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Indices of `p`-simplices fixed pointwise by `lambda`.
    pub fn fixed_simplices(&self, lambda: &Subgroup, p: usize) -> Vec<usize> {
        self.simplices(p)
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.iter()
                    .all(|&v| lambda.elements().iter().all(|&g| self.vertices.act(g, v) == v))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// `X^Λ`, built from the fixed vertices.
    pub fn fixed_subcomplex(&self, lambda: &Subgroup) -> SimplicialComplex {
        let fixed: BTreeSet<usize> = self
            .vertex_list()
            .into_iter()
            .filter(|&v| lambda.elements().iter().all(|&g| self.vertices.act(g, v) == v))
            .collect();
        let simplices = self
            .simplices
            .iter()
            .map(|l| l.iter().filter(|s| s.iter().all(|v| fixed.contains(v))).cloned().collect())
            .collect();
        SimplicialComplex::new(simplices)
    }

    /// Sub-complex on the given simplices, with the same vertex Γ-set.
    pub fn subcomplex(&self, simplices: Vec<Vec<usize>>) -> Result<GammaComplex, ComplexError> {
        let c = Self::build(self.group.clone(), self.vertices.clone(), simplices)?;
        Ok(GammaComplex {
            admissible: self.admissible,
            ..c
        })
    }

    /// The `n`-skeleton.
    pub fn skeleton(&self, n: usize) -> GammaComplex {
        let s = self.simplices.iter().take(n + 1).flatten().cloned().collect();
        self.subcomplex(s).expect("skeleta are subcomplexes")
    }

    /// Barycentric subdivision; vertex `k` is the `k`-th simplex in
    /// (dimension, index) order.
    pub fn barycentric_subdivision(&self) -> GammaComplex {
        let mut offsets = Vec::new();
        let mut total = 0;
        for l in &self.simplices {
            offsets.push(total);
            total += l.len();
        }
        let action: Vec<Vec<usize>> = self
            .group
            .elements()
            .map(|g| {
                let mut perm = vec![0; total];
                for p in 0..self.simplices.len() {
                    for i in 0..self.simplices[p].len() {
                        perm[offsets[p] + i] = offsets[p] + self.action[p][g][i].0;
                    }
                }
                perm
            })
            .collect();
        let vertices = GammaSet::new(&self.group, action).expect("induced action on simplices");
        // faces[p][i]: proper faces of simplex (p, i) one dimension down
        let faces: Vec<Vec<Vec<usize>>> = (0..self.simplices.len())
            .map(|p| {
                self.simplices[p]
                    .iter()
                    .map(|s| {
                        if p == 0 {
                            return Vec::new();
                        }
                        (0..s.len())
                            .map(|k| {
                                let mut f = s.clone();
                                f.remove(k);
                                self.index[p - 1][&f]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // chains are built top-down: extend a chain ending at σ by faces of σ
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<(Vec<SimplexRef>,)> = Vec::new();
        for p in 0..self.simplices.len() {
            for i in 0..self.simplices[p].len() {
                stack.push((vec![(p, i)],));
            }
        }
        while let Some((chain,)) = stack.pop() {
            let mut ids: Vec<usize> = chain.iter().map(|&(p, i)| offsets[p] + i).collect();
            ids.sort_unstable();
            chains.push(ids);
            let &(p, i) = chain.last().expect("non-empty");
            if p == 0 {
                continue;
            }
            // all faces of lower dimension, not just codimension one
            let mut lower: BTreeSet<SimplexRef> = BTreeSet::new();
            let mut frontier = vec![(p, i)];
            while let Some((q, j)) = frontier.pop() {
                if q == 0 {
                    continue;
                }
                for &f in &faces[q][j] {
                    if lower.insert((q - 1, f)) {
                        frontier.push((q - 1, f));
                    }
                }
            }
            for f in lower {
                let mut c = chain.clone();
                c.push(f);
                stack.push((c,));
            }
        }
        let sd = Self::build(self.group.clone(), vertices, chains).expect("subdivision is a complex");
        let admissible = sd.check_admissible().is_ok();
        debug_assert!(admissible);
        GammaComplex { admissible, ..sd }
    }

    /// Boundary matrix `C_p → C_{p−1}` restricted to the given simplices.
    fn boundary_on(&self, p: usize, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut d = IntMatrix::zeros(rows.len(), cols.len());
        for (c, &j) in cols.iter().enumerate() {
            let s = &self.simplices[p][j];
            for k in 0..s.len() {
                let mut f = s.clone();
                f.remove(k);
                let r = pos[&self.index[p - 1][&f]];
                d[(r, c)] = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        d
    }

    /// Bredon cellular chains `C_p = ℤ[−, Δ_p]` with orientation signs;
    /// degree 0 … dim, or −1 … dim when augmented.
    pub fn bredon_chain_complex(&self, category: &Arc<OrbitCategory>, augmented: bool) -> BredonChainComplex {
        assert!(self.admissible, "Bredon chains need an admissible complex");
        assert_eq!(**category.group(), *self.group, "category over a different group");
        let top = self.simplices.len().max(1);
        let fixed: Vec<Vec<Vec<usize>>> = category
            .objects()
            .map(|o| (0..top).map(|p| self.fixed_simplices(category.subgroup(o), p)).collect())
            .collect();
        let mut modules = Vec::new();
        let mut differentials = Vec::new();
        if augmented {
            modules.push(BredonModule::trivial(category, Variance::Right));
        }
        for p in 0..top {
            let values = category
                .objects()
                .map(|o| FpAbelianGroup::free(fixed[o][p].len()))
                .collect();
            let actions = category
                .morphisms()
                .iter()
                .map(|m| {
                    let (src, tgt) = (&fixed[m.source][p], &fixed[m.target][p]);
                    let mut a = IntMatrix::zeros(src.len(), tgt.len());
                    for (c, &i) in tgt.iter().enumerate() {
                        let (j, sign) = self.action[p][m.rep][i];
                        let r = src.binary_search(&j).expect("image of a fixed simplex is fixed");
                        a[(r, c)] = BigInt::from(sign);
                    }
                    a
                })
                .collect();
            let module = BredonModule::new(category.clone(), Variance::Right, values, actions)
                .expect("signed permutation actions are well defined");
            if let Some(prev) = modules.last() {
                let comps = category
                    .objects()
                    .map(|o| {
                        if p == 0 {
                            IntMatrix::from_big_rows(vec![vec![BigInt::one(); fixed[o][0].len()]], fixed[o][0].len())
                        } else {
                            self.boundary_on(p, &fixed[o][p - 1], &fixed[o][p])
                        }
                    })
                    .collect();
                differentials.push(BredonMorphism::new_unchecked(module.clone(), prev.clone(), comps));
            }
            modules.push(module);
        }
        BredonChainComplex {
            min_degree: if augmented { -1 } else { 0 },
            modules,
            differentials,
        }
    }

    /// `H_k^𝔉(X)`: at `Γ/Λ` the homology of `X^Λ`.
    pub fn bredon_homology(&self, category: &Arc<OrbitCategory>, k: usize) -> BredonModule {
        self.bredon_chain_complex(category, false).homology_module(k as i64)
    }

    /// Reduced Bredon homology for `k ≥ −1`, from the augmented complex.
    pub fn reduced_bredon_homology(&self, category: &Arc<OrbitCategory>, k: i64) -> BredonModule {
        assert!(k >= -1);
        self.bredon_chain_complex(category, true).homology_module(k)
    }

    /// Whether `H̃_k(X^Λ) = 0` for all `Λ ∈ 𝔉` and `−1 ≤ k ≤ n`.
    pub fn is_family_acyclic(&self, category: &Arc<OrbitCategory>, n: i64) -> AcyclicityVerdict {
        let cc = self.bredon_chain_complex(category, true);
        let complexes: Vec<ChainComplex> = category.objects().map(|o| cc.objectwise(o)).collect();
        for k in -1..=n {
            for (o, c) in complexes.iter().enumerate() {
                let h = c.homology_invariants(k);
                if !h.is_trivial() {
                    return AcyclicityVerdict {
                        up_to: n,
                        acyclic: false,
                        first_failure: Some(AcyclicityFailure {
                            object: o,
                            subgroup: category.subgroup(o).display(category.group()),
                            degree: k,
                            homology: h,
                        }),
                    };
                }
            }
        }
        AcyclicityVerdict {
            up_to: n,
            acyclic: true,
            first_failure: None,
        }
    }

    /// Checks `X` is 𝔉-acyclic up to `n − 1` and that every cell of dimension
    /// `p ≤ n` has a stabilizer `Γ_σ` with `𝔉 ∩ Γ_σ ⊆ 𝔉` of type
    /// `(𝔉∩Γ_σ)-FP_{n−p}`, reporting the resolution sizes found.
    pub fn is_family_n_good(&self, category: &Arc<OrbitCategory>, n: usize) -> Result<GoodnessReport, ComplexError> {
        self.is_family_n_good_with(category, n, Budget::from_env())
    }

    pub fn is_family_n_good_with(
        &self,
        category: &Arc<OrbitCategory>,
        n: usize,
        budget: Budget,
    ) -> Result<GoodnessReport, ComplexError> {
        let acyclicity = self.is_family_acyclic(category, n as i64 - 1);
        let group = category.group();
        let mut cache: HashMap<(Subgroup, usize), FpOutcome> = HashMap::new();
        let mut cells = Vec::new();
        for p in 0..=n.min(self.simplices.len().saturating_sub(1)) {
            if self.simplices.len() <= p {
                break;
            }
            for orbit in self.orbits(p) {
                let i = orbit[0];
                let stab = self.stabilizer(p, i);
                let key = (stab.clone(), n - p);
                let (contained, ranks) = match cache.get(&key) {
                    Some(v) => v.clone(),
                    None => {
                        let (fam, contained) = category.family().intersect(group, &stab);
                        let ranks = if contained {
                            let cat = Arc::new(OrbitCategory::build(group.clone(), fam));
                            let z = BredonModule::trivial(&cat, Variance::Right);
                            let rep = fp_n_report_with(&z, n - p, CoverStrategy::Greedy, budget)?;
                            Some(rep.ranks)
                        } else {
                            None
                        };
                        cache.insert(key, (contained, ranks.clone()));
                        (contained, ranks)
                    }
                };
                cells.push(CellReport {
                    dimension: p,
                    simplex: self.simplices[p][i].clone(),
                    stabilizer: stab.display(group),
                    family_contained: contained,
                    fp_degree: n - p,
                    fp_holds: ranks.is_some(),
                    resolution_ranks: ranks,
                });
            }
        }
        let good = acyclicity.acyclic && cells.iter().all(|c| c.family_contained && c.fp_holds);
        Ok(GoodnessReport {
            n,
            good,
            acyclicity,
            cells,
        })
    }

    /// Decomposition `⊕_σ Ind_{Γ_σ}^Γ ℤ̲ → C_p` over representatives `σ` of
    /// the orbits of `p`-cells.
    pub fn cell_decomposition(&self, category: &Arc<OrbitCategory>, p: usize) -> Result<BredonMorphism, InductionError> {
        let cc = self.bredon_chain_complex(category, false);
        let cp = cc.module(p as i64).clone();
        let group = category.group();
        let mut sources = Vec::new();
        let mut comps: Vec<Vec<IntMatrix>> = Vec::new();
        for orbit in self.orbits(p) {
            let sigma = orbit[0];
            let stab = self.stabilizer(p, sigma);
            let ctx = SubgroupContext::new(category, &stab)?;
            let phi = ctx.induced_trivial_comparison()?;
            let mut reps: Vec<Element> = group.elements().map(|g| group.coset_rep(g, &stab)).collect();
            reps.sort_unstable();
            reps.dedup();
            let cosets = GammaSet::cosets(group, &stab);
            // xΓ_σ ↦ ε(x, σ)·(xσ)
            let psi: Vec<IntMatrix> = category
                .objects()
                .map(|o| {
                    let lambda = category.subgroup(o);
                    let fixed_cosets = cosets.fixed_points(lambda);
                    let fixed_cells = self.fixed_simplices(lambda, p);
                    let mut m = IntMatrix::zeros(fixed_cells.len(), fixed_cosets.len());
                    for (c, &pt) in fixed_cosets.iter().enumerate() {
                        let (j, sign) = self.action[p][reps[pt]][sigma];
                        let r = fixed_cells.binary_search(&j).expect("fixed coset gives fixed cell");
                        m[(r, c)] = BigInt::from(sign);
                    }
                    m
                })
                .collect();
            comps.push(
                category
                    .objects()
                    .map(|o| psi[o].mul(phi.component(o)))
                    .collect(),
            );
            sources.push(phi.source().clone());
        }
        if sources.is_empty() {
            let z = BredonModule::zero(category, Variance::Right);
            return Ok(BredonMorphism::zero(&z, &cp));
        }
        let source = BredonModule::direct_sum_all(&sources)?;
        let components = category
            .objects()
            .map(|o| {
                comps
                    .iter()
                    .map(|c| c[o].clone())
                    .reduce(|a, b| a.hstack(&b))
                    .expect("non-empty")
            })
            .collect();
        Ok(BredonMorphism::new(source, cp, components)?)
    }
}

fn sort_with_sign(v: &[usize]) -> (Vec<usize>, i8) {
    let mut s = v.to_vec();
    let mut sign = 1i8;
    // insertion sort counting transpositions
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (s, sign)
}

/// All faces (including the simplices themselves), sorted.
pub fn close_under_faces(simplices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for s in simplices {
        let mut t = s.clone();
        t.sort_unstable();
        t.dedup();
        let k = t.len();
        for mask in 1u64..(1u64 << k) {
            out.insert(
                (0..k)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| t[i])
                    .collect::<Vec<_>>(),
            );
        }
    }
    out.into_iter().collect()
}

/// A plain finite simplicial complex on global vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn new(mut simplices: Vec<Vec<Vec<usize>>>) -> Self {
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        SimplicialComplex { simplices }
    }

    pub fn simplices(&self, p: usize) -> &[Vec<usize>] {
        self.simplices.get(p).map_or(&[], |s| s.as_slice())
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Simplicial chains, augmented (from degree −1) if requested.
    pub fn chain_complex(&self, augmented: bool) -> ChainComplex {
        let top = self.simplices.len().max(1);
        let mut dims: Vec<usize> = (0..top).map(|p| self.simplices(p).len()).collect();
        let mut bds = Vec::new();
        for p in 1..top {
            let lower: HashMap<&Vec<usize>, usize> =
                self.simplices[p - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
            let mut d = IntMatrix::zeros(dims[p - 1], dims[p]);
            for (j, s) in self.simplices[p].iter().enumerate() {
                for k in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(k);
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    d[(lower[&f], j)] += BigInt::from(sign);
                }
            }
            bds.push(d);
        }
        if augmented {
            let eps = IntMatrix::from_big_rows(vec![vec![BigInt::one(); dims[0]]], dims[0]);
            bds.insert(0, eps);
            dims.insert(0, 1);
            ChainComplex::free(-1, dims, bds).expect("simplicial boundaries compose to zero")
        } else {
            ChainComplex::free(0, dims, bds).expect("simplicial boundaries compose to zero")
        }
    }

    pub fn homology(&self, k: i64) -> AbelianGroupInvariants {
        self.chain_complex(false).homology_invariants(k)
    }

    pub fn reduced_homology(&self, k: i64) -> AbelianGroupInvariants {
        self.chain_complex(true).homology_invariants(k)
    }
}

/// A bounded chain complex of Bredon modules.
#[derive(Clone, Debug)]
pub struct BredonChainComplex {
    min_degree: i64,
    modules: Vec<BredonModule>,
    /// `differentials[i]: modules[i + 1] → modules[i]`
    differentials: Vec<BredonMorphism>,
}

impl BredonChainComplex {
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.modules.len() as i64 - 1
    }

    pub fn category(&self) -> &Arc<OrbitCategory> {
        self.modules[0].category()
    }

    pub fn module(&self, k: i64) -> &BredonModule {
        &self.modules[(k - self.min_degree) as usize]
    }

    pub fn modules(&self) -> &[BredonModule] {
        &self.modules
    }

    /// `∂_k: C_k → C_{k−1}` for `min_degree < k ≤ max_degree`.
    pub fn differential(&self, k: i64) -> &BredonMorphism {
        &self.differentials[(k - self.min_degree - 1) as usize]
    }

    /// The chain complex of abelian groups at one object.
    pub fn objectwise(&self, o: ObjectId) -> ChainComplex {
        ChainComplex::new(
            self.min_degree,
            self.modules.iter().map(|m| m.value(o).clone()).collect(),
            self.differentials.iter().map(|d| d.component(o).clone()).collect(),
        )
        .expect("differentials compose to zero")
    }

    /// Homology in degree `k` as a Bredon module.
    pub fn homology_module(&self, k: i64) -> BredonModule {
        let cat = self.category().clone();
        let complexes: Vec<ChainComplex> = cat.objects().map(|o| self.objectwise(o)).collect();
        let quotients: Vec<_> = complexes.iter().map(|c| c.homology(k)).collect();
        let values = quotients.iter().map(|q| q.presentation()).collect();
        let variance = self.modules[0].variance();
        let actions = (0..cat.morphism_count())
            .map(|f| {
                let (dom, cod) = self.modules[0].action_ends(f);
                if k < self.min_degree || k > self.max_degree() {
                    return IntMatrix::zeros(0, 0);
                }
                let a = self.module(k).action(f);
                quotients[dom]
                    .induced_matrix(&quotients[cod], a)
                    .expect("actions are chain maps")
            })
            .collect();
        BredonModule::new(cat, variance, values, actions).expect("homology actions are well defined")
    }

    /// `H_k` of a chain map given by per-degree, per-object matrices,
    /// between the homology modules of `self` and `target`.
    pub fn induced_homology_morphism(
        &self,
        target: &BredonChainComplex,
        maps: &[Vec<IntMatrix>],
        k: i64,
    ) -> BredonMorphism {
        let cat = self.category().clone();
        let source_h = self.homology_module(k);
        let target_h = target.homology_module(k);
        let comps = cat
            .objects()
            .map(|o| {
                let per_degree: Vec<IntMatrix> = maps.iter().map(|m| m[o].clone()).collect();
                self.objectwise(o)
                    .induced_map(&target.objectwise(o), &per_degree, k)
                    .expect("maps form a chain map")
            })
            .collect();
        BredonMorphism::new(source_h, target_h, comps).expect("induced maps are natural")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityFailure {
    pub object: ObjectId,
    pub subgroup: String,
    pub degree: i64,
    pub homology: AbelianGroupInvariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityVerdict {
    pub up_to: i64,
    pub acyclic: bool,
    pub first_failure: Option<AcyclicityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub dimension: usize,
    pub simplex: Vec<usize>,
    pub stabilizer: String,
    pub family_contained: bool,
    pub fp_degree: usize,
    pub fp_holds: bool,
    /// Free summands per degree of the resolution of ℤ̲ over the stabilizer.
    pub resolution_ranks: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub n: usize,
    pub good: bool,
    pub acyclicity: AcyclicityVerdict,
    pub cells: Vec<CellReport>,
}

/// An increasing chain of Γ-invariant subcomplexes ending in the whole complex.
#[derive(Clone, Debug)]
pub struct Filtration {
    complex: GammaComplex,
    stages: Vec<GammaComplex>,
}

impl Filtration {
    /// Stages given as lists of simplices (vertex tuples).
    pub fn new(complex: GammaComplex, stages: Vec<Vec<Vec<usize>>>) -> Result<Self, ComplexError> {
        if stages.is_empty() {
            return Err(ComplexError::NoStages);
        }
        let mut built: Vec<GammaComplex> = Vec::with_capacity(stages.len());
        for (i, s) in stages.into_iter().enumerate() {
            for simplex in &s {
                let mut t = simplex.clone();
                t.sort_unstable();
                if complex.index_of(&t).is_none() {
                    return Err(ComplexError::Stage {
                        stage: i,
                        source: Box::new(ComplexError::NotClosedUnderFaces {
                            simplex: t.clone(),
                            face: t,
                        }),
                    });
                }
            }
            let c = complex.subcomplex(s).map_err(|e| ComplexError::Stage {
                stage: i,
                source: Box::new(e),
            })?;
            if let Some(prev) = built.last() {
                let contained = (0..prev.simplices.len())
                    .all(|p| prev.simplices[p].iter().all(|s| c.index_of(s).is_some()));
                if !contained {
                    return Err(ComplexError::NotMonotone {
                        stage: i,
                        previous: i - 1,
                    });
                }
            }
            built.push(c);
        }
        let last = built.last().expect("non-empty");
        if last.simplex_count() != complex.simplex_count() {
            return Err(ComplexError::LastStageIncomplete);
        }
        Ok(Filtration {
            complex,
            stages: built,
        })
    }

    /// Stages given by ids into a flat simplex list.
    pub fn from_ids(complex: GammaComplex, listing: &[Vec<usize>], stages: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let stages = stages
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&i| listing.get(i).cloned().ok_or(ComplexError::BadSimplexId(i)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(complex, stages)
    }

    /// `X^{(0)} ⊆ X^{(1)} ⊆ … ⊆ X`.
    pub fn skeleta(complex: GammaComplex) -> Self {
        let d = complex.dimension().max(0) as usize;
        let stages = (0..=d).map(|n| complex.skeleton(n)).collect();
        Filtration { complex, stages }
    }

    /// The single stage `X`.
    pub fn constant(complex: GammaComplex, length: usize) -> Self {
        Filtration {
            stages: vec![complex.clone(); length.max(1)],
            complex,
        }
    }

    pub fn complex(&self) -> &GammaComplex {
        &self.complex
    }

    pub fn stages(&self) -> &[GammaComplex] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Inclusion of stage `a` into stage `b` on Bredon chains (augmented when
    /// asked), as per-degree, per-object matrices.
    pub fn inclusion_chain_map(&self, category: &Arc<OrbitCategory>, a: usize, b: usize, augmented: bool) -> Vec<Vec<IntMatrix>> {
        inclusion_chain_map(category, &self.stages[a], &self.stages[b], augmented)
    }
}

/// Chain map induced by an inclusion of subcomplexes sharing a vertex set.
pub fn inclusion_chain_map(
    category: &Arc<OrbitCategory>,
    small: &GammaComplex,
    big: &GammaComplex,
    augmented: bool,
) -> Vec<Vec<IntMatrix>> {
    let top_small = small.simplices.len().max(1);
    let top_big = big.simplices.len().max(1);
    let mut out = Vec::new();
    if augmented {
        out.push(vec![IntMatrix::identity(1); category.object_count()]);
    }
    for p in 0..top_small {
        out.push(
            category
                .objects()
                .map(|o| {
                    let lambda = category.subgroup(o);
                    let fs = small.fixed_simplices(lambda, p);
                    let fb = if p < top_big { big.fixed_simplices(lambda, p) } else { Vec::new() };
                    let mut m = IntMatrix::zeros(fb.len(), fs.len());
                    for (c, &i) in fs.iter().enumerate() {
                        let (_, j) = big.index_of(&small.simplices[p][i]).expect("subcomplex");
                        let r = fb.binary_search(&j).expect("fixed in both");
                        m[(r, c)] = BigInt::one();
                    }
                    m
                })
                .collect(),
        );
    }
    out
}

/// Reduced Bredon homology of each stage with the maps between stages.
#[derive(Clone, Debug)]
pub struct HomologySystem {
    pub degree: i64,
    pub modules: Vec<BredonModule>,
    /// `maps[a][b - a]`: the map from stage `a` to stage `b ≥ a`.
    maps: Vec<Vec<BredonMorphism>>,
}

impl HomologySystem {
    pub fn map(&self, a: usize, b: usize) -> &BredonMorphism {
        &self.maps[a][b - a]
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }
}

pub fn homology_system(category: &Arc<OrbitCategory>, filtration: &Filtration, k: i64) -> HomologySystem {
    assert!(k >= -1);
    let complexes: Vec<BredonChainComplex> = filtration
        .stages
        .iter()
        .map(|s| s.bredon_chain_complex(category, true))
        .collect();
    let modules: Vec<BredonModule> = complexes.iter().map(|c| c.homology_module(k)).collect();
    let n = filtration.len();
    let maps = (0..n)
        .map(|a| {
            (a..n)
                .map(|b| {
                    let raw = filtration.inclusion_chain_map(category, a, b, true);
                    // pad or trim so the map covers exactly the degrees of stage a
                    complexes[a].induced_homology_morphism(&complexes[b], &pad_chain_map(&raw, &complexes[a], &complexes[b]), k)
                })
                .collect()
        })
        .collect();
    HomologySystem {
        degree: k,
        modules,
        maps,
    }
}

fn pad_chain_map(raw: &[Vec<IntMatrix>], src: &BredonChainComplex, tgt: &BredonChainComplex) -> Vec<Vec<IntMatrix>> {
    let cat = src.category();
    (src.min_degree..=src.max_degree())
        .enumerate()
        .map(|(i, k)| {
            raw.get(i).cloned().unwrap_or_else(|| {
                cat.objects()
                    .map(|o| {
                        let rows = if k <= tgt.max_degree() { tgt.module(k).value(o).generators } else { 0 };
                        IntMatrix::zeros(rows, src.module(k).value(o).generators)
                    })
                    .collect()
            })
        })
        .collect()
}

/// Whether every stage maps to zero in some later stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EssentialTriviality {
    pub trivial: bool,
    /// Smallest `β ≥ α` with zero map, per `α`.
    pub witness: Vec<Option<usize>>,
    pub violating: Option<usize>,
}

pub fn essentially_trivial(system: &HomologySystem) -> EssentialTriviality {
    let n = system.len();
    let witness: Vec<Option<usize>> = (0..n)
        .map(|a| (a..n).find(|&b| system.map(a, b).is_zero()))
        .collect();
    let violating = witness.iter().position(Option::is_none);
    EssentialTriviality {
        trivial: violating.is_none(),
        witness,
        violating,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;
    use std::collections::BTreeMap;

    /// Square n=0, e=1, s=2, w=3 with C₂ swapping e and w.
    fn square() -> GammaComplex {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let v = GammaSet::from_partial(&g, 4, &BTreeMap::from([(1, vec![0, 3, 2, 1])])).unwrap();
        GammaComplex::from_facets(g, v, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    /// Square plus apex 4 joined to everything.
    fn cone() -> GammaComplex {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let v = GammaSet::from_partial(&g, 5, &BTreeMap::from([(1, vec![0, 3, 2, 1, 4])])).unwrap();
        let facets = vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]];
        GammaComplex::from_facets(g, v, facets).unwrap()
    }

    fn c2_category(g: &Arc<FiniteGroup>) -> Arc<OrbitCategory> {
        let f = Family::close(g, &[g.trivial_subgroup(), g.whole()]).unwrap();
        Arc::new(OrbitCategory::build(g.clone(), f))
    }

    #[test]
    fn flipped_edge_is_not_admissible() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let v = GammaSet::from_partial(&g, 2, &BTreeMap::from([(1, vec![1, 0])])).unwrap();
        let err = GammaComplex::from_facets(g.clone(), v.clone(), vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, ComplexError::NotAdmissible { .. }));
        let x = GammaComplex::equivariant(g, v, close_under_faces(&[vec![0, 1]])).unwrap();
        let sd = x.barycentric_subdivision();
        assert!(sd.is_admissible());
        assert_eq!(sd.simplices(1).len(), 2);
        assert_eq!(sd.simplices(0).len(), 3);
    }

    #[test]
    fn subdividing_a_triangle() {
        let g = Arc::new(FiniteGroup::trivial());
        let v = GammaSet::new(&g, vec![vec![0, 1, 2]]).unwrap();
        let x = GammaComplex::from_facets(g, v, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(x.barycentric_subdivision().simplices(2).len(), 6);
    }

    #[test]
    fn square_fixed_points_and_chains() {
        let x = square();
        let g = x.group().clone();
        let fixed = x.fixed_subcomplex(&g.whole());
        assert_eq!(fixed.vertices(), vec![0, 2]);
        assert!(fixed.simplices(1).is_empty());
        let cat = c2_category(&g);
        let cc = x.bredon_chain_complex(&cat, false);
        let (one, c2) = (0, 1);
        assert_eq!(cc.module(1).value(c2).generators, 0);
        assert_eq!(cc.module(1).value(one).generators, 4);
        assert_eq!(cc.module(0).value(c2).generators, 2);
        assert_eq!(cc.module(0).value(one).generators, 4);
    }

    #[test]
    fn square_homology() {
        let x = square();
        let cat = c2_category(x.group());
        let h0 = x.bredon_homology(&cat, 0);
        let h1 = x.bredon_homology(&cat, 1);
        assert_eq!(h0.value(1).invariants(), AbelianGroupInvariants::free(2));
        assert_eq!(h0.value(0).invariants(), AbelianGroupInvariants::free(1));
        assert_eq!(h1.value(0).invariants(), AbelianGroupInvariants::free(1));
        assert!(h1.value(1).is_trivial());
        let r0 = x.reduced_bredon_homology(&cat, 0);
        assert_eq!(r0.value(1).invariants(), AbelianGroupInvariants::free(1));
        assert!(r0.value(0).is_trivial());
        assert!(x.reduced_bredon_homology(&cat, -1).is_zero());
    }

    #[test]
    fn cone_is_acyclic_and_good() {
        let x = cone();
        let cat = c2_category(x.group());
        let fixed = x.fixed_subcomplex(&x.group().whole());
        assert_eq!(fixed.vertices(), vec![0, 2, 4]);
        assert_eq!(fixed.simplices(1), &[vec![0, 4], vec![2, 4]]);
        assert!(x.is_family_acyclic(&cat, 5).acyclic);
        let r = x.is_family_n_good(&cat, 2).unwrap();
        assert!(r.good);
    }

    #[test]
    fn square_is_not_acyclic() {
        let x = square();
        let cat = c2_category(x.group());
        let v = x.is_family_acyclic(&cat, 0);
        let f = v.first_failure.unwrap();
        assert_eq!((f.object, f.degree), (1, 0));
        assert!(x.is_family_acyclic(&cat, -1).acyclic);
        assert!(!x.is_family_n_good(&cat, 1).unwrap().good);
    }

    #[test]
    fn empty_complex_has_homology_in_degree_minus_one() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let x = GammaComplex::new(g.clone(), GammaSet::empty(&g), vec![]).unwrap();
        let cat = c2_category(&g);
        let h = x.reduced_bredon_homology(&cat, -1);
        for o in cat.objects() {
            assert_eq!(h.value(o).invariants(), AbelianGroupInvariants::free(1));
        }
    }

    #[test]
    fn cone_skeleta_are_essentially_trivial_in_degree_zero() {
        let x = cone();
        let cat = c2_category(x.group());
        let f = Filtration::skeleta(x);
        let sys = homology_system(&cat, &f, 0);
        assert_eq!(sys.modules[0].value(1).invariants(), AbelianGroupInvariants::free(2));
        assert!(sys.modules[1].value(1).is_trivial());
        let e = essentially_trivial(&sys);
        assert!(e.trivial);
        assert_eq!(e.witness[0], Some(1));
    }

    #[test]
    fn square_filtration_is_not_essentially_trivial() {
        let x = square();
        let cat = c2_category(x.group());
        let f = Filtration::new(x.clone(), vec![vec![vec![0], vec![2]], x.simplices(0).iter().chain(x.simplices(1)).cloned().collect()]).unwrap();
        let sys = homology_system(&cat, &f, 0);
        assert!(!sys.map(0, 1).is_zero());
        let e = essentially_trivial(&sys);
        assert!(!e.trivial);
        assert_eq!(e.violating, Some(0));
    }

    #[test]
    fn filtrations_must_be_invariant() {
        let x = square();
        let err = Filtration::new(x.clone(), vec![vec![vec![1]], x.simplices(0).iter().chain(x.simplices(1)).cloned().collect()]).unwrap_err();
        assert!(matches!(err, ComplexError::Stage { stage: 0, .. }));
    }

    #[test]
    fn cells_decompose_into_induced_modules() {
        let x = cone();
        let cat = c2_category(x.group());
        for p in 0..=2 {
            assert!(x.cell_decomposition(&cat, p).unwrap().is_isomorphism());
        }
    }
}
