//! Finitely presented Bredon modules over an orbit category.
//!
//! A module stores a presentation of its value at every object and a matrix
//! on generators for every morphism. For a right module and `f: a → b` the
//! matrix of `M(f): M(b) → M(a)` has shape `n_a × n_b`, and
//! `M(h ∘ f) = M(f)·M(h)`; for a left module `M(f): M(a) → M(b)` has shape
//! `n_b × n_a` and `M(h ∘ f) = M(h)·M(f)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    map_is_injective, map_is_isomorphism, map_is_surjective, map_is_well_defined, map_is_zero,
    maps_agree, preimage_lattice, AbelianQuotient, ChainComplex, FpAbelianGroup, IntMatrix, Lattice,
    LinearSolver,
};
use crate::orbit::{MorphismId, ObjectId, OrbitCategory};
use crate::Budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Right,
    Left,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module has {got} values, category has {expected} objects")]
    ValueCount { got: usize, expected: usize },
    #[error("module has {got} action matrices, category has {expected} morphisms")]
    ActionCount { got: usize, expected: usize },
    #[error("action of morphism {morphism} is {got:?}, expected {expected:?}")]
    ActionShape {
        morphism: MorphismId,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("action of morphism {morphism} does not respect relations")]
    ActionNotWellDefined { morphism: MorphismId },
    #[error("modules live over different orbit categories")]
    CategoryMismatch,
    #[error("variance mismatch: expected {expected:?}, got {got:?}")]
    VarianceMismatch { expected: Variance, got: Variance },
    #[error("component at object {object} is {got:?}, expected {expected:?}")]
    ComponentShape {
        object: ObjectId,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("component at object {object} does not respect relations")]
    ComponentNotWellDefined { object: ObjectId },
    #[error("naturality square for morphism {morphism} does not commute")]
    NotNatural { morphism: MorphismId },
    #[error("element has {got} coordinates, value has {expected} generators")]
    ElementShape { got: usize, expected: usize },
    #[error("resolution stage {stage} needs {size} generators, budget allows {limit}")]
    BudgetExceeded { stage: usize, size: usize, limit: usize },
    #[error("resolution stage {stage} needs {entries} action matrix entries, budget allows {limit}")]
    ActionBudgetExceeded { stage: usize, entries: usize, limit: usize },
    #[error("resolution is not exact at object {object} in degree {degree}")]
    NotExact { object: ObjectId, degree: i64 },
}

pub(crate) fn same_category(a: &Arc<OrbitCategory>, b: &Arc<OrbitCategory>) -> bool {
    Arc::ptr_eq(a, b) || (a.family() == b.family() && a.group() == b.group())
}

/// First failed functoriality condition of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Identity {
        object: ObjectId,
    },
    Composition {
        first: MorphismId,
        second: MorphismId,
        composite: MorphismId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub violation: Option<Violation>,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct BredonModule {
    category: Arc<OrbitCategory>,
    variance: Variance,
    values: Vec<FpAbelianGroup>,
    actions: Vec<IntMatrix>,
    /// Objects `o_i` when the module was built as `⊕ᵢ ℤ[−, Γ/Λ_{o_i}]`
    /// (or `⊕ᵢ ℤ[Γ/Λ_{o_i}, −]`) with the standard generators.
    free_basis: Option<Vec<ObjectId>>,
}

impl BredonModule {
    /// Checks shapes and that every action respects relations; functoriality
    /// is checked separately by [`BredonModule::validate`].
    pub fn new(
        category: Arc<OrbitCategory>,
        variance: Variance,
        values: Vec<FpAbelianGroup>,
        actions: Vec<IntMatrix>,
    ) -> Result<Self, ModuleError> {
        if values.len() != category.object_count() {
            return Err(ModuleError::ValueCount {
                got: values.len(),
                expected: category.object_count(),
            });
        }
        if actions.len() != category.morphism_count() {
            return Err(ModuleError::ActionCount {
                got: actions.len(),
                expected: category.morphism_count(),
            });
        }
        let m = BredonModule {
            category,
            variance,
            values,
            actions,
            free_basis: None,
        };
        for (f, a) in m.actions.iter().enumerate() {
            let (dom, cod) = m.action_ends(f);
            let expected = (m.values[cod].generators, m.values[dom].generators);
            if a.shape() != expected {
                return Err(ModuleError::ActionShape {
                    morphism: f,
                    got: a.shape(),
                    expected,
                });
            }
            if !map_is_well_defined(a, &m.values[dom], &m.values[cod]) {
                return Err(ModuleError::ActionNotWellDefined { morphism: f });
            }
        }
        Ok(m)
    }

    fn new_unchecked(
        category: Arc<OrbitCategory>,
        variance: Variance,
        values: Vec<FpAbelianGroup>,
        actions: Vec<IntMatrix>,
    ) -> Self {
        BredonModule {
            category,
            variance,
            values,
            actions,
            free_basis: None,
        }
    }

    /// The constant module ℤ̲.
    pub fn trivial(category: &Arc<OrbitCategory>, variance: Variance) -> Self {
        Self::constant(category, variance, FpAbelianGroup::free(1))
    }

    /// Constant functor with value `group` and identity actions.
    pub fn constant(category: &Arc<OrbitCategory>, variance: Variance, group: FpAbelianGroup) -> Self {
        let n = group.generators;
        Self::new_unchecked(
            category.clone(),
            variance,
            vec![group; category.object_count()],
            vec![IntMatrix::identity(n); category.morphism_count()],
        )
    }

    pub fn zero(category: &Arc<OrbitCategory>, variance: Variance) -> Self {
        let mut m = Self::constant(category, variance, FpAbelianGroup::zero());
        m.free_basis = Some(Vec::new());
        m
    }

    /// `⊕ᵢ ℤ[−, Γ/Λ_{o_i}]` (right) or `⊕ᵢ ℤ[Γ/Λ_{o_i}, −]` (left).
    ///
    /// At object `a` the generators are `(i, f)` for `f` in `hom(a, o_i)`
    /// (right) or `hom(o_i, a)` (left), ordered by `i` and then by position of
    /// `f` in its hom-set.
    pub fn free(category: &Arc<OrbitCategory>, variance: Variance, basis: Vec<ObjectId>) -> Self {
        let cat = category.as_ref();
        let layouts: Vec<Vec<(usize, MorphismId)>> = cat
            .objects()
            .map(|a| free_layout(cat, variance, &basis, a))
            .collect();
        let index: Vec<HashMap<(usize, MorphismId), usize>> = layouts
            .iter()
            .map(|l| l.iter().enumerate().map(|(p, &k)| (k, p)).collect())
            .collect();
        let values = layouts.iter().map(|l| FpAbelianGroup::free(l.len())).collect();
        let actions = (0..cat.morphism_count())
            .map(|phi| {
                let m = cat.morphism(phi);
                match variance {
                    Variance::Right => {
                        // f ∈ hom(b, o) ↦ f ∘ φ ∈ hom(a, o)
                        let mut a = IntMatrix::zeros(layouts[m.source].len(), layouts[m.target].len());
                        for (col, &(i, f)) in layouts[m.target].iter().enumerate() {
                            let row = index[m.source][&(i, cat.compose(phi, f))];
                            a[(row, col)] = BigInt::one();
                        }
                        a
                    }
                    Variance::Left => {
                        // f ∈ hom(o, a) ↦ φ ∘ f ∈ hom(o, b)
                        let mut a = IntMatrix::zeros(layouts[m.target].len(), layouts[m.source].len());
                        for (col, &(i, f)) in layouts[m.source].iter().enumerate() {
                            let row = index[m.target][&(i, cat.compose(f, phi))];
                            a[(row, col)] = BigInt::one();
                        }
                        a
                    }
                }
            })
            .collect();
        let mut module = Self::new_unchecked(category.clone(), variance, values, actions);
        module.free_basis = Some(basis);
        module
    }

    /// The represented module `ℤ[−, Γ/Λ_o]` (right) or `ℤ[Γ/Λ_o, −]` (left).
    pub fn represented(category: &Arc<OrbitCategory>, variance: Variance, o: ObjectId) -> Self {
        Self::free(category, variance, vec![o])
    }

    pub fn category(&self) -> &Arc<OrbitCategory> {
        &self.category
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn value(&self, o: ObjectId) -> &FpAbelianGroup {
        &self.values[o]
    }

    pub fn values(&self) -> &[FpAbelianGroup] {
        &self.values
    }

    pub fn action(&self, f: MorphismId) -> &IntMatrix {
        &self.actions[f]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn free_basis(&self) -> Option<&[ObjectId]> {
        self.free_basis.as_deref()
    }

    pub fn total_generators(&self) -> usize {
        self.values.iter().map(|v| v.generators).sum()
    }

    /// Whether every value is the zero group.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(FpAbelianGroup::is_trivial)
    }

    /// `(domain, codomain)` of the homomorphism `M(f)`.
    pub fn action_ends(&self, f: MorphismId) -> (ObjectId, ObjectId) {
        let m = self.category.morphism(f);
        match self.variance {
            Variance::Right => (m.target, m.source),
            Variance::Left => (m.source, m.target),
        }
    }

    /// Exhaustive functoriality check; reports the first failure.
    pub fn validate(&self) -> ModuleReport {
        let cat = &self.category;
        for o in cat.objects() {
            let id = &self.actions[cat.identity(o)];
            if !maps_agree(id, &IntMatrix::identity(self.values[o].generators), &self.values[o]) {
                return ModuleReport {
                    violation: Some(Violation::Identity { object: o }),
                };
            }
        }
        for f in 0..cat.morphism_count() {
            let b = cat.morphism(f).target;
            for &h in cat.morphisms_from(b) {
                let hf = cat.compose(f, h);
                let (prod, target) = match self.variance {
                    Variance::Right => (self.actions[f].mul(&self.actions[h]), cat.morphism(f).source),
                    Variance::Left => (self.actions[h].mul(&self.actions[f]), cat.morphism(h).target),
                };
                if !maps_agree(&self.actions[hf], &prod, &self.values[target]) {
                    return ModuleReport {
                        violation: Some(Violation::Composition {
                            first: f,
                            second: h,
                            composite: hf,
                        }),
                    };
                }
            }
        }
        ModuleReport { violation: None }
    }

    pub fn direct_sum(&self, other: &BredonModule) -> Result<BredonModule, ModuleError> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| IntMatrix::block_diagonal(&[a.clone(), b.clone()]))
            .collect();
        let mut m = Self::new_unchecked(self.category.clone(), self.variance, values, actions);
        if let (Some(a), Some(b)) = (&self.free_basis, &other.free_basis) {
            m.free_basis = Some(a.iter().chain(b).copied().collect());
        }
        Ok(m)
    }

    pub fn direct_sum_all(parts: &[BredonModule]) -> Result<BredonModule, ModuleError> {
        let (first, rest) = parts.split_first().expect("at least one summand");
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    pub(crate) fn check_compatible(&self, other: &BredonModule) -> Result<(), ModuleError> {
        if !same_category(&self.category, &other.category) {
            return Err(ModuleError::CategoryMismatch);
        }
        if self.variance != other.variance {
            return Err(ModuleError::VarianceMismatch {
                expected: self.variance,
                got: other.variance,
            });
        }
        Ok(())
    }

    /// Values with redundant relation columns removed.
    pub fn pruned(&self) -> BredonModule {
        let mut m = self.clone();
        for v in &mut m.values {
            *v = v.pruned();
        }
        m
    }
}

/// Generator layout of a free module at object `a`.
pub fn free_layout(
    cat: &OrbitCategory,
    variance: Variance,
    basis: &[ObjectId],
    a: ObjectId,
) -> Vec<(usize, MorphismId)> {
    basis
        .iter()
        .enumerate()
        .flat_map(|(i, &o)| {
            let hom = match variance {
                Variance::Right => cat.hom(a, o),
                Variance::Left => cat.hom(o, a),
            };
            hom.iter().map(move |&f| (i, f))
        })
        .collect()
}

/// A natural transformation; `components[o]` maps generators of the source
/// value at `o` to the target value.
#[derive(Clone, Debug)]
pub struct BredonMorphism {
    source: BredonModule,
    target: BredonModule,
    components: Vec<IntMatrix>,
}

impl BredonMorphism {
    pub fn new(
        source: BredonModule,
        target: BredonModule,
        components: Vec<IntMatrix>,
    ) -> Result<Self, ModuleError> {
        source.check_compatible(&target)?;
        if components.len() != source.category.object_count() {
            return Err(ModuleError::ValueCount {
                got: components.len(),
                expected: source.category.object_count(),
            });
        }
        for (o, c) in components.iter().enumerate() {
            let expected = (target.values[o].generators, source.values[o].generators);
            if c.shape() != expected {
                return Err(ModuleError::ComponentShape {
                    object: o,
                    got: c.shape(),
                    expected,
                });
            }
            if !map_is_well_defined(c, &source.values[o], &target.values[o]) {
                return Err(ModuleError::ComponentNotWellDefined { object: o });
            }
        }
        let phi = BredonMorphism {
            source,
            target,
            components,
        };
        phi.check_natural()?;
        Ok(phi)
    }

    pub(crate) fn new_unchecked(source: BredonModule, target: BredonModule, components: Vec<IntMatrix>) -> Self {
        BredonMorphism {
            source,
            target,
            components,
        }
    }

    fn check_natural(&self) -> Result<(), ModuleError> {
        let (s, t) = (&self.source, &self.target);
        for f in 0..s.category.morphism_count() {
            let (dom, cod) = s.action_ends(f);
            let lhs = self.components[cod].mul(&s.actions[f]);
            let rhs = t.actions[f].mul(&self.components[dom]);
            if !maps_agree(&lhs, &rhs, &t.values[cod]) {
                return Err(ModuleError::NotNatural { morphism: f });
            }
        }
        Ok(())
    }

    pub fn identity(m: &BredonModule) -> Self {
        let components = m.values.iter().map(|v| IntMatrix::identity(v.generators)).collect();
        Self::new_unchecked(m.clone(), m.clone(), components)
    }

    pub fn zero(source: &BredonModule, target: &BredonModule) -> Self {
        let components = source
            .values
            .iter()
            .zip(&target.values)
            .map(|(s, t)| IntMatrix::zeros(t.generators, s.generators))
            .collect();
        Self::new_unchecked(source.clone(), target.clone(), components)
    }

    /// Extends generator images from a free module: `images[i]` is the image
    /// of the identity generator of the `i`-th summand.
    pub fn from_free(
        source: &BredonModule,
        target: &BredonModule,
        images: &[Vec<BigInt>],
    ) -> Result<Self, ModuleError> {
        source.check_compatible(target)?;
        let basis = source.free_basis.as_ref().expect("source must be a free module");
        assert_eq!(basis.len(), images.len(), "one image per basis element");
        for (i, &o) in basis.iter().enumerate() {
            if images[i].len() != target.values[o].generators {
                return Err(ModuleError::ElementShape {
                    got: images[i].len(),
                    expected: target.values[o].generators,
                });
            }
        }
        let cat = source.category.as_ref();
        let components = cat
            .objects()
            .map(|a| {
                let cols: Vec<Vec<BigInt>> = free_layout(cat, source.variance, basis, a)
                    .into_iter()
                    .map(|(i, f)| target.actions[f].mul_vec(&images[i]))
                    .collect();
                IntMatrix::from_columns(target.values[a].generators, &cols)
            })
            .collect();
        Ok(Self::new_unchecked(source.clone(), target.clone(), components))
    }

    /// The morphism out of the represented module at `o` sending the identity to `x`.
    pub fn yoneda(m: &BredonModule, o: ObjectId, x: Vec<BigInt>) -> Result<Self, ModuleError> {
        let rep = BredonModule::represented(&m.category, m.variance, o);
        Self::from_free(&rep, m, &[x])
    }

    /// Image of the identity generator when the source is represented at `o`.
    pub fn yoneda_element(&self) -> Vec<BigInt> {
        let basis = self.source.free_basis.as_ref().expect("source must be a free module");
        assert_eq!(basis.len(), 1, "source must be a represented module");
        let o = basis[0];
        let cat = &self.source.category;
        let pos = cat.position_in_hom(cat.identity(o));
        self.components[o].column(pos)
    }

    pub fn source(&self) -> &BredonModule {
        &self.source
    }

    pub fn target(&self) -> &BredonModule {
        &self.target
    }

    pub fn component(&self, o: ObjectId) -> &IntMatrix {
        &self.components[o]
    }

    pub fn components(&self) -> &[IntMatrix] {
        &self.components
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &BredonMorphism) -> BredonMorphism {
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(a, b)| b.mul(a))
            .collect();
        Self::new_unchecked(self.source.clone(), next.target.clone(), components)
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .zip(&self.target.values)
            .all(|(c, t)| map_is_zero(c, t))
    }

    pub fn agrees_with(&self, other: &BredonMorphism) -> bool {
        self.components
            .iter()
            .zip(&other.components)
            .zip(&self.target.values)
            .all(|((a, b), t)| maps_agree(a, b, t))
    }

    pub fn is_epi(&self) -> bool {
        self.components
            .iter()
            .zip(&self.target.values)
            .all(|(c, t)| map_is_surjective(c, t))
    }

    pub fn is_mono(&self) -> bool {
        (0..self.components.len())
            .all(|o| map_is_injective(&self.components[o], &self.source.values[o], &self.target.values[o]))
    }

    pub fn is_isomorphism(&self) -> bool {
        (0..self.components.len())
            .all(|o| map_is_isomorphism(&self.components[o], &self.source.values[o], &self.target.values[o]))
    }

    /// Componentwise kernel with the inclusion into the source.
    pub fn kernel(&self) -> (BredonModule, BredonMorphism) {
        let s = &self.source;
        let lattices: Vec<Lattice> = s
            .category
            .objects()
            .map(|o| preimage_lattice(&self.components[o], &self.target.values[o].relations))
            .collect();
        let bases: Vec<IntMatrix> = lattices.iter().map(Lattice::basis).collect();
        let values = lattices
            .iter()
            .zip(&s.values)
            .map(|(l, v)| {
                let rels = coords_in(l, &v.relations);
                FpAbelianGroup::new(l.rank(), rels).pruned()
            })
            .collect();
        let actions = (0..s.category.morphism_count())
            .map(|f| {
                let (dom, cod) = s.action_ends(f);
                coords_in(&lattices[cod], &s.actions[f].mul(&bases[dom]))
            })
            .collect();
        let k = BredonModule::new_unchecked(s.category.clone(), s.variance, values, actions);
        let incl = BredonMorphism::new_unchecked(k.clone(), s.clone(), bases);
        (k, incl)
    }

    /// Componentwise cokernel with the projection from the target.
    pub fn cokernel(&self) -> (BredonModule, BredonMorphism) {
        let t = &self.target;
        let values = t
            .values
            .iter()
            .zip(&self.components)
            .map(|(v, c)| FpAbelianGroup::new(v.generators, v.relations.hstack(c)).pruned())
            .collect();
        let c = BredonModule::new_unchecked(t.category.clone(), t.variance, values, t.actions.clone());
        let proj = BredonMorphism::identity(t);
        let proj = BredonMorphism::new_unchecked(t.clone(), c.clone(), proj.components);
        (c, proj)
    }

    /// A morphism `s` with `self ∘ s = id`, when one exists. Both modules
    /// must have relation-free values.
    pub fn section(&self) -> Option<BredonMorphism> {
        let (src, tgt) = (&self.source, &self.target);
        assert!(
            !src.values.iter().chain(&tgt.values).any(FpAbelianGroup::has_relations),
            "sections are only searched between relation-free modules"
        );
        let cat = src.category.as_ref();
        let dims: Vec<(usize, usize)> = cat
            .objects()
            .map(|o| (src.values[o].generators, tgt.values[o].generators))
            .collect();
        // unknown s_o[r, c] lives at offsets[o] + r * cols + c
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for &(r, c) in &dims {
            offsets.push(total);
            total += r * c;
        }
        let var = |o: ObjectId, r: usize, c: usize| offsets[o] + r * dims[o].1 + c;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs: Vec<BigInt> = Vec::new();
        for o in cat.objects() {
            let (ns, nt) = dims[o];
            let p = &self.components[o];
            for i in 0..nt {
                for c in 0..nt {
                    let mut row = vec![BigInt::zero(); total];
                    for r in 0..ns {
                        row[var(o, r, c)] += &p[(i, r)];
                    }
                    rows.push(row);
                    rhs.push(if i == c { BigInt::one() } else { BigInt::zero() });
                }
            }
        }
        for &f in cat.generating_morphisms() {
            // src(f)·s_dom = s_cod·tgt(f)
            let (dom, cod) = src.action_ends(f);
            let (fs, ft) = (&src.actions[f], &tgt.actions[f]);
            for i in 0..dims[cod].0 {
                for c in 0..dims[dom].1 {
                    let mut row = vec![BigInt::zero(); total];
                    for r in 0..dims[dom].0 {
                        row[var(dom, r, c)] += &fs[(i, r)];
                    }
                    for r in 0..dims[cod].1 {
                        row[var(cod, i, r)] -= &ft[(r, c)];
                    }
                    rows.push(row);
                    rhs.push(BigInt::zero());
                }
            }
        }
        let a = IntMatrix::from_big_rows(rows, total);
        let x = LinearSolver::new(&a).solve(&rhs)?;
        let components = cat
            .objects()
            .map(|o| {
                let (r, c) = dims[o];
                let rows = (0..r).map(|i| x[var(o, i, 0)..var(o, i, 0) + c].to_vec()).collect();
                IntMatrix::from_big_rows(rows, c)
            })
            .collect();
        Some(BredonMorphism::new_unchecked(tgt.clone(), src.clone(), components))
    }
}

fn coords_in(l: &Lattice, m: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = (0..m.cols())
        .map(|j| l.coords(&m.column(j)).expect("vector lies in the lattice"))
        .collect();
    IntMatrix::from_columns(l.rank(), &cols)
}

/// How free covers choose generators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverStrategy {
    /// One free summand for every presentation generator at every object.
    #[default]
    AllGenerators,
    /// Visits objects from large to small subgroups (right modules) or small
    /// to large (left modules) and adds only generators of what is not yet
    /// reached.
    Greedy,
}

/// Free module mapping onto `m`. A module built as a free module covers
/// itself by the identity.
pub fn free_cover(m: &BredonModule) -> (BredonModule, BredonMorphism) {
    free_cover_with(m, CoverStrategy::AllGenerators)
}

pub fn free_cover_with(m: &BredonModule, strategy: CoverStrategy) -> (BredonModule, BredonMorphism) {
    match cover_generators(m, strategy) {
        None => (m.clone(), BredonMorphism::identity(m)),
        Some((basis, images)) => build_cover(m, basis, &images),
    }
}

/// Basis objects and generator images of a free cover, or `None` when `m`
/// is already free.
fn cover_generators(m: &BredonModule, strategy: CoverStrategy) -> Option<(Vec<ObjectId>, Vec<Vec<BigInt>>)> {
    if m.free_basis.is_some() {
        return None;
    }
    Some(match strategy {
        CoverStrategy::AllGenerators => {
            let mut basis = Vec::new();
            let mut images = Vec::new();
            for o in m.category.objects() {
                let n = m.values[o].generators;
                for j in 0..n {
                    let mut e = vec![BigInt::zero(); n];
                    e[j] = BigInt::one();
                    basis.push(o);
                    images.push(e);
                }
            }
            (basis, images)
        }
        CoverStrategy::Greedy => greedy_generators(m),
    })
}

fn build_cover(m: &BredonModule, basis: Vec<ObjectId>, images: &[Vec<BigInt>]) -> (BredonModule, BredonMorphism) {
    let p = BredonModule::free(&m.category, m.variance, basis);
    let eps = BredonMorphism::from_free(&p, m, images).expect("images have the right shape");
    (p, eps)
}

/// Total generators and dense action matrix entries of the free module on
/// `basis`, without building it.
fn free_size(cat: &OrbitCategory, variance: Variance, basis: &[ObjectId]) -> (usize, usize) {
    let dims: Vec<usize> = cat
        .objects()
        .map(|a| {
            basis
                .iter()
                .map(|&b| match variance {
                    Variance::Right => cat.hom(a, b).len(),
                    Variance::Left => cat.hom(b, a).len(),
                })
                .sum()
        })
        .collect();
    let entries = cat
        .morphisms()
        .iter()
        .map(|f| dims[f.source] * dims[f.target])
        .sum();
    (dims.iter().sum(), entries)
}

fn greedy_generators(m: &BredonModule) -> (Vec<ObjectId>, Vec<Vec<BigInt>>) {
    let cat = m.category.as_ref();
    let mut order: Vec<ObjectId> = cat.objects().collect();
    match m.variance {
        Variance::Right => order.sort_by(|&a, &b| cat.subgroup(b).order().cmp(&cat.subgroup(a).order()).then(a.cmp(&b))),
        Variance::Left => order.sort_by(|&a, &b| cat.subgroup(a).order().cmp(&cat.subgroup(b).order()).then(a.cmp(&b))),
    }
    let mut basis: Vec<ObjectId> = Vec::new();
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    for o in order {
        let n = m.values[o].generators;
        if n == 0 {
            continue;
        }
        let mut reached: Vec<Vec<BigInt>> = m.values[o].relations.columns();
        for (i, &b) in basis.iter().enumerate() {
            let hom = match m.variance {
                Variance::Right => cat.hom(o, b),
                Variance::Left => cat.hom(b, o),
            };
            for &f in hom {
                reached.push(m.actions[f].mul_vec(&images[i]));
            }
        }
        // One generator at a time, so that its orbit under End(o) counts.
        loop {
            let q = AbelianQuotient::of_relations(n, &IntMatrix::from_columns(n, &reached));
            let gens = q.generators();
            if gens.cols() == 0 {
                break;
            }
            let x = gens.column(gens.cols() - 1);
            for &f in cat.hom(o, o) {
                reached.push(m.actions[f].mul_vec(&x));
            }
            basis.push(o);
            images.push(x);
        }
    }
    (basis, images)
}

/// A free resolution `P_n → … → P_0 → M → 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    target: BredonModule,
    terms: Vec<BredonModule>,
    /// `differentials[k - 1]: P_k → P_{k-1}`
    differentials: Vec<BredonMorphism>,
    augmentation: BredonMorphism,
}

/// All-generators resolution with the budget from the environment.
pub fn resolve(m: &BredonModule, n: usize) -> Result<Resolution, ModuleError> {
    resolve_with(m, n, CoverStrategy::AllGenerators, Budget::from_env())
}

pub fn resolve_with(
    m: &BredonModule,
    n: usize,
    strategy: CoverStrategy,
    budget: Budget,
) -> Result<Resolution, ModuleError> {
    let cat = m.category.as_ref();
    let cover = |stage: usize, module: &BredonModule| -> Result<(BredonModule, BredonMorphism), ModuleError> {
        let Some((basis, images)) = cover_generators(module, strategy) else {
            return Ok((module.clone(), BredonMorphism::identity(module)));
        };
        let (size, entries) = free_size(cat, m.variance, &basis);
        if size > budget.max_generators {
            return Err(ModuleError::BudgetExceeded {
                stage,
                size,
                limit: budget.max_generators,
            });
        }
        if entries > budget.max_action_entries {
            return Err(ModuleError::ActionBudgetExceeded {
                stage,
                entries,
                limit: budget.max_action_entries,
            });
        }
        Ok(build_cover(module, basis, &images))
    };
    let (p0, eps) = cover(0, m)?;
    let mut terms = vec![p0];
    let mut differentials: Vec<BredonMorphism> = Vec::new();
    let mut current = eps.clone();
    for k in 1..=n {
        let (ker, incl) = current.kernel();
        let (pk, pi) = if ker.is_zero() {
            let z = BredonModule::zero(&m.category, m.variance);
            let pi = BredonMorphism::zero(&z, &ker);
            (z, pi)
        } else {
            cover(k, &ker)?
        };
        let d = pi.then(&incl);
        terms.push(pk);
        differentials.push(d.clone());
        current = d;
    }
    let r = Resolution {
        target: m.clone(),
        terms,
        differentials,
        augmentation: eps,
    };
    r.verify_exact()?;
    Ok(r)
}

impl Resolution {
    pub fn target(&self) -> &BredonModule {
        &self.target
    }

    /// Highest degree `n` that was built.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, k: usize) -> &BredonModule {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[BredonModule] {
        &self.terms
    }

    /// `d_k: P_k → P_{k-1}` for `k ≥ 1`.
    pub fn differential(&self, k: usize) -> &BredonMorphism {
        &self.differentials[k - 1]
    }

    pub fn augmentation(&self) -> &BredonMorphism {
        &self.augmentation
    }

    /// Free basis of `P_k`.
    pub fn basis(&self, k: usize) -> &[ObjectId] {
        self.terms[k].free_basis().expect("resolution terms are free")
    }

    /// Number of free summands in each degree.
    pub fn ranks(&self) -> Vec<usize> {
        (0..self.terms.len()).map(|k| self.basis(k).len()).collect()
    }

    /// Rank of `P_k` at each object.
    pub fn object_ranks(&self) -> Vec<Vec<usize>> {
        self.terms
            .iter()
            .map(|p| p.values().iter().map(|v| v.generators).collect())
            .collect()
    }

    /// Largest degree with a nonzero term.
    pub fn effective_length(&self) -> usize {
        (0..self.terms.len()).rev().find(|&k| !self.basis(k).is_empty()).unwrap_or(0)
    }

    /// `M(o) ← P_0(o) ← … ← P_n(o)` with `M` in degree −1.
    pub fn complex_at(&self, o: ObjectId) -> ChainComplex {
        let mut terms = vec![self.target.value(o).clone()];
        terms.extend(self.terms.iter().map(|p| p.value(o).clone()));
        let mut bds = vec![self.augmentation.component(o).clone()];
        bds.extend(self.differentials.iter().map(|d| d.component(o).clone()));
        ChainComplex::new(-1, terms, bds).expect("resolution differentials compose to zero")
    }

    /// Checks that homology vanishes in degrees `−1 … n−1` at every object.
    pub fn verify_exact(&self) -> Result<(), ModuleError> {
        let n = self.length() as i64;
        for o in self.target.category().objects() {
            let mut terms = vec![self.target.value(o).clone()];
            terms.extend(self.terms.iter().map(|p| p.value(o).clone()));
            let mut bds = vec![self.augmentation.component(o).clone()];
            bds.extend(self.differentials.iter().map(|d| d.component(o).clone()));
            let c = ChainComplex::new(-1, terms, bds).map_err(|_| ModuleError::NotExact { object: o, degree: 0 })?;
            for k in -1..n {
                if !c.homology(k).invariants().is_trivial() {
                    return Err(ModuleError::NotExact { object: o, degree: k });
                }
            }
        }
        Ok(())
    }
}

/// Witness that a module is of type FP_n: the resolution and its sizes.
#[derive(Clone, Debug)]
pub struct FpReport {
    pub holds: bool,
    pub n: usize,
    /// Free summands in each degree.
    pub ranks: Vec<usize>,
    pub resolution: Resolution,
}

pub fn fp_n_report(m: &BredonModule, n: usize) -> Result<FpReport, ModuleError> {
    fp_n_report_with(m, n, CoverStrategy::AllGenerators, Budget::from_env())
}

pub fn fp_n_report_with(
    m: &BredonModule,
    n: usize,
    strategy: CoverStrategy,
    budget: Budget,
) -> Result<FpReport, ModuleError> {
    let resolution = resolve_with(m, n, strategy, budget)?;
    Ok(FpReport {
        holds: true,
        n,
        ranks: resolution.ranks(),
        resolution,
    })
}
