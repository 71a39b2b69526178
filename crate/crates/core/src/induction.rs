//! Restriction and induction along the inclusion of a subgroup `Λ ≤ Γ`.
//!
//! When `𝔉 ∩ Λ ⊆ 𝔉`, sending `Λ/Ξ` to `Γ/Ξ` is a functor
//! `I: Or_{𝔉∩Λ}(Λ) → Or_𝔉(Γ)`. Restriction precomposes with `I`; induction is
//! the left Kan extension, computed objectwise as a coend.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::group::Subgroup;
use crate::linalg::{FpAbelianGroup, IntMatrix};
use crate::module::{free_cover, BredonModule, BredonMorphism, ModuleError, Variance};
use crate::orbit::{hom_module, GammaSet, MorphismId, ObjectId, OrbitCategory};
use crate::tensor::{tensor_over_family, TensorError, TensorResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InductionError {
    #[error("the family intersected with {subgroup} is not contained in the family")]
    FamilyNotContained { subgroup: String },
    #[error("{subgroup} is not a subgroup of the ambient group of the category")]
    NotSubgroup { subgroup: String },
    #[error("module lives over the wrong orbit category")]
    WrongCategory,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// The subcategory `Or_{𝔉∩Λ}(Λ)` and the functor `I` into `Or_𝔉(Γ)`.
#[derive(Clone, Debug)]
pub struct SubgroupContext {
    ambient: Arc<OrbitCategory>,
    subgroup: Subgroup,
    sub: Arc<OrbitCategory>,
    object_map: Vec<ObjectId>,
    morphism_map: Vec<MorphismId>,
}

impl SubgroupContext {
    pub fn new(ambient: &Arc<OrbitCategory>, subgroup: &Subgroup) -> Result<Self, InductionError> {
        let group = ambient.group();
        if !subgroup.is_subgroup_of(ambient.family().ambient()) {
            return Err(InductionError::NotSubgroup {
                subgroup: subgroup.display(group),
            });
        }
        let (family, contained) = ambient.family().intersect(group, subgroup);
        if !contained {
            return Err(InductionError::FamilyNotContained {
                subgroup: subgroup.display(group),
            });
        }
        let sub = Arc::new(OrbitCategory::build(group.clone(), family));
        let object_map: Vec<ObjectId> = sub
            .objects()
            .map(|o| ambient.object_of(sub.subgroup(o)).expect("family is contained"))
            .collect();
        let morphism_map = sub
            .morphisms()
            .iter()
            .map(|m| {
                ambient
                    .morphism_for(object_map[m.source], object_map[m.target], m.rep)
                    .expect("morphisms of the subcategory are morphisms of the category")
            })
            .collect();
        Ok(SubgroupContext {
            ambient: ambient.clone(),
            subgroup: subgroup.clone(),
            sub,
            object_map,
            morphism_map,
        })
    }

    pub fn ambient(&self) -> &Arc<OrbitCategory> {
        &self.ambient
    }

    pub fn subcategory(&self) -> &Arc<OrbitCategory> {
        &self.sub
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn map_object(&self, o: ObjectId) -> ObjectId {
        self.object_map[o]
    }

    pub fn map_morphism(&self, f: MorphismId) -> MorphismId {
        self.morphism_map[f]
    }

    /// Exhaustive check that `I` preserves identities and composites.
    pub fn is_functorial(&self) -> bool {
        let s = &self.sub;
        s.objects()
            .all(|o| self.morphism_map[s.identity(o)] == self.ambient.identity(self.object_map[o]))
            && (0..s.morphism_count()).all(|f| {
                s.morphisms_from(s.morphism(f).target).iter().all(|&h| {
                    self.morphism_map[s.compose(f, h)]
                        == self.ambient.compose(self.morphism_map[f], self.morphism_map[h])
                })
            })
    }

    /// `Res M = M ∘ I`.
    pub fn restrict(&self, m: &BredonModule) -> Result<BredonModule, InductionError> {
        if !crate::module::same_category(m.category(), &self.ambient) {
            return Err(InductionError::WrongCategory);
        }
        let values = self.object_map.iter().map(|&o| m.value(o).clone()).collect();
        let actions = self.morphism_map.iter().map(|&f| m.action(f).clone()).collect();
        Ok(BredonModule::new(self.sub.clone(), m.variance(), values, actions)?)
    }

    /// `Res` on morphisms.
    pub fn restrict_morphism(&self, phi: &BredonMorphism) -> Result<BredonMorphism, InductionError> {
        let s = self.restrict(phi.source())?;
        let t = self.restrict(phi.target())?;
        let comps = self.object_map.iter().map(|&o| phi.component(o).clone()).collect();
        Ok(BredonMorphism::new(s, t, comps)?)
    }

    /// At `Γ/Θ`: the left module `ξ ↦ ℤ[hom(Γ/Θ, I ξ)]` (for right `N`) or the
    /// right module `ξ ↦ ℤ[hom(I ξ, Γ/Θ)]` (for left `N`).
    fn kernel_module(&self, theta: ObjectId, variance: Variance) -> BredonModule {
        let (s, a) = (&self.sub, &self.ambient);
        let hom = |xi: ObjectId| -> &[MorphismId] {
            match variance {
                Variance::Right => a.hom(theta, self.object_map[xi]),
                Variance::Left => a.hom(self.object_map[xi], theta),
            }
        };
        let values = s.objects().map(|xi| FpAbelianGroup::free(hom(xi).len())).collect();
        let actions = s
            .morphisms()
            .iter()
            .enumerate()
            .map(|(h, m)| {
                let ih = self.morphism_map[h];
                match variance {
                    // left module in ξ: f ↦ I(h) ∘ f
                    Variance::Right => {
                        let (src, tgt) = (hom(m.source), hom(m.target));
                        let mut mat = IntMatrix::zeros(tgt.len(), src.len());
                        for (c, &f) in src.iter().enumerate() {
                            let r = a.position_in_hom(a.compose(f, ih));
                            mat[(r, c)] = BigInt::one();
                        }
                        mat
                    }
                    // right module in ξ: f ↦ f ∘ I(h)
                    Variance::Left => {
                        let (src, tgt) = (hom(m.target), hom(m.source));
                        let mut mat = IntMatrix::zeros(tgt.len(), src.len());
                        for (c, &f) in src.iter().enumerate() {
                            let r = a.position_in_hom(a.compose(ih, f));
                            mat[(r, c)] = BigInt::one();
                        }
                        mat
                    }
                }
            })
            .collect();
        let v = match variance {
            Variance::Right => Variance::Left,
            Variance::Left => Variance::Right,
        };
        BredonModule::new(s.clone(), v, values, actions).expect("permutation actions are well defined")
    }

    fn induced_pieces(&self, n: &BredonModule) -> Result<Vec<TensorResult>, InductionError> {
        if !crate::module::same_category(n.category(), &self.sub) {
            return Err(InductionError::WrongCategory);
        }
        self.ambient
            .objects()
            .map(|theta| {
                let k = self.kernel_module(theta, n.variance());
                let t = match n.variance() {
                    Variance::Right => tensor_over_family(n, &k)?,
                    Variance::Left => tensor_over_family(&k, n)?,
                };
                Ok(t)
            })
            .collect()
    }

    /// Blocks of the map between the ambient spaces of the pieces at the two
    /// ends of an ambient morphism.
    fn action_blocks(&self, n: &BredonModule, psi: MorphismId) -> (ObjectId, ObjectId, Vec<IntMatrix>) {
        let a = &self.ambient;
        let m = a.morphism(psi);
        let blocks = self
            .sub
            .objects()
            .map(|xi| {
                let ixi = self.object_map[xi];
                let nx = n.value(xi).generators;
                match n.variance() {
                    Variance::Right => {
                        // ℤ[hom(θ, Iξ)] → ℤ[hom(θ', Iξ)], f ↦ f ∘ ψ, for ψ: θ' → θ
                        let (src, tgt) = (a.hom(m.target, ixi), a.hom(m.source, ixi));
                        let mut p = IntMatrix::zeros(tgt.len(), src.len());
                        for (c, &f) in src.iter().enumerate() {
                            p[(a.position_in_hom(a.compose(psi, f)), c)] = BigInt::one();
                        }
                        IntMatrix::identity(nx).kron(&p)
                    }
                    Variance::Left => {
                        // ℤ[hom(Iξ, θ)] → ℤ[hom(Iξ, θ')], f ↦ ψ ∘ f, for ψ: θ → θ'
                        let (src, tgt) = (a.hom(ixi, m.source), a.hom(ixi, m.target));
                        let mut p = IntMatrix::zeros(tgt.len(), src.len());
                        for (c, &f) in src.iter().enumerate() {
                            p[(a.position_in_hom(a.compose(f, psi)), c)] = BigInt::one();
                        }
                        p.kron(&IntMatrix::identity(nx))
                    }
                }
            })
            .collect();
        let (from, to) = match n.variance() {
            Variance::Right => (m.target, m.source),
            Variance::Left => (m.source, m.target),
        };
        (from, to, blocks)
    }

    /// `Ind N` over `Or_𝔉(Γ)`, of the same variance as `N`.
    pub fn induce(&self, n: &BredonModule) -> Result<BredonModule, InductionError> {
        Ok(self.induce_with_pieces(n)?.0)
    }

    fn induce_with_pieces(&self, n: &BredonModule) -> Result<(BredonModule, Vec<TensorResult>), InductionError> {
        let pieces = self.induced_pieces(n)?;
        let values = pieces.iter().map(TensorResult::presentation).collect();
        let actions = (0..self.ambient.morphism_count())
            .map(|psi| {
                let (from, to, blocks) = self.action_blocks(n, psi);
                pieces[from].induced(&pieces[to], &blocks)
            })
            .collect();
        let m = BredonModule::new(self.ambient.clone(), n.variance(), values, actions)?;
        Ok((m, pieces))
    }

    /// `Ind` on morphisms.
    pub fn induce_morphism(&self, phi: &BredonMorphism) -> Result<BredonMorphism, InductionError> {
        let (s, ps) = self.induce_with_pieces(phi.source())?;
        let (t, pt) = self.induce_with_pieces(phi.target())?;
        let comps = self
            .ambient
            .objects()
            .map(|theta| match phi.source().variance() {
                Variance::Right => ps[theta].map_first(&pt[theta], phi),
                Variance::Left => ps[theta].map_second(&pt[theta], phi),
            })
            .collect();
        Ok(BredonMorphism::new(s, t, comps)?)
    }

    /// The natural map `Ind ℤ̲ → ℤ[−, Γ/Λ]`, `1 ⊗ f ↦ f(Λ)`, where `f: Γ/Θ →
    /// Γ/Ξ` is followed by the projection `Γ/Ξ → Γ/Λ`.
    pub fn induced_trivial_comparison(&self) -> Result<BredonMorphism, InductionError> {
        let z = BredonModule::trivial(&self.sub, Variance::Right);
        let (ind, pieces) = self.induce_with_pieces(&z)?;
        let group = self.ambient.group();
        let cosets = GammaSet::cosets(group, &self.subgroup);
        let target = hom_module(&self.ambient, &cosets);
        let reps: Vec<usize> = {
            let mut r: Vec<usize> = group.elements().map(|g| group.coset_rep(g, &self.subgroup)).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let a = &self.ambient;
        let comps = a
            .objects()
            .map(|theta| {
                let fixed = cosets.fixed_points(a.subgroup(theta));
                let t = &pieces[theta];
                let mut amb = IntMatrix::zeros(fixed.len(), t.ambient_dim());
                for xi in self.sub.objects() {
                    for (p, &f) in a.hom(theta, self.object_map[xi]).iter().enumerate() {
                        let g = a.morphism(f).rep;
                        let point = reps
                            .binary_search(&group.coset_rep(g, &self.subgroup))
                            .expect("coset");
                        let row = fixed.binary_search(&point).expect("image is fixed");
                        amb[(row, t.offset(xi) + p)] = BigInt::one();
                    }
                }
                amb.mul(t.quotient().generators())
            })
            .collect();
        Ok(BredonMorphism::new(ind, target, comps)?)
    }

    /// A splitting of a free cover of `Res P`, exhibiting the restriction of
    /// a free module as a direct summand of a free module.
    pub fn restricted_free_splitting(&self, p: &BredonModule) -> Result<Option<BredonMorphism>, InductionError> {
        let r = self.restrict(p)?;
        let (_, pi) = free_cover(&r);
        Ok(pi.section())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Family, FiniteGroup};

    fn s3_setup() -> (Arc<OrbitCategory>, Subgroup) {
        let (g, _) = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let g = Arc::new(g);
        let h = g.subgroup_generated(&[1]);
        let f = Family::close(&g, &[g.trivial_subgroup(), h.clone()]).unwrap();
        (Arc::new(OrbitCategory::build(g, f)), h)
    }

    #[test]
    fn subgroup_context_is_functorial() {
        let (c, h) = s3_setup();
        let ctx = SubgroupContext::new(&c, &h).unwrap();
        assert_eq!(ctx.subcategory().object_count(), 2);
        assert!(ctx.is_functorial());
    }

    #[test]
    fn family_must_be_contained() {
        let (g, _) = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let g = Arc::new(g);
        let h = g.subgroup_generated(&[1]);
        let f = Family::close(&g, std::slice::from_ref(&h)).unwrap();
        let c = Arc::new(OrbitCategory::build(g, f));
        assert!(matches!(
            SubgroupContext::new(&c, &h),
            Err(InductionError::FamilyNotContained { .. })
        ));
    }

    #[test]
    fn restriction_of_represented_module() {
        let (c, h) = s3_setup();
        let ctx = SubgroupContext::new(&c, &h).unwrap();
        let o = c.object_of(&h).unwrap();
        let m = BredonModule::represented(&c, Variance::Right, o);
        let r = ctx.restrict(&m).unwrap();
        let top = ctx.subcategory().object_of(&h).unwrap();
        assert_eq!(r.value(top).generators, 1);
        assert!(r.validate().is_valid());
    }

    #[test]
    fn induction_of_trivial_module() {
        let (c, h) = s3_setup();
        let ctx = SubgroupContext::new(&c, &h).unwrap();
        let phi = ctx.induced_trivial_comparison().unwrap();
        assert!(phi.is_isomorphism());
        assert!(phi.source().validate().is_valid());
    }

    #[test]
    fn whole_group_context_is_identity() {
        let (c, _) = s3_setup();
        let g = c.group().clone();
        let ctx = SubgroupContext::new(&c, &g.whole()).unwrap();
        let m = BredonModule::represented(&c, Variance::Left, 1);
        let r = ctx.restrict(&m).unwrap();
        assert_eq!(r.values(), m.values());
        let i = ctx.induce(&r).unwrap();
        for o in c.objects() {
            assert_eq!(i.value(o).invariants(), m.value(o).invariants());
        }
    }

    #[test]
    fn restricted_free_modules_split() {
        let (c, h) = s3_setup();
        let ctx = SubgroupContext::new(&c, &h).unwrap();
        for o in c.objects() {
            let p = BredonModule::represented(&c, Variance::Right, o);
            assert!(ctx.restricted_free_splitting(&p).unwrap().is_some());
        }
    }
}
