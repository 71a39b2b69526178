//! Orbit categories `Or_𝔉(Γ)` and finite Γ-sets.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::group::{Element, Family, FiniteGroup, Subgroup};
use crate::linalg::{FpAbelianGroup, IntMatrix};
use crate::module::{BredonModule, Variance};

pub type ObjectId = usize;
pub type MorphismId = usize;

/// A Γ-map `Γ/Ξ → Γ/Λ`, `xΞ ↦ x·rep·Λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub source: ObjectId,
    pub target: ObjectId,
    /// Least element of the coset `gΛ` defining the map.
    pub rep: Element,
}

/// The orbit category of a family: one object `Γ/Λ` for each member `Λ`.
///
/// When the family's ambient subgroup `A` is proper, this is the orbit
/// category of `A` with respect to the family; element indices still refer
/// to the full group so that subgroups can be shared.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    group: Arc<FiniteGroup>,
    family: Family,
    /// `coset_rep[o][g]`: least element of `g·Λ_o`.
    coset_rep: Vec<Vec<Element>>,
    morphisms: Vec<Morphism>,
    /// `homs[a][b]`: morphisms `a → b` sorted by representative.
    homs: Vec<Vec<Vec<MorphismId>>>,
    lookup: HashMap<Morphism, MorphismId>,
    identities: Vec<MorphismId>,
    /// `out_of[a]`: morphisms with source `a`.
    out_of: Vec<Vec<MorphismId>>,
    generators: Vec<MorphismId>,
}

impl OrbitCategory {
    pub fn build(group: Arc<FiniteGroup>, family: Family) -> Self {
        let objs = family.members().to_vec();
        let n = objs.len();
        let coset_rep: Vec<Vec<Element>> = objs
            .iter()
            .map(|l| group.elements().map(|g| group.coset_rep(g, l)).collect())
            .collect();
        let mut morphisms = Vec::new();
        let mut homs = vec![vec![Vec::new(); n]; n];
        let mut lookup = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                let (xi, lambda) = (&objs[a], &objs[b]);
                if lambda.order() % xi.order() != 0 {
                    continue;
                }
                let mut reps: Vec<Element> = family
                    .ambient()
                    .elements()
                    .iter()
                    .copied()
                    .filter(|&g| {
                        let gi = group.inv(g);
                        xi.elements().iter().all(|&x| lambda.contains(group.conj(gi, x)))
                    })
                    .map(|g| coset_rep[b][g])
                    .collect();
                reps.sort_unstable();
                reps.dedup();
                for rep in reps {
                    let m = Morphism {
                        source: a,
                        target: b,
                        rep,
                    };
                    lookup.insert(m, morphisms.len());
                    homs[a][b].push(morphisms.len());
                    morphisms.push(m);
                }
            }
        }
        let identity = group.identity();
        let identities = (0..n)
            .map(|o| {
                lookup[&Morphism {
                    source: o,
                    target: o,
                    rep: coset_rep[o][identity],
                }]
            })
            .collect();
        let mut out_of = vec![Vec::new(); n];
        for (id, m) in morphisms.iter().enumerate() {
            out_of[m.source].push(id);
        }
        let mut cat = OrbitCategory {
            group,
            family,
            coset_rep,
            morphisms,
            homs,
            lookup,
            identities,
            out_of,
            generators: Vec::new(),
        };
        cat.generators = cat.compute_generators();
        cat
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn object_count(&self) -> usize {
        self.family.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjectId> {
        0..self.object_count()
    }

    pub fn subgroup(&self, o: ObjectId) -> &Subgroup {
        &self.family.members()[o]
    }

    pub fn object_of(&self, h: &Subgroup) -> Option<ObjectId> {
        self.family.position(h)
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: MorphismId) -> Morphism {
        self.morphisms[f]
    }

    pub fn hom(&self, a: ObjectId, b: ObjectId) -> &[MorphismId] {
        &self.homs[a][b]
    }

    /// Morphisms with source `a`, in id order.
    pub fn morphisms_from(&self, a: ObjectId) -> &[MorphismId] {
        &self.out_of[a]
    }

    pub fn identity(&self, o: ObjectId) -> MorphismId {
        self.identities[o]
    }

    pub fn is_identity(&self, f: MorphismId) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    /// The morphism `a → b` given by any element `g` with `g⁻¹Λ_a g ⊆ Λ_b`.
    pub fn morphism_for(&self, a: ObjectId, b: ObjectId, g: Element) -> Option<MorphismId> {
        self.lookup
            .get(&Morphism {
                source: a,
                target: b,
                rep: self.coset_rep[b][g],
            })
            .copied()
    }

    /// `h ∘ f` (first `f`, then `h`).
    pub fn compose(&self, f: MorphismId, h: MorphismId) -> MorphismId {
        let (mf, mh) = (self.morphisms[f], self.morphisms[h]);
        assert_eq!(mf.target, mh.source, "morphisms are not composable");
        let g = self.group.mul(mf.rep, mh.rep);
        self.morphism_for(mf.source, mh.target, g)
            .expect("composites of morphisms are morphisms")
    }

    /// Position of `f` within its hom-set.
    pub fn position_in_hom(&self, f: MorphismId) -> usize {
        let m = self.morphisms[f];
        self.homs[m.source][m.target]
            .binary_search(&f)
            .expect("morphism belongs to its hom-set")
    }

    /// Exhaustive check of associativity and unit laws.
    pub fn check_axioms(&self) -> Result<(), String> {
        for (f, mf) in self.morphisms.iter().enumerate() {
            if self.compose(self.identity(mf.source), f) != f || self.compose(f, self.identity(mf.target)) != f {
                return Err(format!("identity law fails for morphism {f}"));
            }
            for &g in &self.out_of[mf.target] {
                let gf = self.compose(f, g);
                for &h in &self.out_of[self.morphisms[g].target] {
                    if self.compose(gf, h) != self.compose(f, self.compose(g, h)) {
                        return Err(format!("associativity fails for {f}, {g}, {h}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Non-identity morphisms whose composites (with identities) give every morphism.
    pub fn generating_morphisms(&self) -> &[MorphismId] {
        &self.generators
    }

    fn compute_generators(&self) -> Vec<MorphismId> {
        let m = self.morphisms.len();
        let mut reached = vec![false; m];
        let mut chosen: Vec<MorphismId> = Vec::new();
        let mut reached_list: Vec<MorphismId> = Vec::new();
        for &i in &self.identities {
            reached[i] = true;
            reached_list.push(i);
        }
        for f in 0..m {
            if reached[f] {
                continue;
            }
            chosen.push(f);
            let mut stack = vec![f];
            reached[f] = true;
            reached_list.push(f);
            while let Some(x) = stack.pop() {
                let mx = self.morphisms[x];
                let mut new = Vec::new();
                for &y in &reached_list {
                    let my = self.morphisms[y];
                    if my.target == mx.source {
                        new.push(self.compose(y, x));
                    }
                    if mx.target == my.source {
                        new.push(self.compose(x, y));
                    }
                }
                for z in new {
                    if !reached[z] {
                        reached[z] = true;
                        reached_list.push(z);
                        stack.push(z);
                    }
                }
            }
        }
        chosen
    }

    /// Human-readable description of a morphism.
    pub fn describe(&self, f: MorphismId) -> String {
        let m = self.morphisms[f];
        format!(
            "Γ/{} → Γ/{} via {}",
            self.subgroup(m.source).display(&self.group),
            self.subgroup(m.target).display(&self.group),
            self.group.label(m.rep)
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaSetError {
    #[error("permutation for element {element} is not a bijection of {size} points")]
    NotPermutation { element: Element, size: usize },
    #[error("element index {0} out of range")]
    BadElement(Element),
    #[error("action is not a homomorphism (elements {a} and {b})")]
    NotHomomorphism { a: Element, b: Element },
}

/// A finite Γ-set: `action[g][x] = g·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSet {
    size: usize,
    action: Vec<Vec<usize>>,
}

impl GammaSet {
    /// Full action table, validated to be a homomorphism into permutations.
    pub fn new(group: &FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self, GammaSetError> {
        if action.len() != group.order() {
            return Err(GammaSetError::BadElement(action.len()));
        }
        let size = action.first().map_or(0, |p| p.len());
        for (g, p) in action.iter().enumerate() {
            if !is_permutation(p, size) {
                return Err(GammaSetError::NotPermutation { element: g, size });
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..size).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return Err(GammaSetError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(GammaSet { size, action })
    }

    /// Extends the action of some elements (typically generators) to the whole
    /// group by closing under products. Fails if the given permutations are
    /// inconsistent with the group law or do not reach every element.
    pub fn from_partial(
        group: &FiniteGroup,
        size: usize,
        given: &BTreeMap<Element, Vec<usize>>,
    ) -> Result<Self, GammaSetError> {
        let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        action[group.identity()] = Some((0..size).collect());
        for (&g, p) in given {
            if g >= group.order() {
                return Err(GammaSetError::BadElement(g));
            }
            if !is_permutation(p, size) {
                return Err(GammaSetError::NotPermutation { element: g, size });
            }
            if let Some(existing) = &action[g] {
                if existing != p {
                    return Err(GammaSetError::NotHomomorphism { a: g, b: group.identity() });
                }
            }
            action[g] = Some(p.clone());
        }
        let gens: Vec<Element> = given.keys().copied().collect();
        let mut reached = vec![false; group.order()];
        reached[group.identity()] = true;
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = group.mul(g, x);
                let p: Vec<usize> = {
                    let px = action[x].as_ref().expect("reached elements have actions");
                    let pg = action[g].as_ref().expect("given");
                    px.iter().map(|&i| pg[i]).collect()
                };
                if let Some(q) = &action[y] {
                    if *q != p {
                        return Err(GammaSetError::NotHomomorphism { a: g, b: x });
                    }
                }
                if !reached[y] {
                    reached[y] = true;
                    action[y] = Some(p);
                    queue.push(y);
                }
            }
        }
        if let Some(missing) = action.iter().position(|a| a.is_none()) {
            return Err(GammaSetError::BadElement(missing));
        }
        Self::new(group, action.into_iter().map(|a| a.unwrap()).collect())
    }

    /// The one-point Γ-set.
    pub fn point(group: &FiniteGroup) -> Self {
        GammaSet {
            size: 1,
            action: vec![vec![0]; group.order()],
        }
    }

    pub fn empty(group: &FiniteGroup) -> Self {
        GammaSet {
            size: 0,
            action: vec![Vec::new(); group.order()],
        }
    }

    /// Left cosets `gΛ`, ordered by their least elements.
    pub fn cosets(group: &FiniteGroup, lambda: &Subgroup) -> Self {
        let mut reps: Vec<Element> = group.elements().map(|g| group.coset_rep(g, lambda)).collect();
        reps.sort_unstable();
        reps.dedup();
        let pos: HashMap<Element, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let action = group
            .elements()
            .map(|g| {
                reps.iter()
                    .map(|&r| pos[&group.coset_rep(group.mul(g, r), lambda)])
                    .collect()
            })
            .collect();
        GammaSet {
            size: reps.len(),
            action,
        }
    }

    pub fn disjoint_union(&self, other: &GammaSet) -> Self {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(p, q)| {
                p.iter()
                    .copied()
                    .chain(q.iter().map(|&x| x + self.size))
                    .collect()
            })
            .collect();
        GammaSet {
            size: self.size + other.size,
            action,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: Element, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Points fixed by every element of `lambda`, sorted.
    pub fn fixed_points(&self, lambda: &Subgroup) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| lambda.elements().iter().all(|&g| self.action[g][x] == x))
            .collect()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_unsorted(
            (0..self.action.len())
                .filter(|&g| self.action[g][x] == x)
                .collect(),
        )
    }

    /// Orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.action.iter().map(|p| p[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Distinct stabilizers of points, in canonical subgroup order.
    pub fn stabilizer_family(&self) -> Vec<Subgroup> {
        let mut s: Vec<Subgroup> = (0..self.size).map(|x| self.stabilizer(x)).collect();
        s.sort();
        s.dedup();
        s
    }
}

fn is_permutation(p: &[usize], size: usize) -> bool {
    if p.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    p.iter().all(|&x| x < size && !std::mem::replace(&mut seen[x], true))
}

/// The right module `ℤ[−, Δ]_Γ`: at `Γ/Λ` the free group on `Δ^Λ`, and a
/// morphism given by `g` sends a fixed point `x` to `g·x`.
pub fn hom_module(category: &Arc<OrbitCategory>, delta: &GammaSet) -> BredonModule {
    let fixed: Vec<Vec<usize>> = category
        .objects()
        .map(|o| delta.fixed_points(category.subgroup(o)))
        .collect();
    let values = fixed.iter().map(|f| FpAbelianGroup::free(f.len())).collect();
    let actions = category
        .morphisms()
        .iter()
        .map(|m| {
            let (src, tgt) = (&fixed[m.source], &fixed[m.target]);
            let mut a = IntMatrix::zeros(src.len(), tgt.len());
            for (j, &x) in tgt.iter().enumerate() {
                let y = delta.act(m.rep, x);
                let i = src.binary_search(&y).expect("g·x is fixed by the source subgroup");
                a[(i, j)] = 1.into();
            }
            a
        })
        .collect();
    BredonModule::new(category.clone(), Variance::Right, values, actions)
        .expect("permutation actions are well defined")
}
