//! Finite groups given by Cayley tables, their subgroups, and
//! conjugation-closed families of subgroups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a group element in its Cayley table.
pub type Element = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("Cayley table is not square (row {row} has {len} entries, order {order})")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("empty Cayley table")]
    Empty,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Element, b: Element, c: Element },
    #[error("no identity element")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: Element },
    #[error("{0} labels given for a group of order {1}")]
    LabelCount(usize, usize),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("element index {0} out of range")]
    BadElement(Element),
    #[error("elements {0:?} do not form a subgroup")]
    NotSubgroup(Vec<Element>),
    #[error("family is empty")]
    EmptySeed,
    #[error("family is not closed under conjugation: {member:?} conjugated by {element} leaves it")]
    NotConjugationClosed { member: Vec<Element>, element: Element },
    #[error("subgroup {0:?} is not contained in the ambient subgroup")]
    NotInAmbient(Vec<Element>),
}

/// A finite group by its multiplication table: `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<Element>>,
    identity: Element,
    inverses: Vec<Element>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table.
    ///
    /// Checks run in the order associativity, left identity, left inverses;
    /// together these are equivalent to the group axioms.
    pub fn from_table(table: Vec<Vec<Element>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare {
                    row: r,
                    len: row.len(),
                    order: n,
                });
            }
            if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::EntryOutOfRange { row: r, col: c, value: v });
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(GroupError::LabelCount(l.len(), n));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[y][x] == identity)
                .ok_or(GroupError::NoInverse { element: x })?;
            inverses.push(y);
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
            labels,
        })
    }

    /// The permutation group generated by `generators` (images of `0..degree`).
    ///
    /// Elements are numbered in breadth-first order from the identity, so the
    /// identity is element 0 and distinct non-identity generators come next in
    /// the order given. Also returns the permutation of each element.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<(Self, Vec<Vec<usize>>), GroupError> {
        for g in generators {
            check_permutation(g, degree)?;
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose_perm(g, &elements[x]);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| index[&compose_perm(&elements[a], &elements[b])])
                    .collect()
            })
            .collect();
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        let group = FiniteGroup::from_table(table, Some(labels))?;
        Ok((group, elements))
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]], Some(vec!["e".into()])).expect("trivial group")
    }

    /// ℤ/n with element `k` standing for `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table, None).expect("cyclic group")
    }

    /// Symmetric group on `degree` points generated by a transposition and a long cycle.
    pub fn symmetric(degree: usize) -> (Self, Vec<Vec<usize>>) {
        if degree < 2 {
            return Self::from_permutations(degree.max(1), &[]).expect("trivial");
        }
        let mut t: Vec<usize> = (0..degree).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..degree).map(|i| (i + 1) % degree).collect();
        Self::from_permutations(degree, &[t, c]).expect("symmetric group")
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(table, None).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverses[a]
    }

    pub fn inverses(&self) -> &[Element] {
        &self.inverses
    }

    pub fn table(&self) -> &[Vec<Element>] {
        &self.table
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: Element) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.order()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    /// Smallest subgroup containing `gens`.
    pub fn subgroup_generated(&self, gens: &[Element]) -> Subgroup {
        let mut set = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<Element> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }

    /// Checks that `elements` is a subgroup.
    pub fn subgroup(&self, elements: &[Element]) -> Result<Subgroup, GroupError> {
        if let Some(&bad) = elements.iter().find(|&&x| x >= self.order()) {
            return Err(GroupError::BadElement(bad));
        }
        let h = Subgroup::from_unsorted(elements.to_vec());
        let closed = h.contains(self.identity)
            && h.elements
                .iter()
                .all(|&a| h.contains(self.inv(a)) && h.elements.iter().all(|&b| h.contains(self.mul(a, b))));
        if closed {
            Ok(h)
        } else {
            Err(GroupError::NotSubgroup(h.elements))
        }
    }

    /// `g H g⁻¹`
    pub fn conjugate(&self, h: &Subgroup, g: Element) -> Subgroup {
        Subgroup::from_unsorted(h.elements.iter().map(|&x| self.conj(g, x)).collect())
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| self.conjugate(h, g) == *h)
    }

    pub fn intersection(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        Subgroup {
            elements: h.elements.iter().copied().filter(|&x| k.contains(x)).collect(),
        }
    }

    /// First `g` of `within` (in element order) with `g H g⁻¹ ⊆ K`.
    pub fn subconjugacy_witness(&self, h: &Subgroup, k: &Subgroup, within: &Subgroup) -> Option<Element> {
        if !k.order().is_multiple_of(h.order()) {
            return None;
        }
        within
            .elements
            .iter()
            .copied()
            .find(|&g| h.elements.iter().all(|&x| k.contains(self.conj(g, x))))
    }

    /// First `g ∈ Γ` with `g H g⁻¹ ⊆ K`.
    pub fn is_subconjugate(&self, h: &Subgroup, k: &Subgroup) -> Option<Element> {
        self.subconjugacy_witness(h, k, &self.whole())
    }

    /// Smallest element of the left coset `g H`.
    pub fn coset_rep(&self, g: Element, h: &Subgroup) -> Element {
        h.elements
            .iter()
            .map(|&x| self.mul(g, x))
            .min()
            .expect("subgroups are non-empty")
    }

    /// Every subgroup, in canonical order.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let cyclic: BTreeSet<Subgroup> = self.elements().map(|g| self.subgroup_generated(&[g])).collect();
        let mut all = cyclic.clone();
        let mut frontier: Vec<Subgroup> = cyclic.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.elements.iter().all(|&x| h.contains(x)) {
                        continue;
                    }
                    let mut gens = h.elements.clone();
                    gens.extend(&c.elements);
                    let j = self.subgroup_generated(&gens);
                    if all.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().collect()
    }
}

fn check_permutation(p: &[usize], degree: usize) -> Result<(), GroupError> {
    if p.len() != degree {
        return Err(GroupError::BadPermutation(format!(
            "{p:?} has length {}, degree is {degree}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return Err(GroupError::BadPermutation(format!("{p:?} is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// `(a ∘ b)(i) = a(b(i))`
pub fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// Cycle notation on points `1..=n`, e.g. `(1,2)(3,4)`; the identity is `()`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// A subgroup as its sorted list of element indices.
///
/// Subgroups are ordered canonically by order first, then lexicographically
/// by their element lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<Element>,
}

impl Subgroup {
    pub(crate) fn from_unsorted(mut elements: Vec<Element>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn display(&self, group: &FiniteGroup) -> String {
        let names: Vec<String> = self.elements.iter().map(|&g| group.label(g)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements)
    }
}

/// A non-empty set of subgroups of `ambient`, closed under conjugation by
/// elements of `ambient`. Members are sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    ambient: Subgroup,
    members: Vec<Subgroup>,
}

impl Family {
    /// Smallest conjugation-closed family of subgroups of the whole group
    /// containing the seeds.
    pub fn close(group: &FiniteGroup, seeds: &[Subgroup]) -> Result<Self, GroupError> {
        Self::close_within(group, &group.whole(), seeds)
    }

    /// Conjugation closure with respect to the elements of `ambient`.
    pub fn close_within(group: &FiniteGroup, ambient: &Subgroup, seeds: &[Subgroup]) -> Result<Self, GroupError> {
        if seeds.is_empty() {
            return Err(GroupError::EmptySeed);
        }
        let mut set = BTreeSet::new();
        for s in seeds {
            if !s.is_subgroup_of(ambient) {
                return Err(GroupError::NotInAmbient(s.elements.clone()));
            }
            for &g in &ambient.elements {
                set.insert(group.conjugate(s, g));
            }
        }
        Ok(Family {
            ambient: ambient.clone(),
            members: set.into_iter().collect(),
        })
    }

    /// Uses `members` as given, rejecting sets that are not conjugation-closed.
    pub fn from_members(group: &FiniteGroup, ambient: &Subgroup, members: &[Subgroup]) -> Result<Self, GroupError> {
        if members.is_empty() {
            return Err(GroupError::EmptySeed);
        }
        let set: BTreeSet<Subgroup> = members.iter().cloned().collect();
        for m in &set {
            if !m.is_subgroup_of(ambient) {
                return Err(GroupError::NotInAmbient(m.elements.clone()));
            }
            for &g in &ambient.elements {
                if !set.contains(&group.conjugate(m, g)) {
                    return Err(GroupError::NotConjugationClosed {
                        member: m.elements.clone(),
                        element: g,
                    });
                }
            }
        }
        Ok(Family {
            ambient: ambient.clone(),
            members: set.into_iter().collect(),
        })
    }

    /// All subgroups of the whole group.
    pub fn all_subgroups(group: &FiniteGroup) -> Self {
        Family {
            ambient: group.whole(),
            members: group.all_subgroups(),
        }
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, h: &Subgroup) -> bool {
        self.members.binary_search(h).is_ok()
    }

    pub fn position(&self, h: &Subgroup) -> Option<usize> {
        self.members.binary_search(h).ok()
    }

    /// Whether every member is subconjugate (within the ambient group) to a
    /// member of `cover`.
    pub fn is_covered_by(&self, group: &FiniteGroup, cover: &[Subgroup]) -> bool {
        self.members.iter().all(|h| {
            cover
                .iter()
                .any(|k| group.subconjugacy_witness(h, k, &self.ambient).is_some())
        })
    }

    /// A smallest subset `𝔉₀` such that every member is subconjugate to an
    /// element of `𝔉₀`, found by exhaustive search; among subsets of minimal
    /// size the lexicographically first (in canonical member order) wins.
    pub fn fp0_witness(&self, group: &FiniteGroup) -> Vec<Subgroup> {
        let n = self.members.len();
        // Subconjugacy between members, computed once.
        let below: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        group
                            .subconjugacy_witness(&self.members[i], &self.members[j], &self.ambient)
                            .is_some()
                    })
                    .collect()
            })
            .collect();
        for size in 1..=n {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if (0..n).all(|i| combo.iter().any(|&j| below[i][j])) {
                    return combo.iter().map(|&j| self.members[j].clone()).collect();
                }
                if !next_combination(&mut combo, n) {
                    break;
                }
            }
        }
        unreachable!("the whole family always covers itself")
    }

    /// `{Ξ ∩ Λ : Ξ ∈ 𝔉}` as a family over `Λ`, and whether it lies inside `𝔉`.
    pub fn intersect(&self, group: &FiniteGroup, lambda: &Subgroup) -> (Family, bool) {
        let set: BTreeSet<Subgroup> = self
            .members
            .iter()
            .map(|x| group.intersection(x, lambda))
            .collect();
        let members: Vec<Subgroup> = set.into_iter().collect();
        let contained = members.iter().all(|m| self.contains(m));
        (
            Family {
                ambient: lambda.clone(),
                members,
            },
            contained,
        )
    }
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn s3() -> FiniteGroup {
        // generators (1,2) and (1,2,3)
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap().0
    }

    fn by_label(g: &FiniteGroup, l: &str) -> Element {
        g.elements().find(|&x| g.label(x) == l).unwrap()
    }

    #[test]
    fn c2_table_is_valid() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(g.inverses(), &[0, 1]);
    }

    #[test]
    fn s3_from_composition_oracle() {
        // oracle: compose permutations directly and compare with the table
        let (g, perms) = FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(perms[g.mul(a, b)], compose_perm(&perms[a], &perms[b]));
            }
        }
        assert_eq!(g.identity(), 0);
        assert_eq!(g.label(1), "(1,2)");
    }

    #[test]
    fn table_without_inverse() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]], None).unwrap_err();
        assert_eq!(err, GroupError::NoInverse { element: 1 });
    }

    #[test]
    fn non_associative_table() {
        // a Latin square that is not a group
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]];
        assert!(matches!(
            FiniteGroup::from_table(t, None),
            Err(GroupError::NotAssociative { .. })
        ));
    }

    #[test]
    fn generated_subgroups() {
        let g = s3();
        let t12 = by_label(&g, "(1,2)");
        assert_eq!(g.subgroup_generated(&[t12]).order(), 2);
        assert_eq!(g.subgroup_generated(&[]), g.trivial_subgroup());
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(c2.subgroup_generated(&[1]), c2.whole());
    }

    #[test]
    fn conjugating_reflections() {
        let g = s3();
        let h12 = g.subgroup_generated(&[by_label(&g, "(1,2)")]);
        let h23 = g.subgroup_generated(&[by_label(&g, "(2,3)")]);
        assert_eq!(g.conjugate(&h12, by_label(&g, "(1,3)")), h23);
        assert_eq!(g.conjugate(&h12, g.identity()), h12);
        let a3 = g.subgroup_generated(&[by_label(&g, "(1,2,3)")]);
        assert!(g.is_normal(&a3));
        assert_eq!(g.conjugate(&a3, 1), a3);
    }

    #[test]
    fn closing_families() {
        let g = s3();
        let h12 = g.subgroup_generated(&[by_label(&g, "(1,2)")]);
        let f = Family::close(&g, &[h12]).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.members().iter().all(|m| m.order() == 2));
        assert_eq!(Family::close(&g, &[g.trivial_subgroup()]).unwrap().len(), 1);
        assert_eq!(Family::close(&g, &[g.whole()]).unwrap().members(), &[g.whole()]);
        assert_eq!(Family::close(&g, &[]), Err(GroupError::EmptySeed));
    }

    #[test]
    fn subconjugacy_examples() {
        let g = s3();
        let h12 = g.subgroup_generated(&[by_label(&g, "(1,2)")]);
        let h13 = g.subgroup_generated(&[by_label(&g, "(1,3)")]);
        let a3 = g.subgroup_generated(&[by_label(&g, "(1,2,3)")]);
        // brute force oracle over all six elements
        let brute = g
            .elements()
            .find(|&x| g.conjugate(&h13, x).is_subgroup_of(&h12));
        assert_eq!(g.is_subconjugate(&h13, &h12), brute);
        assert!(brute.is_some());
        assert_eq!(g.is_subconjugate(&g.trivial_subgroup(), &h12), Some(g.identity()));
        assert_eq!(g.is_subconjugate(&a3, &h12), None);
    }

    #[test]
    fn fp0_examples() {
        let g = s3();
        let h12 = g.subgroup_generated(&[by_label(&g, "(1,2)")]);
        let f = Family::close(&g, &[g.trivial_subgroup(), h12.clone()]).unwrap();
        let w = f.fp0_witness(&g);
        assert_eq!(w, vec![h12]);
        let one = Family::close(&g, &[g.trivial_subgroup()]).unwrap();
        assert_eq!(one.fp0_witness(&g), vec![g.trivial_subgroup()]);
        let c2 = FiniteGroup::cyclic(2);
        let f = Family::close(&c2, &[c2.trivial_subgroup(), c2.whole()]).unwrap();
        assert_eq!(f.fp0_witness(&c2), vec![c2.whole()]);
    }

    #[test]
    fn intersecting_families() {
        let g = s3();
        let h12 = g.subgroup_generated(&[by_label(&g, "(1,2)")]);
        let refl = Family::close(&g, std::slice::from_ref(&h12)).unwrap();
        let (fi, contained) = refl.intersect(&g, &h12);
        assert_eq!(fi.members(), &[g.trivial_subgroup(), h12.clone()]);
        assert!(!contained);
        let with_one = Family::close(&g, &[h12.clone(), g.trivial_subgroup()]).unwrap();
        assert!(with_one.intersect(&g, &h12).1);
        let (whole, c) = with_one.intersect(&g, &g.whole());
        assert!(c);
        assert_eq!(whole.members(), with_one.members());
    }

    #[test]
    fn subgroup_lattice_of_s3() {
        assert_eq!(s3().all_subgroups().len(), 6);
        let (s4, _) = FiniteGroup::symmetric(4);
        assert_eq!(s4.all_subgroups().len(), 30);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
    }
}
