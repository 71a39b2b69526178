//! Finitely generated abelian groups: canonical invariants, finite
//! presentations, and quotients of lattices with canonical generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::normal_form::{kernel_basis, smith_normal_form_with, SmithTransforms};
use super::{IntMatrix, Lattice};

/// Free rank plus invariant factors `d₁ | d₂ | …`, each `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds invariants from arbitrary cyclic orders (0 meaning ℤ), normalising
    /// them into the divisibility chain.
    pub fn from_cyclic_orders(orders: &[i64]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        let m = IntMatrix::diagonal(orders.len(), orders.len(), &diag);
        cokernel_invariants(&m)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, re-normalised.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut diag: Vec<BigInt> = self.torsion.clone();
        diag.extend(other.torsion.iter().cloned());
        let n = diag.len();
        let tors = cokernel_invariants(&IntMatrix::diagonal(n, n, &diag));
        AbelianGroupInvariants {
            free_rank: self.free_rank + other.free_rank,
            torsion: tors.torsion,
        }
    }

    /// `k`-fold direct sum.
    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::trivial(), |acc, _| acc.direct_sum(self))
    }

    /// Minimal number of generators.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

mod torsion_serde {
    use num_bigint::BigInt;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(t: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(t.len()))?;
        for d in t {
            match u64::try_from(d) {
                Ok(x) => seq.serialize_element(&x)?,
                Err(_) => seq.serialize_element(&d.to_string())?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let vals = Vec::<Value>::deserialize(d)?;
        vals.into_iter()
            .map(|v| match v {
                Value::Number(n) => n
                    .to_string()
                    .parse::<BigInt>()
                    .map_err(D::Error::custom),
                Value::String(s) => s.parse::<BigInt>().map_err(D::Error::custom),
                other => Err(D::Error::custom(format!("bad torsion entry {other}"))),
            })
            .collect()
    }
}

/// Canonical invariants of `ℤ^rows / colspan(a)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianGroupInvariants {
    let s = smith_normal_form_with(a, SmithTransforms::NONE);
    let torsion = s.diagonal[..s.rank]
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    AbelianGroupInvariants {
        free_rank: a.rows() - s.rank,
        torsion,
    }
}

/// `ℤ^generators / colspan(relations)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpAbelianGroup {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl FpAbelianGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            generators,
            "relation matrix needs one row per generator"
        );
        FpAbelianGroup {
            generators,
            relations,
        }
    }

    pub fn free(rank: usize) -> Self {
        FpAbelianGroup {
            generators: rank,
            relations: IntMatrix::zeros(rank, 0),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// ℤ/d on one generator (`d = 0` gives ℤ).
    pub fn cyclic(d: i64) -> Self {
        if d == 0 {
            return Self::free(1);
        }
        FpAbelianGroup::new(1, IntMatrix::from_rows(&[[d]]))
    }

    pub fn has_relations(&self) -> bool {
        self.relations.cols() > 0 && !self.relations.is_zero()
    }

    pub fn invariants(&self) -> AbelianGroupInvariants {
        cokernel_invariants(&self.relations)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators == 0 || self.relation_lattice().is_full()
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_columns(&self.relations)
    }

    pub fn direct_sum(&self, other: &FpAbelianGroup) -> FpAbelianGroup {
        FpAbelianGroup::new(
            self.generators + other.generators,
            IntMatrix::block_diagonal(&[self.relations.clone(), other.relations.clone()]),
        )
    }

    pub fn direct_sum_all(parts: &[FpAbelianGroup]) -> FpAbelianGroup {
        parts
            .iter()
            .fold(FpAbelianGroup::zero(), |acc, g| acc.direct_sum(g))
    }

    /// Tensor product of presentations; generator `(i, j)` sits at `i * other.generators + j`.
    pub fn tensor(&self, other: &FpAbelianGroup) -> FpAbelianGroup {
        let left = self.relations.kron(&IntMatrix::identity(other.generators));
        let right = IntMatrix::identity(self.generators).kron(&other.relations);
        FpAbelianGroup::new(self.generators * other.generators, left.hstack(&right))
    }

    /// Drops zero relation columns and duplicates.
    pub fn pruned(&self) -> FpAbelianGroup {
        let mut keep = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for j in 0..self.relations.cols() {
            let c = self.relations.column(j);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            if seen.insert(c) {
                keep.push(j);
            }
        }
        FpAbelianGroup::new(self.generators, self.relations.select_columns(&keep))
    }
}

/// Checks that `f` (matrix on generators) sends relations of `source` into
/// the relation span of `target`.
pub fn map_is_well_defined(f: &IntMatrix, source: &FpAbelianGroup, target: &FpAbelianGroup) -> bool {
    if !source.has_relations() {
        return true;
    }
    target
        .relation_lattice()
        .contains_columns(&f.mul(&source.relations))
}

/// Whether the induced homomorphism of `f` into `target` is zero.
pub fn map_is_zero(f: &IntMatrix, target: &FpAbelianGroup) -> bool {
    if f.is_zero() {
        return true;
    }
    if !target.has_relations() {
        return false;
    }
    target.relation_lattice().contains_columns(f)
}

/// Whether `f` and `g` induce the same homomorphism into `target`.
pub fn maps_agree(f: &IntMatrix, g: &IntMatrix, target: &FpAbelianGroup) -> bool {
    map_is_zero(&f.sub(g), target)
}

/// `{x ∈ ℤ^{cols f} : f·x ∈ colspan(rel)}` as a lattice.
pub fn preimage_lattice(f: &IntMatrix, rel: &IntMatrix) -> Lattice {
    let n = f.cols();
    let k = if rel.cols() == 0 || rel.is_zero() {
        kernel_basis(f)
    } else {
        let joint = kernel_basis(&f.hstack(rel));
        joint.block(0, 0, n, joint.cols())
    };
    Lattice::from_columns(&k)
}

/// Kernel of the induced map `source → target` as a presented group together
/// with the inclusion matrix (columns = kernel generators in source coordinates).
pub fn fp_kernel(
    f: &IntMatrix,
    source: &FpAbelianGroup,
    target: &FpAbelianGroup,
) -> (FpAbelianGroup, IntMatrix) {
    let lattice = preimage_lattice(f, &target.relations);
    let basis = lattice.basis();
    let rel_cols: Vec<Vec<BigInt>> = (0..source.relations.cols())
        .map(|j| {
            lattice
                .coords(&source.relations.column(j))
                .expect("source relations lie in the kernel of a well-defined map")
        })
        .collect();
    let rels = IntMatrix::from_columns(lattice.rank(), &rel_cols);
    (FpAbelianGroup::new(lattice.rank(), rels).pruned(), basis)
}

/// Cokernel of the induced map, presented on the target generators.
pub fn fp_cokernel(f: &IntMatrix, target: &FpAbelianGroup) -> FpAbelianGroup {
    FpAbelianGroup::new(target.generators, target.relations.hstack(f)).pruned()
}

pub fn map_is_surjective(f: &IntMatrix, target: &FpAbelianGroup) -> bool {
    Lattice::from_columns(&target.relations.hstack(f)).is_full()
}

pub fn map_is_injective(f: &IntMatrix, source: &FpAbelianGroup, target: &FpAbelianGroup) -> bool {
    fp_kernel(f, source, target).0.is_trivial()
}

pub fn map_is_isomorphism(f: &IntMatrix, source: &FpAbelianGroup, target: &FpAbelianGroup) -> bool {
    map_is_surjective(f, target) && map_is_injective(f, source, target)
}

/// The sublattice `L ⊆ ℤⁿ` from which a quotient is taken.
#[derive(Clone, Debug)]
enum Ambient {
    Full(usize),
    Sub(Lattice),
}

impl Ambient {
    fn rank(&self) -> usize {
        match self {
            Ambient::Full(n) => *n,
            Ambient::Sub(l) => l.rank(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Ambient::Full(n) => *n,
            Ambient::Sub(l) => l.dim(),
        }
    }

    fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        match self {
            Ambient::Full(_) => Some(v.to_vec()),
            Ambient::Sub(l) => l.coords(v),
        }
    }

    fn basis(&self) -> IntMatrix {
        match self {
            Ambient::Full(n) => IntMatrix::identity(*n),
            Ambient::Sub(l) => l.basis(),
        }
    }
}

/// A quotient `L / S` of a lattice `L ⊆ ℤⁿ` by a sublattice `S ⊆ L`, with the
/// canonical generators induced by the Smith form of `S` in the basis of `L`.
///
/// Generator `i` is free when its order is zero and cyclic of order `dᵢ ≥ 2`
/// otherwise; coordinates of torsion generators are reduced into `[0, dᵢ)`.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    ambient: Ambient,
    /// `u` of the Smith form restricted to the surviving rows.
    projection: IntMatrix,
    orders: Vec<BigInt>,
    generators: IntMatrix,
    invariants: AbelianGroupInvariants,
}

impl AbelianQuotient {
    /// `ℤⁿ / colspan(relations)`.
    pub fn of_relations(n: usize, relations: &IntMatrix) -> Self {
        Self::build(Ambient::Full(n), relations)
    }

    /// `L / colspan(sub)`; panics if a column of `sub` is not in `L`.
    pub fn new(lattice: Lattice, sub: &IntMatrix) -> Self {
        Self::build(Ambient::Sub(lattice), sub)
    }

    pub fn trivial(n: usize) -> Self {
        Self::build(Ambient::Sub(Lattice::new(n)), &IntMatrix::zeros(n, 0))
    }

    fn build(ambient: Ambient, sub: &IntMatrix) -> Self {
        let l = ambient.rank();
        let mut reduced = Lattice::new(l);
        for j in 0..sub.cols() {
            let c = ambient
                .coords(&sub.column(j))
                .expect("subgroup generator outside the ambient lattice");
            reduced.insert(c);
        }
        let y = reduced.basis();
        let smith = smith_normal_form_with(&y, SmithTransforms::LEFT);
        let mut diag = vec![BigInt::zero(); l];
        diag[..smith.rank].clone_from_slice(&smith.diagonal[..smith.rank]);
        let first = diag.iter().take_while(|d| d.is_one()).count();
        let keep: Vec<usize> = (first..l).collect();
        let u = smith.u.as_ref().expect("left transform");
        let u_inv = smith.u_inv.as_ref().expect("left transform");
        let projection = u.select_rows(&keep);
        let generators = ambient.basis().mul(&u_inv.select_columns(&keep));
        let orders: Vec<BigInt> = diag[first..].to_vec();
        let invariants = AbelianGroupInvariants {
            free_rank: orders.iter().filter(|d| d.is_zero()).count(),
            torsion: orders.iter().filter(|d| !d.is_zero()).cloned().collect(),
        };
        AbelianQuotient {
            ambient,
            projection,
            orders,
            generators,
            invariants,
        }
    }

    pub fn invariants(&self) -> &AbelianGroupInvariants {
        &self.invariants
    }

    /// Dimension `n` of the ambient ℤⁿ.
    pub fn ambient_dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    /// Order of each canonical generator (0 for infinite order).
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    /// Canonical generators as columns in ambient coordinates.
    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Coordinates of an element of `L` on the canonical generators, or `None`
    /// when the vector does not lie in `L`.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.ambient.coords(v)?;
        let mut out = self.projection.mul_vec(&c);
        for (x, d) in out.iter_mut().zip(&self.orders) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        Some(out)
    }

    /// Matrix whose columns are the coordinates of the columns of `m`.
    pub fn coords_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols = (0..m.cols())
            .map(|j| self.coords(&m.column(j)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_columns(self.generator_count(), &cols))
    }

    /// The quotient as a presented group on its canonical generators.
    pub fn presentation(&self) -> FpAbelianGroup {
        let g = self.generator_count();
        let cols: Vec<Vec<BigInt>> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut c = vec![BigInt::zero(); g];
                c[i] = d.clone();
                c
            })
            .collect();
        FpAbelianGroup::new(g, IntMatrix::from_columns(g, &cols))
    }

    /// Matrix of the homomorphism `self → target` induced by an ambient linear
    /// map `f` (which must send `L` into the target lattice).
    pub fn induced_matrix(&self, target: &AbelianQuotient, f: &IntMatrix) -> Option<IntMatrix> {
        target.coords_matrix(&f.mul(&self.generators))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        let inv = cokernel_invariants(&IntMatrix::from_rows(&[[2, 0], [0, 0]]));
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![BigInt::from(2)]);
        let inv = cokernel_invariants(&IntMatrix::zeros(2, 0));
        assert_eq!(inv, AbelianGroupInvariants::free(2));
        assert!(cokernel_invariants(&IntMatrix::identity(2)).is_trivial());
    }

    #[test]
    fn invariants_display() {
        let inv = AbelianGroupInvariants::from_cyclic_orders(&[0, 2, 3, 0]);
        assert_eq!(inv.to_string(), "Z^2 + Z/6");
        assert_eq!(AbelianGroupInvariants::trivial().to_string(), "0");
    }

    #[test]
    fn quotient_coordinates_respect_torsion() {
        // Z^2 / <(2, 0)> = Z/2 + Z
        let q = AbelianQuotient::of_relations(2, &IntMatrix::from_rows(&[[2], [0]]));
        assert_eq!(q.invariants().to_string(), "Z + Z/2");
        let c = q.coords(&[BigInt::from(3), BigInt::from(5)]).unwrap();
        let c2 = q.coords(&[BigInt::from(1), BigInt::from(5)]).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn kernel_and_cokernel_of_doubling() {
        let z = FpAbelianGroup::free(1);
        let two = IntMatrix::from_rows(&[[2]]);
        let (k, _) = fp_kernel(&two, &z, &z);
        assert!(k.is_trivial());
        assert_eq!(fp_cokernel(&two, &z).invariants().to_string(), "Z/2");
        assert!(map_is_injective(&two, &z, &z));
        assert!(!map_is_surjective(&two, &z));
        // doubling on Z/2 is zero
        let z2 = FpAbelianGroup::cyclic(2);
        assert!(map_is_zero(&two, &z2));
    }
}
