//! Chain complexes of finitely presented abelian groups and their homology.

use super::abelian::{map_is_well_defined, maps_agree, preimage_lattice};
use super::{AbelianGroupInvariants, AbelianQuotient, FpAbelianGroup, IntMatrix, Lattice, LinalgError};

/// A bounded chain complex `C_{lo} ← C_{lo+1} ← … ← C_{hi}`.
///
/// `boundaries[i]` is the differential from degree `lo + i + 1` to `lo + i`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    terms: Vec<FpAbelianGroup>,
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    pub fn new(
        min_degree: i64,
        terms: Vec<FpAbelianGroup>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, LinalgError> {
        if boundaries.len() + 1 != terms.len().max(1) {
            return Err(LinalgError::Shape(format!(
                "{} terms need {} boundaries, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (i, d) in boundaries.iter().enumerate() {
            if d.rows() != terms[i].generators || d.cols() != terms[i + 1].generators {
                return Err(LinalgError::Shape(format!(
                    "boundary in degree {} is {}x{}, expected {}x{}",
                    min_degree + i as i64 + 1,
                    d.rows(),
                    d.cols(),
                    terms[i].generators,
                    terms[i + 1].generators
                )));
            }
            if !map_is_well_defined(d, &terms[i + 1], &terms[i]) {
                return Err(LinalgError::NotWellDefined {
                    degree: min_degree + i as i64 + 1,
                });
            }
        }
        for i in 1..boundaries.len() {
            let comp = boundaries[i - 1].mul(&boundaries[i]);
            let zero = IntMatrix::zeros(comp.rows(), comp.cols());
            if !maps_agree(&comp, &zero, &terms[i - 1]) {
                return Err(LinalgError::CompositionNonzero {
                    degree: min_degree + i as i64 + 1,
                });
            }
        }
        Ok(ChainComplex {
            min_degree,
            terms,
            boundaries,
        })
    }

    /// Complex of free groups of the given ranks, starting in degree 0.
    pub fn from_boundaries(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, LinalgError> {
        Self::free(0, dims, boundaries)
    }

    pub fn free(min_degree: i64, dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, LinalgError> {
        let terms = dims.into_iter().map(FpAbelianGroup::free).collect();
        Self::new(min_degree, terms, boundaries)
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.terms.len() as i64 - 1
    }

    fn index(&self, k: i64) -> Option<usize> {
        if k < self.min_degree {
            return None;
        }
        let i = (k - self.min_degree) as usize;
        (i < self.terms.len()).then_some(i)
    }

    pub fn term(&self, k: i64) -> Option<&FpAbelianGroup> {
        self.index(k).map(|i| &self.terms[i])
    }

    pub fn rank(&self, k: i64) -> usize {
        self.term(k).map_or(0, |t| t.generators)
    }

    /// Differential `C_k → C_{k-1}` (a zero matrix of the right shape outside the range).
    pub fn boundary(&self, k: i64) -> IntMatrix {
        match (self.index(k), self.index(k - 1)) {
            (Some(i), Some(_)) => self.boundaries[i - 1].clone(),
            _ => IntMatrix::zeros(self.rank(k - 1), self.rank(k)),
        }
    }

    fn relations(&self, k: i64) -> IntMatrix {
        self.term(k)
            .map_or_else(|| IntMatrix::zeros(0, 0), |t| t.relations.clone())
    }

    /// `H_k = ker ∂_k / im ∂_{k+1}`, with canonical generators.
    pub fn homology(&self, k: i64) -> AbelianQuotient {
        let n = self.rank(k);
        if n == 0 {
            return AbelianQuotient::trivial(0);
        }
        let d = self.boundary(k);
        let lattice = if self.rank(k - 1) == 0 {
            let mut l = Lattice::new(n);
            for i in 0..n {
                let mut e = vec![num_bigint::BigInt::from(0); n];
                e[i] = 1.into();
                l.insert(e);
            }
            l
        } else {
            preimage_lattice(&d, &self.relations(k - 1))
        };
        let sub = self.boundary(k + 1).hstack(&self.relations(k));
        AbelianQuotient::new(lattice, &sub)
    }

    pub fn homology_invariants(&self, k: i64) -> AbelianGroupInvariants {
        self.homology(k).invariants().clone()
    }

    /// Checks that `maps[i]` (degree `min_degree + i`) is a chain map into `target`.
    pub fn check_chain_map(&self, target: &ChainComplex, maps: &[IntMatrix]) -> Result<(), LinalgError> {
        if maps.len() != self.terms.len() {
            return Err(LinalgError::Shape(format!(
                "chain map has {} components, complex has {} degrees",
                maps.len(),
                self.terms.len()
            )));
        }
        let comp = |k: i64| -> IntMatrix {
            match self.index(k) {
                Some(i) => maps[i].clone(),
                None => IntMatrix::zeros(target.rank(k), self.rank(k)),
            }
        };
        for (i, f) in maps.iter().enumerate() {
            let k = self.min_degree + i as i64;
            if f.rows() != target.rank(k) || f.cols() != self.rank(k) {
                return Err(LinalgError::Shape(format!(
                    "chain map component in degree {k} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    target.rank(k),
                    self.rank(k)
                )));
            }
            let lhs = comp(k - 1).mul(&self.boundary(k));
            let rhs = target.boundary(k).mul(f);
            let ok = match target.term(k - 1) {
                Some(t) => maps_agree(&lhs, &rhs, t),
                None => true,
            };
            if !ok {
                return Err(LinalgError::NotChainMap { degree: k });
            }
        }
        Ok(())
    }

    /// Matrix of `H_k(f)` on the canonical homology generators.
    pub fn induced_map(&self, target: &ChainComplex, maps: &[IntMatrix], k: i64) -> Result<IntMatrix, LinalgError> {
        self.check_chain_map(target, maps)?;
        Ok(self.induced_map_unchecked(target, maps, k))
    }

    pub(crate) fn induced_map_unchecked(&self, target: &ChainComplex, maps: &[IntMatrix], k: i64) -> IntMatrix {
        let src = self.homology(k);
        let tgt = target.homology(k);
        match self.index(k) {
            Some(i) if src.generator_count() > 0 => src
                .induced_matrix(&tgt, &maps[i])
                .expect("chain maps send cycles to cycles"),
            _ => IntMatrix::zeros(tgt.generator_count(), src.generator_count()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_boundary() -> ChainComplex {
        // vertices 0,1,2; edges 01, 02, 12
        let d1 = IntMatrix::from_rows(&[[-1, -1, 0], [1, 0, -1], [0, 1, 1]]);
        ChainComplex::from_boundaries(vec![3, 3], vec![d1]).unwrap()
    }

    #[test]
    fn circle_homology() {
        let c = triangle_boundary();
        assert_eq!(c.homology_invariants(0), AbelianGroupInvariants::free(1));
        assert_eq!(c.homology_invariants(1), AbelianGroupInvariants::free(1));
        assert!(c.homology_invariants(2).is_trivial());
    }

    #[test]
    fn point_and_two_points() {
        let pt = ChainComplex::from_boundaries(vec![1], vec![]).unwrap();
        assert_eq!(pt.homology_invariants(0), AbelianGroupInvariants::free(1));
        assert!(pt.homology_invariants(1).is_trivial());
        let two = ChainComplex::from_boundaries(vec![2], vec![]).unwrap();
        assert_eq!(two.homology_invariants(0), AbelianGroupInvariants::free(2));
    }

    #[test]
    fn composition_must_vanish() {
        let d1 = IntMatrix::from_rows(&[[1]]);
        let d2 = IntMatrix::from_rows(&[[1]]);
        let err = ChainComplex::from_boundaries(vec![1, 1, 1], vec![d1, d2]).unwrap_err();
        assert!(matches!(err, LinalgError::CompositionNonzero { degree: 2 }));
    }

    #[test]
    fn rp2_like_torsion() {
        // Z <-2- Z : H_0 = Z/2
        let c = ChainComplex::from_boundaries(vec![1, 1], vec![IntMatrix::from_rows(&[[2]])]).unwrap();
        assert_eq!(c.homology_invariants(0).to_string(), "Z/2");
        assert!(c.homology_invariants(1).is_trivial());
    }

    #[test]
    fn identity_and_zero_induced_maps() {
        let c = triangle_boundary();
        let id = vec![IntMatrix::identity(3), IntMatrix::identity(3)];
        assert!(c.induced_map(&c, &id, 1).unwrap().is_identity());
        let zero = vec![IntMatrix::zeros(3, 3), IntMatrix::zeros(3, 3)];
        assert!(c.induced_map(&c, &zero, 1).unwrap().is_zero());
    }

    #[test]
    fn two_points_into_path_reduced() {
        // augmented complexes, degree -1 .. 1
        let aug2 = IntMatrix::from_rows(&[[1, 1]]);
        let aug3 = IntMatrix::from_rows(&[[1, 1, 1]]);
        let two = ChainComplex::free(-1, vec![1, 2], vec![aug2]).unwrap();
        // path a - m - b with vertices ordered a, b, m and edges am, bm
        let d1 = IntMatrix::from_rows(&[[-1, 0], [0, -1], [1, 1]]);
        let path = ChainComplex::free(-1, vec![1, 3, 2], vec![aug3, d1]).unwrap();
        let incl = vec![
            IntMatrix::identity(1),
            IntMatrix::from_rows(&[[1, 0], [0, 1], [0, 0]]),
        ];
        assert_eq!(two.homology_invariants(0), AbelianGroupInvariants::free(1));
        let m = two.induced_map(&path, &incl, 0).unwrap();
        assert_eq!(m.shape(), (0, 1));
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = triangle_boundary();
        let bad = vec![IntMatrix::identity(3), IntMatrix::zeros(3, 3)];
        assert!(matches!(
            c.check_chain_map(&c, &bad),
            Err(LinalgError::NotChainMap { degree: 1 })
        ));
    }
}
