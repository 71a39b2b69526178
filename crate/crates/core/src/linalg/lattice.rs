//! Sublattices of ℤⁿ held in incremental echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// A sublattice of ℤⁿ kept as an echelon basis: row `k` has its leading
/// nonzero entry (positive) in column `pivots[k]`, strictly increasing in `k`.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_columns(m: &IntMatrix) -> Self {
        let mut l = Lattice::new(m.rows());
        for j in 0..m.cols() {
            l.insert(m.column(j));
        }
        l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.rows.iter().zip(&self.pivots).all(|(r, &p)| r[p] == BigInt::from(1))
    }

    /// Basis vectors as the columns of a `dim × rank` matrix.
    pub fn basis(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rows)
    }

    fn leading(v: &[BigInt]) -> Option<usize> {
        v.iter().position(|x| !x.is_zero())
    }

    /// Adds a vector to the generating set.
    pub fn insert(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "vector of wrong length for lattice");
        loop {
            let Some(lc) = Self::leading(&v) else { return };
            match self.pivots.binary_search(&lc) {
                Err(pos) => {
                    if v[lc].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.reduce_above(&mut v, pos);
                    self.rows.insert(pos, v);
                    self.pivots.insert(pos, lc);
                    return;
                }
                Ok(k) => {
                    let a = self.rows[k][lc].clone();
                    let b = v[lc].clone();
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        sub_multiple(&mut v, &self.rows[k], &q);
                        continue;
                    }
                    let eg = a.extended_gcd(&b);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let row = &self.rows[k];
                    let new_row: Vec<BigInt> = row
                        .iter()
                        .zip(&v)
                        .map(|(r, x)| &s * r + &t * x)
                        .collect();
                    let (ag, bg) = (&a / &g, &b / &g);
                    let new_v: Vec<BigInt> = row
                        .iter()
                        .zip(&v)
                        .map(|(r, x)| &ag * x - &bg * r)
                        .collect();
                    let mut new_row = new_row;
                    if new_row[lc].is_negative() {
                        new_row.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.reduce_above(&mut new_row, k);
                    self.rows[k] = new_row;
                    v = new_v;
                }
            }
        }
    }

    // Keeps entries small: reduce `v` by the rows after position `from`.
    fn reduce_above(&self, v: &mut [BigInt], from: usize) {
        for k in from..self.rows.len() {
            let p = self.pivots[k];
            if v[p].is_zero() {
                continue;
            }
            let q = v[p].div_floor(&self.rows[k][p]);
            if !q.is_zero() {
                sub_multiple(v, &self.rows[k], &q);
            }
        }
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v ∉ L`.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        let mut c = vec![BigInt::zero(); self.rows.len()];
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(lc) = Self::leading(&w) {
                if lc < p {
                    return None;
                }
            } else {
                break;
            }
            if w[p].is_zero() {
                continue;
            }
            let (q, r) = w[p].div_rem(&self.rows[k][p]);
            if !r.is_zero() {
                return None;
            }
            sub_multiple(&mut w, &self.rows[k], &q);
            c[k] = q;
        }
        if w.iter().all(Zero::is_zero) {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_columns(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|j| self.contains(&m.column(j)))
    }
}

fn sub_multiple(v: &mut [BigInt], row: &[BigInt], q: &BigInt) {
    for (x, r) in v.iter_mut().zip(row) {
        if !r.is_zero() {
            *x -= q * r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn membership_in_index_two_sublattice() {
        let mut l = Lattice::new(2);
        l.insert(v(&[2, 0]));
        l.insert(v(&[1, 1]));
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&v(&[0, 2])));
        assert!(!l.contains(&v(&[1, 0])));
        assert!(l.contains(&v(&[3, 1])));
    }

    #[test]
    fn gcd_merges_pivots() {
        let mut l = Lattice::new(1);
        l.insert(v(&[6]));
        l.insert(v(&[10]));
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&v(&[2])));
        assert!(!l.contains(&v(&[1])));
        assert!(!l.is_full());
        l.insert(v(&[3]));
        assert!(l.is_full());
    }

    #[test]
    fn coordinates_reconstruct_vector() {
        let mut l = Lattice::new(3);
        l.insert(v(&[1, 2, 3]));
        l.insert(v(&[0, 4, 5]));
        let target = v(&[2, 8, 11]);
        let c = l.coords(&target).unwrap();
        let back = l.basis().mul_vec(&c);
        assert_eq!(back, target);
    }
}
