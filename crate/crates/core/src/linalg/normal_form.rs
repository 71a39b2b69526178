//! Hermite and Smith normal forms, kernels and integer linear solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form: `u · a = h` with `u` unimodular.
///
/// `h` is in row echelon form, every pivot is positive, and entries above a
/// pivot `p` lie in `[0, p)`. Zero rows sit at the bottom.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let m = a.rows();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero magnitude in column c at or below row r
            let mut best: Option<usize> = None;
            for i in r..m {
                let x = &h[(i, c)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(b, c)].abs() <= x.abs() => {}
                    _ => best = Some(i),
                }
            }
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = &h[(i, c)] / &h[(r, c)];
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            if h[(i, c)].is_zero() {
                continue;
            }
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            let nq = -q;
            h.add_row_multiple(i, r, &nq);
            u.add_row_multiple(i, r, &nq);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, pivots }
}

/// Which unimodular transforms a Smith normal form computation should record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmithTransforms {
    pub left: bool,
    pub right: bool,
}

impl SmithTransforms {
    pub const ALL: SmithTransforms = SmithTransforms {
        left: true,
        right: true,
    };
    pub const LEFT: SmithTransforms = SmithTransforms {
        left: true,
        right: false,
    };
    pub const NONE: SmithTransforms = SmithTransforms {
        left: false,
        right: false,
    };
}

/// `u · a · v = d` with `d` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
///
/// `u_inv` and `v_inv` are the exact inverses, maintained alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries `d_0 … d_{min(rows, cols) - 1}`; zeros trail.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl SmithForm {
    pub fn d(&self) -> IntMatrix {
        IntMatrix::diagonal(self.rows, self.cols, &self.diagonal)
    }

    pub fn u(&self) -> &IntMatrix {
        self.u.as_ref().expect("left transform not recorded")
    }

    pub fn u_inv(&self) -> &IntMatrix {
        self.u_inv.as_ref().expect("left transform not recorded")
    }

    pub fn v(&self) -> &IntMatrix {
        self.v.as_ref().expect("right transform not recorded")
    }

    pub fn v_inv(&self) -> &IntMatrix {
        self.v_inv.as_ref().expect("right transform not recorded")
    }
}

struct SmithState {
    a: IntMatrix,
    u: Option<(IntMatrix, IntMatrix)>,
    v: Option<(IntMatrix, IntMatrix)>,
}

impl SmithState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_rows(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap_rows(i, j);
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap_cols(i, j);
        if let Some((v, vi)) = &mut self.v {
            v.swap_cols(i, j);
            vi.swap_rows(i, j);
        }
    }

    /// row[dst] += c row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row_multiple(dst, src, c);
        if let Some((u, ui)) = &mut self.u {
            u.add_row_multiple(dst, src, c);
            ui.add_col_multiple(src, dst, &-c);
        }
    }

    /// col[dst] += c col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col_multiple(dst, src, c);
        if let Some((v, vi)) = &mut self.v {
            v.add_col_multiple(dst, src, c);
            vi.add_row_multiple(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some((u, ui)) = &mut self.u {
            u.negate_row(i);
            ui.negate_col(i);
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    smith_normal_form_with(a, SmithTransforms::ALL)
}

/// Smith normal form with the smallest-magnitude pivot rule (ties broken by
/// row, then column index).
pub fn smith_normal_form_with(a: &IntMatrix, transforms: SmithTransforms) -> SmithForm {
    let (m, n) = a.shape();
    let mut st = SmithState {
        a: a.clone(),
        u: transforms
            .left
            .then(|| (IntMatrix::identity(m), IntMatrix::identity(m))),
        v: transforms
            .right
            .then(|| (IntMatrix::identity(n), IntMatrix::identity(n))),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_entry(&st.a, t) else {
            break;
        };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if st.a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&st.a[(i, t)] / &st.a[(t, t)]);
                st.add_row(i, t, &q);
                if !st.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if st.a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&st.a[(t, j)] / &st.a[(t, t)]);
                st.add_col(j, t, &q);
                if !st.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row t / column t to the pivot
                let mut best = (t, t);
                let mut best_abs = st.a[(t, t)].abs();
                for i in t + 1..m {
                    let x = st.a[(i, t)].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = st.a[(t, j)].abs();
                    if !x.is_zero() && x < best_abs {
                        best_abs = x;
                        best = (t, j);
                    }
                }
                st.swap_rows(t, best.0);
                st.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = st.a[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !st.a[(i, j)].is_multiple_of(&p))
            });
            match offender {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a[(t, t)].is_negative() {
            st.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| st.a[(i, i)].clone()).collect();
    let (u, u_inv) = match st.u {
        Some((u, ui)) => (Some(u), Some(ui)),
        None => (None, None),
    };
    let (v, v_inv) = match st.v {
        Some((v, vi)) => (Some(v), Some(vi)),
        None => (None, None),
    };
    SmithForm {
        rows: m,
        cols: n,
        diagonal,
        rank,
        u,
        u_inv,
        v,
        v_inv,
    }
}

fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some(((i, j), ax));
                if unit {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Canonical ℤ-basis of `{x : a·x = 0}`, one basis vector per column.
///
/// The basis is the nonzero part of the Hermite normal form of the kernel
/// lattice, so the first nonzero entry of each vector is positive and the
/// result depends only on the lattice.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let hf = hermite_normal_form(&a.transpose());
    let rank = hf.rank();
    if rank == n {
        return IntMatrix::zeros(n, 0);
    }
    let rows: Vec<usize> = (rank..n).collect();
    let k = hf.u.select_rows(&rows);
    let canon = hermite_normal_form(&k);
    let keep: Vec<usize> = (0..canon.rank()).collect();
    canon.h.select_rows(&keep).transpose()
}

/// Solves `a · x = b` over the integers, reusing one Smith decomposition.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    smith: SmithForm,
}

impl LinearSolver {
    pub fn new(a: &IntMatrix) -> Self {
        LinearSolver {
            smith: smith_normal_form(a),
        }
    }

    pub fn rows(&self) -> usize {
        self.smith.rows
    }

    pub fn cols(&self) -> usize {
        self.smith.cols
    }

    /// Some integer solution, or `None` when none exists. When `a` has full
    /// column rank the solution is unique.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.smith.rows, "right-hand side has wrong length");
        let ub = self.smith.u().mul_vec(b);
        let mut y = vec![BigInt::zero(); self.smith.cols];
        for (i, c) in ub.iter().enumerate() {
            if i < self.smith.rank {
                let (q, r) = c.div_rem(&self.smith.diagonal[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(self.smith.v().mul_vec(&y))
    }

    pub fn solve_matrix(&self, b: &IntMatrix) -> Option<IntMatrix> {
        let cols = (0..b.cols())
            .map(|j| self.solve(&b.column(j)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_columns(self.smith.cols, &cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hermite_of_two_by_two() {
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        let hf = hermite_normal_form(&a);
        assert_eq!(hf.u.mul(&a), hf.h);
        assert!(hf.u.determinant().abs().is_one());
        assert_eq!(hf.h, IntMatrix::from_rows(&[[2, 0], [0, 4]]));
    }

    #[test]
    fn hermite_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let hf = hermite_normal_form(&id);
        assert_eq!(hf.h, id);
        assert_eq!(hf.u, id);
        let z = IntMatrix::zeros(2, 3);
        let hf = hermite_normal_form(&z);
        assert!(hf.h.is_zero());
        assert!(hf.u.is_identity());
    }

    #[test]
    fn smith_examples() {
        let a = IntMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal, vec![big(2), big(4)]);
        assert_eq!(s.u().mul(&a).mul(s.v()), s.d());

        let s = smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal, vec![big(1), big(6)]);

        let s = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(s.d().is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn smith_inverses_are_exact() {
        let a = IntMatrix::from_rows(&[[3, 5, 7], [2, 4, 6], [9, 1, 0]]);
        let s = smith_normal_form(&a);
        assert!(s.u().mul(s.u_inv()).is_identity());
        assert!(s.v().mul(s.v_inv()).is_identity());
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k, IntMatrix::from_rows(&[[1], [-1]]));
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_basis(&IntMatrix::zeros(1, 2));
        assert_eq!(k, IntMatrix::identity(2));
    }

    #[test]
    fn solver_detects_unsolvable() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        let s = LinearSolver::new(&a);
        assert_eq!(s.solve(&[big(4), big(9)]), Some(vec![big(2), big(3)]));
        assert_eq!(s.solve(&[big(1), big(0)]), None);
    }
}
