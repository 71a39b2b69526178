//! Shared helpers for integration tests: the corpus and independent oracles.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use bredon::complex::GammaComplex;
use bredon::group::{FiniteGroup, Subgroup};
use bredon::orbit::OrbitCategory;
use bredon::workspace::Workspace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every manifest in the corpus, sorted by file name.
pub fn corpus() -> Vec<(String, Workspace)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let ws = Workspace::load(&p).unwrap_or_else(|e| panic!("{e}"));
            (name, ws)
        })
        .collect()
}

/// All (complex, family) pairs over the same group.
pub fn complex_family_pairs(ws: &Workspace) -> Vec<(String, String, GammaComplex, Arc<OrbitCategory>)> {
    let mut out = Vec::new();
    for (xname, x) in &ws.complexes {
        for fname in ws.families_for_complex(xname) {
            out.push((xname.clone(), fname.to_string(), x.clone(), ws.categories[fname].clone()));
        }
    }
    out
}

/// Simplices of `x` all of whose vertices are fixed by every element of `lambda`,
/// found by applying the vertex permutations directly.
pub fn fixed_simplices_by_hand(x: &GammaComplex, lambda: &Subgroup) -> Vec<Vec<Vec<usize>>> {
    let v = x.vertex_set();
    let dim = x.dimension();
    (0..=dim.max(0) as usize)
        .map(|p| {
            x.simplices(p)
                .iter()
                .filter(|s| s.iter().all(|&u| lambda.elements().iter().all(|&g| v.act(g, u) == u)))
                .cloned()
                .collect()
        })
        .collect()
}

/// Boundary `C_p → C_{p−1}` as dense `i64` rows.
fn boundary(simplices: &[Vec<Vec<usize>>], p: usize) -> Vec<Vec<i64>> {
    let rows = &simplices[p - 1];
    let mut d = vec![vec![0i64; simplices[p].len()]; rows.len()];
    for (j, s) in simplices[p].iter().enumerate() {
        for k in 0..s.len() {
            let mut f = s.clone();
            f.remove(k);
            let i = rows.iter().position(|r| *r == f).expect("face present");
            d[i][j] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    d
}

/// Rank over ℚ by exact rational elimination.
pub fn rank_rational(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigRational::one() / a[rank][c].clone();
        for x in a[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..cols {
                    let t = &f * &a[rank][k];
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether some conjugate `g⁻¹Λg` lies in `Ξ`, by brute force over the group.
pub fn subconjugate_by_hand(g: &FiniteGroup, lambda: &Subgroup, xi: &Subgroup) -> bool {
    g.elements().any(|x| {
        let xi_inv = g.inv(x);
        lambda
            .elements()
            .iter()
            .all(|&l| xi.contains(g.mul(g.mul(xi_inv, l), x)))
    })
}

pub fn abs_le(x: &BigInt, bound: i64) -> bool {
    x.abs() <= BigInt::from(bound)
}

/// Invariant factors (> 0) of an integer matrix by elimination in `i128`.
pub fn smith_invariants_i128(m: &[Vec<i64>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
        if let Some(i) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Integral homology `H_0 … H_top` of a simplicial complex given by simplices per
/// dimension, as `(free rank, torsion factors > 1)`.
pub fn integral_homology(simplices: &[Vec<Vec<usize>>], top: usize) -> Vec<(usize, Vec<i128>)> {
    let n = |k: usize| simplices.get(k).map_or(0, Vec::len);
    let factors = |k: usize| -> Vec<i128> {
        if k == 0 || k >= simplices.len() || n(k) == 0 || n(k - 1) == 0 {
            return Vec::new();
        }
        smith_invariants_i128(&boundary(simplices, k))
    };
    (0..=top)
        .map(|k| {
            let here = factors(k).len();
            let above = factors(k + 1);
            let free = n(k) - here - above.len();
            (free, above.into_iter().filter(|&d| d > 1).collect())
        })
        .collect()
}
