//! Integer linear algebra: diagonal reduction by unimodular row and column
//! operations, exact solving of `A x = b` over `Z`, and checkable
//! certificates of insolubility.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal with entries
/// `diag[0..rank]` (all nonzero).
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub rows: usize,
    pub cols: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub diag: Vec<BigInt>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Reduces `a` (a `rows × cols` matrix given by rows).
pub fn diagonalize(a: &[Vec<BigInt>], cols: usize) -> Diagonal {
    let rows = a.len();
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                row_axpy(&mut m, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_axpy(&mut m, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // move the smallest leftover in row/column t to the pivot
            let mut best = (t, t);
            for i in t + 1..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
                u.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut m, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        diag.push(m[t][t].clone());
    }
    Diagonal { rows, cols, u, v, diag }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `row[i] -= q * row[t]`.
fn row_axpy(m: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    let src = m[t].clone();
    for (x, s) in m[i].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// `col[j] -= q * col[t]`.
fn col_axpy(m: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[t].is_zero() {
            let s = &row[t] * q;
            row[j] -= s;
        }
    }
}

fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// A witness that `A x = b` has no integer solution: `w·A ≡ 0` and
/// `w·b ≢ 0` modulo `modulus` (exactly, when the modulus is zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub w: Vec<BigInt>,
    pub modulus: BigInt,
}

impl Certificate {
    fn reduce(&self, x: &BigInt) -> BigInt {
        if self.modulus.is_zero() {
            x.clone()
        } else {
            x.mod_floor(&self.modulus.abs())
        }
    }

    /// Independently rechecks the certificate.
    pub fn verify(&self, a: &[Vec<BigInt>], cols: usize, b: &[BigInt]) -> bool {
        if self.w.len() != a.len() || b.len() != a.len() {
            return false;
        }
        let lhs_ok = (0..cols).all(|j| {
            let s: BigInt = a.iter().zip(&self.w).map(|(row, w)| &row[j] * w).sum();
            self.reduce(&s).is_zero()
        });
        let wb: BigInt = self.w.iter().zip(b).map(|(w, x)| w * x).sum();
        lhs_ok && !self.reduce(&wb).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<BigInt>),
    Infeasible(Certificate),
}

/// Solves `A x = b` over the integers.
pub fn solve(a: &[Vec<BigInt>], cols: usize, b: &[BigInt]) -> Solution {
    let dg = diagonalize(a, cols);
    solve_with(&dg, b)
}

/// Solves against a precomputed reduction (useful for many right sides).
pub fn solve_with(dg: &Diagonal, b: &[BigInt]) -> Solution {
    let c = mat_vec(&dg.u, b);
    let mut y = vec![BigInt::zero(); dg.cols];
    for (i, ci) in c.iter().enumerate() {
        match dg.diag.get(i) {
            Some(d) => {
                let (q, r) = ci.div_mod_floor(d);
                if !r.is_zero() {
                    return Solution::Infeasible(Certificate {
                        w: dg.u[i].clone(),
                        modulus: d.abs(),
                    });
                }
                y[i] = q;
            }
            None if !ci.is_zero() => {
                return Solution::Infeasible(Certificate {
                    w: dg.u[i].clone(),
                    modulus: BigInt::zero(),
                });
            }
            None => {}
        }
    }
    Solution::Solved(mat_vec(&dg.v, &y))
}

/// A basis of the integer kernel of `A`.
pub fn kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let dg = diagonalize(a, cols);
    (dg.diag.len()..cols)
        .map(|j| dg.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn reduction_is_a_factorization() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let dg = diagonalize(&a, 3);
        let uav: Vec<Vec<BigInt>> = {
            let ua: Vec<Vec<BigInt>> = dg
                .u
                .iter()
                .map(|r| (0..3).map(|j| r.iter().zip(&a).map(|(x, row)| x * &row[j]).sum()).collect())
                .collect();
            ua.iter()
                .map(|r| (0..3).map(|j| r.iter().zip(&dg.v).map(|(x, row)| x * &row[j]).sum()).collect())
                .collect()
        };
        for (i, row) in uav.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j && i < dg.diag.len() {
                    assert_eq!(x, &dg.diag[i]);
                } else {
                    assert!(x.is_zero());
                }
            }
        }
        let prod: BigInt = dg.diag.iter().product();
        assert_eq!(prod.abs(), BigInt::from(144));
    }

    #[test]
    fn solves_and_refutes() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&a, 2, &v(&[4, 9])), Solution::Solved(v(&[2, 3])));
        match solve(&a, 2, &v(&[1, 0])) {
            Solution::Infeasible(c) => assert!(c.verify(&a, 2, &v(&[1, 0]))),
            s => panic!("{s:?}"),
        }
        // inconsistent over Q
        let a = m(&[&[1, 1], &[1, 1]]);
        match solve(&a, 2, &v(&[0, 1])) {
            Solution::Infeasible(c) => {
                assert!(c.modulus.is_zero());
                assert!(c.verify(&a, 2, &v(&[0, 1])));
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 2, 3]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for x in k {
            assert!(mat_vec(&a, &x).iter().all(Zero::is_zero));
        }
    }
}
