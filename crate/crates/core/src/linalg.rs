//! Dense Gaussian elimination over an exact field.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::{Coeff, GaussQ, RationalExpr, Q};

/// Exact field operations used by the elimination routines.
pub trait Field: Clone + PartialEq + Debug + Zero + One {
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_neg(&self) -> Self;
    /// Division by a nonzero element.
    fn f_div(&self, o: &Self) -> Self;
    /// Heuristic size used to pick small pivots; smaller is preferred.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for Q {
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_neg(&self) -> Self {
        -self
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl Field for GaussQ {
    fn f_add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn f_sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn f_mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn f_neg(&self) -> Self {
        -self.clone()
    }
    fn f_div(&self, o: &Self) -> Self {
        self.clone() / o.clone()
    }
}

impl<C: Coeff> Field for RationalExpr<C> {
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_neg(&self) -> Self {
        -self
    }
    fn f_div(&self, o: &Self) -> Self {
        self.checked_div(o).expect("pivot is nonzero")
    }
    fn weight(&self) -> usize {
        if self.is_constant() {
            0
        } else {
            self.num().len() + 2 * self.den().len()
        }
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn zeros<F: Field>(rows: usize, cols: usize) -> Matrix<F> {
    vec![vec![F::zero(); cols]; rows]
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = F::one();
    }
    m
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter().zip(b.iter()).fold(F::zero(), |acc, (x, brow)| {
                        if x.is_zero() || brow[j].is_zero() {
                            acc
                        } else {
                            acc.f_add(&x.f_mul(&brow[j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(F::zero(), |acc, (x, y)| {
                if x.is_zero() || y.is_zero() {
                    acc
                } else {
                    acc.f_add(&x.f_mul(y))
                }
            })
        })
        .collect()
}

pub fn transpose<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn trace<F: Field>(a: &Matrix<F>) -> F {
    a.iter().enumerate().fold(F::zero(), |acc, (i, r)| acc.f_add(&r[i]))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| (m[i][c].weight(), i)) else {
            continue;
        };
        m.swap(r, p);
        let inv_piv = F::one().f_div(&m[r][c]);
        if !inv_piv.is_one() {
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.f_mul(&inv_piv);
                }
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.f_sub(&factor.f_mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}`, one vector per free column with that entry `1`.
pub fn nullspace<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = a[r][f].f_neg();
            }
            v
        })
        .collect()
}

/// A solution of `m x = b` (free variables set to zero), or `None` when the
/// system is inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| (a[i][c].weight(), i)) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = d.f_neg();
        }
        d = d.f_mul(&a[c][c]);
        let inv = F::one().f_div(&a[c][c]);
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].f_mul(&inv);
            for j in c..n {
                if !a[c][j].is_zero() {
                    let t = factor.f_mul(&a[c][j]);
                    a[i][j] = a[i][j].f_sub(&t);
                }
            }
        }
    }
    d
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, qi, Expr};

    fn qm(rows: &[&[i64]]) -> Matrix<Q> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn rank_nullspace_det() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(Zero::is_zero));
        assert!(det(&m).is_zero());
        assert_eq!(det(&qm(&[&[0, 1], &[1, 0]])), qi(-1));
    }

    #[test]
    fn solve_and_inverse() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        let x = solve(&m, &[qi(3), qi(2)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(1)]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(solve(&qm(&[&[1, 1], &[1, 1]]), &[qi(0), qi(1)]).is_none());
    }

    #[test]
    fn symbolic_determinant() {
        let p = |s: &str| parse_rational(s).unwrap();
        let m: Matrix<Expr> = vec![vec![p("x1"), p("1")], vec![p("x2"), p("1/x1")]];
        assert_eq!(det(&m), p("1 - x2"));
    }
}
