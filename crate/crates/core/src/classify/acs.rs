use num_rational::Rational64;
use num_traits::{One, Zero};

use super::endo::EndField;
use super::nondeg::{frame_matrix, frame_rank};
use super::sign::{determine_sign, SignInfo};
use crate::error::{Error, Result};
use crate::exterior::{interior, lie_bracket, DiffForm, MultiVec};
use crate::linalg::{self, Matrix};
use crate::scalar::{q, Expr};

/// Recover the almost-complex structure `J` of a complex-volume type form
/// `w` of degree `m` on a `2m`-dimensional chart.
///
/// Solves `iota_{A u} iota_v w = iota_u iota_{A v} w` for all coordinate
/// `u, v`. The solution space must be two-dimensional (identity plus `J`);
/// its traceless element is normalized to square to `-I` and oriented so
/// that the frame `(e_1, J e_1, e_2', J e_2', ...)` built greedily from the
/// standard basis is positive.
pub fn extract_acs(w: &DiffForm) -> Result<EndField> {
    let n = w.dim();
    let m = w.degree();
    if n != 2 * m || m < 2 {
        return Err(Error::WrongType(format!("a {m}-form on a {n}-dimensional chart")));
    }
    let chart = w.chart();
    let basis: Vec<MultiVec> = (0..n).map(|i| MultiVec::basis(chart, &[i])).collect::<Result<_>>()?;
    // Unknown A[c][a] sits at column c * n + a.
    let single: Vec<DiffForm> = basis.iter().map(|b| interior(b, w)).collect::<Result<_>>()?;
    let double: Vec<Vec<DiffForm>> = (0..n)
        .map(|b| basis.iter().map(|c| interior(c, &single[b])).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut rows: Matrix<Expr> = Vec::new();
    for a in 0..n {
        for b in a..n {
            // iota_{A e_a} iota_{e_b} w - iota_{e_a} iota_{A e_b} w
            let mut eq: std::collections::BTreeMap<Vec<usize>, Vec<Expr>> = Default::default();
            for c in 0..n {
                for (k, v) in double[b][c].terms() {
                    let row = eq.entry(k.clone()).or_insert_with(|| vec![Expr::zero(); n * n]);
                    row[c * n + a] = &row[c * n + a] + v;
                }
                for (k, v) in double[c][a].terms() {
                    let row = eq.entry(k.clone()).or_insert_with(|| vec![Expr::zero(); n * n]);
                    row[c * n + b] = &row[c * n + b] - v;
                }
            }
            rows.extend(eq.into_values().filter(|r| r.iter().any(|x| !x.is_zero())));
        }
    }
    let sols = if rows.is_empty() { Vec::new() } else { linalg::nullspace(&rows, n * n) };
    if sols.len() != 2 {
        return Err(Error::WrongType(format!("commutant has dimension {}, expected 2", sols.len())));
    }
    let to_end = |v: &Vec<Expr>| -> Result<EndField> {
        let mat: Matrix<Expr> = (0..n).map(|c| (0..n).map(|a| v[c * n + a].clone()).collect()).collect();
        EndField::new(chart, mat)
    };
    let e1 = to_end(&sols[0])?;
    let e2 = to_end(&sols[1])?;
    let (t1, t2) = (e1.trace(), e2.trace());
    let traceless = if t1.is_zero() {
        e1
    } else if t2.is_zero() {
        e2
    } else {
        let a = e1.scale(&t2);
        let b = e2.scale(&t1);
        EndField::new(chart, linalg_sub(a.matrix(), b.matrix()))?
    };
    let sq = traceless.square();
    let c = sq.as_scalar_multiple().ok_or_else(|| Error::WrongType("traceless element does not square to a multiple of I".into()))?;
    let mu = -c;
    match determine_sign(&mu, chart) {
        SignInfo::Positive => {}
        _ => return Err(Error::WrongType("traceless element does not square to a negative multiple of I".into())),
    }
    let root = mu
        .pow_rational(Rational64::new(1, 2))
        .map_err(|_| Error::IrrationalScale(mu.to_string()))?;
    chart.check(&root).map_err(|_| Error::IrrationalScale(mu.to_string()))?;
    let mut j = traceless.scale(&root.recip()?);
    if !orientation_positive(&j)? {
        j = j.neg();
    }
    Ok(j)
}

fn linalg_sub(a: &Matrix<Expr>, b: &Matrix<Expr>) -> Matrix<Expr> {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// The greedy frame `(e_i, J e_i, ...)` from the standard basis.
fn complex_frame(j: &EndField) -> Result<Vec<MultiVec>> {
    let chart = j.chart();
    let mut frame: Vec<MultiVec> = Vec::new();
    for i in 0..chart.dim() {
        if frame.len() == chart.dim() {
            break;
        }
        let e = MultiVec::basis(chart, &[i])?;
        let mut cand = frame.clone();
        cand.push(e.clone());
        cand.push(j.apply(&e)?);
        if frame_rank(&cand)? == cand.len() {
            frame = cand;
        }
    }
    Ok(frame)
}

fn orientation_positive(j: &EndField) -> Result<bool> {
    let frame = complex_frame(j)?;
    if frame.len() != j.chart().dim() {
        return Err(Error::NotAlmostComplex);
    }
    let d = linalg::det(&frame_matrix(&frame)?);
    match determine_sign(&d, j.chart()) {
        SignInfo::Positive => Ok(true),
        SignInfo::Negative => Ok(false),
        _ => Err(Error::WrongType("orientation of the complex frame changes sign".into())),
    }
}

/// Nonzero values `N(d/dx_i, d/dx_j)`, `i < j`, of the Nijenhuis tensor.
pub fn nijenhuis(j: &EndField) -> Result<Vec<((usize, usize), MultiVec)>> {
    let sq = j.square();
    if sq.as_scalar_multiple() != Some(-Expr::one()) {
        return Err(Error::NotAlmostComplex);
    }
    let chart = j.chart();
    let n = chart.dim();
    let e: Vec<MultiVec> = (0..n).map(|i| MultiVec::basis(chart, &[i])).collect::<Result<_>>()?;
    let je: Vec<MultiVec> = (0..n).map(|i| j.column(i)).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let t1 = lie_bracket(&je[a], &je[b])?;
            let t2 = j.apply(&lie_bracket(&je[a], &e[b])?)?;
            let t3 = j.apply(&lie_bracket(&e[a], &je[b])?)?;
            let t4 = lie_bracket(&e[a], &e[b])?;
            let nv = t1.sub(&t2)?.sub(&t3)?.sub(&t4)?;
            if !nv.is_zero() {
                out.push(((a, b), nv));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutivityReport {
    pub involutive: bool,
    /// `(i, j, [X_i, X_j])` for the first bracket outside the span.
    pub witness: Option<(usize, usize, MultiVec)>,
}

/// Frobenius test: every bracket of frame fields lies in the frame's span.
pub fn involutive(frame: &[MultiVec]) -> Result<InvolutivityReport> {
    let r = frame.len();
    if frame_rank(frame)? < r {
        return Err(Error::DependentFrame);
    }
    let cols = linalg::transpose(&frame_matrix(frame)?);
    for a in 0..r {
        for b in a + 1..r {
            let br = lie_bracket(&frame[a], &frame[b])?;
            if br.is_zero() {
                continue;
            }
            if linalg::solve(&cols, &br.components()?).is_none() {
                return Ok(InvolutivityReport { involutive: false, witness: Some((a, b, br)) });
            }
        }
    }
    Ok(InvolutivityReport { involutive: true, witness: None })
}

/// `(1/2)` as an expression, shared by the projector constructions.
pub(crate) fn half() -> Expr {
    Expr::from_q(q(1, 2))
}
