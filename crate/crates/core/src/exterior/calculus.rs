use num_traits::Zero;

use super::graded::{merge_sign, DiffForm, MultiVec};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Expr;

/// Exterior derivative.
pub fn ext_d(a: &DiffForm) -> DiffForm {
    let mut out = DiffForm::zero(a.chart(), a.degree() + 1);
    if a.degree() >= a.dim() {
        return out;
    }
    for (idx, c) in a.terms() {
        for j in 0..a.dim() {
            if idx.contains(&j) || !c.depends_on(j) {
                continue;
            }
            let dc = c.partial_derivative(j);
            if let Some((k, neg)) = merge_sign(&[j], idx) {
                out.insert_sorted(k, if neg { -dc } else { dc });
            }
        }
    }
    out
}

/// `iota_{d/dx_i}` of a basis tuple: the reduced tuple and its sign.
fn contract_index(i: usize, idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let p = idx.iter().position(|&x| x == i)?;
    let mut rest = idx.to_vec();
    rest.remove(p);
    Some((rest, p % 2 == 1))
}

/// Interior product. For a basis multivector `d/dx_I` the contractions are
/// applied in index order, so `iota_{u^v} = iota_v iota_u`.
pub fn interior(x: &MultiVec, a: &DiffForm) -> Result<DiffForm> {
    a.same_chart(x.chart())?;
    if x.degree() > a.degree() {
        return Err(Error::DegreeError(format!(
            "contracting a degree-{} multivector into a {}-form",
            x.degree(),
            a.degree()
        )));
    }
    let mut out = DiffForm::zero(a.chart(), a.degree() - x.degree());
    for (xi, xc) in x.terms() {
        for (ai, ac) in a.terms() {
            let mut cur = ai.clone();
            let mut neg = false;
            let mut ok = true;
            for &i in xi {
                match contract_index(i, &cur) {
                    Some((rest, s)) => {
                        cur = rest;
                        neg ^= s;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let c = xc * ac;
                out.insert_sorted(cur, if neg { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Lie derivative along a vector field, via Cartan's formula.
pub fn lie_derivative(x: &MultiVec, a: &DiffForm) -> Result<DiffForm> {
    if x.degree() != 1 {
        return Err(Error::DegreeError(format!("Lie derivative along a degree-{} multivector", x.degree())));
    }
    let da = ext_d(a);
    let first = if da.degree() >= 1 { interior(x, &da)? } else { DiffForm::zero(a.chart(), a.degree()) };
    if a.degree() == 0 {
        return Ok(first);
    }
    first.add(&ext_d(&interior(x, a)?))
}

/// Directional derivative `X(f)` of a function.
pub fn apply_vector(x: &[Expr], f: &Expr) -> Expr {
    x.iter().enumerate().fold(Expr::zero(), |acc, (i, xi)| {
        if xi.is_zero() || !f.depends_on(i) {
            acc
        } else {
            &acc + &(xi * &f.partial_derivative(i))
        }
    })
}

/// Bracket of vector fields, `[X, Y]^j = X(Y^j) - Y(X^j)`.
pub fn lie_bracket(x: &MultiVec, y: &MultiVec) -> Result<MultiVec> {
    x.same_chart(y.chart())?;
    let xs = x.components()?;
    let ys = y.components()?;
    let comps = (0..x.dim()).map(|j| &apply_vector(&xs, &ys[j]) - &apply_vector(&ys, &xs[j])).collect();
    MultiVec::vector(x.chart(), comps)
}

/// Radial homotopy operator `h` with `dh + hd = id` in positive degree.
///
/// Each coefficient must be a sum of monomials (no polynomial denominator);
/// a monomial of total degree `e` in a `k`-form picks up `1/(k+e)`.
pub fn poincare_homotopy(a: &DiffForm) -> Result<DiffForm> {
    let k = a.degree();
    if k == 0 {
        return Err(Error::DegreeError("homotopy operator on a 0-form".into()));
    }
    let mut out = DiffForm::zero(a.chart(), k - 1);
    for (idx, c) in a.terms() {
        let s = c.as_scalar().ok_or_else(|| Error::NotLaurent(c.to_string()))?;
        for (m, coef) in s.terms() {
            let e = m.degree();
            let denom = e + num_rational::Rational64::from_integer(k as i64);
            if denom.is_zero() {
                return Err(Error::HomotopyPole { degree: k, monomial_degree: e.to_string() });
            }
            let factor = coef / crate::scalar::ratio_to_q(denom);
            for (p, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(p);
                let mono = m.mul(&crate::scalar::Monomial::var(i));
                let t = Expr::monomial(factor.clone(), mono);
                out.insert_sorted(rest, if p % 2 == 1 { -t } else { t });
            }
        }
    }
    Ok(out)
}

/// Pointwise linear pullback: replace `dx_i` by `sum_j p[i][j] dx_j` and keep
/// the coefficients. This is `w(P u, P v, ...)`.
pub fn pullback_by_matrix(p: &Matrix<Expr>, a: &DiffForm) -> Result<DiffForm> {
    let n = a.dim();
    if p.len() != n || p.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeError(format!("expected a {n}x{n} matrix")));
    }
    let images: Vec<DiffForm> = (0..n)
        .map(|i| DiffForm::from_terms(a.chart(), 1, (0..n).map(|j| (vec![j], p[i][j].clone()))))
        .collect::<Result<_>>()?;
    let mut out = DiffForm::zero(a.chart(), a.degree());
    for (idx, c) in a.terms() {
        let mut t = DiffForm::scalar(a.chart(), c.clone());
        for &i in idx {
            t = t.wedge(&images[i])?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

/// The matrix of `v -> iota_v w` in the coordinate bases: one column per
/// `d/dx_i`, one row per index tuple of degree `deg w - 1`. Returns the row
/// labels alongside.
pub fn contraction_matrix(w: &DiffForm) -> Result<(Vec<Vec<usize>>, Matrix<Expr>)> {
    if w.degree() == 0 {
        return Err(Error::DegreeError("contraction of a 0-form".into()));
    }
    let n = w.dim();
    let cols: Vec<DiffForm> = (0..n)
        .map(|i| interior(&MultiVec::basis(w.chart(), &[i])?, w))
        .collect::<Result<_>>()?;
    let mut labels: Vec<Vec<usize>> = cols.iter().flat_map(|c| c.terms().map(|(k, _)| k.clone())).collect();
    labels.sort();
    labels.dedup();
    let m = labels.iter().map(|l| cols.iter().map(|c| c.get(l)).collect()).collect();
    Ok((labels, m))
}

/// Solve `iota_X w = beta` for a vector field `X`. Returns `None` when
/// `beta` is outside the image; free directions (degenerate `w`) are set to 0.
pub fn solve_contraction(w: &DiffForm, beta: &DiffForm) -> Result<Option<MultiVec>> {
    w.same_chart(beta.chart())?;
    if beta.degree() + 1 != w.degree() {
        return Err(Error::DegreeError(format!(
            "contraction of a {}-form cannot equal a {}-form",
            w.degree(),
            beta.degree()
        )));
    }
    let (mut labels, mut m) = contraction_matrix(w)?;
    let n = w.dim();
    for (k, _) in beta.terms() {
        if !labels.contains(k) {
            labels.push(k.clone());
            m.push(vec![Expr::zero(); n]);
        }
    }
    let rhs: Vec<Expr> = labels.iter().map(|l| beta.get(l)).collect();
    match linalg::solve(&m, &rhs) {
        Some(x) => Ok(Some(MultiVec::vector(w.chart(), x)?)),
        None => Ok(None),
    }
}

/// Kernel of `v -> iota_v w` over the fraction field.
pub fn contraction_kernel(w: &DiffForm) -> Result<Vec<MultiVec>> {
    let (_, m) = contraction_matrix(w)?;
    let n = w.dim();
    let m = if m.is_empty() { vec![vec![Expr::zero(); n]] } else { m };
    linalg::nullspace(&m, n).into_iter().map(|v| MultiVec::vector(w.chart(), v)).collect()
}

/// Evaluate `w` on the given vectors: `w(v_1, ..., v_k)`.
pub fn evaluate_on(w: &DiffForm, vs: &[MultiVec]) -> Result<Expr> {
    if vs.len() != w.degree() {
        return Err(Error::DegreeError(format!("{} vectors for a {}-form", vs.len(), w.degree())));
    }
    let mut cur = w.clone();
    for v in vs {
        cur = interior(v, &cur)?;
    }
    Ok(cur.get(&[]))
}
