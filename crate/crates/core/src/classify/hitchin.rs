use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::acs::{half, involutive, nijenhuis};
use super::endo::EndField;
use super::nondeg::{contraction_rank, nondegenerate};
use super::sign::{determine_sign, SignInfo};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior, pullback_by_matrix, DiffForm, MultiVec};
use crate::linalg::{self, Matrix};
use crate::scalar::{Expr, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearType {
    ProductType,
    ComplexType,
    TangentType,
    Degenerate,
    NonConstant,
}

impl LinearType {
    pub fn name(self) -> &'static str {
        match self {
            LinearType::ProductType => "ProductType",
            LinearType::ComplexType => "ComplexType",
            LinearType::TangentType => "TangentType",
            LinearType::Degenerate => "Degenerate",
            LinearType::NonConstant => "NonConstant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flatness {
    Flat,
    NonFlat,
    Undetermined,
}

impl Flatness {
    pub fn name(self) -> &'static str {
        match self {
            Flatness::Flat => "Flat",
            Flatness::NonFlat => "NonFlat",
            Flatness::Undetermined => "Undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Form(DiffForm),
    Vector(MultiVec),
    Endomorphism(EndField),
    Frame(Vec<MultiVec>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeReport {
    pub linear_type: LinearType,
    pub trace_sign: SignInfo,
    pub flat: Flatness,
    pub witness: Option<Witness>,
    /// Human-readable note, e.g. why a verdict is undetermined.
    pub note: Option<String>,
}

/// `dx^1 ^ ... ^ dx^n` on the chart.
pub fn standard_volume(chart: &Arc<Chart>) -> DiffForm {
    DiffForm::basis(chart, &(0..chart.dim()).collect::<Vec<_>>()).expect("top degree")
}

fn check_six(w: &DiffForm) -> Result<()> {
    if w.degree() != 3 || w.dim() != 6 {
        return Err(Error::DegreeError(format!("expected a 3-form in dimension 6, got a {}-form in dimension {}", w.degree(), w.dim())));
    }
    Ok(())
}

/// The endomorphism `J` with `(iota_v w) ^ w = iota_{J v} vol`.
pub fn hitchin_endomorphism(w: &DiffForm, vol: &DiffForm) -> Result<EndField> {
    check_six(w)?;
    vol.same_chart(w.chart())?;
    if vol.degree() != 6 {
        return Err(Error::DegreeError("volume must be a 6-form".into()));
    }
    let top: Vec<usize> = (0..6).collect();
    let c = vol.get(&top);
    if c.is_zero() {
        return Err(Error::SingularVolume);
    }
    let inv = c.recip()?;
    let chart = w.chart();
    let mut cols = Vec::with_capacity(6);
    for i in 0..6 {
        let lhs = interior(&MultiVec::basis(chart, &[i])?, w)?.wedge(w)?;
        // iota_{d/dx_j} dx^{1..6} = (-1)^j dx^{1..j^..6}
        let comps = (0..6)
            .map(|j| {
                let mut rest = top.clone();
                rest.remove(j);
                let x = &lhs.get(&rest) * &inv;
                if j % 2 == 1 {
                    -x
                } else {
                    x
                }
            })
            .collect();
        cols.push(MultiVec::vector(chart, comps)?);
    }
    EndField::from_columns(chart, &cols)
}

fn require_closed(w: &DiffForm) -> Result<()> {
    if ext_d(w).is_zero() {
        Ok(())
    } else {
        Err(Error::NotClosed)
    }
}

fn constant_sign(x: &Q) -> SignInfo {
    if x.is_zero() {
        SignInfo::Zero
    } else if x.is_positive() {
        SignInfo::Positive
    } else {
        SignInfo::Negative
    }
}

/// Linear type of a closed 3-form in dimension 6 at the point `p`.
pub fn classify6(w: &DiffForm, p: &[Q]) -> Result<TypeReport> {
    check_six(w)?;
    require_closed(w)?;
    classify6_linear(&w.eval_at(p)?)
}

/// Linear type of a constant-coefficient 3-form in dimension 6 (no
/// closedness check needed).
pub fn classify6_linear(w: &DiffForm) -> Result<TypeReport> {
    check_six(w)?;
    let j = hitchin_endomorphism(w, &standard_volume(w.chart()))?;
    let t = j.square().trace();
    let tq = t.as_constant().ok_or_else(|| Error::ShapeError("form must have constant coefficients".into()))?;
    let sign = constant_sign(&tq);
    let linear_type = match sign {
        SignInfo::Positive => LinearType::ProductType,
        SignInfo::Negative => LinearType::ComplexType,
        _ => {
            if nondegenerate(w, None)?.nondegenerate {
                LinearType::TangentType
            } else {
                LinearType::Degenerate
            }
        }
    };
    Ok(TypeReport { linear_type, trace_sign: sign, flat: Flatness::Undetermined, witness: None, note: None })
}

fn projector(j_normalized: &EndField, plus: bool) -> Matrix<Expr> {
    let n = j_normalized.chart().dim();
    let h = half();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut x = j_normalized.entry(r, c) * &h;
                    if !plus {
                        x = -x;
                    }
                    if r == c {
                        x = &x + &h;
                    }
                    x
                })
                .collect()
        })
        .collect()
}

/// Order two split parts: the part with the lexicographically smaller
/// leading index tuple comes first; on a tie, the first tuple where the
/// coefficients differ decides in favour of the larger leading coefficient.
pub fn order_parts(a: DiffForm, b: DiffForm) -> (DiffForm, DiffForm) {
    let ka = a.terms().next().map(|(k, _)| k.clone());
    let kb = b.terms().next().map(|(k, _)| k.clone());
    match (ka, kb) {
        (Some(x), Some(y)) if x != y => {
            return if x < y { (a, b) } else { (b, a) };
        }
        (None, Some(_)) => return (b, a),
        _ => {}
    }
    let mut keys: Vec<Vec<usize>> = a.terms().chain(b.terms()).map(|(k, _)| k.clone()).collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        let d = &a.get(&k) - &b.get(&k);
        if d.is_zero() {
            continue;
        }
        let positive = d.num().leading().is_some_and(|(_, c)| c.is_positive());
        return if positive { (a, b) } else { (b, a) };
    }
    (a, b)
}

/// Split a product-type 3-form into its two decomposable summands, exactly.
///
/// Needs `trace(J^2)/6` to be a square in the expression ring on the chart.
pub fn split_product(w: &DiffForm) -> Result<(DiffForm, DiffForm)> {
    check_six(w)?;
    let chart = w.chart();
    let j = hitchin_endomorphism(w, &standard_volume(chart))?;
    let t = j.square().trace();
    match determine_sign(&t, chart) {
        SignInfo::Positive => {}
        other => return Err(Error::WrongType(format!("trace(J^2) has sign {}", other.symbol()))),
    }
    let lambda = t.scale(&Q::new(1.into(), 6.into()));
    let root = lambda
        .pow_rational(Rational64::new(1, 2))
        .map_err(|_| Error::IrrationalScale(lambda.to_string()))?;
    chart.check(&root).map_err(|_| Error::IrrationalScale(lambda.to_string()))?;
    let jn = j.scale(&root.recip()?);
    let w1 = pullback_by_matrix(&projector(&jn, true), w)?;
    let w2 = pullback_by_matrix(&projector(&jn, false), w)?;
    if w1.add(&w2)? != *w || contraction_rank(&w1)? != 3 || contraction_rank(&w2)? != 3 {
        return Err(Error::WrongType("projected parts are not a decomposable splitting".into()));
    }
    Ok(order_parts(w1, w2))
}

/// A constant form with floating-point coefficients, keyed by sorted
/// 0-based index tuples.
pub type FloatForm = BTreeMap<Vec<usize>, f64>;

#[derive(Clone, Debug, PartialEq)]
pub enum PointSplit {
    Exact(DiffForm, DiffForm),
    /// Float fallback with the largest residual of `w1 + w2 = w` and of the
    /// decomposability equations.
    Float { w1: FloatForm, w2: FloatForm, residual: f64 },
}

/// Tolerance on float split residuals.
pub const FLOAT_TOL: f64 = 1e-9;

/// Split the value of `w` at `p`; exact when the scale is a rational square,
/// float otherwise.
pub fn split_product_at(w: &DiffForm, p: &[Q]) -> Result<PointSplit> {
    let wp = w.eval_at(p)?;
    match split_product(&wp) {
        Ok((a, b)) => Ok(PointSplit::Exact(a, b)),
        Err(Error::IrrationalScale(_)) => split_float(&wp),
        Err(e) => Err(e),
    }
}

fn to_f64(e: &Expr) -> f64 {
    e.as_constant().and_then(|q| q.to_f64()).unwrap_or(f64::NAN)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn triples(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

fn float_pullback(p: &[Vec<f64>], w: &FloatForm) -> FloatForm {
    let mut out = FloatForm::new();
    for t in triples(p.len()) {
        let mut s = 0.0;
        for (k, c) in w {
            let mut m = [[0.0; 3]; 3];
            for (r, &i) in k.iter().enumerate() {
                for (s2, &j) in t.iter().enumerate() {
                    m[r][s2] = p[i][j];
                }
            }
            s += c * det3(m);
        }
        out.insert(t, s);
    }
    out
}

/// Largest Pluecker residual `(iota_{e_a ^ e_b} u) ^ u` of a float 3-form.
fn decomposability_residual(u: &FloatForm, n: usize) -> f64 {
    let get = |k: &[usize]| -> f64 {
        let mut v = k.to_vec();
        match crate::exterior::sort_sign(&mut v) {
            Some(neg) => u.get(&v).copied().map(|x| if neg { -x } else { x }).unwrap_or(0.0),
            None => 0.0,
        }
    };
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            // c -> u(e_a, e_b, e_c); then wedge with u and read every 4-tuple.
            let one: Vec<f64> = (0..n).map(|c| get(&[a, b, c])).collect();
            for q4 in 0..n {
                for r in q4 + 1..n {
                    for s in r + 1..n {
                        for t in s + 1..n {
                            let idx = [q4, r, s, t];
                            let mut val = 0.0;
                            for (pos, &c) in idx.iter().enumerate() {
                                let rest: Vec<usize> = idx.iter().copied().filter(|&x| x != c).collect();
                                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                                val += sign * one[c] * get(&rest);
                            }
                            worst = worst.max(val.abs());
                        }
                    }
                }
            }
        }
    }
    worst
}

fn split_float(wp: &DiffForm) -> Result<PointSplit> {
    let n = wp.dim();
    let j = hitchin_endomorphism(wp, &standard_volume(wp.chart()))?;
    let jf: Vec<Vec<f64>> = j.matrix().iter().map(|r| r.iter().map(to_f64).collect()).collect();
    let sq: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| jf[r][k] * jf[k][c]).sum()).collect()).collect();
    let tr: f64 = (0..n).map(|i| sq[i][i]).sum();
    if tr <= 0.0 {
        return Err(Error::WrongType(format!("trace(J^2) = {tr} at the point")));
    }
    let root = (tr / 6.0).sqrt();
    let proj = |plus: bool| -> Vec<Vec<f64>> {
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let x = 0.5 * jf[r][c] / root;
                        (if plus { x } else { -x }) + if r == c { 0.5 } else { 0.0 }
                    })
                    .collect()
            })
            .collect()
    };
    let wf: FloatForm = wp.terms().map(|(k, c)| (k.clone(), to_f64(c))).collect();
    let w1 = float_pullback(&proj(true), &wf);
    let w2 = float_pullback(&proj(false), &wf);
    let mut residual: f64 = 0.0;
    for t in triples(n) {
        let s = w1.get(&t).unwrap_or(&0.0) + w2.get(&t).unwrap_or(&0.0) - wf.get(&t).unwrap_or(&0.0);
        residual = residual.max(s.abs());
    }
    residual = residual.max(decomposability_residual(&w1, n)).max(decomposability_residual(&w2, n));
    let clean = |f: FloatForm| -> FloatForm { f.into_iter().filter(|(_, v)| v.abs() > FLOAT_TOL).collect() };
    let (w1, w2) = (clean(w1), clean(w2));
    let first_key = |f: &FloatForm| f.keys().next().cloned();
    let (w1, w2) = if first_key(&w2) < first_key(&w1) && first_key(&w2).is_some() { (w2, w1) } else { (w1, w2) };
    if residual > FLOAT_TOL {
        return Err(Error::WrongType(format!("float split residual {residual:e} exceeds tolerance")));
    }
    Ok(PointSplit::Float { w1, w2, residual })
}

/// Full type and flatness analysis of a closed 3-form in dimension 6.
pub fn flatness_report(w: &DiffForm) -> Result<TypeReport> {
    check_six(w)?;
    require_closed(w)?;
    let chart = w.chart();
    let j = hitchin_endomorphism(w, &standard_volume(chart))?;
    let t = j.square().trace();
    let sign = determine_sign(&t, chart);
    let report = |lt, flat, witness, note: Option<String>| TypeReport {
        linear_type: lt,
        trace_sign: sign.clone(),
        flat,
        witness,
        note,
    };
    match &sign {
        SignInfo::NonConstant(..) => Ok(report(
            LinearType::NonConstant,
            Flatness::NonFlat,
            Some(Witness::Endomorphism(j.clone())),
            Some("trace(J^2) changes sign on the chart".into()),
        )),
        SignInfo::Positive => match split_product(w) {
            Ok((w1, w2)) => {
                let d1 = ext_d(&w1);
                let d2 = ext_d(&w2);
                if d1.is_zero() && d2.is_zero() {
                    Ok(report(LinearType::ProductType, Flatness::Flat, None, None))
                } else {
                    let wit = if d1.is_zero() { d2 } else { d1 };
                    Ok(report(LinearType::ProductType, Flatness::NonFlat, Some(Witness::Form(wit)), None))
                }
            }
            Err(Error::IrrationalScale(s)) => Ok(report(
                LinearType::ProductType,
                Flatness::Undetermined,
                None,
                Some(format!("sqrt({s}) is not in the expression ring; only pointwise float splits are available")),
            )),
            Err(e) => Err(e),
        },
        SignInfo::Negative => {
            let scale = Expr::from_i64(-6).checked_div(&t)?;
            let root = match scale.pow_rational(Rational64::new(1, 2)) {
                Ok(r) if chart.check(&r).is_ok() => r,
                _ => {
                    return Ok(report(
                        LinearType::ComplexType,
                        Flatness::Undetermined,
                        None,
                        Some(format!("sqrt({scale}) is not in the expression ring")),
                    ))
                }
            };
            let jt = j.scale(&root);
            let n = nijenhuis(&jt)?;
            match n.into_iter().next() {
                None => Ok(report(LinearType::ComplexType, Flatness::Flat, None, None)),
                Some((_, v)) => Ok(report(LinearType::ComplexType, Flatness::NonFlat, Some(Witness::Vector(v)), None)),
            }
        }
        SignInfo::Zero => {
            if !nondegenerate(w, None)?.nondegenerate {
                return Ok(report(LinearType::Degenerate, Flatness::Undetermined, None, None));
            }
            let kernel: Vec<MultiVec> = {
                let m = j.matrix().clone();
                linalg::nullspace(&m, 6).into_iter().map(|v| MultiVec::vector(chart, v)).collect::<Result<_>>()?
            };
            let inv = involutive(&kernel)?;
            if inv.involutive {
                Ok(report(LinearType::TangentType, Flatness::Flat, Some(Witness::Frame(kernel)), None))
            } else {
                let (_, _, br) = inv.witness.expect("non-involutive witness");
                Ok(report(LinearType::TangentType, Flatness::NonFlat, Some(Witness::Vector(br)), None))
            }
        }
    }
}

/// Check a candidate splitting `w = sum parts` into closed decomposable
/// forms. Returns, per part, `(decomposable, closed)`.
pub fn verify_product_parts(w: &DiffForm, parts: &[DiffForm]) -> Result<(bool, Vec<(bool, bool)>)> {
    let mut sum = DiffForm::zero(w.chart(), w.degree());
    let mut flags = Vec::with_capacity(parts.len());
    for p in parts {
        sum = sum.add(p)?;
        let decomposable = contraction_rank(p)? == p.degree();
        flags.push((decomposable, ext_d(p).is_zero()));
    }
    Ok((sum == *w, flags))
}

/// `sqrt` helper exposed for reports: `Some(r)` with `r^2 = e` when `e` is a
/// monomial square on the chart.
pub fn exact_sqrt(e: &Expr, chart: &Chart) -> Option<Expr> {
    let r = e.pow_rational(Rational64::new(1, 2)).ok()?;
    chart.check(&r).ok()?;
    if (&r * &r) == *e {
        Some(r)
    } else {
        None
    }
}
