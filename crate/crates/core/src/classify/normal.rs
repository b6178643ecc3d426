use std::sync::Arc;

use num_traits::One;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::DiffForm;
use crate::scalar::Expr;

fn form(chart: &Arc<Chart>, deg: usize, terms: &[(&[usize], i64)]) -> DiffForm {
    DiffForm::from_terms(chart, deg, terms.iter().map(|(k, c)| (k.iter().map(|i| i - 1).collect(), Expr::from_i64(*c))))
        .expect("valid normal form")
}

/// `dx^123 + dx^456` on R^6.
pub fn product_normal_form() -> DiffForm {
    form(&Chart::new(6).shared(), 3, &[(&[1, 2, 3], 1), (&[4, 5, 6], 1)])
}

/// `dx^135 - dx^146 - dx^236 - dx^245` on R^6.
pub fn complex_normal_form() -> DiffForm {
    form(&Chart::new(6).shared(), 3, &[(&[1, 3, 5], 1), (&[1, 4, 6], -1), (&[2, 3, 6], -1), (&[2, 4, 5], -1)])
}

/// `dx^156 - dx^246 + dx^345` on R^6.
pub fn tangent_normal_form() -> DiffForm {
    form(&Chart::new(6).shared(), 3, &[(&[1, 5, 6], 1), (&[2, 4, 6], -1), (&[3, 4, 5], 1)])
}

/// The three non-degenerate linear types in dimension 6.
pub fn dim6_normal_forms() -> [DiffForm; 3] {
    [product_normal_form(), complex_normal_form(), tangent_normal_form()]
}

/// `e^123 + e^145 - e^167 + e^246 + e^257 + e^347 - e^356` on R^7.
pub fn g2_form() -> DiffForm {
    form(
        &Chart::new(7).shared(),
        3,
        &[
            (&[1, 2, 3], 1),
            (&[1, 4, 5], 1),
            (&[1, 6, 7], -1),
            (&[2, 4, 6], 1),
            (&[2, 5, 7], 1),
            (&[3, 4, 7], 1),
            (&[3, 5, 6], -1),
        ],
    )
}

/// `dx^123 + dx^145 + dx^246 - dx^356` on R^6.
pub fn sphere_tangent_form() -> DiffForm {
    form(&Chart::new(6).shared(), 3, &[(&[1, 2, 3], 1), (&[1, 4, 5], 1), (&[2, 4, 6], 1), (&[3, 5, 6], -1)])
}

/// `sum_i dx^{2i-1} ^ dx^{2i}` on R^{2m}.
pub fn symplectic_form(m: usize) -> DiffForm {
    let chart = Chart::new(2 * m).shared();
    DiffForm::from_terms(&chart, 2, (0..m).map(|i| (vec![2 * i, 2 * i + 1], Expr::one()))).expect("valid")
}

/// `w^j` for the standard symplectic form on R^{2m}.
pub fn symplectic_power(m: usize, j: usize) -> Result<DiffForm> {
    let w = symplectic_form(m);
    let mut out = DiffForm::scalar(w.chart(), Expr::one());
    for _ in 0..j {
        out = out.wedge(&w)?;
    }
    Ok(out)
}

/// `Re(dz^1 ^ ... ^ dz^m)` with `z_j = x_{2j-1} + i x_{2j}`, on R^{2m}.
pub fn complex_volume(m: usize) -> DiffForm {
    let chart = Chart::new(2 * m).shared();
    let mut out = DiffForm::zero(&chart, m);
    // Choose real (0) or imaginary (1) part of each factor; i^k contributes
    // to the real part when k is even.
    for mask in 0u32..(1 << m) {
        let k = mask.count_ones();
        if k % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..m).map(|j| 2 * j + ((mask >> j) & 1) as usize).collect();
        let c = if k % 4 == 0 { 1 } else { -1 };
        out.add_term(idx, Expr::from_i64(c)).expect("in range");
    }
    out
}

/// `dx^135 - dx^146 - dx^236 + f dx^245` on R^6, with `f` an expression in
/// the chart variables.
pub fn omega_f(chart: &Arc<Chart>, f: Expr) -> Result<DiffForm> {
    if chart.dim() != 6 {
        return Err(Error::ShapeError("omega_f lives on a 6-dimensional chart".into()));
    }
    chart.check(&f)?;
    let mut w = form(chart, 3, &[(&[1, 3, 5], 1), (&[1, 4, 6], -1), (&[2, 3, 6], -1)]);
    w.add_term(vec![1, 3, 4], f)?;
    Ok(w)
}

/// The direct sum of forms: pulls each summand back along the projection of
/// the product chart and adds them. All summands must have equal degree.
pub fn direct_sum(parts: &[DiffForm]) -> Result<DiffForm> {
    let first = parts.first().ok_or_else(|| Error::ShapeError("empty sum".into()))?;
    let deg = first.degree();
    let dim: usize = parts.iter().map(DiffForm::dim).sum();
    let chart = Chart::new(dim).shared();
    let mut out = DiffForm::zero(&chart, deg);
    let mut offset = 0;
    for p in parts {
        if p.degree() != deg {
            return Err(Error::DegreeError("summands of different degree".into()));
        }
        if !p.chart().positive().next().is_none() {
            return Err(Error::ShapeError("direct sums need charts without positivity constraints".into()));
        }
        let shift: Vec<Expr> = (0..p.dim()).map(|i| Expr::var(offset + i)).collect();
        for (k, c) in p.terms() {
            let c = c.substitute(&shift)?;
            out.add_term(k.iter().map(|i| i + offset).collect(), c)?;
        }
        offset += p.dim();
    }
    Ok(out)
}
