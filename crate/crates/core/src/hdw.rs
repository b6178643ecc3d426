//! Hamiltonian vector fields and the field equations on multiphase space.

use std::sync::Arc;

use num_traits::Zero;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior, pushforward_at, solve_contraction, DiffForm, MultiVec, SmoothMap};
use crate::scalar::{Expr, Q};

/// Sign on the right-hand side of `iota_X w = s dH`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SignConvention {
    /// `iota_X w = -dH`.
    #[default]
    MinusDh,
    /// `iota_X w = (-1)^n dH` for an `(n+1)`-form `w`.
    ParityDh,
}

impl SignConvention {
    fn factor(self, w: &DiffForm) -> i64 {
        match self {
            SignConvention::MinusDh => -1,
            SignConvention::ParityDh => {
                if (w.degree() - 1) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// The unique vector field with `iota_X w = s dH`.
pub fn ham_vector_field(w: &DiffForm, h: &DiffForm, sign: SignConvention) -> Result<MultiVec> {
    h.same_chart(w.chart())?;
    if w.degree() < 2 || h.degree() + 2 != w.degree() {
        return Err(Error::DegreeError(format!("H of degree {} for a {}-form", h.degree(), w.degree())));
    }
    let rhs = ext_d(h).scale_q(&Q::from_integer(sign.factor(w).into()));
    let x = solve_contraction(w, &rhs)?.ok_or(Error::NotHamiltonian)?;
    Ok(x)
}

/// `iota_X w - s dH`; zero exactly when `(X, H)` solves the equation.
pub fn hdw_residual(w: &DiffForm, x: &MultiVec, h: &DiffForm, sign: SignConvention) -> Result<DiffForm> {
    x.same_chart(w.chart())?;
    h.same_chart(w.chart())?;
    if x.degree() + h.degree() + 1 != w.degree() {
        return Err(Error::DegreeError(format!(
            "{}-vector and {}-form do not fit a {}-form",
            x.degree(),
            h.degree(),
            w.degree()
        )));
    }
    let dh = ext_d(h).scale_q(&Q::from_integer(sign.factor(w).into()));
    interior(x, w)?.sub(&dh)
}

/// Canonical forms on multiphase space with coordinates
/// `(x^1..x^n, q^1..q^N, p^1_1..p^n_1, .., p^1_N..p^n_N, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiphaseModel {
    pub n: usize,
    pub fiber: usize,
    pub chart: Arc<Chart>,
    pub theta: DiffForm,
    pub omega: DiffForm,
}

impl MultiphaseModel {
    pub fn x(&self, mu: usize) -> usize {
        mu
    }

    pub fn q(&self, a: usize) -> usize {
        self.n + a
    }

    /// Index of `p^mu_a` (0-based `mu`, `a`).
    pub fn p_mu(&self, mu: usize, a: usize) -> usize {
        self.n + self.fiber + a * self.n + mu
    }

    pub fn p(&self) -> usize {
        self.chart.dim() - 1
    }
}

/// Build `theta = p d^n x + sum p^mu_a dq^a ^ iota_{d/dx^mu} d^n x` and
/// `omega = -d theta`.
pub fn multiphase_forms(n: usize, fiber: usize) -> Result<MultiphaseModel> {
    if n == 0 || fiber == 0 {
        return Err(Error::ShapeError("multiphase space needs n >= 1 and N >= 1".into()));
    }
    let mut names: Vec<String> = (1..=n).map(|m| format!("x{m}")).collect();
    names.extend((1..=fiber).map(|a| format!("q{a}")));
    for a in 1..=fiber {
        names.extend((1..=n).map(|m| format!("p{m}_{a}")));
    }
    names.push("p".into());
    let chart = Chart::named(names)?.shared();
    let dim = chart.dim();
    let mut model = MultiphaseModel {
        n,
        fiber,
        chart: chart.clone(),
        theta: DiffForm::zero(&chart, n),
        omega: DiffForm::zero(&chart, n + 1),
    };
    let base: Vec<usize> = (0..n).collect();
    let mut theta = DiffForm::zero(&chart, n);
    theta.add_term(base.clone(), Expr::var(dim - 1))?;
    for a in 0..fiber {
        for mu in 0..n {
            // dq^a ^ iota_{d/dx^mu} d^n x = (-1)^mu dq^a ^ dx^{..mu^..}
            let mut idx = vec![model.q(a)];
            idx.extend(base.iter().copied().filter(|&k| k != mu));
            let c = Expr::var(model.p_mu(mu, a));
            theta.add_term(idx, if mu % 2 == 1 { -c } else { c })?;
        }
    }
    model.omega = ext_d(&theta).neg();
    model.theta = theta;
    Ok(model)
}

/// Hamilton-Volterra residuals of a section `x -> (q^a, p^mu_a)`.
///
/// `section` has the base chart as source and `N + nN` components ordered as
/// the fiber coordinates of the model. Returns the `N` divergence residuals
/// followed by the `nN` residuals `dH/dp^mu_a + d(q^a)/dx^mu` (`a` outer).
pub fn hamilton_volterra_residual(model: &MultiphaseModel, hcal: &Expr, section: &SmoothMap) -> Result<Vec<Expr>> {
    let (n, big_n) = (model.n, model.fiber);
    if section.source().dim() != n || section.components().len() != big_n + n * big_n {
        return Err(Error::ShapeError(format!(
            "section must map {n} base coordinates to {} fiber coordinates",
            big_n + n * big_n
        )));
    }
    model.chart.check(hcal)?;
    if hcal.depends_on(model.p()) {
        return Err(Error::ShapeError("the Hamiltonian density must not depend on p".into()));
    }
    let comps = section.components();
    let mut values: Vec<Expr> = (0..n).map(Expr::var).collect();
    values.extend(comps.iter().cloned());
    values.push(Expr::zero());
    let along = |e: &Expr| e.substitute(&values);
    let mut out = Vec::with_capacity(big_n * (n + 1));
    for a in 0..big_n {
        let mut r = along(&hcal.partial_derivative(model.q(a)))?;
        for mu in 0..n {
            r = &r - &comps[big_n + a * n + mu].partial_derivative(mu);
        }
        out.push(r);
    }
    for a in 0..big_n {
        for mu in 0..n {
            let r = &along(&hcal.partial_derivative(model.p_mu(mu, a)))? + &comps[a].partial_derivative(mu);
            out.push(r);
        }
    }
    Ok(out)
}

/// Pointwise check of `Psi_*(gamma) = X(Psi)` at each sample point.
pub fn ham_curve_check(psi: &SmoothMap, gamma: &MultiVec, x: &MultiVec, points: &[Vec<Q>]) -> Result<Vec<bool>> {
    gamma.same_chart(psi.source())?;
    x.same_chart(psi.target())?;
    if gamma.degree() != x.degree() {
        return Err(Error::DegreeError("gamma and X differ in degree".into()));
    }
    points
        .iter()
        .map(|p| {
            let lhs = pushforward_at(psi, gamma, p)?;
            let rhs = x.eval_at(&psi.eval_at(p)?)?;
            Ok(lhs == rhs)
        })
        .collect()
}

