use std::sync::Arc;

use num_traits::{One, Zero};

use super::calculus::ext_d;
use super::graded::{DiffForm, MultiVec};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Expr, Q};

/// A map between charts given by one expression per target coordinate, in
/// the source variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    components: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(source: &Arc<Chart>, target: &Arc<Chart>, components: Vec<Expr>) -> Result<Self> {
        if components.len() != target.dim() {
            return Err(Error::ShapeError(format!(
                "{} components for a target of dimension {}",
                components.len(),
                target.dim()
            )));
        }
        for c in &components {
            source.check(c)?;
        }
        Ok(SmoothMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        SmoothMap { source: chart.clone(), target: chart.clone(), components: (0..chart.dim()).map(Expr::var).collect() }
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// `self` after `inner`: `x -> self(inner(x))`.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap> {
        if !inner.target.compatible(&self.source) {
            return Err(Error::ChartMismatch);
        }
        let comps = self.components.iter().map(|c| c.substitute(&inner.components)).collect::<Result<_>>()?;
        Ok(SmoothMap { source: inner.source.clone(), target: self.target.clone(), components: comps })
    }

    /// Jacobian matrix: `target_dim` rows, `source_dim` columns.
    pub fn jacobian(&self) -> Matrix<Expr> {
        self.components
            .iter()
            .map(|c| (0..self.source.dim()).map(|j| c.partial_derivative(j)).collect())
            .collect()
    }

    pub fn eval_at(&self, point: &[Q]) -> Result<Vec<Q>> {
        self.components.iter().map(|c| c.eval_exact(point)).collect()
    }
}

/// Pull a form on the target chart back to the source chart.
pub fn pullback(f: &SmoothMap, a: &DiffForm) -> Result<DiffForm> {
    a.same_chart(&f.target)?;
    let src = &f.source;
    let mut cache: Vec<Option<DiffForm>> = vec![None; f.target.dim()];
    let mut out = DiffForm::zero(src, a.degree());
    for (idx, c) in a.terms() {
        let mut t = DiffForm::scalar(src, c.substitute(&f.components)?);
        for &i in idx {
            if cache[i].is_none() {
                cache[i] = Some(ext_d(&DiffForm::scalar(src, f.components[i].clone())));
            }
            t = t.wedge(cache[i].as_ref().expect("filled"))?;
            if t.is_zero() {
                break;
            }
        }
        if !t.is_zero() {
            out = out.add(&t)?;
        }
    }
    Ok(out)
}

/// Push a multivector at the point `p` forward along `f`: apply the top
/// exterior power of the Jacobian at `p` to `X(p)`. The result is a constant
/// multivector on the target chart, to be read at `f(p)`.
pub fn pushforward_at(f: &SmoothMap, x: &MultiVec, p: &[Q]) -> Result<MultiVec> {
    x.same_chart(&f.source)?;
    let jac = f.jacobian();
    let jp: Vec<Vec<Q>> = jac.iter().map(|r| r.iter().map(|e| e.eval_exact(p)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let xp = x.eval_at(p)?;
    let tgt = &f.target;
    let images: Vec<MultiVec> = (0..f.source.dim())
        .map(|j| MultiVec::vector(tgt, jp.iter().map(|r| Expr::from_q(r[j].clone())).collect()))
        .collect::<Result<_>>()?;
    let mut out = MultiVec::zero(tgt, x.degree());
    for (idx, c) in xp.terms() {
        let mut t = MultiVec::scalar(tgt, c.clone());
        for &j in idx {
            t = t.wedge(&images[j])?;
        }
        out = out.add(&t)?;
    }
    Ok(out)
}

/// A constant linear map `x -> M x` as a [`SmoothMap`].
pub fn linear_map(chart: &Arc<Chart>, m: &Matrix<Q>) -> Result<SmoothMap> {
    let comps = m
        .iter()
        .map(|row| {
            row.iter().enumerate().fold(Expr::zero(), |acc, (j, a)| {
                if a.is_zero() {
                    acc
                } else if a.is_one() {
                    &acc + &Expr::var(j)
                } else {
                    &acc + &Expr::var(j).scale(a)
                }
            })
        })
        .collect();
    SmoothMap::new(chart, chart, comps)
}
