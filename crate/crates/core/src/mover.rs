//! Determinant-one polynomial automorphisms of C^n that move finite point
//! sets, built from a linear change of coordinates and interpolating shears.
//!
//! Coordinates on C^n are split as `(x, y, z)` with `x` the first, `z` the
//! last and `y` the `n - 2` in between.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::classify::complex_volume;
use crate::error::{Error, Result};
use crate::exterior::{pullback, SmoothMap};
use crate::linalg::{self, Matrix};
use crate::scalar::{Expr, GaussQ, Monomial, RationalExpr, ScalarExpr};

pub type CExpr = RationalExpr<GaussQ>;
pub type Point = Vec<GaussQ>;

/// Univariate polynomial, coefficients from degree 0 upwards.
pub type UniPoly = Vec<GaussQ>;

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// `p -> M p` with `det M = 1`.
    Linear(Matrix<GaussQ>),
    /// `(x, y, z) -> (x, y - P(x), z - Q(x))`; `p` holds the `n - 2` components of `P`.
    ShearX { p: Vec<UniPoly>, q: UniPoly },
    /// `(x, y, z) -> (x - P(z), y, z)`.
    ShearZ { p: UniPoly },
}

pub fn eval_poly(p: &[GaussQ], t: &GaussQ) -> GaussQ {
    p.iter().rev().fold(GaussQ::zero(), |acc, c| acc * t.clone() + c.clone())
}

fn poly_expr(p: &[GaussQ], var: usize) -> CExpr {
    let terms = p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let m = if k == 0 { Monomial::one() } else { Monomial::var_pow(var, (k as i64).into()) };
        (m, c.clone())
    });
    CExpr::from_scalar(ScalarExpr::from_terms(terms))
}

fn neg_poly(p: &[GaussQ]) -> UniPoly {
    p.iter().map(|c| -c.clone()).collect()
}

/// Interpolating polynomial of degree below `nodes.len()` through
/// `(nodes[j], values[j])`. Nodes must be distinct.
pub fn interpolate(nodes: &[GaussQ], values: &[GaussQ]) -> Result<UniPoly> {
    if nodes.len() != values.len() {
        return Err(Error::ShapeError("interpolation nodes and values differ in length".into()));
    }
    let k = nodes.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    // Newton divided differences.
    let mut a = values.to_vec();
    for lvl in 1..k {
        for j in (lvl..k).rev() {
            let dx = nodes[j].clone() - nodes[j - lvl].clone();
            if dx.is_zero() {
                return Err(Error::DuplicatePoints);
            }
            a[j] = (a[j].clone() - a[j - 1].clone()) / dx;
        }
    }
    let mut poly: UniPoly = vec![a[k - 1].clone()];
    for i in (0..k - 1).rev() {
        // poly <- poly * (t - nodes[i]) + a[i]
        let mut next = vec![GaussQ::zero(); poly.len() + 1];
        for (d, c) in poly.iter().enumerate() {
            next[d + 1] = next[d + 1].clone() + c.clone();
            next[d] = next[d].clone() - c.clone() * nodes[i].clone();
        }
        next[0] = next[0].clone() + a[i].clone();
        poly = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    Ok(poly)
}

impl Step {
    pub fn apply(&self, pt: &[GaussQ]) -> Point {
        let n = pt.len();
        let mut out = pt.to_vec();
        match self {
            Step::Linear(m) => return linalg::mat_vec(m, pt),
            Step::ShearX { p, q } => {
                for (i, pi) in p.iter().enumerate() {
                    out[1 + i] = out[1 + i].clone() - eval_poly(pi, &pt[0]);
                }
                out[n - 1] = out[n - 1].clone() - eval_poly(q, &pt[0]);
            }
            Step::ShearZ { p } => {
                out[0] = out[0].clone() - eval_poly(p, &pt[n - 1]);
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Step> {
        Ok(match self {
            Step::Linear(m) => Step::Linear(linalg::inverse(m).ok_or(Error::SingularVolume)?),
            Step::ShearX { p, q } => Step::ShearX { p: p.iter().map(|pi| neg_poly(pi)).collect(), q: neg_poly(q) },
            Step::ShearZ { p } => Step::ShearZ { p: neg_poly(p) },
        })
    }

    /// Component polynomials in the variables `z_0..z_{n-1}`.
    pub fn components(&self, n: usize) -> Vec<CExpr> {
        let vars: Vec<CExpr> = (0..n).map(CExpr::var).collect();
        match self {
            Step::Linear(m) => m
                .iter()
                .map(|row| {
                    row.iter().enumerate().fold(CExpr::zero(), |acc, (j, c)| acc + vars[j].scale(c))
                })
                .collect(),
            Step::ShearX { p, q } => {
                let mut out = vars.clone();
                for (i, pi) in p.iter().enumerate() {
                    out[1 + i] = &vars[1 + i] - &poly_expr(pi, 0);
                }
                out[n - 1] = &vars[n - 1] - &poly_expr(q, 0);
                out
            }
            Step::ShearZ { p } => {
                let mut out = vars.clone();
                out[0] = &vars[0] - &poly_expr(p, n - 1);
                out
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Step::Linear(_) => "linear",
            Step::ShearX { .. } => "shear-x",
            Step::ShearZ { .. } => "shear-z",
        }
    }
}

/// A composition of elementary steps, applied in order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyAuto {
    pub n: usize,
    pub steps: Vec<Step>,
}

impl PolyAuto {
    pub fn identity(n: usize) -> Self {
        PolyAuto { n, steps: Vec::new() }
    }

    pub fn apply(&self, pt: &[GaussQ]) -> Result<Point> {
        if pt.len() != self.n {
            return Err(Error::ShapeError(format!("point of length {} in C^{}", pt.len(), self.n)));
        }
        Ok(self.steps.iter().fold(pt.to_vec(), |p, s| s.apply(&p)))
    }

    pub fn inverse(&self) -> Result<PolyAuto> {
        let steps = self.steps.iter().rev().map(Step::inverse).collect::<Result<_>>()?;
        Ok(PolyAuto { n: self.n, steps })
    }

    /// Fully expanded components. Degrees multiply along the chain, so this is
    /// only practical for small configurations.
    pub fn components(&self) -> Result<Vec<CExpr>> {
        let mut acc: Vec<CExpr> = (0..self.n).map(CExpr::var).collect();
        for s in &self.steps {
            acc = s.components(self.n).iter().map(|c| c.substitute(&acc)).collect::<Result<_>>()?;
        }
        Ok(acc)
    }

    /// Jacobian determinant by the chain rule: each step's determinant is
    /// pulled back along the prefix of the chain and multiplied in.
    pub fn jacobian_determinant(&self) -> Result<CExpr> {
        let mut total = CExpr::one();
        for (i, s) in self.steps.iter().enumerate() {
            let d = jacobian_determinant(&s.components(self.n), self.n)?;
            let pulled = if d.is_constant() {
                d
            } else {
                let prefix = PolyAuto { n: self.n, steps: self.steps[..i].to_vec() };
                d.substitute(&prefix.components()?)?
            };
            total = &total * &pulled;
        }
        Ok(total)
    }
}

fn check_distinct(points: &[Point]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].iter().any(|b| b == a) {
            return Err(Error::DuplicatePoints);
        }
    }
    Ok(())
}

fn check_shape(points: &[Point], n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::ShapeError(format!("need n >= 2, got {n}")));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::ShapeError(format!("point of length {} in C^{n}", p.len())));
    }
    Ok(())
}

/// Candidate parameters 0, 1, -1, 2, -2, ...
fn spiral() -> impl Iterator<Item = i64> {
    (0i64..).map(|m| if m % 2 == 1 { (m + 1) / 2 } else { -(m / 2) })
}

/// Det-one linear map making the first coordinates of the images pairwise
/// distinct. The first row is `(1, c, c^2, ..)` for the first integer `c` in
/// spiral order that works; the other rows are standard basis vectors.
pub fn separating_linear_map(points: &[Point], n: usize) -> Result<Matrix<GaussQ>> {
    check_shape(points, n)?;
    check_distinct(points)?;
    for c in spiral() {
        let cq = GaussQ::from_i64(c);
        let mut row = vec![GaussQ::one()];
        for j in 1..n {
            row.push(row[j - 1].clone() * cq.clone());
        }
        let firsts: Vec<GaussQ> = points
            .iter()
            .map(|p| row.iter().zip(p).fold(GaussQ::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect();
        if firsts.iter().enumerate().all(|(i, a)| firsts[..i].iter().all(|b| b != a)) {
            let mut m = linalg::identity::<GaussQ>(n);
            m[0] = row;
            return Ok(m);
        }
    }
    unreachable!("each difference vector rules out at most n - 1 parameters")
}

/// Steps carrying `points[j]` to the marker `(0, .., 0, j + 1)`.
pub fn normalizing_steps(points: &[Point], n: usize) -> Result<Vec<Step>> {
    let t = separating_linear_map(points, n)?;
    let lin = Step::Linear(t);
    let moved: Vec<Point> = points.iter().map(|p| lin.apply(p)).collect();
    let xs: Vec<GaussQ> = moved.iter().map(|p| p[0].clone()).collect();
    let p = (1..n - 1)
        .map(|i| interpolate(&xs, &moved.iter().map(|q| q[i].clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let zs: Vec<GaussQ> =
        moved.iter().enumerate().map(|(j, q)| q[n - 1].clone() - GaussQ::from_i64(j as i64 + 1)).collect();
    let q = interpolate(&xs, &zs)?;
    let marks: Vec<GaussQ> = (1..=points.len()).map(|j| GaussQ::from_i64(j as i64)).collect();
    let pz = interpolate(&marks, &xs)?;
    Ok(vec![lin, Step::ShearX { p, q }, Step::ShearZ { p: pz }])
}

/// Automorphism carrying `src[j]` to `dst[j]` for every `j`.
pub fn move_points(src: &[Point], dst: &[Point], n: usize) -> Result<PolyAuto> {
    if src.len() != dst.len() {
        return Err(Error::ShapeError(format!("{} sources but {} targets", src.len(), dst.len())));
    }
    let forward = normalizing_steps(src, n)?;
    let back = normalizing_steps(dst, n)?;
    let mut steps = forward;
    for s in back.iter().rev() {
        steps.push(s.inverse()?);
    }
    Ok(PolyAuto { n, steps })
}

fn ensure_polynomial<C: crate::scalar::Coeff>(e: &RationalExpr<C>) -> Result<()> {
    if e.den().as_constant().is_none() || !e.num().is_polynomial() {
        return Err(Error::NonPolynomial(e.to_string()));
    }
    Ok(())
}

/// Symbolic Jacobian determinant of polynomial components in `n` variables.
pub fn jacobian_determinant<C: crate::scalar::Coeff>(
    components: &[RationalExpr<C>],
    n: usize,
) -> Result<RationalExpr<C>> {
    if components.len() != n {
        return Err(Error::ShapeError(format!("{} components for {n} variables", components.len())));
    }
    for c in components {
        ensure_polynomial(c)?;
    }
    let jac: Matrix<RationalExpr<C>> =
        components.iter().map(|c| (0..n).map(|j| c.partial_derivative(j)).collect()).collect();
    Ok(linalg::det(&jac))
}

pub fn map_jacobian_determinant(f: &SmoothMap) -> Result<Expr> {
    if f.source().dim() != f.target().dim() {
        return Err(Error::ShapeError("Jacobian determinant needs equal dimensions".into()));
    }
    jacobian_determinant(f.components(), f.source().dim())
}

/// Real and imaginary parts of complex polynomial components, on the chart
/// `(x^1, y^1, .., x^n, y^n)` with `z^j = x^j + i y^j`.
pub fn realify_components(components: &[CExpr]) -> Result<SmoothMap> {
    let n = components.len();
    let chart: Arc<Chart> = Chart::new(2 * n).shared();
    let subs: Vec<CExpr> =
        (0..n).map(|j| &CExpr::var(2 * j) + &CExpr::var(2 * j + 1).scale(&GaussQ::i())).collect();
    let mut real = Vec::with_capacity(2 * n);
    for c in components {
        ensure_polynomial(c)?;
        let e = c.substitute(&subs)?;
        let d = e.den().as_constant().ok_or_else(|| Error::NonPolynomial(e.to_string()))?;
        let num = e.num().scale(&(GaussQ::one() / d));
        real.push(Expr::from_scalar(num.map_coeffs(|g| g.re.clone())));
        real.push(Expr::from_scalar(num.map_coeffs(|g| g.im.clone())));
    }
    SmoothMap::new(&chart, &chart, real)
}

/// Whether a real map of R^{2n} pulls `Re(dz^1 ^ .. ^ dz^n)` back to itself.
pub fn preserves_complex_volume(f: &SmoothMap) -> Result<bool> {
    let dim = f.source().dim();
    if dim % 2 != 0 || f.target().dim() != dim {
        return Err(Error::ShapeError("expected a self-map of an even-dimensional chart".into()));
    }
    let vol = complex_volume(dim / 2);
    Ok(pullback(f, &vol)? == vol)
}

#[derive(Clone, Debug)]
pub struct RealifyReport {
    /// Realification of each step, in order.
    pub steps: Vec<SmoothMap>,
    pub step_preserves: Vec<bool>,
    /// Every step preserves the form, hence so does the composition.
    pub preserves: bool,
}

impl RealifyReport {
    /// The composed real map. Expanding it can be expensive.
    pub fn composed(&self, n: usize) -> Result<SmoothMap> {
        let chart = Chart::new(2 * n).shared();
        self.steps.iter().try_fold(SmoothMap::identity(&chart), |acc, s| s.compose(&acc))
    }
}

pub fn realify_and_check(f: &PolyAuto) -> Result<RealifyReport> {
    let steps = f.steps.iter().map(|s| realify_components(&s.components(f.n))).collect::<Result<Vec<_>>>()?;
    let step_preserves = steps.iter().map(preserves_complex_volume).collect::<Result<Vec<_>>>()?;
    let preserves = step_preserves.iter().all(|b| *b);
    Ok(RealifyReport { steps, step_preserves, preserves })
}

/// Parse a Gaussian rational such as `1/2+3/4 i`, `-i` or `5`.
pub fn parse_point(items: &[String]) -> Result<Point> {
    items.iter().map(|s| crate::scalar::parse_gauss(s)).collect()
}
