use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::{Expr, Q};

/// Marker for covariant (differential form) indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lower;
/// Marker for contravariant (multivector) indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Upper;

pub trait Variance: Clone + Copy + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    const BASIS: &'static str;
}
impl Variance for Lower {
    const BASIS: &'static str = "dx";
}
impl Variance for Upper {
    const BASIS: &'static str = "d/dx";
}

/// A sparse alternating tensor of fixed degree on a chart.
///
/// Keys are strictly increasing 0-based index tuples; zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct Graded<K: Variance> {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Expr>,
    _kind: PhantomData<K>,
}

pub type DiffForm = Graded<Lower>;
pub type MultiVec = Graded<Upper>;

/// Sort `idx` in place and return the permutation sign, or `None` when an
/// index repeats.
pub(crate) fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

impl<K: Variance> Graded<K> {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        Graded { chart: chart.clone(), degree, coeffs: BTreeMap::new(), _kind: PhantomData }
    }

    /// Build from `(indices, coefficient)` pairs; indices are 0-based, in any
    /// order, and are sorted with the matching sign.
    pub fn from_terms(
        chart: &Arc<Chart>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Expr)>,
    ) -> Result<Self> {
        let mut g = Self::zero(chart, degree);
        for (idx, c) in terms {
            g.add_term(idx, c)?;
        }
        Ok(g)
    }

    /// Build from 1-based index lists and coefficient strings in the
    /// expression grammar.
    pub fn parse(chart: &Arc<Chart>, degree: usize, terms: &[(&[usize], &str)]) -> Result<Self> {
        let mut g = Self::zero(chart, degree);
        for (idx, src) in terms {
            if idx.contains(&0) {
                return Err(Error::ShapeError("indices are 1-based".into()));
            }
            g.add_term(idx.iter().map(|i| i - 1).collect(), crate::scalar::parse_rational(src)?)?;
        }
        Ok(g)
    }

    /// The basis element with coefficient 1.
    pub fn basis(chart: &Arc<Chart>, idx: &[usize]) -> Result<Self> {
        Self::from_terms(chart, idx.len(), [(idx.to_vec(), Expr::one())])
    }

    /// A degree-0 element.
    pub fn scalar(chart: &Arc<Chart>, f: Expr) -> Self {
        let mut g = Self::zero(chart, 0);
        if !f.is_zero() {
            g.coeffs.insert(Vec::new(), f);
        }
        g
    }

    pub fn add_term(&mut self, mut idx: Vec<usize>, c: Expr) -> Result<()> {
        if idx.len() != self.degree {
            return Err(Error::ShapeError(format!(
                "index tuple of length {} in a degree-{} object",
                idx.len(),
                self.degree
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.chart.dim()) {
            return Err(Error::ShapeError(format!("index {} outside chart of dim {}", bad + 1, self.chart.dim())));
        }
        self.chart.check(&c)?;
        let Some(neg) = sort_sign(&mut idx) else {
            return Ok(());
        };
        let c = if neg { -c } else { c };
        self.insert_sorted(idx, c);
        Ok(())
    }

    /// Accumulate into a key known to be sorted and in range.
    pub(crate) fn insert_sorted(&mut self, idx: Vec<usize>, c: Expr) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&idx) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.coeffs.remove(&idx);
                } else {
                    *old = s;
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of the sorted index tuple `idx` (zero if absent).
    pub fn get(&self, idx: &[usize]) -> Expr {
        self.coeffs.get(idx).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn same_chart(&self, other: &Chart) -> Result<()> {
        if self.chart.compatible(other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// Re-home onto a compatible chart (for example one with nicer names).
    pub fn on_chart(&self, chart: &Arc<Chart>) -> Result<Self> {
        self.same_chart(chart)?;
        Ok(Graded { chart: chart.clone(), ..self.clone() })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_chart(&o.chart)?;
        if self.degree != o.degree {
            return Err(Error::DegreeError(format!("adding degree {} and degree {}", self.degree, o.degree)));
        }
        let mut out = self.clone();
        for (k, v) in &o.coeffs {
            out.insert_sorted(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        self.map_coeffs(|c| c * f)
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        self.map_coeffs(|c| c.scale(q))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(&self.chart, self.degree);
        for (k, v) in &self.coeffs {
            let c = f(v);
            if !c.is_zero() {
                out.coeffs.insert(k.clone(), c);
            }
        }
        out
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<Self> {
        let mut out = Self::zero(&self.chart, self.degree);
        for (k, v) in &self.coeffs {
            let c = f(v)?;
            if !c.is_zero() {
                out.coeffs.insert(k.clone(), c);
            }
        }
        Ok(out)
    }

    /// Every coefficient is a constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.values().all(Expr::is_constant)
    }

    /// Evaluate all coefficients at an exact point.
    pub fn eval_at(&self, point: &[Q]) -> Result<Self> {
        self.try_map_coeffs(|c| c.eval_exact(point).map(Expr::from_q))
    }

    /// Wedge product; the degree may exceed the chart dimension only for the
    /// zero result.
    pub fn wedge(&self, o: &Self) -> Result<Self> {
        self.same_chart(&o.chart)?;
        let mut out = Self::zero(&self.chart, self.degree + o.degree);
        if self.degree + o.degree > self.dim() {
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                if let Some((idx, neg)) = merge_sign(a, b) {
                    let c = ca * cb;
                    out.insert_sorted(idx, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn fmt_named(&self, f: &mut dyn fmt::Write) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let names = self.chart.names();
        for (k, (idx, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_char('(')?;
            c.fmt_with(f, Some(names))?;
            f.write_char(')')?;
            for &i in idx {
                write!(f, " {}{}", K::BASIS, names.get(i).map(String::as_str).unwrap_or("?"))?;
            }
        }
        Ok(())
    }
}

/// Merge two sorted disjoint index tuples, returning the sign of the shuffle.
pub(crate) fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut neg = false;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a-elements.
            if (a.len() - i) % 2 == 1 {
                neg = !neg;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, neg))
}

impl<K: Variance> PartialEq for Graded<K> {
    fn eq(&self, o: &Self) -> bool {
        self.chart.compatible(&o.chart)
            && self.degree == o.degree
            && self.coeffs.len() == o.coeffs.len()
            && self.coeffs.iter().all(|(k, v)| o.coeffs.get(k).is_some_and(|w| v == w))
    }
}

impl<K: Variance> fmt::Display for Graded<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_named(&mut s)?;
        f.write_str(&s)
    }
}

impl MultiVec {
    /// The vector field `sum comps[i] d/dx_i`.
    pub fn vector(chart: &Arc<Chart>, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != chart.dim() {
            return Err(Error::ShapeError(format!("{} components on a chart of dim {}", comps.len(), chart.dim())));
        }
        Self::from_terms(chart, 1, comps.into_iter().enumerate().map(|(i, c)| (vec![i], c)))
    }

    /// Components of a degree-1 multivector.
    pub fn components(&self) -> Result<Vec<Expr>> {
        if self.degree != 1 {
            return Err(Error::DegreeError(format!("expected a vector field, got degree {}", self.degree)));
        }
        Ok((0..self.dim()).map(|i| self.get(&[i])).collect())
    }
}

impl DiffForm {
    /// Components of a 1-form.
    pub fn components(&self) -> Result<Vec<Expr>> {
        if self.degree != 1 {
            return Err(Error::DegreeError(format!("expected a 1-form, got degree {}", self.degree)));
        }
        Ok((0..self.dim()).map(|i| self.get(&[i])).collect())
    }

    /// The coordinate 1-form `dx_i`.
    pub fn dx(chart: &Arc<Chart>, i: usize) -> Result<Self> {
        Self::basis(chart, &[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_sign() {
        assert_eq!(merge_sign(&[1], &[0]), Some((vec![0, 1], true)));
        assert_eq!(merge_sign(&[0, 2], &[1, 3]), Some((vec![0, 1, 2, 3], true)));
        assert_eq!(merge_sign(&[0, 1], &[2, 3]), Some((vec![0, 1, 2, 3], false)));
        assert_eq!(merge_sign(&[0, 1], &[1]), None);
    }

    #[test]
    fn sorting_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_sign(&mut v), Some(false));
        let mut v = vec![1, 0];
        assert_eq!(sort_sign(&mut v), Some(true));
        let mut v = vec![1, 1];
        assert_eq!(sort_sign(&mut v), None);
    }
}
