use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, RationalExpr};

/// A coordinate chart: dimension, variable names and the set of variables
/// constrained to be positive (the only ones allowed fractional exponents).
///
/// Charts are star-shaped around the origin by declaration; nothing checks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    dim: usize,
    names: Vec<String>,
    positive: BTreeSet<usize>,
}

impl Chart {
    /// `dim` variables named `x1..xdim`, none constrained.
    pub fn new(dim: usize) -> Self {
        Chart { dim, names: (1..=dim).map(|i| format!("x{i}")).collect(), positive: BTreeSet::new() }
    }

    pub fn named(names: Vec<String>) -> Result<Self> {
        let set: BTreeSet<&String> = names.iter().collect();
        if set.len() != names.len() {
            return Err(Error::ShapeError("chart variable names must be unique".into()));
        }
        Ok(Chart { dim: names.len(), names, positive: BTreeSet::new() })
    }

    /// Mark the given 0-based variables positive.
    pub fn with_positive(mut self, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        for v in vars {
            if v >= self.dim {
                return Err(Error::ShapeError(format!("positive variable x{} outside chart of dim {}", v + 1, self.dim)));
            }
            self.positive.insert(v);
        }
        Ok(self)
    }

    pub fn shared(self) -> Arc<Chart> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_positive(&self, var: usize) -> bool {
        self.positive.contains(&var)
    }

    pub fn positive(&self) -> impl Iterator<Item = usize> + '_ {
        self.positive.iter().copied()
    }

    /// Charts agree when dimensions and positivity constraints agree; names
    /// are cosmetic.
    pub fn compatible(&self, other: &Chart) -> bool {
        self.dim == other.dim && self.positive == other.positive
    }

    /// Check that an expression lives on this chart.
    pub fn check<C: Coeff>(&self, e: &RationalExpr<C>) -> Result<()> {
        if e.span() > self.dim {
            return Err(Error::ShapeError(format!(
                "expression uses x{} on a chart of dimension {}",
                e.span(),
                self.dim
            )));
        }
        for s in [e.num(), e.den()] {
            for (m, _) in s.terms() {
                for &(v, x) in m.iter() {
                    if !x.is_integer() && !self.is_positive(v) {
                        return Err(Error::DomainViolation(format!(
                            "fractional exponent on x{} which is not declared positive",
                            v + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Product chart with the variables of `other` appended.
    pub fn product(&self, other: &Chart) -> Chart {
        let mut names = self.names.clone();
        let taken: BTreeSet<String> = names.iter().cloned().collect();
        for (k, n) in other.names.iter().enumerate() {
            if taken.contains(n) {
                names.push(format!("x{}", self.dim + k + 1));
            } else {
                names.push(n.clone());
            }
        }
        let positive = self.positive.iter().copied().chain(other.positive.iter().map(|v| v + self.dim)).collect();
        Chart { dim: self.dim + other.dim, names, positive }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    #[test]
    fn fractional_exponents_need_positivity() {
        let e = parse_rational("x2^(1/2)").unwrap();
        assert!(matches!(Chart::new(2).check(&e), Err(Error::DomainViolation(_))));
        assert!(Chart::new(2).with_positive([1]).unwrap().check(&e).is_ok());
        assert!(matches!(Chart::new(1).check(&e), Err(Error::ShapeError(_))));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Chart::named(vec!["q".into(), "q".into()]).is_err());
    }
}
