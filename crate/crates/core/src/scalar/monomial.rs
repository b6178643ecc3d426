use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// A power product `x_{i1}^{e1} * x_{i2}^{e2} * ...` with rational exponents.
///
/// Stored sparsely as `(variable, exponent)` pairs sorted by variable index;
/// zero exponents are never stored, so the empty monomial is `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(usize, Rational64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i, Rational64::one())])
    }

    pub fn var_pow(i: usize, e: Rational64) -> Self {
        if e.is_zero() {
            Monomial::one()
        } else {
            Monomial(vec![(i, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(usize, Rational64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(usize, Rational64)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|p| !p.1.is_zero());
        Monomial(out)
    }

    pub fn from_dense(exps: &[Rational64]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(i, e)| (i, *e))
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, var: usize) -> Rational64 {
        self.0
            .iter()
            .find(|p| p.0 == var)
            .map(|p| p.1)
            .unwrap_or_else(Rational64::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Rational64)> {
        self.0.iter()
    }

    /// Largest variable index that occurs, plus one.
    pub fn span(&self) -> usize {
        self.0.last().map(|p| p.0 + 1).unwrap_or(0)
    }

    pub fn degree(&self) -> Rational64 {
        self.0.iter().fold(Rational64::zero(), |acc, p| acc + p.1)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|p| p.1.is_integer())
    }

    /// Every exponent is a nonnegative integer.
    pub fn is_natural(&self) -> bool {
        self.0.iter().all(|p| p.1.is_integer() && !p.1.is_negative())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    let e = a.1 + b.1;
                    if !e.is_zero() {
                        out.push((a.0, e));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    pub fn pow(&self, e: Rational64) -> Monomial {
        if e.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, x)| (v, x * e)).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, x)| (v, -x)).collect())
    }

    /// Componentwise minimum of exponents (absent variables count as 0).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut vars: Vec<usize> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial::from_pairs(
            vars.into_iter()
                .map(|v| {
                    let (a, b) = (self.exponent(v), other.exponent(v));
                    (v, if a < b { a } else { b })
                })
                .collect(),
        )
    }

    /// Partial derivative `d/dx_var`: returns the exponent factor and the new monomial.
    pub fn derivative(&self, var: usize) -> Option<(Rational64, Monomial)> {
        let e = self.exponent(var);
        if e.is_zero() {
            return None;
        }
        Some((e, self.mul(&Monomial::var_pow(var, -Rational64::one()))))
    }

    pub fn remove_var(&self, var: usize) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| p.0 != var).collect())
    }

    pub fn fmt_with(&self, f: &mut dyn fmt::Write, names: Option<&[String]>) -> fmt::Result {
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char('*')?;
            }
            match names.and_then(|n| n.get(v)) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "x{}", v + 1)?,
            }
            if e != Rational64::one() {
                f.write_str(&fmt_exponent(e))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn fmt_exponent(e: Rational64) -> String {
    if e.is_integer() {
        if e.is_negative() {
            format!("^({})", e.to_integer())
        } else {
            format!("^{}", e.to_integer())
        }
    } else {
        format!("^({}/{})", e.numer(), e.denom())
    }
}

/// Graded lexicographic order: total degree first, then the first variable
/// (by index) where the exponents differ decides.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.0.get(i);
            let b = other.0.get(j);
            let (va, vb) = match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some(a), None) => (a.0, usize::MAX),
                (None, Some(b)) => (usize::MAX, b.0),
                (Some(a), Some(b)) => (a.0, b.0),
            };
            let v = va.min(vb);
            let ea = if va == v { a.unwrap().1 } else { Rational64::zero() };
            let eb = if vb == v { b.unwrap().1 } else { Rational64::zero() };
            match ea.cmp(&eb) {
                Ordering::Equal => {
                    if va == v {
                        i += 1;
                    }
                    if vb == v {
                        j += 1;
                    }
                }
                o => return o,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut s = String::new();
        self.fmt_with(&mut s, None)?;
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn grlex_orders_by_degree_then_first_variable() {
        let x1 = Monomial::var(0);
        let x2 = Monomial::var(1);
        let x1x2 = x1.mul(&x2);
        let x2sq = x2.mul(&x2);
        assert!(x1 > x2);
        assert!(x1x2 > x2sq);
        assert!(x2sq > x1);
        assert!(Monomial::var_pow(1, r(1, 2)) < x2);
    }

    #[test]
    fn mul_cancels_to_one() {
        let m = Monomial::var_pow(1, r(1, 2));
        assert!(m.mul(&m.inv()).is_one());
        assert_eq!(m.mul(&m), Monomial::var(1));
    }

    #[test]
    fn gcd_takes_minimum() {
        let a = Monomial::from_pairs(vec![(0, r(2, 1)), (1, r(1, 1))]);
        let b = Monomial::from_pairs(vec![(0, r(1, 1)), (2, r(3, 1))]);
        assert_eq!(a.gcd(&b), Monomial::var(0));
    }
}
