use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coeff::{powi, Coeff, Q};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// A finite sum `sum c_m * m` of monomials with rational exponents.
///
/// Terms are keyed by monomial in graded-lex order; zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarExpr<C: Coeff = Q> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for ScalarExpr<C> {
    fn default() -> Self {
        ScalarExpr { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> ScalarExpr<C> {
    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Monomial::var(i))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ScalarExpr { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut e = ScalarExpr::default();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn single_term(&self) -> Option<(&Monomial, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// One past the largest variable index occurring.
    pub fn span(&self) -> usize {
        self.terms.keys().map(Monomial::span).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| !m.exponent(var).is_zero())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_natural)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ScalarExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        ScalarExpr {
            terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = ScalarExpr::default();
        for (m, c) in &self.terms {
            if let Some((e, dm)) = m.derivative(var) {
                out.add_term(dm, c.clone() * C::from_q(ratio_to_q(e)));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ScalarExpr<D> {
        ScalarExpr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Componentwise minimum monomial over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Substitute polynomial values for the variables. Only natural exponents
    /// are allowed here; the rational-function case lives on
    /// [`RationalExpr::substitute`](super::RationalExpr::substitute).
    pub fn substitute_poly(&self, values: &[ScalarExpr<C>]) -> Result<ScalarExpr<C>> {
        let mut out = ScalarExpr::default();
        for (m, c) in &self.terms {
            let mut t = ScalarExpr::constant(c.clone());
            for &(v, e) in m.iter() {
                if !e.is_integer() || e.is_negative() {
                    return Err(Error::NonPolynomial(format!("exponent {e} on x{}", v + 1)));
                }
                let val = values
                    .get(v)
                    .ok_or_else(|| Error::ShapeError(format!("no value for x{}", v + 1)))?;
                t = &t * &val.pow(e.to_integer() as u32);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact evaluation when every exponent is an integer.
    pub fn eval_integral(&self, point: &[C]) -> Result<C> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.iter() {
                let x = point
                    .get(v)
                    .ok_or_else(|| Error::ShapeError(format!("point has no x{}", v + 1)))?;
                if !e.is_integer() {
                    let p = x.rational_pow(e).ok_or_else(|| {
                        Error::IrrationalValue(format!("x{}^({e}) at {x:?}", v + 1))
                    })?;
                    t = t * p;
                    continue;
                }
                let p = powi(x, e.to_integer()).ok_or(Error::DivisionByZero)?;
                t = t * p;
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    pub fn fmt_with(&self, f: &mut dyn fmt::Write, names: Option<&[String]>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_real();
            let c = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let (cs, atomic) = c.render();
            if m.is_one() {
                if atomic {
                    f.write_str(&cs)?;
                } else {
                    write!(f, "({cs})")?;
                }
                continue;
            }
            if !c.is_one() {
                if atomic {
                    write!(f, "{cs}*")?;
                } else {
                    write!(f, "({cs})*")?;
                }
            }
            m.fmt_with(f, names)?;
        }
        Ok(())
    }
}

impl ScalarExpr<Q> {
    /// Exact evaluation at a rational point. Fractional powers must come out
    /// rational; nonpositive bases under fractional exponents are rejected.
    pub fn eval_exact(&self, point: &[Q]) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.iter() {
                let x = point
                    .get(v)
                    .ok_or_else(|| Error::ShapeError(format!("point has no x{}", v + 1)))?;
                if !e.is_integer() && !x.is_positive() {
                    return Err(Error::DomainViolation(format!(
                        "x{} = {x} under fractional exponent {e}",
                        v + 1
                    )));
                }
                if x.is_zero() && e.is_negative() {
                    return Err(Error::DivisionByZero);
                }
                let p = x.rational_pow(e).ok_or_else(|| {
                    Error::IrrationalValue(format!("x{}^({e}) at x{} = {x}", v + 1, v + 1))
                })?;
                t *= p;
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_float(&self, point: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for &(v, e) in m.iter() {
                let x = *point
                    .get(v)
                    .ok_or_else(|| Error::ShapeError(format!("point has no x{}", v + 1)))?;
                if !e.is_integer() && x <= 0.0 {
                    return Err(Error::DomainViolation(format!(
                        "x{} = {x} under fractional exponent {e}",
                        v + 1
                    )));
                }
                if e.is_integer() {
                    t *= x.powi(e.to_integer() as i32);
                } else {
                    t *= x.powf(*e.numer() as f64 / *e.denom() as f64);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

pub(crate) fn ratio_to_q(e: Rational64) -> Q {
    Q::new((*e.numer()).into(), (*e.denom()).into())
}

impl<C: Coeff> Zero for ScalarExpr<C> {
    fn zero() -> Self {
        ScalarExpr::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for ScalarExpr<C> {
    fn one() -> Self {
        ScalarExpr::constant(C::one())
    }
}

impl<'a, C: Coeff> Add<&'a ScalarExpr<C>> for &'a ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn add(self, o: &ScalarExpr<C>) -> ScalarExpr<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Sub<&'a ScalarExpr<C>> for &'a ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn sub(self, o: &ScalarExpr<C>) -> ScalarExpr<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Coeff> Mul<&'a ScalarExpr<C>> for &'a ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn mul(self, o: &ScalarExpr<C>) -> ScalarExpr<C> {
        let mut out = ScalarExpr::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn neg(self) -> ScalarExpr<C> {
        ScalarExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Add for ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<C: Coeff> Sub for ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<C: Coeff> Mul for ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<C: Coeff> Neg for ScalarExpr<C> {
    type Output = ScalarExpr<C>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: Coeff> fmt::Display for ScalarExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_with(&mut s, None)?;
        f.write_str(&s)
    }
}
