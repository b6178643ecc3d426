use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::coeff::{Coeff, Q};
use super::expr::ScalarExpr;
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// A quotient of two [`ScalarExpr`]s.
///
/// Normal form: monomial content of the denominator is moved to the numerator
/// (negative exponents are allowed), and the denominator is monic in graded-lex
/// order. Monomial denominators therefore always normalize to `1`. No further
/// gcd cancellation is attempted; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalExpr<C: Coeff = Q> {
    num: ScalarExpr<C>,
    den: ScalarExpr<C>,
}

/// Coefficients of geometric objects: rational functions over `Q`.
pub type Expr = RationalExpr<Q>;

impl<C: Coeff> RationalExpr<C> {
    pub fn new(num: ScalarExpr<C>, den: ScalarExpr<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_scalar(num: ScalarExpr<C>) -> Self {
        RationalExpr { num, den: ScalarExpr::one() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_scalar(ScalarExpr::constant(c))
    }

    pub fn from_q(q: Q) -> Self {
        Self::constant(C::from_q(q))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_q(Q::from_integer(n.into()))
    }

    pub fn var(i: usize) -> Self {
        Self::from_scalar(ScalarExpr::var(i))
    }

    pub fn monomial(c: C, m: Monomial) -> Self {
        Self::from_scalar(ScalarExpr::term(c, m))
    }

    pub fn var_pow(i: usize, e: Rational64) -> Self {
        Self::monomial(C::one(), Monomial::var_pow(i, e))
    }

    fn normalized(mut num: ScalarExpr<C>, mut den: ScalarExpr<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = den.monomial_content();
        if !g.is_one() {
            let gi = g.inv();
            den = den.mul_monomial(&gi);
            num = num.mul_monomial(&gi);
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lc.is_one() {
            let inv = C::one() / lc;
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        if den.is_one() {
            return RationalExpr { num, den };
        }
        // Detect num = c * m * den.
        if num.len() == den.len() {
            let (mn, cn) = num.leading().expect("nonzero");
            let (md, _) = den.leading().expect("nonzero");
            let m = mn.mul(&md.inv());
            let c = cn.clone();
            if den.mul_monomial(&m).scale(&c) == num {
                return Self::monomial(c, m);
            }
        }
        RationalExpr { num, den }
    }

    pub fn num(&self) -> &ScalarExpr<C> {
        &self.num
    }

    pub fn den(&self) -> &ScalarExpr<C> {
        &self.den
    }

    /// The numerator when the denominator is `1`.
    pub fn as_scalar(&self) -> Option<&ScalarExpr<C>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    pub fn span(&self) -> usize {
        self.num.span().max(self.den.span())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if o.den.is_one() && self.den.is_one() {
            return Self::new(self.num.clone(), o.num.clone());
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RationalExpr::normalized(base.num.pow(k), base.den.pow(k)))
    }

    /// `self^e` for rational `e`. Fractional powers are supported only for a
    /// single monomial with a coefficient whose root stays in the field.
    pub fn pow_rational(&self, e: Rational64) -> Result<Self> {
        if e.is_integer() {
            return self.powi(e.to_integer());
        }
        if self.is_zero() {
            return if e > Rational64::zero() {
                Ok(Self::zero())
            } else {
                Err(Error::DivisionByZero)
            };
        }
        let (m, c) = self
            .as_scalar()
            .and_then(|s| s.single_term())
            .ok_or_else(|| Error::IrrationalValue(format!("({self})^({e}) of a non-monomial")))?;
        let ce = c
            .rational_pow(e)
            .ok_or_else(|| Error::IrrationalValue(format!("({:?})^({e})", c)))?;
        Ok(Self::monomial(ce, m.pow(e)))
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        if self.den.is_one() {
            return Self::from_scalar(self.num.derivative(var));
        }
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return RationalExpr::normalized(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RationalExpr::normalized(num, self.den.pow(2))
    }

    /// Replace each variable `x_i` by `values[i]`.
    pub fn substitute(&self, values: &[RationalExpr<C>]) -> Result<Self> {
        let n = substitute_scalar(&self.num, values)?;
        if self.den.is_one() {
            return Ok(n);
        }
        let d = substitute_scalar(&self.den, values)?;
        n.checked_div(&d)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> RationalExpr<D> {
        RationalExpr::normalized(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    pub fn eval_integral(&self, point: &[C]) -> Result<C> {
        let d = self.den.eval_integral(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_integral(point)? / d)
    }

    pub fn fmt_with(&self, f: &mut dyn fmt::Write, names: Option<&[String]>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f, names);
        }
        f.write_char('(')?;
        self.num.fmt_with(f, names)?;
        f.write_str(")/(")?;
        self.den.fmt_with(f, names)?;
        f.write_char(')')
    }
}

fn substitute_scalar<C: Coeff>(s: &ScalarExpr<C>, values: &[RationalExpr<C>]) -> Result<RationalExpr<C>> {
    let mut acc = RationalExpr::zero();
    for (m, c) in s.terms() {
        let mut t = RationalExpr::constant(c.clone());
        for &(v, e) in m.iter() {
            let val = values
                .get(v)
                .ok_or_else(|| Error::ShapeError(format!("no value for x{}", v + 1)))?;
            t = &t * &val.pow_rational(e)?;
        }
        acc = &acc + &t;
    }
    Ok(acc)
}

impl Expr {
    pub fn eval_exact(&self, point: &[Q]) -> Result<Q> {
        let d = self.den.eval_exact(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_exact(point)? / d)
    }

    pub fn eval_float(&self, point: &[f64]) -> Result<f64> {
        Ok(self.num.eval_float(point)? / self.den.eval_float(point)?)
    }
}

impl<C: Coeff> PartialEq for RationalExpr<C> {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl<C: Coeff> Zero for RationalExpr<C> {
    fn zero() -> Self {
        RationalExpr { num: ScalarExpr::zero(), den: ScalarExpr::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Coeff> One for RationalExpr<C> {
    fn one() -> Self {
        Self::from_scalar(ScalarExpr::one())
    }
}

impl<'a, C: Coeff> Add<&'a RationalExpr<C>> for &'a RationalExpr<C> {
    type Output = RationalExpr<C>;
    fn add(self, o: &RationalExpr<C>) -> RationalExpr<C> {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return RationalExpr::normalized(&self.num + &o.num, self.den.clone());
        }
        if self.den.is_one() {
            return RationalExpr::normalized(&(&self.num * &o.den) + &o.num, o.den.clone());
        }
        if o.den.is_one() {
            return RationalExpr::normalized(&self.num + &(&o.num * &self.den), self.den.clone());
        }
        RationalExpr::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a, C: Coeff> Sub<&'a RationalExpr<C>> for &'a RationalExpr<C> {
    type Output = RationalExpr<C>;
    fn sub(self, o: &RationalExpr<C>) -> RationalExpr<C> {
        self + &(-o)
    }
}

impl<'a, C: Coeff> Mul<&'a RationalExpr<C>> for &'a RationalExpr<C> {
    type Output = RationalExpr<C>;
    fn mul(self, o: &RationalExpr<C>) -> RationalExpr<C> {
        if self.is_zero() || o.is_zero() {
            return RationalExpr::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalExpr::from_scalar(&self.num * &o.num);
        }
        RationalExpr::normalized(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<C: Coeff> Neg for &RationalExpr<C> {
    type Output = RationalExpr<C>;
    fn neg(self) -> RationalExpr<C> {
        RationalExpr { num: -&self.num, den: self.den.clone() }
    }
}

impl<C: Coeff> Add for RationalExpr<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<C: Coeff> Sub for RationalExpr<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<C: Coeff> Mul for RationalExpr<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

/// Panics on division by zero; use [`RationalExpr::checked_div`] for a
/// fallible version.
impl<C: Coeff> Div for RationalExpr<C> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self.checked_div(&o).expect("division by the zero expression")
    }
}

impl<C: Coeff> Neg for RationalExpr<C> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: Coeff> fmt::Display for RationalExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_with(&mut s, None)?;
        f.write_str(&s)
    }
}

impl<C: Coeff> From<ScalarExpr<C>> for RationalExpr<C> {
    fn from(s: ScalarExpr<C>) -> Self {
        Self::from_scalar(s)
    }
}
