use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Coefficient field for [`ScalarExpr`](super::ScalarExpr): either `Q` or the
/// Gaussian rationals.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_q(q: Q) -> Self;
    /// The value as a rational, when it has no imaginary part.
    fn to_q(&self) -> Option<Q>;
    /// Canonical text. `atomic` is true when the result can be juxtaposed with
    /// `*` without parentheses.
    fn render(&self) -> (String, bool);
    /// True when the canonical text starts with a minus sign that can be
    /// pulled out as a term separator.
    fn is_negative_real(&self) -> bool {
        self.to_q().map(|q| q.is_negative()).unwrap_or(false)
    }
    /// Exact `e`-th power for rational exponent `e`, when it stays in the field.
    fn rational_pow(&self, e: Rational64) -> Option<Self>;
    /// A square root of `-1`, if the field has one.
    fn imaginary_unit() -> Option<Self> {
        None
    }
}

/// Exact `n`-th root of a rational, if it is rational.
pub fn rational_root(x: &Q, n: u32) -> Option<Q> {
    if n == 1 {
        return Some(x.clone());
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    let neg = x.is_negative();
    if neg && n % 2 == 0 {
        return None;
    }
    let a = x.numer().abs();
    let b = x.denom().clone();
    let ra = a.nth_root(n);
    let rb = b.nth_root(n);
    if num_traits::pow(ra.clone(), n as usize) != a || num_traits::pow(rb.clone(), n as usize) != b {
        return None;
    }
    let r = Q::new(ra, rb);
    Some(if neg { -r } else { r })
}

/// Integer power (possibly negative) of a field element.
pub fn powi<C: Coeff>(x: &C, e: i64) -> Option<C> {
    if e == 0 {
        return Some(C::one());
    }
    if x.is_zero() && e < 0 {
        return None;
    }
    let mut acc = C::one();
    let mut base = x.clone();
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        base = base.clone() * base;
        k >>= 1;
    }
    Some(if e < 0 { C::one() / acc } else { acc })
}

pub fn render_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Coeff for Q {
    fn from_q(q: Q) -> Self {
        q
    }

    fn to_q(&self) -> Option<Q> {
        Some(self.clone())
    }

    fn render(&self) -> (String, bool) {
        (render_q(self), true)
    }

    fn rational_pow(&self, e: Rational64) -> Option<Self> {
        let n = e.denom().to_u32()?;
        let root = rational_root(self, n)?;
        powi(&root, *e.numer())
    }
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }

    pub fn i() -> Self {
        GaussQ { re: Q::zero(), im: Q::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        GaussQ::real(qi(n))
    }

    pub fn conj(&self) -> Self {
        GaussQ { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render().0)
    }
}

impl Zero for GaussQ {
    fn zero() -> Self {
        GaussQ::real(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussQ {
    fn one() -> Self {
        GaussQ::real(Q::one())
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ { re: -self.re, im: -self.im }
    }
}

impl Add for GaussQ {
    type Output = GaussQ;
    fn add(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussQ {
    type Output = GaussQ;
    fn sub(self, o: GaussQ) -> GaussQ {
        GaussQ { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussQ {
    type Output = GaussQ;
    fn mul(self, o: GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for GaussQ {
    type Output = GaussQ;
    fn div(self, o: GaussQ) -> GaussQ {
        let n = o.norm_sq();
        assert!(!n.is_zero(), "Gaussian rational division by zero");
        let p = self * o.conj();
        GaussQ { re: p.re / &n, im: p.im / n }
    }
}

impl Coeff for GaussQ {
    fn from_q(q: Q) -> Self {
        GaussQ::real(q)
    }

    fn to_q(&self) -> Option<Q> {
        if self.im.is_zero() {
            Some(self.re.clone())
        } else {
            None
        }
    }

    fn render(&self) -> (String, bool) {
        if self.im.is_zero() {
            return (render_q(&self.re), true);
        }
        let im = if self.im.is_one() {
            "i".to_string()
        } else if self.im == -Q::one() {
            "-i".to_string()
        } else {
            format!("{}*i", render_q(&self.im))
        };
        if self.re.is_zero() {
            let atomic = !self.im.is_negative();
            return (im, atomic);
        }
        let s = if self.im.is_negative() {
            format!("{} - {}", render_q(&self.re), im.trim_start_matches('-'))
        } else {
            format!("{} + {}", render_q(&self.re), im)
        };
        (s, false)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(GaussQ::i())
    }

    fn rational_pow(&self, e: Rational64) -> Option<Self> {
        if e.is_integer() {
            return powi(self, e.to_integer());
        }
        let r = self.to_q()?;
        r.rational_pow(e).map(GaussQ::real)
    }
}
