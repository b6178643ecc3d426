use num_bigint::BigInt;
use num_rational::Rational64;

use super::coeff::{Coeff, GaussQ, Q};
use super::rational::RationalExpr;
use crate::error::{Error, Result};

/// Parse an expression in the workbench grammar:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
/// unary  := ('-' | '+') unary | power
/// power  := atom ('^' exponent)?
/// exponent := int | '-' int | '(' ['-'] int ['/' int] ')'
/// atom   := int | 'x' digits | 'i' | '(' expr ')'
/// ```
///
/// Variables are 1-based in the text and 0-based in the result. The
/// imaginary unit `i` is accepted only when `allow_i` is set.
pub fn parse_expr<C: Coeff>(src: &str, allow_i: bool) -> Result<RationalExpr<C>> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, allow_i };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected character"));
    }
    Ok(e)
}

pub fn parse_rational(src: &str) -> Result<RationalExpr<Q>> {
    parse_expr(src, false)
}

/// Parse a constant Gaussian rational such as `1/2 - 3/4 i`.
pub fn parse_gauss(src: &str) -> Result<GaussQ> {
    let e: RationalExpr<GaussQ> = parse_expr(src, true)?;
    e.as_constant().ok_or_else(|| Error::Parse {
        position: 0,
        message: format!("`{src}` is not a constant"),
    })
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    allow_i: bool,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { position: self.pos, message: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<C: Coeff>(&mut self) -> Result<RationalExpr<C>> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Coeff>(&mut self) -> Result<RationalExpr<C>> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|e| match e {
                        Error::DivisionByZero => Error::Parse {
                            position: at,
                            message: "division by zero".into(),
                        },
                        other => other,
                    })?;
                }
                Some(c) if c == b'(' || c == b'x' || c.is_ascii_digit() || c == b'i' || c.is_ascii_alphabetic() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary<C: Coeff>(&mut self) -> Result<RationalExpr<C>> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power<C: Coeff>(&mut self) -> Result<RationalExpr<C>> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = self.exponent()?;
        base.pow_rational(e).map_err(|err| match err {
            Error::IrrationalValue(m) | Error::NotLaurent(m) => Error::Parse { position: at, message: m },
            Error::DivisionByZero => Error::Parse { position: at, message: "zero to a negative power".into() },
            other => other,
        })
    }

    fn exponent(&mut self) -> Result<Rational64> {
        self.skip_ws();
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.small_int()?;
            let d = if self.eat(b'/') { self.small_int()? } else { 1 };
            if d == 0 {
                return Err(self.err("zero denominator in exponent"));
            }
            if !self.eat(b')') {
                return Err(self.err("expected `)` after exponent"));
            }
            let r = Rational64::new(n, d);
            return Ok(if neg { -r } else { r });
        }
        let neg = self.eat(b'-');
        let n = self.small_int()?;
        Ok(Rational64::from_integer(if neg { -n } else { n }))
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.s[start..self.pos]).ok().map(str::to_string)
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let Some(d) = self.digits() else {
            return Err(self.err("expected an integer"));
        };
        d.parse().map_err(|_| self.err("integer too large"))
    }

    fn atom<C: Coeff>(&mut self) -> Result<RationalExpr<C>> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("digit present");
                let n: BigInt = d.parse().expect("decimal digits");
                Ok(RationalExpr::from_q(Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
                if word == "i" {
                    if !self.allow_i {
                        self.pos = start;
                        return Err(self.err("imaginary unit `i` is not allowed here"));
                    }
                    let i = C::imaginary_unit().ok_or_else(|| Error::Parse {
                        position: start,
                        message: "coefficient field has no imaginary unit".into(),
                    })?;
                    return Ok(RationalExpr::constant(i));
                }
                if let Some(idx) = word.strip_prefix('x') {
                    if !idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit()) {
                        let k: usize = idx.parse().map_err(|_| Error::Parse {
                            position: start,
                            message: "variable index too large".into(),
                        })?;
                        if k == 0 {
                            self.pos = start;
                            return Err(self.err("variables are numbered from x1"));
                        }
                        return Ok(RationalExpr::var(k - 1));
                    }
                }
                self.pos = start;
                Err(self.err(&format!("unknown identifier `{word}`")))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
