//! Exact scalar arithmetic: Laurent-Puiseux polynomials with rational or
//! Gaussian-rational coefficients, and quotients of them.

mod coeff;
mod expr;
mod monomial;
mod parse;
mod rational;

pub use coeff::{powi, q, qi, rational_root, render_q, Coeff, GaussQ, Q};
pub use expr::ScalarExpr;
#[allow(unused_imports)]
pub(crate) use expr::ratio_to_q;
pub use monomial::Monomial;
pub use parse::{parse_expr, parse_gauss, parse_rational};
pub use rational::{Expr, RationalExpr};
