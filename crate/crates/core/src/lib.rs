//! Exact-arithmetic multisymplectic geometry on coordinate charts.

pub mod chart;
pub mod classify;
pub mod error;
pub mod exterior;
pub mod hdw;
pub mod linalg;
pub mod liesym;
pub mod mover;
pub mod linfty;
pub mod scalar;

pub use chart::Chart;
pub use error::{Error, Result};
pub use exterior::{DiffForm, MultiVec, SmoothMap};
pub use scalar::{Coeff, Expr, GaussQ, Monomial, RationalExpr, ScalarExpr, Q};
