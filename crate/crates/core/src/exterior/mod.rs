//! Sparse exterior calculus on a chart.

mod calculus;
mod graded;
mod map;

pub use calculus::{
    apply_vector, contraction_kernel, contraction_matrix, evaluate_on, ext_d, interior, lie_bracket, lie_derivative,
    poincare_homotopy, pullback_by_matrix, solve_contraction,
};
pub(crate) use graded::sort_sign;
pub use graded::{DiffForm, Graded, Lower, MultiVec, Upper, Variance};
pub use map::{linear_map, pullback, pushforward_at, SmoothMap};
