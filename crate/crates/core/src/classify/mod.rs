//! Linear and integrability classification of forms.

mod acs;
mod endo;
mod hitchin;
mod invariant;
mod nondeg;
mod normal;
mod sign;

pub use acs::{extract_acs, involutive, nijenhuis, InvolutivityReport};
pub use endo::EndField;
pub use hitchin::{
    classify6, classify6_linear, exact_sqrt, flatness_report, hitchin_endomorphism, order_parts, split_product,
    split_product_at, standard_volume, verify_product_parts, Flatness, FloatForm, LinearType, PointSplit,
    TypeReport, Witness, FLOAT_TOL,
};
pub use invariant::{product_invariants, solve_volume_contraction, ProductInvariants};
pub use nondeg::{contraction_rank, frame_rank, nondegenerate, verify_standard_subspace, NondegReport, StandardSubspaceReport};
pub use normal::*;
pub use sign::{determine_sign, sample_points, SignInfo};
