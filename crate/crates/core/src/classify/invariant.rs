use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior, DiffForm, MultiVec};

use super::hitchin::split_product;
use super::nondeg::subsets;

/// The unique multivector `xi` with `iota_xi vol = beta`, where `vol` is a
/// top-degree form with nonvanishing coefficient.
pub fn solve_volume_contraction(vol: &DiffForm, beta: &DiffForm) -> Result<MultiVec> {
    let chart = vol.chart();
    beta.same_chart(chart)?;
    let n = chart.dim();
    if vol.degree() != n {
        return Err(Error::DegreeError(format!("expected a {n}-form, got degree {}", vol.degree())));
    }
    if vol.is_zero() {
        return Err(Error::SingularVolume);
    }
    if beta.degree() > n {
        return Err(Error::DegreeError(format!("degree {} exceeds dimension {n}", beta.degree())));
    }
    let k = n - beta.degree();
    let all: Vec<usize> = (0..n).collect();
    let mut xi = MultiVec::zero(chart, k);
    for idx in subsets(&all, k) {
        // iota_{e_I} vol = c dx^{I^c} for a single coefficient c.
        let img = interior(&MultiVec::basis(chart, &idx)?, vol)?;
        let (comp, c) = img.terms().next().map(|(i, c)| (i.clone(), c.clone())).ok_or(Error::SingularVolume)?;
        let b = beta.get(&comp);
        if !b.is_zero() {
            xi.add_term(idx, b.checked_div(&c)?)?;
        }
    }
    Ok(xi)
}

/// Invariant tensors of a product-type 3-form `w = w1 + w2` in dimension 6.
#[derive(Clone, Debug)]
pub struct ProductInvariants {
    pub w1: DiffForm,
    pub w2: DiffForm,
    /// `w1 ^ w2`.
    pub volume: DiffForm,
    pub d_w1: DiffForm,
    /// Solves `iota_xi volume = d w1`.
    pub xi: MultiVec,
    /// `iota_xi iota_xi volume`.
    pub xi_xi_volume: DiffForm,
}

pub fn product_invariants(w: &DiffForm) -> Result<ProductInvariants> {
    let (w1, w2) = split_product(w)?;
    let volume = w1.wedge(&w2)?;
    let d_w1 = ext_d(&w1);
    let xi = solve_volume_contraction(&volume, &d_w1)?;
    let xi_xi_volume = interior(&xi, &d_w1)?;
    Ok(ProductInvariants { w1, w2, volume, d_w1, xi, xi_xi_volume })
}
