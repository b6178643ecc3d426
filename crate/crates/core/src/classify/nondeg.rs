use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exterior::{contraction_kernel, contraction_matrix, interior, DiffForm, MultiVec};
use crate::linalg;
use crate::scalar::{Expr, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct NondegReport {
    pub nondegenerate: bool,
    /// A basis of the kernel of `v -> iota_v w`; empty when non-degenerate.
    pub kernel: Vec<MultiVec>,
}

/// Test injectivity of `v -> iota_v w`, at a point or over the fraction
/// field when `point` is `None`.
pub fn nondegenerate(w: &DiffForm, point: Option<&[Q]>) -> Result<NondegReport> {
    if w.degree() < 2 {
        return Err(Error::DegreeError(format!("non-degeneracy of a {}-form", w.degree())));
    }
    let w = match point {
        Some(p) => w.eval_at(p)?,
        None => w.clone(),
    };
    let kernel = contraction_kernel(&w)?;
    Ok(NondegReport { nondegenerate: kernel.is_empty(), kernel })
}

pub(crate) fn frame_matrix(frame: &[MultiVec]) -> Result<linalg::Matrix<Expr>> {
    frame.iter().map(MultiVec::components).collect()
}

/// Rank of the frame over the fraction field.
pub fn frame_rank(frame: &[MultiVec]) -> Result<usize> {
    if frame.is_empty() {
        return Ok(0);
    }
    Ok(linalg::rank(&frame_matrix(frame)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StandardSubspaceReport {
    pub standard: bool,
    /// First pair `(i, j)` of frame vectors with `iota_{u_i ^ u_j} w != 0`.
    pub isotropy_witness: Option<(usize, usize, DiffForm)>,
    /// Rank of `W -> Lambda^n (V/W)^*`.
    pub induced_rank: usize,
    /// Dimension of `Lambda^n (V/W)^*`.
    pub target_dim: usize,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Check that the span of `frame` is a standard subspace for the
/// `(n+1)`-form `w`: `iota_{u ^ v} w = 0` on `W` and `W -> Lambda^n (V/W)^*`
/// is an isomorphism.
pub fn verify_standard_subspace(w: &DiffForm, frame: &[MultiVec]) -> Result<StandardSubspaceReport> {
    for u in frame {
        u.same_chart(w.chart())?;
    }
    let r = frame.len();
    if frame_rank(frame)? < r {
        return Err(Error::DependentFrame);
    }
    if w.degree() < 2 {
        return Err(Error::DegreeError("standard subspaces need degree at least 2".into()));
    }
    let n = w.degree() - 1;
    let dim = w.dim();
    let target_dim = binomial(dim - r, n);
    for i in 0..r {
        let iu = interior(&frame[i], w)?;
        for (j, v) in frame.iter().enumerate().skip(i + 1) {
            let c = interior(v, &iu)?;
            if !c.is_zero() {
                return Ok(StandardSubspaceReport {
                    standard: false,
                    isotropy_witness: Some((i, j, c)),
                    induced_rank: 0,
                    target_dim,
                });
            }
        }
    }
    // Complete W by standard basis vectors; those span a complement.
    let mut rows = frame_matrix(frame)?;
    let mut complement = Vec::new();
    for k in 0..dim {
        let mut e = vec![Expr::zero(); dim];
        e[k] = num_traits::One::one();
        rows.push(e);
        if linalg::rank(&rows) == r + complement.len() + 1 {
            complement.push(k);
        } else {
            rows.pop();
        }
    }
    let subsets = subsets(&complement, n);
    let cols: Vec<DiffForm> = frame.iter().map(|u| interior(u, w)).collect::<Result<_>>()?;
    let m: linalg::Matrix<Expr> = subsets.iter().map(|s| cols.iter().map(|c| c.get(s)).collect()).collect();
    let induced_rank = if m.is_empty() { 0 } else { linalg::rank(&m) };
    Ok(StandardSubspaceReport {
        standard: induced_rank == r && r == target_dim,
        isotropy_witness: None,
        induced_rank,
        target_dim,
    })
}

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Rank of `v -> iota_v w` over the fraction field.
pub fn contraction_rank(w: &DiffForm) -> Result<usize> {
    let (_, m) = contraction_matrix(w)?;
    Ok(if m.is_empty() { 0 } else { linalg::rank(&m) })
}
