//! Fixed inputs shared by the benchmarks in `benches/`.

use nplectic::classify::omega_f;
use nplectic::exterior::DiffForm;
use nplectic::scalar::{q, GaussQ};
use nplectic::{Chart, Expr};

/// `omega^f` with `f = x2` on the chart where `x2 > 0`.
pub fn omega_x2() -> DiffForm {
    let chart = Chart::new(6).with_positive([1]).expect("in range").shared();
    omega_f(&chart, Expr::var(1)).expect("6-dimensional")
}

/// `k` distinct points of C^n on a fixed lattice pattern.
pub fn lattice_points(n: usize, k: usize, shift: i64) -> Vec<Vec<GaussQ>> {
    (0..k as i64)
        .map(|j| (0..n as i64).map(|i| GaussQ::new(q(j * (i + 2) + shift, 1), q(i - j, 3))).collect())
        .collect()
}
