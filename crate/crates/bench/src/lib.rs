//! Shared fixtures for the benchmarks.

use benney_core::numeric::{GridState, SimParams, DEFAULT_CFL};
use benney_core::{generate_eta_row, CanonicalOperator};

/// Row `k` of the basis matrix as a moment-only operator.
pub fn row_operator(k: usize, n: usize) -> CanonicalOperator {
    let row = generate_eta_row(k, n).expect("n > k");
    CanonicalOperator::moment_only(row.coords()).expect("moment-only coordinates")
}

/// Smooth four-moment data on `m` points with parameters for a short run.
pub fn smooth_run(m: usize, t_final: f64) -> (GridState, SimParams) {
    let s = GridState::gaussian_moments(3, m, 1.0).expect("valid grid");
    let p = SimParams::from_cfl(&s, DEFAULT_CFL, t_final).expect("valid step");
    (s, p)
}
