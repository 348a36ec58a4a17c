//! Finite forms of the translation, Galilean and scaling generators, and the
//! commutation defect with the integrator.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{binomial, evolve, GridState, NumericError, SimParams};
use crate::operator::PointGeneratorId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransformOptions {
    /// Scale `A^i` by `λ^{i+1}` instead of `λ^{i+2}`; a negative control.
    pub corrupt_scaling_weights: bool,
}

/// `f(x - s)` on the periodic grid of length `length`. Whole-cell shifts are
/// exact index rolls; anything else goes through the discrete Fourier series.
fn shift(f: &[f64], s: f64, length: f64) -> Vec<f64> {
    let m = f.len();
    let cells = s / (length / m as f64);
    if (cells - cells.round()).abs() < 1e-9 {
        let r = (cells.round() as i64).rem_euclid(m as i64) as usize;
        return (0..m).map(|j| f[(j + m - r) % m]).collect();
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);
    let mut buf: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let freq = if j < m.div_ceil(2) {
            j as f64
        } else {
            j as f64 - m as f64
        };
        let k = 2.0 * std::f64::consts::PI * freq / length;
        *c *= Complex::from_polar(1.0, -k * s);
    }
    inverse.process(&mut buf);
    buf.iter().map(|c| c.re / m as f64).collect()
}

pub fn apply_group_transform(
    s: &GridState,
    g: PointGeneratorId,
    a: f64,
) -> Result<GridState, NumericError> {
    apply_group_transform_with(s, g, a, TransformOptions::default())
}

/// * `X2`: `A'^i(x) = A^i(x - a)`
/// * `X3`: `A'^i(x) = Σ_m C(i, m) a^m A^{i-m}(x - a t)`
/// * `X5`: `A'^i(x) = λ^{i+2} A^i(x / λ)` on `[0, λL)`, `λ = e^a`
///
/// The scaled grid points `λ x_m` coincide with the new grid, so `X5` needs
/// no resampling.
pub fn apply_group_transform_with(
    s: &GridState,
    g: PointGeneratorId,
    a: f64,
    opts: TransformOptions,
) -> Result<GridState, NumericError> {
    let length = s.length();
    match g {
        PointGeneratorId::X2 => {
            let moments = s.moments().iter().map(|f| shift(f, a, length)).collect();
            GridState::new(moments, length, s.time())
        }
        PointGeneratorId::X3 => {
            let moments = (0..=s.n())
                .map(|i| {
                    let mut b = vec![0.0; s.m()];
                    for m in 0..=i {
                        let c = binomial(i, m) * a.powi(m as i32);
                        for (bj, aj) in b.iter_mut().zip(s.moment(i - m)) {
                            *bj += c * aj;
                        }
                    }
                    shift(&b, a * s.time(), length)
                })
                .collect();
            GridState::new(moments, length, s.time())
        }
        PointGeneratorId::X5 => {
            let lambda = a.exp();
            let offset = if opts.corrupt_scaling_weights { 1 } else { 2 };
            let moments = s
                .moments()
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    let c = lambda.powi((i + offset) as i32);
                    f.iter().map(|v| c * v).collect()
                })
                .collect();
            GridState::new(moments, lambda * length, s.time())
        }
        PointGeneratorId::X1 | PointGeneratorId::X4 => Err(NumericError::UnsupportedGenerator(g)),
    }
}

/// `‖P - Q‖ / ‖P‖` over all moments and grid points.
pub fn relative_l2(p: &GridState, q: &GridState) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (rp, rq) in p.moments().iter().zip(q.moments()) {
        for (x, y) in rp.iter().zip(rq) {
            num += (x - y).powi(2);
            den += x * x;
        }
    }
    (num / den).sqrt()
}

pub fn symmetry_defect(
    initial: &GridState,
    g: PointGeneratorId,
    a: f64,
    p: &SimParams,
) -> Result<f64, NumericError> {
    symmetry_defect_with(initial, g, a, p, TransformOptions::default())
}

/// Relative distance between `transform(evolve(u0))` and
/// `evolve(transform(u0))`. The second run uses the Courant number of `p`
/// on the transformed data.
pub fn symmetry_defect_with(
    initial: &GridState,
    g: PointGeneratorId,
    a: f64,
    p: &SimParams,
    opts: TransformOptions,
) -> Result<f64, NumericError> {
    let evolved = evolve(initial, p)?;
    let first = apply_group_transform_with(&evolved, g, a, opts)?;

    let moved = apply_group_transform_with(initial, g, a, opts)?;
    let courant = p.courant(initial);
    let dt = courant * moved.dx() / moved.max_speed();
    let q_params = SimParams {
        n: moved.n(),
        m: moved.m(),
        length: moved.length(),
        dt,
        ..p.clone()
    };
    let second = evolve(&moved, &q_params)?;
    Ok(relative_l2(&first, &second))
}
