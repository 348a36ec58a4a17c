//! Method-of-lines integrator for the truncated moment system on a periodic
//! interval, and numerical checks of the finite point symmetries.

use thiserror::Error;

use crate::operator::PointGeneratorId;

mod config;
mod transform;

pub use config::{parse_profile, Profile, SimConfig};
pub use transform::{
    apply_group_transform, apply_group_transform_with, relative_l2, symmetry_defect,
    symmetry_defect_with, TransformOptions,
};

pub const DEFAULT_CFL: f64 = 0.4;
pub const DEFAULT_BLOWUP_BOUND: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("time step {dt} exceeds the stability limit {limit}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("state and parameters disagree: {0}")]
    ShapeMismatch(String),
    #[error("solution blew up at t = {time} in A^{moment}")]
    BlowUp { time: f64, moment: usize },
    #[error("{0} transforms time and is not checked numerically")]
    UnsupportedGenerator(PointGeneratorId),
    #[error("config: {0}")]
    Config(String),
}

/// How `A^{N+1}` is computed from the retained moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Closure {
    /// The `(N+1)`-th cumulant of the velocity distribution vanishes. This
    /// commutes with translations, Galilean boosts and scalings.
    #[default]
    Cumulant,
    /// `A^{N+1} = 0`. Not Galilean invariant.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Fourth-order central differences in space, classical RK4 in time.
    #[default]
    Central4Rk4,
}

/// Moments `A^0 … A^N` sampled at `x_m = m L / M` on `[0, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    moments: Vec<Vec<f64>>,
    length: f64,
    time: f64,
}

impl GridState {
    pub fn new(moments: Vec<Vec<f64>>, length: f64, time: f64) -> Result<Self, NumericError> {
        if moments.len() < 2 {
            return Err(NumericError::InvalidState(
                "need at least A^0 and A^1".into(),
            ));
        }
        let m = moments[0].len();
        if m < 16 {
            return Err(NumericError::InvalidState(format!(
                "{m} grid points, need 16"
            )));
        }
        if moments.iter().any(|row| row.len() != m) {
            return Err(NumericError::InvalidState("rows of unequal length".into()));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(NumericError::InvalidState(format!(
                "domain length {length}"
            )));
        }
        if moments.iter().flatten().any(|v| !v.is_finite()) {
            return Err(NumericError::InvalidState("non-finite value".into()));
        }
        Ok(GridState {
            moments,
            length,
            time,
        })
    }

    /// Samples `f(i, x)` for `i = 0..=n` on `m` points.
    pub fn from_fn(
        n: usize,
        m: usize,
        length: f64,
        f: impl Fn(usize, f64) -> f64,
    ) -> Result<Self, NumericError> {
        let dx = length / m as f64;
        let moments = (0..=n)
            .map(|i| (0..m).map(|j| f(i, j as f64 * dx)).collect())
            .collect();
        Self::new(moments, length, 0.0)
    }

    /// Velocity moments of a locally Gaussian distribution with smooth
    /// density, mean velocity and temperature.
    pub fn gaussian_moments(n: usize, m: usize, length: f64) -> Result<Self, NumericError> {
        use std::f64::consts::PI;
        Self::from_fn(n, m, length, |i, x| {
            let s = 2.0 * PI * x / length;
            let rho = 1.0 + 0.1 * s.sin();
            let u = 0.1 * s.cos() + 0.05 * (2.0 * s).sin();
            let var = 0.1 * (1.0 + 0.2 * (s + 0.3).cos());
            // E[v^i] = Σ_k C(i, 2k) u^{i-2k} var^k (2k-1)!!
            let mut sum = 0.0;
            let mut double_fact = 1.0;
            for k in 0..=i / 2 {
                if k > 0 {
                    double_fact *= (2 * k - 1) as f64;
                }
                sum += binomial(i, 2 * k)
                    * u.powi((i - 2 * k) as i32)
                    * var.powi(k as i32)
                    * double_fact;
            }
            rho * sum
        })
    }

    /// Truncation order `N`.
    pub fn n(&self) -> usize {
        self.moments.len() - 1
    }

    /// Grid points `M`.
    pub fn m(&self) -> usize {
        self.moments[0].len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.m() as f64
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn moments(&self) -> &[Vec<f64>] {
        &self.moments
    }

    pub fn moment(&self, i: usize) -> &[f64] {
        &self.moments[i]
    }

    /// Mean of `A^i` over the domain.
    pub fn mean(&self, i: usize) -> f64 {
        self.moments[i].iter().sum::<f64>() / self.m() as f64
    }

    /// Upper bound on the characteristic speeds: the row-sum norm of the
    /// flux Jacobian, `max_i (1 + i |A^{i-1}|)`.
    pub fn max_speed(&self) -> f64 {
        let mut v: f64 = 1.0;
        for i in 1..=self.n() {
            let peak = self.moments[i - 1]
                .iter()
                .fold(0.0f64, |acc, a| acc.max(a.abs()));
            v = v.max(1.0 + i as f64 * peak);
        }
        v
    }

    /// CSV rows `t,x,A0,…,AN`, one per grid point, without a header.
    pub fn write_csv_rows<W: std::io::Write>(
        &self,
        out: &mut csv::Writer<W>,
    ) -> Result<(), csv::Error> {
        let dx = self.dx();
        for j in 0..self.m() {
            let mut record = vec![self.time.to_string(), (j as f64 * dx).to_string()];
            record.extend(self.moments.iter().map(|row| row[j].to_string()));
            out.write_record(&record)?;
        }
        Ok(())
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h = vec!["t".to_string(), "x".to_string()];
        h.extend((0..=self.n()).map(|i| format!("A{i}")));
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub n: usize,
    pub m: usize,
    pub length: f64,
    pub dt: f64,
    /// Final time.
    pub t_final: f64,
    pub scheme: Scheme,
    pub closure: Closure,
    pub blowup_bound: f64,
}

impl SimParams {
    /// Parameters for `state` with a given step, rejected if the step is
    /// above `DEFAULT_CFL · dx / v_max`.
    pub fn new(state: &GridState, dt: f64, t_final: f64) -> Result<Self, NumericError> {
        let limit = DEFAULT_CFL * state.dx() / state.max_speed();
        if dt.is_nan() || dt <= 0.0 || dt > limit * (1.0 + 1e-12) {
            return Err(NumericError::CflViolation { dt, limit });
        }
        Ok(SimParams {
            n: state.n(),
            m: state.m(),
            length: state.length(),
            dt,
            t_final,
            scheme: Scheme::default(),
            closure: Closure::default(),
            blowup_bound: DEFAULT_BLOWUP_BOUND,
        })
    }

    /// Parameters for `state` with `dt = cfl · dx / v_max`.
    pub fn from_cfl(state: &GridState, cfl: f64, t_final: f64) -> Result<Self, NumericError> {
        if !(cfl > 0.0 && cfl <= DEFAULT_CFL) {
            return Err(NumericError::Config(format!(
                "Courant number {cfl} outside (0, {DEFAULT_CFL}]"
            )));
        }
        let dt = cfl * state.dx() / state.max_speed();
        Self::new(state, dt, t_final)
    }

    pub fn with_closure(mut self, closure: Closure) -> Self {
        self.closure = closure;
        self
    }

    /// Courant number of these parameters for `state`.
    pub fn courant(&self, state: &GridState) -> f64 {
        self.dt * state.max_speed() / state.dx()
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `A^{N+1}` at one grid point.
fn closure_value(a: &[f64], closure: Closure) -> f64 {
    let n = a.len() - 1;
    match closure {
        Closure::Zero => 0.0,
        Closure::Cumulant => {
            let a0 = a[0];
            if a0 == 0.0 {
                return 0.0;
            }
            let u = a[1] / a0;
            // central moments
            let mut mu: Vec<f64> = (0..=n)
                .map(|k| {
                    (0..=k)
                        .map(|m| binomial(k, m) * (-u).powi(m as i32) * a[k - m])
                        .sum::<f64>()
                        / a0
                })
                .collect();
            // cumulants from moments, κ_n = μ_n - Σ C(n-1, m-1) κ_m μ_{n-m}
            let mut kappa = vec![0.0; n + 2];
            for j in 1..=n {
                kappa[j] = mu[j]
                    - (1..j)
                        .map(|m| binomial(j - 1, m - 1) * kappa[m] * mu[j - m])
                        .sum::<f64>();
            }
            let top: f64 = (1..=n)
                .map(|m| binomial(n, m - 1) * kappa[m] * mu[n + 1 - m])
                .sum();
            mu.push(top);
            a0 * (0..=n + 1)
                .map(|m| binomial(n + 1, m) * u.powi(m as i32) * mu[n + 1 - m])
                .sum::<f64>()
        }
    }
}

/// Fourth-order periodic central difference.
fn ddx(f: &[f64], dx: f64, out: &mut [f64]) {
    let m = f.len();
    let scale = 1.0 / (12.0 * dx);
    for j in 0..m {
        let p1 = f[(j + 1) % m];
        let p2 = f[(j + 2) % m];
        let m1 = f[(j + m - 1) % m];
        let m2 = f[(j + m - 2) % m];
        out[j] = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) * scale;
    }
}

/// `-(A^{i+1}_x + i A^0_x A^{i-1})` for every `i`.
fn rhs(a: &[Vec<f64>], dx: f64, closure: Closure) -> Vec<Vec<f64>> {
    let n = a.len() - 1;
    let m = a[0].len();
    let mut point = vec![0.0; n + 1];
    let top: Vec<f64> = (0..m)
        .map(|j| {
            for i in 0..=n {
                point[i] = a[i][j];
            }
            closure_value(&point, closure)
        })
        .collect();
    let mut derivs = vec![vec![0.0; m]; n + 2];
    for i in 0..=n {
        ddx(&a[i], dx, &mut derivs[i]);
    }
    ddx(&top, dx, &mut derivs[n + 1]);
    (0..=n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut v = derivs[i + 1][j];
                    if i > 0 {
                        v += i as f64 * derivs[0][j] * a[i - 1][j];
                    }
                    -v
                })
                .collect()
        })
        .collect()
}

fn axpy(a: &[Vec<f64>], h: f64, k: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(k)
        .map(|(row, krow)| row.iter().zip(krow).map(|(x, y)| x + h * y).collect())
        .collect()
}

fn rk4_step(a: &[Vec<f64>], h: f64, dx: f64, closure: Closure) -> Vec<Vec<f64>> {
    let k1 = rhs(a, dx, closure);
    let k2 = rhs(&axpy(a, h / 2.0, &k1), dx, closure);
    let k3 = rhs(&axpy(a, h / 2.0, &k2), dx, closure);
    let k4 = rhs(&axpy(a, h, &k3), dx, closure);
    a.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| x + h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]))
                .collect()
        })
        .collect()
}

/// Integrates from `s.time()` to `p.t_final` with steps of `p.dt`, the last
/// one shortened to land on `t_final`.
pub fn evolve(s: &GridState, p: &SimParams) -> Result<GridState, NumericError> {
    evolve_with(s, p, |_| {})
}

/// Like [`evolve`], calling `observe` on the initial state and after every
/// step.
pub fn evolve_with(
    s: &GridState,
    p: &SimParams,
    mut observe: impl FnMut(&GridState),
) -> Result<GridState, NumericError> {
    if p.n != s.n() || p.m != s.m() || (p.length - s.length()).abs() > 1e-12 * p.length {
        return Err(NumericError::ShapeMismatch(format!(
            "params N={} M={} L={}, state N={} M={} L={}",
            p.n,
            p.m,
            p.length,
            s.n(),
            s.m(),
            s.length()
        )));
    }
    let dx = s.dx();
    let mut state = s.clone();
    observe(&state);
    let eps = 1e-12 * p.t_final.abs().max(1.0);
    while state.time < p.t_final - eps {
        let h = p.dt.min(p.t_final - state.time);
        state.moments = rk4_step(&state.moments, h, dx, p.closure);
        state.time = if p.t_final - state.time - h <= eps {
            p.t_final
        } else {
            state.time + h
        };
        for (i, row) in state.moments.iter().enumerate() {
            if row
                .iter()
                .any(|v| !v.is_finite() || v.abs() > p.blowup_bound)
            {
                return Err(NumericError::BlowUp {
                    time: state.time,
                    moment: i,
                });
            }
        }
        observe(&state);
    }
    Ok(state)
}

/// States at each of `times` (non-decreasing, at least `s.time()`), all
/// with the step of `p`.
pub fn evolve_with_snapshots(
    s: &GridState,
    p: &SimParams,
    times: &[f64],
) -> Result<Vec<GridState>, NumericError> {
    let mut out = Vec::with_capacity(times.len());
    let mut state = s.clone();
    for &t in times {
        if t < state.time {
            return Err(NumericError::Config(format!(
                "snapshot time {t} precedes {}",
                state.time
            )));
        }
        let leg = SimParams {
            t_final: t,
            ..p.clone()
        };
        state = evolve(&state, &leg)?;
        out.push(state.clone());
    }
    Ok(out)
}
