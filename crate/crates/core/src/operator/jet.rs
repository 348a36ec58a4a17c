//! Total derivatives on the jet space, the point generators and the jet form
//! of the determining equations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::{CanonicalOperator, ChainId, Form, OperatorError, VerificationReport};
use crate::poly::{int, Monomial, Polynomial, Variable};

fn a(j: u32) -> Polynomial {
    Polynomial::moment(j)
}

fn ax(j: u32) -> Polynomial {
    Polynomial::var(Variable::MomentX(j))
}

fn axx(j: u32) -> Polynomial {
    Polynomial::var(Variable::MomentXX(j))
}

/// `D_x p`. Only `t`, `x`, `A^j` and `A^j_x` may occur in `p`.
pub fn total_derivative_x(p: &Polynomial) -> Result<Polynomial, OperatorError> {
    let mut out = Polynomial::zero();
    for v in p.variables() {
        let d = p.partial(v);
        match v {
            Variable::Time => {}
            Variable::Space => out += d,
            Variable::Moment(j) => out += &ax(j) * &d,
            Variable::MomentX(j) => out += &axx(j) * &d,
            Variable::MomentXX(_) => return Err(OperatorError::UnsupportedVariable(v)),
        }
    }
    Ok(out)
}

/// `A^j_t` from the `j`-th equation, `-(A^{j+1}_x + j A^0_x A^{j-1})`.
fn moment_t(j: u32) -> Polynomial {
    let mut out = -ax(j + 1);
    if j > 0 {
        out -= &(&ax(0) * &a(j - 1)).scale_int(j as i64);
    }
    out
}

/// `A^j_tx`, the x-derivative of [`moment_t`].
fn moment_tx(j: u32) -> Polynomial {
    let mut out = -axx(j + 1);
    if j > 0 {
        let tail = &(&axx(0) * &a(j - 1)) + &(&ax(0) * &ax(j - 1));
        out -= &tail.scale_int(j as i64);
    }
    out
}

/// `D_t p` with the time derivatives of the moments eliminated through the
/// system truncated at `A^N`.
pub fn total_derivative_t_on_shell(p: &Polynomial, n: usize) -> Result<Polynomial, OperatorError> {
    let mut out = Polynomial::zero();
    for v in p.variables() {
        let d = p.partial(v);
        match v {
            Variable::Space => {}
            Variable::Time => out += d,
            Variable::Moment(j) | Variable::MomentX(j) => {
                if j as usize + 1 > n {
                    return Err(OperatorError::HorizonExceeded {
                        needed: j + 1,
                        horizon: n,
                    });
                }
                let dt = if v.is_moment() {
                    moment_t(j)
                } else {
                    moment_tx(j)
                };
                out += &dt * &d;
            }
            Variable::MomentXX(_) => return Err(OperatorError::UnsupportedVariable(v)),
        }
    }
    Ok(out)
}

/// Residual of
/// `D_t ℵ^i + D_x ℵ^{i+1} + i A^{i-1} D_x ℵ^0 + i A^0_x ℵ^{i-1}`,
/// or `None` when a term is not expressible within the horizon.
fn jet_residual(op: &CanonicalOperator, i: usize) -> Option<Polynomial> {
    let coords = op.coords();
    let next = coords.get(i + 1)?;
    let mut r = total_derivative_t_on_shell(&coords[i], op.horizon()).ok()?;
    r += total_derivative_x(next).ok()?;
    if i > 0 {
        let k = int(i as i64);
        let dx0 = total_derivative_x(&coords[0]).ok()?;
        r += dx0.mul_monomial(&k, &Monomial::var(Variable::Moment(i as u32 - 1)));
        r += coords[i - 1].mul_monomial(&k, &Monomial::var(Variable::MomentX(0)));
    }
    Some(r)
}

/// Checks the jet form of the determining equations, on shell, for every
/// index whose terms fit within the horizon.
pub fn verify_jet(op: &CanonicalOperator) -> Result<VerificationReport, OperatorError> {
    op.require(Form::Jet)?;
    let results: Vec<(usize, Option<Polynomial>)> = (0..op.coords().len())
        .into_par_iter()
        .map(|i| (i, jet_residual(op, i)))
        .collect();
    let mut report = VerificationReport {
        cutoff: Some(op.horizon() as u32),
        ..Default::default()
    };
    for (i, r) in results {
        match r {
            Some(r) => {
                report.residuals.insert(ChainId::Jet { i }, r);
            }
            None => report.skipped.push(ChainId::Jet { i }),
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointGeneratorId {
    X1,
    X2,
    X3,
    X4,
    X5,
}

impl PointGeneratorId {
    pub const ALL: [PointGeneratorId; 5] = [
        PointGeneratorId::X1,
        PointGeneratorId::X2,
        PointGeneratorId::X3,
        PointGeneratorId::X4,
        PointGeneratorId::X5,
    ];
}

impl fmt::Display for PointGeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for PointGeneratorId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PointGeneratorId::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown generator `{s}` (expected X1..X5)"))
    }
}

/// `A^{i+1}_x + i A^{i-1} A^0_x`, the x-flux of the `i`-th equation.
fn flux_x(i: u32) -> Polynomial {
    let mut out = ax(i + 1);
    if i > 0 {
        out += (&a(i - 1) * &ax(0)).scale_int(i as i64);
    }
    out
}

fn generator_coord(id: PointGeneratorId, i: u32) -> Polynomial {
    let t = Polynomial::var(Variable::Time);
    let x = Polynomial::var(Variable::Space);
    let scaling = a(i).scale_int(i as i64 + 2);
    match id {
        PointGeneratorId::X1 => flux_x(i),
        PointGeneratorId::X2 => ax(i),
        PointGeneratorId::X3 => {
            let shift = if i > 0 {
                a(i - 1).scale_int(i as i64)
            } else {
                Polynomial::zero()
            };
            &shift - &(&t * &ax(i))
        }
        PointGeneratorId::X4 => &scaling - &(&t * &flux_x(i)),
        PointGeneratorId::X5 => &scaling - &(&x * &ax(i)),
    }
}

/// The prolonged point generator `id` on the system truncated at `A^N`.
/// `X1` and `X4` stop at `ℵ^{N-1}` since `ℵ^N` would need `A^{N+1}_x`.
pub fn point_generator(id: PointGeneratorId, n: usize) -> CanonicalOperator {
    let top = match id {
        PointGeneratorId::X1 | PointGeneratorId::X4 => n.saturating_sub(1),
        _ => n,
    };
    let coords = (0..=top as u32).map(|i| generator_coord(id, i)).collect();
    CanonicalOperator::new(coords, Form::Jet, n).expect("generators are affine in A_x")
}

pub fn point_generators(n: usize) -> BTreeMap<PointGeneratorId, CanonicalOperator> {
    PointGeneratorId::ALL
        .into_iter()
        .map(|id| (id, point_generator(id, n)))
        .collect()
}

/// `ℵ^i = η^i + ξ^1 (A^{i+1}_x + i A^{i-1} A^0_x) - ξ^2 A^i_x`.
///
/// `ξ^1` may depend on `t` only and `ξ^2` on `t` and `x`. When `ξ^1` is
/// nonzero the top coordinate is dropped if it would need `A^{N+1}_x`.
pub fn embed_point_symmetry(
    eta: &[Polynomial],
    xi1: &Polynomial,
    xi2: &Polynomial,
    n: usize,
) -> Result<CanonicalOperator, OperatorError> {
    if eta.len() > n + 1 {
        return Err(OperatorError::HorizonExceeded {
            needed: (eta.len() - 1) as u32,
            horizon: n,
        });
    }
    if let Some(v) = xi1.variables().into_iter().find(|v| *v != Variable::Time) {
        return Err(OperatorError::UnsupportedVariable(v));
    }
    if let Some(v) = xi2
        .variables()
        .into_iter()
        .find(|v| !matches!(v, Variable::Time | Variable::Space))
    {
        return Err(OperatorError::UnsupportedVariable(v));
    }
    let len = if xi1.is_zero() {
        eta.len()
    } else {
        eta.len().min(n)
    };
    let coords = (0..len)
        .map(|i| {
            let i32_ = i as u32;
            let mut c = eta[i].clone();
            if !xi1.is_zero() {
                c += xi1 * &flux_x(i32_);
            }
            c -= &(xi2 * &ax(i32_));
            c
        })
        .collect();
    CanonicalOperator::new(coords, Form::Jet, n)
}

/// The constants `K^1 … K^5` of the general point symmetry:
/// `ξ^1 = K^4 + K^5 t`, `ξ^2 = K^1 + K^2 t + K^3 x`,
/// `η^i = i A^{i-1} K^2 + (i+2) A^i (K^3 - K^5)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointCoefficients {
    pub k1: BigRational,
    pub k2: BigRational,
    pub k3: BigRational,
    pub k4: BigRational,
    pub k5: BigRational,
}

impl PointCoefficients {
    pub fn xi1(&self) -> Polynomial {
        &Polynomial::constant(self.k4.clone()) + &Polynomial::var(Variable::Time).scale(&self.k5)
    }

    pub fn xi2(&self) -> Polynomial {
        let mut out = Polynomial::constant(self.k1.clone());
        out += Polynomial::var(Variable::Time).scale(&self.k2);
        out += Polynomial::var(Variable::Space).scale(&self.k3);
        out
    }

    pub fn eta(&self, n: usize) -> Vec<Polynomial> {
        let scale = &self.k3 - &self.k5;
        (0..=n as u32)
            .map(|i| {
                let mut c = a(i).scale(&(&scale * int(i as i64 + 2)));
                if i > 0 && !self.k2.is_zero() {
                    c += a(i - 1).scale(&(&self.k2 * int(i as i64)));
                }
                c
            })
            .collect()
    }

    pub fn embed(&self, n: usize) -> CanonicalOperator {
        embed_point_symmetry(&self.eta(n), &self.xi1(), &self.xi2(), n)
            .expect("coefficients have the right variables")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::generate_eta_row;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn total_derivative_x_examples() {
        assert_eq!(total_derivative_x(&p("A0")).unwrap(), p("A0_x"));
        assert_eq!(
            total_derivative_x(&p("x*A1_x")).unwrap(),
            p("A1_x + x*A1_xx")
        );
        assert_eq!(
            total_derivative_x(&p("2*A0 - x*A0_x")).unwrap(),
            p("A0_x - x*A0_xx")
        );
        assert_eq!(
            total_derivative_x(&p("t^2 + 3")).unwrap(),
            Polynomial::zero()
        );
        assert_eq!(
            total_derivative_x(&p("A0_xx")),
            Err(OperatorError::UnsupportedVariable(Variable::MomentXX(0)))
        );
    }

    #[test]
    fn total_derivative_t_examples() {
        assert_eq!(
            total_derivative_t_on_shell(&p("A0"), 4).unwrap(),
            p("-A1_x")
        );
        assert_eq!(
            total_derivative_t_on_shell(&p("A1"), 4).unwrap(),
            p("-A2_x - A0_x*A0")
        );
        assert_eq!(
            total_derivative_t_on_shell(&p("A0_x"), 4).unwrap(),
            p("-A1_xx")
        );
        assert_eq!(
            total_derivative_t_on_shell(&p("A2_x"), 4).unwrap(),
            p("-A3_xx - 2*A0_xx*A1 - 2*A0_x*A1_x")
        );
        assert_eq!(total_derivative_t_on_shell(&p("t*x"), 4).unwrap(), p("x"));
        assert_eq!(
            total_derivative_t_on_shell(&p("A4"), 4),
            Err(OperatorError::HorizonExceeded {
                needed: 5,
                horizon: 4
            })
        );
    }

    #[test]
    fn generator_coordinates() {
        let gens = point_generators(6);
        let x5 = &gens[&PointGeneratorId::X5];
        assert_eq!(x5.coord(0), Some(&p("2*A0 - x*A0_x")));
        assert_eq!(x5.coord(3), Some(&p("5*A3 - x*A3_x")));
        for i in 0..=6 {
            assert_eq!(
                gens[&PointGeneratorId::X2].coord(i),
                Some(&Polynomial::var(Variable::MomentX(i as u32)))
            );
        }
        assert_eq!(gens[&PointGeneratorId::X3].coord(0), Some(&p("-t*A0_x")));
        assert_eq!(
            gens[&PointGeneratorId::X3].coord(2),
            Some(&p("2*A1 - t*A2_x"))
        );
        assert_eq!(
            gens[&PointGeneratorId::X1].coord(2),
            Some(&p("A3_x + 2*A1*A0_x"))
        );
        assert_eq!(gens[&PointGeneratorId::X1].coords().len(), 6);
        assert_eq!(gens[&PointGeneratorId::X4].coords().len(), 6);
        assert_eq!(
            gens[&PointGeneratorId::X4].coord(1),
            Some(&p("3*A1 - t*A2_x - t*A0*A0_x"))
        );
        assert_eq!("x4".parse::<PointGeneratorId>(), Ok(PointGeneratorId::X4));
        assert!("X6".parse::<PointGeneratorId>().is_err());
    }

    #[test]
    fn all_generators_pass() {
        for (id, op) in point_generators(12) {
            let report = verify_jet(&op).unwrap();
            assert!(report.passed(), "{id}: {}", report.to_json());
            for i in 0..=10 {
                assert!(report.residual(ChainId::Jet { i }).is_some(), "{id} i={i}");
            }
        }
    }

    #[test]
    fn corrupted_x5_fails_at_zero() {
        let mut coords = point_generator(PointGeneratorId::X5, 8).coords().to_vec();
        coords[0] = p("3*A0 - x*A0_x");
        let op = CanonicalOperator::new(coords, Form::Jet, 8).unwrap();
        let report = verify_jet(&op).unwrap();
        assert_eq!(report.residual(ChainId::Jet { i: 0 }), Some(&p("-A1_x")));
        assert!(!report.passed());
    }

    #[test]
    fn moment_only_rows_lift() {
        for k in 0..4 {
            let coords = generate_eta_row(k, 10).unwrap().coords();
            let op = embed_point_symmetry(&coords, &Polynomial::zero(), &Polynomial::zero(), 10)
                .unwrap();
            assert_eq!(op.coords(), &coords[..]);
            assert_eq!(op.form(), Form::Jet);
            let report = verify_jet(&op).unwrap();
            assert!(report.passed(), "row {k}: {}", report.to_json());
        }
    }

    #[test]
    fn unit_coefficients_match_generators() {
        let n = 7;
        let gens = point_generators(n);
        let one = || int(1);
        let cases = [
            (
                PointCoefficients {
                    k1: one(),
                    ..Default::default()
                },
                PointGeneratorId::X2,
                -1,
            ),
            (
                PointCoefficients {
                    k2: one(),
                    ..Default::default()
                },
                PointGeneratorId::X3,
                1,
            ),
            (
                PointCoefficients {
                    k3: one(),
                    ..Default::default()
                },
                PointGeneratorId::X5,
                1,
            ),
            (
                PointCoefficients {
                    k4: one(),
                    ..Default::default()
                },
                PointGeneratorId::X1,
                1,
            ),
            (
                PointCoefficients {
                    k5: one(),
                    ..Default::default()
                },
                PointGeneratorId::X4,
                -1,
            ),
        ];
        for (coeffs, id, sign) in cases {
            let embedded = coeffs.embed(n);
            let gen = &gens[&id];
            let len = embedded.coords().len().min(gen.coords().len());
            for i in 0..len {
                assert_eq!(
                    embedded.coords()[i],
                    gen.coords()[i].scale_int(sign),
                    "{id} coordinate {i}"
                );
            }
        }
    }

    #[test]
    fn scaling_pair_is_x5_minus_x4() {
        let n = 6;
        let coeffs = PointCoefficients {
            k3: int(1),
            k5: int(1),
            ..Default::default()
        };
        let embedded = coeffs.embed(n);
        assert_eq!(embedded.coords().len(), n);
        let x4 = point_generator(PointGeneratorId::X4, n);
        let x5 = point_generator(PointGeneratorId::X5, n);
        for i in 0..n {
            assert_eq!(embedded.coords()[i], &x5.coords()[i] - &x4.coords()[i]);
        }
        assert!(verify_jet(&embedded).unwrap().passed());
    }

    #[test]
    fn embed_rejects_bad_xi() {
        let eta = vec![Polynomial::zero(); 3];
        assert!(embed_point_symmetry(&eta, &p("x"), &Polynomial::zero(), 4).is_err());
        assert!(embed_point_symmetry(&eta, &Polynomial::zero(), &p("A0"), 4).is_err());
        assert!(embed_point_symmetry(&eta, &Polynomial::zero(), &Polynomial::zero(), 1).is_err());
    }
}
