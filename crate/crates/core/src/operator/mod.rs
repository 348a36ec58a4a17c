//! Canonical operators of the moment system and their verification.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::poly::{Polynomial, Variable, WeightedDegree};

mod algebra;
mod jet;
mod restricted;

pub use algebra::{eta_tensor_from_h, kupershmidt_check, lie_bracket, KupershmidtCheck};
pub use jet::{
    embed_point_symmetry, point_generator, point_generators, total_derivative_t_on_shell,
    total_derivative_x, verify_jet, PointCoefficients, PointGeneratorId,
};
pub use restricted::verify_restricted;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// Coordinates depend on the moments `A^j` only.
    MomentOnly,
    /// Coordinates may also use `t`, `x` and, affinely, `A^j_x`.
    Jet,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::MomentOnly => f.write_str("moment-only"),
            Form::Jet => f.write_str("jet"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("expected a {expected} operator, got a {found} one")]
    FormMismatch { expected: Form, found: Form },
    #[error("coordinate {index}: {reason}")]
    InvalidCoordinate { index: usize, reason: String },
    #[error("{0} is not supported here")]
    UnsupportedVariable(Variable),
    #[error("A^{needed} is beyond the horizon {horizon}")]
    HorizonExceeded { needed: u32, horizon: usize },
    #[error("expected weighted degree {expected}, got {found:?}")]
    DegreeMismatch {
        expected: i64,
        found: WeightedDegree,
    },
    #[error("H^{0} is required but was not supplied")]
    MissingH(u32),
}

/// Coordinates `ℵ^0 … ℵ^m` of an evolutionary operator on a system truncated
/// at `A^N`. `m` may be smaller than `N` when the top coordinates would
/// need moments beyond the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOperator {
    coords: Vec<Polynomial>,
    form: Form,
    horizon: usize,
}

impl CanonicalOperator {
    pub fn new(coords: Vec<Polynomial>, form: Form, horizon: usize) -> Result<Self, OperatorError> {
        if coords.len() > horizon + 1 {
            return Err(OperatorError::InvalidCoordinate {
                index: coords.len() - 1,
                reason: format!("beyond the horizon {horizon}"),
            });
        }
        for (index, c) in coords.iter().enumerate() {
            check_coordinate(c, form)
                .map_err(|reason| OperatorError::InvalidCoordinate { index, reason })?;
        }
        Ok(CanonicalOperator {
            coords,
            form,
            horizon,
        })
    }

    /// A moment-only operator whose horizon is its last coordinate.
    pub fn moment_only(coords: Vec<Polynomial>) -> Result<Self, OperatorError> {
        let horizon = coords.len().saturating_sub(1);
        Self::new(coords, Form::MomentOnly, horizon)
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Option<&Polynomial> {
        self.coords.get(i)
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The same coordinates viewed as a jet-form operator.
    pub fn into_jet(self) -> CanonicalOperator {
        CanonicalOperator {
            form: Form::Jet,
            ..self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Polynomial::is_zero)
    }

    fn require(&self, form: Form) -> Result<(), OperatorError> {
        if self.form == form {
            Ok(())
        } else {
            Err(OperatorError::FormMismatch {
                expected: form,
                found: self.form,
            })
        }
    }
}

fn check_coordinate(p: &Polynomial, form: Form) -> Result<(), String> {
    match form {
        Form::MomentOnly => match p.variables().into_iter().find(|v| !v.is_moment()) {
            Some(v) => Err(format!("depends on {v}")),
            None => Ok(()),
        },
        Form::Jet => {
            if let Some(v) = p
                .variables()
                .into_iter()
                .find(|v| matches!(v, Variable::MomentXX(_)))
            {
                return Err(format!("depends on {v}"));
            }
            for (m, _) in p.terms() {
                let linear: u32 = m
                    .iter()
                    .filter(|(v, _)| matches!(v, Variable::MomentX(_)))
                    .map(|(_, e)| e)
                    .sum();
                if linear > 1 {
                    return Err(format!("not affine in the first derivatives ({m:?})"));
                }
            }
            Ok(())
        }
    }
}

/// One equation of a determining chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainId {
    Vector { i: usize },
    Tensor { i: usize, k: usize },
    Jet { i: usize },
}

impl fmt::Display for ChainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainId::Vector { i } => write!(f, "vector:i={i}"),
            ChainId::Tensor { i, k } => write!(f, "tensor:i={i},k={k}"),
            ChainId::Jet { i } => write!(f, "jet:i={i}"),
        }
    }
}

/// Residuals of the checked chain equations. Equations that would need data
/// beyond the horizon are listed as skipped rather than assumed to hold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub residuals: BTreeMap<ChainId, Polynomial>,
    pub skipped: Vec<ChainId>,
    /// Largest moment index the truncated sums ran over.
    pub cutoff: Option<u32>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.residuals.values().all(Polynomial::is_zero)
    }

    pub fn checked(&self) -> impl Iterator<Item = ChainId> + '_ {
        self.residuals.keys().copied()
    }

    pub fn failures(&self) -> impl Iterator<Item = (ChainId, &Polynomial)> {
        self.residuals
            .iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(id, r)| (*id, r))
    }

    pub fn residual(&self, id: ChainId) -> Option<&Polynomial> {
        self.residuals.get(&id)
    }

    pub fn to_json(&self) -> Value {
        let failures: Map<String, Value> = self
            .failures()
            .map(|(id, r)| (id.to_string(), Value::String(r.to_string())))
            .collect();
        json!({
            "schema": 1,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "checked": self.checked().map(|id| id.to_string()).collect::<Vec<_>>(),
            "skipped": self.skipped.iter().map(|id| id.to_string()).collect::<Vec<_>>(),
            "cutoff": self.cutoff,
            "failures": failures,
        })
    }
}
