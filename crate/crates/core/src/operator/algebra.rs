//! Brackets of moment-only operators and the `H^s` identities.

use std::collections::BTreeMap;

use super::{CanonicalOperator, Form, OperatorError};
use crate::poly::{int, Monomial, Polynomial, Variable, WeightedDegree};

/// `Σ_j f^j ∂g/∂A^j`, or `None` if `g` needs a coordinate `f` lacks.
fn apply(f: &[Polynomial], g: &Polynomial) -> Option<Polynomial> {
    let mut out = Polynomial::zero();
    for v in g.variables() {
        let j = v.moment_index()? as usize;
        out += f.get(j)? * &g.partial(v);
    }
    Some(out)
}

/// `[a, b]^i = Σ_j (a^j ∂b^i/∂A^j - b^j ∂a^i/∂A^j)`.
///
/// The result stops at the first coordinate whose sum would need a
/// coordinate of `a` or `b` beyond its end.
pub fn lie_bracket(
    a: &CanonicalOperator,
    b: &CanonicalOperator,
) -> Result<CanonicalOperator, OperatorError> {
    a.require(Form::MomentOnly)?;
    b.require(Form::MomentOnly)?;
    let (ca, cb) = (a.coords(), b.coords());
    let mut coords = Vec::new();
    for i in 0..ca.len().min(cb.len()) {
        match (apply(ca, &cb[i]), apply(cb, &ca[i])) {
            (Some(x), Some(y)) => coords.push(x - y),
            _ => break,
        }
    }
    CanonicalOperator::moment_only(coords)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KupershmidtCheck {
    /// Whether `s` divides every coefficient of `Σ j A^{j-1} ∂H/∂A^j`.
    pub divisible: bool,
    /// That sum divided by `s`.
    pub h_prev: Polynomial,
}

/// Lowers `H^s` (weighted degree `s + 2`) to the candidate
/// `H^{s-1} = (1/s) Σ_j j A^{j-1} ∂H^s/∂A^j`.
pub fn kupershmidt_check(h: &Polynomial, s: u32) -> Result<KupershmidtCheck, OperatorError> {
    let expected = s as i64 + 2;
    let found = h.weighted_degree();
    if s == 0 || found != WeightedDegree::Homogeneous(expected) {
        return Err(OperatorError::DegreeMismatch { expected, found });
    }
    let mut lowered = Polynomial::zero();
    for v in h.variables() {
        if let Variable::Moment(j) = v {
            if j > 0 {
                lowered += h
                    .partial(v)
                    .mul_monomial(&int(j as i64), &Monomial::var(Variable::Moment(j - 1)));
            }
        }
    }
    let s_int = int(s as i64);
    let divisible = lowered.terms().all(|(_, c)| (c / &s_int).is_integer());
    let h_prev = lowered.scale(&(int(1) / s_int));
    Ok(KupershmidtCheck { divisible, h_prev })
}

/// `η^{i,j}_s = [j+1-i ≥ 1] (j+1-i) ∂H^s/∂A^{j+1-i}
///            + s Σ_{k=0}^{s-j-2} (i+k) A^{i+k-1} ∂H^{s-1}/∂A^{j+k+1}`.
pub fn eta_tensor_from_h(
    h: &BTreeMap<u32, Polynomial>,
    i: u32,
    j: u32,
    s: u32,
) -> Result<Polynomial, OperatorError> {
    let mut out = Polynomial::zero();
    if j + 1 > i {
        let k = j + 1 - i;
        let hs = h.get(&s).ok_or(OperatorError::MissingH(s))?;
        out += hs.partial(Variable::Moment(k)).scale_int(k as i64);
    }
    if s >= j + 2 {
        let h_prev = h.get(&(s - 1)).ok_or(OperatorError::MissingH(s - 1))?;
        let mut sum = Polynomial::zero();
        for k in 0..=(s - j - 2) {
            let m = i + k;
            if m == 0 {
                continue;
            }
            let d = h_prev.partial(Variable::Moment(j + k + 1));
            if !d.is_zero() {
                sum += d.mul_monomial(&int(m as i64), &Monomial::var(Variable::Moment(m - 1)));
            }
        }
        out += sum.scale_int(s as i64);
    }
    Ok(out)
}
