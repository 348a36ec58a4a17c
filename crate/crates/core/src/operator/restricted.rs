//! The vector and tensor chains for operators that depend on moments only.

use rayon::prelude::*;

use super::{CanonicalOperator, ChainId, Form, OperatorError, VerificationReport};
use crate::poly::{int, Monomial, Polynomial, Variable};

fn a(j: usize) -> Variable {
    Variable::Moment(j as u32)
}

/// `i A^{i-1}` times `p`, zero at `i = 0`.
fn times_i_prev(i: usize, p: &Polynomial) -> Polynomial {
    if i == 0 || p.is_zero() {
        Polynomial::zero()
    } else {
        p.mul_monomial(&int(i as i64), &Monomial::var(a(i - 1)))
    }
}

/// Checks
///
/// * vector: `∂η^{i+1}/∂A^0 - Σ_j j A^{j-1} ∂η^i/∂A^j + i A^{i-1} ∂η^0/∂A^0 + i η^{i-1}`
/// * tensor: `∂η^{i+1}/∂A^{k+1} - ∂η^i/∂A^k + i A^{i-1} ∂η^0/∂A^{k+1}`
///
/// for every `i` with `η^{i+1}` present. The sums and the range of `k` run up
/// to the largest moment index occurring in the operator.
pub fn verify_restricted(op: &CanonicalOperator) -> Result<VerificationReport, OperatorError> {
    op.require(Form::MomentOnly)?;
    let coords = op.coords();
    let cutoff = coords.iter().filter_map(Polynomial::max_moment_index).max();
    let top_k = cutoff.map_or(0, |c| c as usize);
    let eta0 = coords.first().cloned().unwrap_or_default();

    let checked_i: Vec<usize> = (0..coords.len().saturating_sub(1)).collect();
    let residuals = checked_i
        .par_iter()
        .flat_map_iter(|&i| {
            let cur = &coords[i];
            let next = &coords[i + 1];
            let mut vector = next.partial(a(0));
            for j in 1..=top_k {
                let d = cur.partial(a(j));
                if !d.is_zero() {
                    vector -= &d.mul_monomial(&int(j as i64), &Monomial::var(a(j - 1)));
                }
            }
            vector += times_i_prev(i, &eta0.partial(a(0)));
            if i >= 1 {
                vector += coords[i - 1].scale_int(i as i64);
            }
            let mut out = vec![(ChainId::Vector { i }, vector)];
            for k in 0..=top_k {
                let mut tensor = &next.partial(a(k + 1)) - &cur.partial(a(k));
                tensor += times_i_prev(i, &eta0.partial(a(k + 1)));
                out.push((ChainId::Tensor { i, k }, tensor));
            }
            out
        })
        .collect();

    let mut skipped = Vec::new();
    if let Some(last) = coords.len().checked_sub(1) {
        skipped.push(ChainId::Vector { i: last });
        skipped.extend((0..=top_k).map(|k| ChainId::Tensor { i: last, k }));
    }
    Ok(VerificationReport {
        residuals,
        skipped,
        cutoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{generate_eta_matrix, generate_eta_row};

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn row_op(k: usize, n: usize) -> CanonicalOperator {
        CanonicalOperator::moment_only(generate_eta_row(k, n).unwrap().coords()).unwrap()
    }

    #[test]
    fn generated_rows_pass() {
        let m = generate_eta_matrix(4, 14).unwrap();
        for row in m.rows() {
            let op = CanonicalOperator::moment_only(row.coords()).unwrap();
            let report = verify_restricted(&op).unwrap();
            assert!(report.passed(), "row {}: {:?}", row.k(), report.to_json());
            assert!(report.residual(ChainId::Vector { i: 13 }).is_some());
            assert!(report.skipped.contains(&ChainId::Vector { i: 14 }));
        }
    }

    #[test]
    fn zero_operator_passes() {
        let op = CanonicalOperator::moment_only(vec![Polynomial::zero(); 6]).unwrap();
        let report = verify_restricted(&op).unwrap();
        assert!(report.passed());
        assert_eq!(report.cutoff, None);
    }

    #[test]
    fn perturbed_row0_fails_in_a0_multiples() {
        let mut coords = generate_eta_row(0, 10).unwrap().coords();
        coords[4] = p("-A2 + 2*A0^2");
        let op = CanonicalOperator::moment_only(coords).unwrap();
        let report = verify_restricted(&op).unwrap();
        assert!(!report.passed());
        let failures: Vec<(String, String)> = report
            .failures()
            .map(|(id, r)| (id.to_string(), r.to_string()))
            .collect();
        assert_eq!(
            failures,
            vec![
                ("vector:i=3".to_string(), "2*A0".to_string()),
                ("vector:i=5".to_string(), "5*A0^2".to_string()),
                ("tensor:i=4,k=0".to_string(), "-2*A0".to_string()),
            ]
        );
    }

    #[test]
    fn jet_operator_is_rejected() {
        let op = row_op(0, 4).into_jet();
        assert_eq!(
            verify_restricted(&op),
            Err(OperatorError::FormMismatch {
                expected: Form::MomentOnly,
                found: Form::Jet
            })
        );
    }
}
