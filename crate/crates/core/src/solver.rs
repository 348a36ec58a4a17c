//! Basis solutions `η^i_k` of the moment-only determining chains.
//!
//! Row `k` starts from the boundary values `η^k_k = 1`, `η^{k+1}_k = 0` and
//! is extended one column at a time: the gradient of `η^{i+1}` is assembled
//! from the two previous entries, checked for exactness, and integrated with
//! the weighted Euler identity. Every entry with `i ≥ k + 2` is
//! weighted-homogeneous of degree `i - k`, which rules out integration
//! constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::poly::{euler_reconstruct, int, Monomial, PolyError, Polynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("horizon {n} is too small for row {k} (need at least {})", k + 1)]
    HorizonTooSmall { k: usize, n: usize },
    #[error("row {k}: gradient of entry {} is not exact ({} violations)", i + 1, violations.len())]
    ExactnessFailure {
        k: usize,
        i: usize,
        violations: Vec<ExactnessViolation>,
    },
    #[error("row {k}: integrating entry {}: {source}", i + 1)]
    Reconstruction {
        k: usize,
        i: usize,
        #[source]
        source: PolyError,
    },
    #[error("row {k}: entry {i} depends on A^{index}")]
    SupportViolation { k: usize, i: usize, index: u32 },
    #[error("malformed matrix document: {0}")]
    Malformed(String),
}

impl SolverError {
    /// Errors that can only come from a bug in the generator itself.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            SolverError::ExactnessFailure { .. }
                | SolverError::Reconstruction { .. }
                | SolverError::SupportViolation { .. }
        )
    }
}

/// A failed compatibility condition `∂g_u/∂v = ∂g_v/∂u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessViolation {
    pub u: Variable,
    pub v: Variable,
    pub residual: Polynomial,
}

/// The `k`-th basis solution, entries `η^k_k … η^N_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaRow {
    k: usize,
    entries: Vec<Polynomial>,
}

impl EtaRow {
    /// The two boundary entries `η^k = 1`, `η^{k+1} = 0`.
    fn boundary(k: usize) -> Self {
        EtaRow {
            k,
            entries: vec![Polynomial::one(), Polynomial::zero()],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest column index held.
    pub fn horizon(&self) -> usize {
        self.k + self.entries.len() - 1
    }

    /// `η^i_k`; zero below the diagonal, `None` beyond the horizon.
    pub fn get(&self, i: usize) -> Option<&Polynomial> {
        if i < self.k {
            Some(Polynomial::zero_ref())
        } else {
            self.entries.get(i - self.k)
        }
    }

    fn entry(&self, i: usize) -> &Polynomial {
        self.get(i).expect("column within horizon")
    }

    /// All coordinates `η^0 … η^N`, zeros included.
    pub fn coords(&self) -> Vec<Polynomial> {
        (0..=self.horizon())
            .map(|i| self.entry(i).clone())
            .collect()
    }

    /// Truncates to a smaller horizon (at least `k + 1`).
    pub fn truncated(&self, n: usize) -> EtaRow {
        let keep = n.max(self.k + 1).min(self.horizon()) - self.k + 1;
        EtaRow {
            k: self.k,
            entries: self.entries[..keep].to_vec(),
        }
    }
}

/// Full gradient of `η^{i+1}` from the entries of `row` up to `η^i`.
///
/// The `A^0` component is `Σ_{j=1}^{i-2} j A^{j-1} ∂η^i/∂A^j - i η^{i-1}`;
/// every other component is shifted, `∂η^{i+1}/∂A^{m+1} = ∂η^i/∂A^m`.
pub fn gradient_of_next(row: &EtaRow, i: usize) -> BTreeMap<Variable, Polynomial> {
    let current = row.entry(i);
    let mut a0 = Polynomial::zero();
    // the j = 0 summand carries the factor j and is skipped
    for j in 1..i.saturating_sub(1) {
        let d = current.partial(Variable::Moment(j as u32));
        if !d.is_zero() {
            a0 += d.mul_monomial(
                &int(j as i64),
                &Monomial::var(Variable::Moment(j as u32 - 1)),
            );
        }
    }
    if i >= 1 {
        a0 -= &row.entry(i - 1).scale_int(i as i64);
    }

    let mut gradient = BTreeMap::new();
    if !a0.is_zero() {
        gradient.insert(Variable::Moment(0), a0);
    }
    if let Some(top) = current.max_moment_index() {
        for m in 0..=top {
            let d = current.partial(Variable::Moment(m));
            if !d.is_zero() {
                gradient.insert(Variable::Moment(m + 1), d);
            }
        }
    }
    gradient
}

/// Lists every pair of variables whose cross derivatives disagree.
pub fn check_exactness(gradient: &BTreeMap<Variable, Polynomial>) -> Vec<ExactnessViolation> {
    let mut vars: BTreeSet<Variable> = gradient.keys().copied().collect();
    for component in gradient.values() {
        vars.extend(component.variables());
    }
    let zero = Polynomial::zero();
    let vars: Vec<Variable> = vars.into_iter().collect();
    let mut violations = Vec::new();
    for (idx, &u) in vars.iter().enumerate() {
        for &v in &vars[idx + 1..] {
            let gu = gradient.get(&u).unwrap_or(&zero);
            let gv = gradient.get(&v).unwrap_or(&zero);
            let residual = &gu.partial(v) - &gv.partial(u);
            if !residual.is_zero() {
                violations.push(ExactnessViolation { u, v, residual });
            }
        }
    }
    violations
}

/// Generates the `k`-th basis row up to column `n`.
pub fn generate_eta_row(k: usize, n: usize) -> Result<EtaRow, SolverError> {
    if n < k + 1 {
        return Err(SolverError::HorizonTooSmall { k, n });
    }
    let mut row = EtaRow::boundary(k);
    for i in k + 1..n {
        let gradient = gradient_of_next(&row, i);
        let violations = check_exactness(&gradient);
        if !violations.is_empty() {
            return Err(SolverError::ExactnessFailure { k, i, violations });
        }
        let degree = (i + 1 - k) as u32;
        let next = euler_reconstruct(&gradient, degree)
            .map_err(|source| SolverError::Reconstruction { k, i, source })?;
        if let Some(index) = next.max_moment_index() {
            if index as usize >= i {
                return Err(SolverError::SupportViolation { k, i: i + 1, index });
            }
        }
        row.entries.push(next);
    }
    Ok(row)
}

/// Rows `0..=k_max` of the basis matrix, each to column `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaMatrix {
    rows: BTreeMap<usize, EtaRow>,
    horizon: usize,
}

pub fn generate_eta_matrix(k_max: usize, n: usize) -> Result<EtaMatrix, SolverError> {
    if n < k_max + 1 {
        return Err(SolverError::HorizonTooSmall { k: k_max, n });
    }
    let rows = (0..=k_max)
        .into_par_iter()
        .map(|k| generate_eta_row(k, n).map(|row| (k, row)))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(EtaMatrix { rows, horizon: n })
}

impl EtaMatrix {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn row(&self, k: usize) -> Option<&EtaRow> {
        self.rows.get(&k)
    }

    pub fn rows(&self) -> impl Iterator<Item = &EtaRow> {
        self.rows.values()
    }

    /// One line per entry, `k=1 i=5: -2*A2 + 3*A0^2`, for `k ≤ i ≤ N`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.rows.values() {
            for i in row.k..=row.horizon() {
                let _ = writeln!(out, "k={} i={}: {}", row.k, i, row.entry(i));
            }
        }
        out
    }

    /// JSON document; zero entries and the two boundary entries of each row
    /// are omitted since they follow from `k`.
    pub fn to_json(&self) -> Value {
        let mut rows = Map::new();
        for row in self.rows.values() {
            let mut entries = Map::new();
            for i in row.k + 2..=row.horizon() {
                let e = row.entry(i);
                if !e.is_zero() {
                    entries.insert(i.to_string(), Value::String(e.to_string()));
                }
            }
            rows.insert(row.k.to_string(), Value::Object(entries));
        }
        json!({ "schema": 1, "N": self.horizon, "rows": rows })
    }

    pub fn from_json(doc: &Value) -> Result<EtaMatrix, SolverError> {
        let bad = |msg: &str| SolverError::Malformed(msg.to_string());
        let horizon = doc
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer field `N`"))? as usize;
        let rows_doc = doc
            .get("rows")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing object field `rows`"))?;
        let mut rows = BTreeMap::new();
        for (key, entries) in rows_doc {
            let k: usize = key.parse().map_err(|_| bad("row keys must be integers"))?;
            if horizon < k + 1 {
                return Err(SolverError::HorizonTooSmall { k, n: horizon });
            }
            let entries = entries
                .as_object()
                .ok_or_else(|| bad("row must be an object"))?;
            let mut row = EtaRow::boundary(k);
            row.entries.resize(horizon - k + 1, Polynomial::zero());
            for (col, text) in entries {
                let i: usize = col
                    .parse()
                    .map_err(|_| bad("column keys must be integers"))?;
                if i < k + 2 || i > horizon {
                    return Err(SolverError::Malformed(format!(
                        "row {k}: column {i} is outside {}..={horizon}",
                        k + 2
                    )));
                }
                let text = text
                    .as_str()
                    .ok_or_else(|| bad("entries must be polynomial strings"))?;
                row.entries[i - k] = text
                    .parse()
                    .map_err(|e| SolverError::Malformed(format!("row {k} column {i}: {e}")))?;
            }
            rows.insert(k, row);
        }
        Ok(EtaMatrix { rows, horizon })
    }

    /// An `array` block with rows `k` and columns `i = 0..=N`.
    pub fn to_latex(&self) -> String {
        let cols = self.horizon + 1;
        let mut out = String::new();
        let _ = writeln!(out, "\\eta^{{i}}_{{k}} = \\left(");
        let _ = writeln!(out, "\\begin{{array}}{{{}}}", vec!["c"; cols].join(" "));
        let lines: Vec<String> = self
            .rows
            .values()
            .map(|row| {
                (0..cols)
                    .map(|i| row.entry(i).to_latex())
                    .collect::<Vec<_>>()
                    .join(" & ")
            })
            .collect();
        let _ = writeln!(out, "{}", lines.join(" \\\\\n"));
        let _ = writeln!(out, "\\end{{array}} \\right)");
        out
    }
}
