//! JSON term-list format: `[{"coeff": "p/q", "exps": {"A0": 2}}, ...]`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::text::{parse_variable, ParsePolyError};
use super::{Monomial, Polynomial};

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    coeff: String,
    exps: BTreeMap<String, u32>,
}

impl Polynomial {
    /// Renders the term list as a JSON value, in canonical term order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<JsonTerm> = self
            .terms()
            .map(|(m, c)| JsonTerm {
                coeff: c.to_string(),
                exps: m.iter().map(|(v, e)| (v.to_string(), e)).collect(),
            })
            .collect();
        serde_json::to_value(terms).expect("term list serializes")
    }
}

pub(super) fn parse_json(s: &str) -> Result<Polynomial, ParsePolyError> {
    let terms: Vec<JsonTerm> =
        serde_json::from_str(s).map_err(|e| ParsePolyError::new(e.column(), e.to_string()))?;
    let mut out = Polynomial::zero();
    for term in terms {
        let c: BigRational = term
            .coeff
            .trim()
            .parse()
            .map_err(|_| ParsePolyError::new(0, format!("bad coefficient `{}`", term.coeff)))?;
        let mut pairs = Vec::with_capacity(term.exps.len());
        for (name, e) in term.exps {
            let v = parse_variable(&name)
                .ok_or_else(|| ParsePolyError::new(0, format!("unknown variable `{name}`")))?;
            pairs.push((v, e));
        }
        out.add_term(Monomial::from_pairs(pairs), c);
    }
    Ok(out)
}
