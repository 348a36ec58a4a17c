use std::fmt::Write;

use num_traits::{One, Signed};

use super::{Monomial, Polynomial, Variable};

fn latex_var(v: Variable) -> String {
    match v {
        Variable::Time => "t".into(),
        Variable::Space => "x".into(),
        Variable::Moment(i) => format!("A^{{{i}}}"),
        Variable::MomentX(i) => format!("A^{{{i}}}_{{x}}"),
        Variable::MomentXX(i) => format!("A^{{{i}}}_{{xx}}"),
    }
}

fn latex_monomial(m: &Monomial) -> String {
    let mut s = String::new();
    for (v, e) in m.iter() {
        let base = latex_var(v);
        if e == 1 {
            s.push_str(&base);
        } else if matches!(v, Variable::Time | Variable::Space) {
            let _ = write!(s, "{base}^{{{e}}}");
        } else {
            let _ = write!(s, "({base})^{{{e}}}");
        }
    }
    s
}

impl Polynomial {
    /// LaTeX rendering, e.g. `-2A^{2} + 3(A^{0})^{2}`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms().enumerate() {
            match (idx, c.is_negative()) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let abs = c.abs();
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
            };
            if m.is_one() {
                s.push_str(&coeff);
            } else {
                if !abs.is_one() {
                    s.push_str(&coeff);
                }
                s.push_str(&latex_monomial(m));
            }
        }
        s
    }
}
