//! Plain-text polynomial format, e.g. `-2*A2 + 3*A0^2` or `1/2*x*A0_x`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Monomial, Polynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial at byte {position}: {message}")]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

impl ParsePolyError {
    pub(crate) fn new(position: usize, message: impl Into<String>) -> Self {
        ParsePolyError {
            position,
            message: message.into(),
        }
    }
}

pub(super) fn write_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (idx, (v, e)) in m.iter().enumerate() {
        if idx > 0 {
            f.write_str("*")?;
        }
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

pub(super) fn write_poly(p: &Polynomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    for (idx, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (idx, negative) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let abs = c.abs();
        if m.is_one() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write_monomial(m, f)?;
        } else {
            write!(f, "{abs}*")?;
            write_monomial(m, f)?;
        }
    }
    Ok(())
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParsePolyError::new(start, "expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn err(&self, message: &str) -> ParsePolyError {
        ParsePolyError::new(self.pos, message)
    }
}

pub(crate) fn parse_variable(name: &str) -> Option<Variable> {
    match name {
        "t" => return Some(Variable::Time),
        "x" => return Some(Variable::Space),
        _ => {}
    }
    let rest = name.strip_prefix('A')?;
    let (index, suffix) = match rest.find('_') {
        Some(split) => (&rest[..split], &rest[split..]),
        None => (rest, ""),
    };
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: u32 = index.parse().ok()?;
    match suffix {
        "" => Some(Variable::Moment(i)),
        "_x" => Some(Variable::MomentX(i)),
        "_xx" => Some(Variable::MomentXX(i)),
        _ => None,
    }
}

fn parse_factor(cur: &mut Cursor<'_>) -> Result<(BigRational, Monomial), ParsePolyError> {
    match cur.peek() {
        Some(b) if b.is_ascii_digit() => {
            let num: BigInt = cur.digits()?.parse().expect("digits");
            let den: BigInt = if cur.eat(b'/') {
                cur.digits()?.parse().expect("digits")
            } else {
                BigInt::one()
            };
            if den.is_zero() {
                return Err(cur.err("zero denominator"));
            }
            Ok((BigRational::new(num, den), Monomial::one()))
        }
        Some(b) if b.is_ascii_alphabetic() => {
            let start = cur.pos;
            while cur.pos < cur.src.len()
                && (cur.src[cur.pos].is_ascii_alphanumeric() || cur.src[cur.pos] == b'_')
            {
                cur.pos += 1;
            }
            let name = std::str::from_utf8(&cur.src[start..cur.pos]).expect("ascii");
            let v = parse_variable(name)
                .ok_or_else(|| ParsePolyError::new(start, format!("unknown variable `{name}`")))?;
            let exp = if cur.eat(b'^') {
                cur.digits()?
                    .parse::<u32>()
                    .map_err(|_| cur.err("exponent out of range"))?
            } else {
                1
            };
            Ok((BigRational::one(), Monomial::power(v, exp)))
        }
        _ => Err(cur.err("expected a number or a variable")),
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<(BigRational, Monomial), ParsePolyError> {
    let (mut c, mut m) = parse_factor(cur)?;
    while cur.eat(b'*') {
        let (c2, m2) = parse_factor(cur)?;
        c *= c2;
        m = m.mul(&m2);
    }
    Ok((c, m))
}

pub(super) fn parse_text(s: &str) -> Result<Polynomial, ParsePolyError> {
    let mut cur = Cursor {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut out = Polynomial::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat(b'-') {
            true
        } else {
            let plus = cur.eat(b'+');
            if !first && !plus {
                return Err(cur.err("expected `+` or `-`"));
            }
            false
        };
        let (c, m) = parse_term(&mut cur)?;
        out.add_term(m, if negative { -c } else { c });
        first = false;
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(out)
}
