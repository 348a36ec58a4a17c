//! Simulation config files.
//!
//! ```json
//! {"N": 3, "M": 256, "L": 1.0, "T": 0.05,
//!  "profiles": [{"i": 0, "expr": "1 + 0.01*sin"}, {"i": 1, "expr": "0.1*cos(2)"}]}
//! ```
//!
//! Profile expressions combine numbers with `+ - * /`, integer powers `^`,
//! parentheses and the functions `const(c)`, `sin(k)`, `cos(k)` (the `k`-th
//! Fourier mode of the domain, `k = 1` when the argument is omitted) and
//! `gaussian(w)` (a bump of relative width `w` centred on the domain,
//! default `0.1`). Moments without a profile start at zero.

use std::f64::consts::PI;

use serde::Deserialize;

use super::{Closure, GridState, NumericError, SimParams, DEFAULT_CFL};

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Num(f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Gaussian(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    fn eval(&self, x: f64, length: f64) -> f64 {
        let ev = |e: &Expr| e.eval(x, length);
        match self {
            Expr::Num(v) => *v,
            Expr::Sin(k) => (2.0 * PI * ev(k) * x / length).sin(),
            Expr::Cos(k) => (2.0 * PI * ev(k) * x / length).cos(),
            Expr::Gaussian(w) => {
                let d = x / length - 0.5;
                let w = ev(w);
                (-d * d / (2.0 * w * w)).exp()
            }
            Expr::Neg(e) => -ev(e),
            Expr::Add(a, b) => ev(a) + ev(b),
            Expr::Sub(a, b) => ev(a) - ev(b),
            Expr::Mul(a, b) => ev(a) * ev(b),
            Expr::Div(a, b) => ev(a) / ev(b),
            Expr::Pow(a, e) => ev(a).powi(*e),
        }
    }

    fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Sin(_) | Expr::Cos(_) | Expr::Gaussian(_) => false,
            Expr::Neg(e) | Expr::Pow(e, _) => e.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }
}

/// A parsed initial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    source: String,
    expr: Expr,
}

impl Profile {
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        self.expr.eval(x, length)
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> NumericError {
        NumericError::Config(format!(
            "profile `{}` at byte {}: {}",
            self.src,
            self.pos,
            msg.into()
        ))
    }

    fn peek(&mut self) -> Option<char> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        trimmed.chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.peek();
        let start = self.pos;
        let len: usize = self.src[start..]
            .chars()
            .take_while(|c| f(*c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expr(&mut self) -> Result<Expr, NumericError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, NumericError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, NumericError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let digits = self.take_while(|c| c.is_ascii_digit());
            let e: i32 = digits
                .parse()
                .map_err(|_| self.err("expected an integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, NumericError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == '.');
                let mut text = text.to_string();
                // exponent part, e.g. 1e-3
                if matches!(self.src[self.pos..].chars().next(), Some('e' | 'E')) {
                    let save = self.pos;
                    self.pos += 1;
                    let sign = if self.src[self.pos..].starts_with(['+', '-']) {
                        self.pos += 1;
                        &self.src[self.pos - 1..self.pos]
                    } else {
                        ""
                    };
                    let digits = self.take_while(|c| c.is_ascii_digit());
                    if digits.is_empty() {
                        self.pos = save;
                    } else {
                        text = format!("{text}e{sign}{digits}");
                    }
                }
                text.parse()
                    .map(Expr::Num)
                    .map_err(|_| self.err(format!("bad number `{text}`")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let arg = if self.eat('(') {
                    let a = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.err("expected `)`"));
                    }
                    if !a.is_constant() {
                        return Err(self.err(format!("argument of `{name}` must be a constant")));
                    }
                    Some(a)
                } else {
                    None
                };
                let or = |default: f64| Box::new(arg.clone().unwrap_or(Expr::Num(default)));
                match name {
                    "sin" => Ok(Expr::Sin(or(1.0))),
                    "cos" => Ok(Expr::Cos(or(1.0))),
                    "gaussian" => Ok(Expr::Gaussian(or(0.1))),
                    "const" => arg.ok_or_else(|| self.err("`const` needs an argument")),
                    _ => Err(self.err(format!("unknown function `{name}`"))),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_profile(src: &str) -> Result<Profile, NumericError> {
    let mut p = Parser { src, pos: 0 };
    let expr = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(Profile {
        source: src.to_string(),
        expr,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    i: usize,
    expr: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "L")]
    length: f64,
    #[serde(rename = "T")]
    t_final: f64,
    profiles: Vec<RawProfile>,
    #[serde(default)]
    closure: Option<String>,
    #[serde(default)]
    cfl: Option<f64>,
    #[serde(default)]
    snapshots: Option<usize>,
    #[serde(default)]
    schema: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub m: usize,
    pub length: f64,
    pub t_final: f64,
    /// `profiles[i]` is the initial `A^i`, `None` for zero.
    pub profiles: Vec<Option<Profile>>,
    pub closure: Closure,
    pub cfl: f64,
    /// Number of evenly spaced output times, the initial and final included.
    pub snapshots: usize,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self, NumericError> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| NumericError::Config(e.to_string()))?;
        if let Some(s) = raw.schema {
            if s != 1 {
                return Err(NumericError::Config(format!("unsupported schema {s}")));
            }
        }
        if raw.n < 1 {
            return Err(NumericError::Config("N must be at least 1".into()));
        }
        if !(raw.t_final >= 0.0 && raw.t_final.is_finite()) {
            return Err(NumericError::Config(format!(
                "bad final time {}",
                raw.t_final
            )));
        }
        let mut profiles = vec![None; raw.n + 1];
        for p in raw.profiles {
            if p.i > raw.n {
                return Err(NumericError::Config(format!(
                    "profile for A^{} beyond N = {}",
                    p.i, raw.n
                )));
            }
            if profiles[p.i].is_some() {
                return Err(NumericError::Config(format!("two profiles for A^{}", p.i)));
            }
            profiles[p.i] = Some(parse_profile(&p.expr)?);
        }
        let closure = match raw.closure.as_deref() {
            None | Some("cumulant") => Closure::Cumulant,
            Some("zero") => Closure::Zero,
            Some(other) => return Err(NumericError::Config(format!("unknown closure `{other}`"))),
        };
        let snapshots = raw.snapshots.unwrap_or(2);
        if snapshots < 2 {
            return Err(NumericError::Config("snapshots must be at least 2".into()));
        }
        Ok(SimConfig {
            n: raw.n,
            m: raw.m,
            length: raw.length,
            t_final: raw.t_final,
            profiles,
            closure,
            cfl: raw.cfl.unwrap_or(DEFAULT_CFL),
            snapshots,
        })
    }

    pub fn initial_state(&self) -> Result<GridState, NumericError> {
        GridState::from_fn(self.n, self.m, self.length, |i, x| {
            self.profiles[i]
                .as_ref()
                .map_or(0.0, |p| p.eval(x, self.length))
        })
    }

    pub fn params(&self, state: &GridState) -> Result<SimParams, NumericError> {
        Ok(SimParams::from_cfl(state, self.cfl, self.t_final)?.with_closure(self.closure))
    }
}
