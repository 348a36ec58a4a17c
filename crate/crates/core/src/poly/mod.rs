//! Exact sparse multivariate polynomials over the jet variables of the
//! moment system.
//!
//! Every coefficient is a [`BigRational`]; a [`Polynomial`] is a map from
//! [`Monomial`] to a nonzero coefficient, so structural equality is equality
//! of polynomials. Moments carry the weight `[A^i] = i + 2`, which makes the
//! symmetry coordinates weighted-homogeneous.

mod json;
mod latex;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use text::ParsePolyError;

/// A symbol of the jet space: `t`, `x`, `A^i`, `A^i_x` or `A^i_xx`.
///
/// The derived order is the canonical one:
/// `t < x < A^0 < A^1 < … < A^0_x < … < A^0_xx < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    Time,
    Space,
    Moment(u32),
    MomentX(u32),
    MomentXX(u32),
}

impl Variable {
    /// Grading weight. Moments follow `[A^i] = i + 2`; the remaining weights
    /// make every equation of the moment system homogeneous.
    pub fn weight(self) -> i64 {
        match self {
            Variable::Time => -2,
            Variable::Space => -1,
            Variable::Moment(i) => i as i64 + 2,
            Variable::MomentX(i) => i as i64 + 3,
            Variable::MomentXX(i) => i as i64 + 4,
        }
    }

    pub fn moment_index(self) -> Option<u32> {
        match self {
            Variable::Moment(i) | Variable::MomentX(i) | Variable::MomentXX(i) => Some(i),
            Variable::Time | Variable::Space => None,
        }
    }

    pub fn is_moment(self) -> bool {
        matches!(self, Variable::Moment(_))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Time => f.write_str("t"),
            Variable::Space => f.write_str("x"),
            Variable::Moment(i) => write!(f, "A{i}"),
            Variable::MomentX(i) => write!(f, "A{i}_x"),
            Variable::MomentXX(i) => write!(f, "A{i}_xx"),
        }
    }
}

/// A power product of variables with strictly positive exponents, kept
/// sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn power(v: Variable, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Variable, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|idx| self.0[idx].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variable, u32)> + '_ {
        self.0.iter().copied()
    }

    /// Total (unweighted) degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&(v, e)| v.weight() * e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one, returning the old exponent.
    fn lower(&self, v: Variable) -> Option<(u32, Monomial)> {
        let idx = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.0[idx].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(idx);
        } else {
            rest[idx].1 -= 1;
        }
        Some((e, Monomial(rest)))
    }
}

/// Graded lexicographic: total degree first, then the sorted
/// `(variable, exponent)` lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted degree of a polynomial under [`Variable::weight`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(i64),
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("gradient component for {variable} is not homogeneous of weighted degree {expected}")]
    NonHomogeneousGradient { variable: Variable, expected: i64 },
    #[error("reconstructed potential does not reproduce the gradient component for {variable}")]
    GradientMismatch { variable: Variable },
    #[error("gradient key {0} is not a moment variable")]
    NonMomentGradient(Variable),
    #[error("potential degree must be positive")]
    ZeroDegree,
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

static ZERO: Polynomial = Polynomial {
    terms: BTreeMap::new(),
};

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    /// A shared zero, handy for returning `&Polynomial` for absent entries.
    pub fn zero_ref() -> &'static Polynomial {
        &ZERO
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::monomial(c, Monomial::one())
    }

    pub fn integer(c: i64) -> Self {
        Polynomial::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Variable) -> Self {
        Polynomial::monomial(BigRational::one(), Monomial::var(v))
    }

    /// The moment `A^i`.
    pub fn moment(i: u32) -> Self {
        Polynomial::var(Variable::Moment(i))
    }

    pub fn monomial(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, combining
    /// like terms.
    pub fn from_terms<I: IntoIterator<Item = (BigRational, Monomial)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in canonical (graded lexicographic, ascending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Polynomial {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Multiplies by a single monomial `c * m`.
    pub fn mul_monomial(&self, c: &BigRational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(v) {
                out.add_term(rest, c * BigRational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn depends_on(&self, v: Variable) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    /// Largest `i` such that `A^i`, `A^i_x` or `A^i_xx` occurs.
    pub fn max_moment_index(&self) -> Option<u32> {
        self.variables()
            .into_iter()
            .filter_map(Variable::moment_index)
            .max()
    }

    pub fn weighted_degree(&self) -> WeightedDegree {
        let mut weights = self.terms.keys().map(Monomial::weight);
        match weights.next() {
            None => WeightedDegree::Homogeneous(0),
            Some(w) => {
                if weights.all(|u| u == w) {
                    WeightedDegree::Homogeneous(w)
                } else {
                    WeightedDegree::Inhomogeneous
                }
            }
        }
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_poly(self, f)
    }
}

impl std::str::FromStr for Polynomial {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim_start().starts_with('[') {
            json::parse_json(s)
        } else {
            text::parse_text(s)
        }
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Recovers the potential of a moment-space gradient through the weighted
/// Euler identity `Σ (m+2) A^m ∂η/∂A^m = d·η`.
///
/// Each component `gradient[A^m]` must be homogeneous of weighted degree
/// `degree - (m + 2)`. The result is differentiated again and compared with
/// the input, so a non-exact gradient is reported rather than silently
/// integrated.
pub fn euler_reconstruct(
    gradient: &BTreeMap<Variable, Polynomial>,
    degree: u32,
) -> Result<Polynomial, PolyError> {
    if degree == 0 {
        return Err(PolyError::ZeroDegree);
    }
    let d = degree as i64;
    let mut sum = Polynomial::zero();
    for (&v, component) in gradient {
        if !v.is_moment() {
            return Err(PolyError::NonMomentGradient(v));
        }
        if component.is_zero() {
            continue;
        }
        let expected = d - v.weight();
        if component.weighted_degree() != WeightedDegree::Homogeneous(expected) {
            return Err(PolyError::NonHomogeneousGradient {
                variable: v,
                expected,
            });
        }
        sum += component.mul_monomial(&int(v.weight()), &Monomial::var(v));
    }
    let eta = sum.scale(&BigRational::new(BigInt::one(), BigInt::from(d)));

    for (&v, component) in gradient {
        if eta.partial(v) != *component {
            return Err(PolyError::GradientMismatch { variable: v });
        }
    }
    // Any moment outside the gradient's keys must not appear either.
    for v in eta.variables() {
        if !gradient.contains_key(&v) {
            return Err(PolyError::GradientMismatch { variable: v });
        }
    }
    Ok(eta)
}

pub(crate) fn int(c: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}

#[cfg(test)]
mod tests;
