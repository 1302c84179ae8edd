//! Exact monomial arithmetic over a fine-graded polynomial ring.
//!
//! A [`Monomial`] is an exponent vector over the variables of a [`Ring`]. The
//! same type doubles as a multidegree, since the fine grading identifies the
//! two. Exponents are arbitrary precision.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("ring mismatch: expected {expected} variables, found {found}")]
    RingMismatch { expected: usize, found: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed monomial `{text}`: {reason}")]
    Malformed { text: String, reason: String },
    #[error("exponent of `{0}` must be a positive integer")]
    NonPositiveExponent(String),
    #[error("a monomial ideal needs at least one generator")]
    EmptyIdeal,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

/// Coefficient field of a polynomial ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, MonomialError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(MonomialError::InvalidRing(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(Field::Rationals);
        }
        let p = s
            .strip_prefix("Fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| {
                MonomialError::InvalidRing(format!("unknown field `{s}`, expected Q or Fp:<p>"))
            })?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A polynomial ring `k[x_1, ..., x_n]`: ordered variable names plus a field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Ring {
    variables: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        field: Field,
    ) -> Result<Self, MonomialError> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.is_empty() {
            return Err(MonomialError::InvalidRing("no variables".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(MonomialError::InvalidRing(format!(
                    "`{v}` is not a valid variable name"
                )));
            }
            if variables[..i].contains(v) {
                return Err(MonomialError::InvalidRing(format!(
                    "duplicate variable `{v}`"
                )));
            }
        }
        if let Field::Prime(p) = field {
            Field::prime(p)?;
        }
        Ok(Ring { variables, field })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The unit monomial `1`.
    pub fn one(&self) -> Monomial {
        Monomial::one(self.num_vars())
    }

    /// The monomial `x_i`.
    pub fn var(&self, i: usize) -> Monomial {
        let mut m = self.one();
        m.exponents[i] = BigUint::one();
        m
    }

    pub fn check(&self, m: &Monomial) -> Result<(), MonomialError> {
        if m.num_vars() == self.num_vars() {
            Ok(())
        } else {
            Err(MonomialError::RingMismatch {
                expected: self.num_vars(),
                found: m.num_vars(),
            })
        }
    }

    pub fn parse(&self, text: &str) -> Result<Monomial, MonomialError> {
        parse_monomial(text, self)
    }

    pub fn render(&self, m: &Monomial) -> String {
        m.display(self).to_string()
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            variables: Vec<String>,
            #[serde(default = "default_field")]
            field: Field,
        }
        fn default_field() -> Field {
            Field::Rationals
        }
        let raw = Raw::deserialize(deserializer)?;
        Ring::new(raw.variables, raw.field).map_err(de::Error::custom)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// An exponent vector. Ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<BigUint>,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial {
            exponents: vec![BigUint::zero(); num_vars],
        }
    }

    pub fn new(exponents: Vec<BigUint>) -> Self {
        Monomial { exponents }
    }

    pub fn from_exponents<T: Into<BigUint>>(exponents: impl IntoIterator<Item = T>) -> Self {
        Monomial {
            exponents: exponents.into_iter().map(Into::into).collect(),
        }
    }

    pub fn exponents(&self) -> &[BigUint] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> BigUint {
        self.exponents.iter().sum()
    }

    fn same_ring(&self, other: &Monomial) -> Result<(), MonomialError> {
        if self.num_vars() == other.num_vars() {
            Ok(())
        } else {
            Err(MonomialError::RingMismatch {
                expected: self.num_vars(),
                found: other.num_vars(),
            })
        }
    }

    /// Componentwise maximum of exponents.
    pub fn lcm(&self, other: &Monomial) -> Result<Monomial, MonomialError> {
        self.same_ring(other)?;
        Ok(self.join(other))
    }

    /// `true` iff `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool, MonomialError> {
        self.same_ring(other)?;
        Ok(self.divides_unchecked(other))
    }

    /// `self / divisor`, or `None` when `divisor` does not divide `self`.
    pub fn quotient(&self, divisor: &Monomial) -> Result<Option<Monomial>, MonomialError> {
        self.same_ring(divisor)?;
        if !divisor.divides_unchecked(self) {
            return Ok(None);
        }
        Ok(Some(Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&divisor.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        }))
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, MonomialError> {
        self.same_ring(other)?;
        Ok(Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub(crate) fn join(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        }
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// Renders with the variable names of `ring`, e.g. `x^2*y`.
    pub fn display<'a>(&'a self, ring: &'a Ring) -> DisplayMonomial<'a> {
        DisplayMonomial {
            monomial: self,
            ring,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct DisplayMonomial<'a> {
    monomial: &'a Monomial,
    ring: &'a Ring,
}

impl fmt::Display for DisplayMonomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomial.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, e) in self.ring.variables.iter().zip(&self.monomial.exponents) {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

// Exponents serialize as JSON numbers while they fit in a u64, and as decimal
// strings beyond that.
impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.exponents.len()))?;
        for e in &self.exponents {
            match e.to_u64() {
                Some(small) => seq.serialize_element(&small)?,
                None => seq.serialize_element(&e.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExponentsVisitor;

        impl<'de> Visitor<'de> for ExponentsVisitor {
            type Value = Monomial;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an array of non-negative integer exponents")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Monomial, A::Error> {
                let mut exponents = Vec::new();
                while let Some(e) = seq.next_element::<Exponent>()? {
                    exponents.push(e.0);
                }
                Ok(Monomial { exponents })
            }
        }

        deserializer.deserialize_seq(ExponentsVisitor)
    }
}

struct Exponent(BigUint);

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Exponent(BigUint::from(v))),
            Raw::Text(s) => s
                .parse::<BigUint>()
                .map(Exponent)
                .map_err(|_| de::Error::custom(format!("invalid exponent `{s}`"))),
        }
    }
}

/// Parses `1` or `factor (* factor)*` where `factor = var (^ positive-int)?`.
/// Whitespace around tokens is ignored. Repeated variables multiply.
pub fn parse_monomial(text: &str, ring: &Ring) -> Result<Monomial, MonomialError> {
    let malformed = |reason: &str| MonomialError::Malformed {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(malformed("empty input"));
    }
    let mut m = ring.one();
    if trimmed == "1" {
        return Ok(m);
    }
    for factor in trimmed.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(malformed("empty factor"));
        }
        let (name, exponent) = match factor.split_once('^') {
            Some((name, exp)) => {
                let name = name.trim();
                let exp = exp.trim();
                if exp.is_empty() || !exp.chars().all(|c| c.is_ascii_digit()) {
                    if exp.starts_with('-') || exp.starts_with('0') {
                        return Err(MonomialError::NonPositiveExponent(name.to_string()));
                    }
                    return Err(malformed("exponent must be a positive integer"));
                }
                let value: BigUint = exp.parse().map_err(|_| malformed("bad exponent"))?;
                if value.is_zero() {
                    return Err(MonomialError::NonPositiveExponent(name.to_string()));
                }
                (name, value)
            }
            None => (factor, BigUint::one()),
        };
        if !is_identifier(name) {
            return Err(malformed(&format!("`{name}` is not a variable")));
        }
        let idx = ring
            .variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| MonomialError::UnknownVariable(name.to_string()))?;
        m.exponents[idx] += exponent;
    }
    Ok(m)
}

/// A monomial ideal stored by its minimal generators in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    ring: Ring,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Keeps the divisibility-minimal generators, sorted and deduplicated.
    pub fn minimalize(ring: &Ring, gens: &[Monomial]) -> Result<Self, MonomialError> {
        if gens.is_empty() {
            return Err(MonomialError::EmptyIdeal);
        }
        for g in gens {
            ring.check(g)?;
        }
        let mut sorted: Vec<Monomial> = gens.to_vec();
        sorted.sort();
        sorted.dedup();
        // A divisor never has larger degree, so scanning in ascending order
        // only needs to look backwards.
        let mut minimal: Vec<Monomial> = Vec::with_capacity(sorted.len());
        for g in sorted {
            if !minimal.iter().any(|h| h.divides_unchecked(&g)) {
                minimal.push(g);
            }
        }
        Ok(MonomialIdeal {
            ring: ring.clone(),
            generators: minimal,
        })
    }

    pub fn parse<S: AsRef<str>>(ring: &Ring, gens: &[S]) -> Result<Self, MonomialError> {
        let parsed = gens
            .iter()
            .map(|g| ring.parse(g.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::minimalize(ring, &parsed)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides_unchecked(m))
    }
}

/// The closure of `monomials` under pairwise lcm, computed by saturation.
pub fn lcm_lattice(monomials: &[Monomial]) -> Result<BTreeSet<Monomial>, MonomialError> {
    let Some(first) = monomials.first() else {
        return Ok(BTreeSet::new());
    };
    for m in monomials {
        first.same_ring(m)?;
    }
    let generators: BTreeSet<Monomial> = monomials.iter().cloned().collect();
    let mut lattice = generators.clone();
    let mut frontier: Vec<Monomial> = generators.iter().cloned().collect();
    // Joining new elements with the generators suffices: every lattice element
    // is a join of generators.
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &generators {
                let j = m.join(g);
                if !lattice.contains(&j) {
                    lattice.insert(j.clone());
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    Ok(lattice)
}
