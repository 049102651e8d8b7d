//! Point-count polynomials `N(H)` and the connected-component count of `X(w)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::coxeter::{GeneratorSet, WeylElement};
use crate::twist::TwistedDatum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("generator set {0} is not sigma-stable")]
    NotSigmaStable(String),
    #[error("polynomial division {dividend} / {divisor} is not exact")]
    DivisionNotExact { dividend: String, divisor: String },
    #[error("the split-case count needs the identity twist")]
    NotSplit,
}

/// Integer polynomial in `q`, coefficients from the constant term up.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
///
/// Serializes as a JSON array of integers; coefficients outside the `i64`
/// range are written as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Long division over `Z`; `None` if the divisor is zero or some step
    /// would leave `Z`. Returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let lead = divisor.coeffs.last()?;
        let dl = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dl {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() + 1 - dl];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return None;
            }
            let c = top / lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, CountError> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Ok(q),
            _ => Err(CountError::DivisionNotExact { dividend: self.to_string(), divisor: divisor.to_string() }),
        }
    }

    pub fn evaluate(&self, q: u64) -> BigInt {
        let q = BigInt::from(q);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &q + c)
    }

    /// Evaluation as `u64`, if it fits.
    pub fn evaluate_u64(&self, q: u64) -> Option<u64> {
        self.evaluate(q).to_u64()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let values: Vec<Value> = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => Value::from(v),
                None => Value::from(c.to_string()),
            })
            .collect();
        values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<Value>::deserialize(deserializer)?;
        let coeffs = values
            .into_iter()
            .map(|v| match v {
                Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| de::Error::custom("non-integer coefficient")),
                Value::String(s) => s.parse::<BigInt>().map_err(de::Error::custom),
                _ => Err(de::Error::custom("coefficient must be an integer")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}

/// `N(W_J) = sum of q^{l(w)}` over sigma-fixed `w` in the standard
/// parabolic `W_J`, with the ambient length. `J` must be sigma-stable.
pub fn count_n(t: &TwistedDatum, j: GeneratorSet) -> Result<IntPolynomial, CountError> {
    if !t.is_sigma_stable(j) {
        return Err(CountError::NotSigmaStable(j.to_string()));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    for w in t.group().parabolic_elements(j) {
        if t.is_sigma_fixed(&w) {
            if coeffs.len() <= w.length() {
                coeffs.resize(w.length() + 1, BigInt::zero());
            }
            coeffs[w.length()] += 1;
        }
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Number of connected components of `X(w)`: `N(W) / N(W^w)`, where `W^w`
/// is the parabolic on the sigma-closure of the support of `w`.
pub fn component_count(t: &TwistedDatum, w: &WeylElement) -> Result<IntPolynomial, CountError> {
    let whole = count_n(t, t.all_generators())?;
    let part = count_n(t, t.stable_support(w))?;
    whole.divide_exact(&part)
}

/// Split groups: `X(s)` has `#(G/B)(F_q) / (1 + q)` components for every
/// simple `s`. Returns that quotient after checking it against
/// [`component_count`] for each generator.
pub fn split_component_count_special(t: &TwistedDatum) -> Result<IntPolynomial, CountError> {
    if !t.sigma().is_identity() {
        return Err(CountError::NotSplit);
    }
    let whole = count_n(t, t.all_generators())?;
    let quotient = whole.divide_exact(&IntPolynomial::from_i64(&[1, 1]))?;
    for s in 0..t.rank() {
        let per_generator = component_count(t, &t.group().generator(s))?;
        if per_generator != quotient {
            return Err(CountError::DivisionNotExact {
                dividend: per_generator.to_string(),
                divisor: quotient.to_string(),
            });
        }
    }
    Ok(quotient)
}
