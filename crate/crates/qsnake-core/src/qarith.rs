//! Laurent polynomials in q^{1/2} with arbitrary-precision integer coefficients,
//! plus the quantum and Gaussian binomial apparatus built on them.
//!
//! Exponents are stored doubled (the exponent of q^{1/2}), so every exponent in
//! the system is an ordinary integer and no rationals appear anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QArithError {
    /// The binomial index pair is outside the defined range k ≤ n.
    #[error("binomial index out of range: k={k} > n={n}")]
    BinomialOutOfRange { n: u32, k: u32 },
    /// Integer evaluation requested on a polynomial with a half-integer exponent.
    #[error("cannot evaluate at an integer: half-integer exponent {doubled}/2 present")]
    FractionalExponent { doubled: i64 },
    /// Integer evaluation with a negative exponent at a base of modulus != 1.
    #[error("evaluation at {base} undefined over the integers: negative exponent {exp} present")]
    NegativeExponent { base: i64, exp: i64 },
}

/// A Laurent polynomial in q^{1/2}. Key = doubled exponent, value = coefficient.
/// Invariant: no stored coefficient is zero; the zero polynomial is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::q_half(0)
    }

    /// q^{doubled/2}.
    pub fn q_half(doubled: i64) -> Self {
        Self::term(doubled, 1)
    }

    /// c · q^{doubled/2}.
    pub fn term(doubled: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(doubled, c);
        }
        QLaurent { terms }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::term(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Iterate (doubled_exponent, coefficient) in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, doubled: i64) -> BigInt {
        self.terms.get(&doubled).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn min_doubled_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_doubled_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiply by q^{doubled/2}.
    pub fn shift(&self, doubled: i64) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + doubled, c.clone())).collect(),
        }
    }

    /// The bar involution q^{1/2} ↦ q^{-1/2}: negates every exponent.
    pub fn bar(&self) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Some((doubled, negative)) iff self = ±q^{doubled/2}.
    pub fn as_unit_q_power(&self) -> Option<(i64, bool)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((*e, false))
        } else if (-c).is_one() {
            Some((*e, true))
        } else {
            None
        }
    }

    /// True iff every doubled exponent is even (the polynomial lies in Z[q^{±1}]).
    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluate at an integer q = v. Requires integral exponents; negative
    /// exponents are only defined at v = ±1.
    pub fn eval_int(&self, v: i64) -> Result<BigInt, QArithError> {
        let mut acc = BigInt::zero();
        for (&d, c) in &self.terms {
            if d % 2 != 0 {
                return Err(QArithError::FractionalExponent { doubled: d });
            }
            let h = d / 2;
            let base = BigInt::from(v);
            let p = if v == 1 {
                BigInt::one()
            } else if v == -1 {
                if h.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() }
            } else if h >= 0 {
                base.pow(h as u32)
            } else {
                return Err(QArithError::NegativeExponent { base: v, exp: h });
            };
            acc += c * p;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QLaurent {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn add_assign_term(&mut self, e: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_assign_term(*e, c);
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_assign_term(*e, &-c.clone());
        }
        out
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_assign_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QLaurent> for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: &QLaurent) -> QLaurent {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, c) in &self.terms {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let qpart = match d {
                0 => String::new(),
                2 => "q".to_string(),
                d if d % 2 == 0 => format!("q^{}", d / 2),
                d => format!("q^({d}/2)"),
            };
            if qpart.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{qpart}")?;
            } else {
                write!(f, "{mag}*{qpart}")?;
            }
        }
        Ok(())
    }
}

// JSON form: sorted list of [doubled_exponent, coefficient] pairs. Coefficients
// are emitted as JSON numbers; with serde_json's arbitrary_precision feature the
// round trip is exact for any magnitude.
impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            let n = serde_json::Number::from_str(&c.to_string())
                .map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&(e, n))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, serde_json::Number)> = Vec::deserialize(d)?;
        let mut out = QLaurent::zero();
        for (e, n) in pairs {
            let c = BigInt::from_str(&n.to_string())
                .map_err(|_| D::Error::custom(format!("non-integer coefficient {n}")))?;
            out.add_assign_term(e, &c);
        }
        Ok(out)
    }
}

/// The quantum integer [n]_q = Σ_{j=0}^{n-1} q^{(2j+1-n)/2}; [0]_q = 0.
pub fn qint(n: u32) -> QLaurent {
    let n = i64::from(n);
    let mut out = QLaurent::zero();
    for j in 0..n {
        out.add_assign_term(2 * j + 1 - n, &BigInt::one());
    }
    out
}

/// The quantum binomial [n over k]_q, computed by the quantum Pascal rule
/// [n,k] = q^{-(n-k)/2}[n-1,k-1] + q^{k/2}[n-1,k]; stays in the Laurent ring.
pub fn qbinom(n: u32, k: u32) -> Result<QLaurent, QArithError> {
    if k > n {
        return Err(QArithError::BinomialOutOfRange { n, k });
    }
    let mut row: Vec<QLaurent> = vec![QLaurent::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m.min(k) {
            let left = if j >= 1 && j - 1 < row.len() as u32 {
                row[(j - 1) as usize].shift(-i64::from(m - j))
            } else {
                QLaurent::zero()
            };
            let right = if j < row.len() as u32 {
                row[j as usize].shift(i64::from(j))
            } else {
                QLaurent::zero()
            };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row[k as usize].clone())
}

/// The Gaussian binomial (n over k)_q = q^{k(n-k)/2}·[n over k]_q ∈ Z[q].
pub fn gauss_binom(n: u32, k: u32) -> Result<QLaurent, QArithError> {
    let b = qbinom(n, k)?;
    let out = b.shift(i64::from(k) * i64::from(n - k));
    debug_assert!(out.has_integral_exponents());
    debug_assert!(out.min_doubled_exp().unwrap_or(0) >= 0);
    Ok(out)
}

/// Classical binomial coefficient; 0 outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}
