//! The based quantum torus: basis elements M[a] over a skew-symmetric integer
//! form Λ, with the twisted product M[a]M[b] = q^{(aᵀΛb)/2} M[a+b], commutation
//! exponent extraction, and exact left division (the engine behind mutation).

use crate::qarith::QLaurent;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not skew-symmetric at ({i},{j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("exponent vector has length {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("elements live over different skew forms")]
    LambdaMismatch,
    #[error("elements do not q-commute")]
    NotQCommuting,
    #[error("divisor has non-unit leading coefficient or is zero")]
    UnsupportedDivisor,
    #[error("left division is not exact")]
    InexactDivision,
}

/// A skew-symmetric integer matrix; the quasi-commutation form of a torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    m: usize,
    entries: Vec<i64>,
}

impl SkewMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, TorusError> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(TorusError::NotSquare);
        }
        for i in 0..m {
            for j in 0..m {
                if rows[i][j] != -rows[j][i] {
                    return Err(TorusError::NotSkewSymmetric { i, j });
                }
            }
        }
        Ok(SkewMatrix { m, entries: rows.into_iter().flatten().collect() })
    }

    pub fn zero(m: usize) -> Self {
        SkewMatrix { m, entries: vec![0; m * m] }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.m + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.m).map(|i| self.entries[i * self.m..(i + 1) * self.m].to_vec()).collect()
    }

    /// The bilinear pairing aᵀΛb.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        debug_assert_eq!(a.len(), self.m);
        debug_assert_eq!(b.len(), self.m);
        let mut acc = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.entries[i * self.m..(i + 1) * self.m];
            let dot: i64 = row.iter().zip(b).map(|(l, bj)| l * bj).sum();
            acc += ai * dot;
        }
        acc
    }
}

fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn coord_range(terms: &BTreeMap<Vec<i64>, QLaurent>, i: usize) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for e in terms.keys() {
        lo = lo.min(e[i]);
        hi = hi.max(e[i]);
    }
    (lo, hi)
}

/// An element of the based quantum torus over a fixed Λ: a finite Z[q^{±1/2}]-
/// combination of basis monomials M[a]. Invariant: no stored coefficient is zero.
#[derive(Debug, Clone)]
pub struct TorusElement {
    lambda: Arc<SkewMatrix>,
    terms: BTreeMap<Vec<i64>, QLaurent>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.terms == other.terms
    }
}
impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(lambda: Arc<SkewMatrix>) -> Self {
        TorusElement { lambda, terms: BTreeMap::new() }
    }

    pub fn one(lambda: Arc<SkewMatrix>) -> Self {
        let m = lambda.dim();
        Self::monomial(lambda, vec![0; m], QLaurent::one()).unwrap()
    }

    /// c·M[a].
    pub fn monomial(
        lambda: Arc<SkewMatrix>,
        exp: Vec<i64>,
        coeff: QLaurent,
    ) -> Result<Self, TorusError> {
        if exp.len() != lambda.dim() {
            return Err(TorusError::DimensionMismatch { expected: lambda.dim(), got: exp.len() });
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Ok(TorusElement { lambda, terms })
    }

    /// M[a] with coefficient 1.
    pub fn basis(lambda: Arc<SkewMatrix>, exp: Vec<i64>) -> Result<Self, TorusError> {
        Self::monomial(lambda, exp, QLaurent::one())
    }

    pub fn from_terms(
        lambda: Arc<SkewMatrix>,
        items: impl IntoIterator<Item = (Vec<i64>, QLaurent)>,
    ) -> Result<Self, TorusError> {
        let mut out = Self::zero(lambda);
        for (exp, c) in items {
            if exp.len() != out.lambda.dim() {
                return Err(TorusError::DimensionMismatch {
                    expected: out.lambda.dim(),
                    got: exp.len(),
                });
            }
            out.add_assign_term(exp, &c);
        }
        Ok(out)
    }

    pub fn lambda(&self) -> &Arc<SkewMatrix> {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of the exponent vector.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coefficient_of(&self, exp: &[i64]) -> QLaurent {
        self.terms.get(exp).cloned().unwrap_or_else(QLaurent::zero)
    }

    /// Leading term under the monomial order (lex, first coordinate most
    /// significant); None for the zero element.
    pub fn leading(&self) -> Option<(&Vec<i64>, &QLaurent)> {
        self.terms.iter().next_back()
    }

    pub fn trailing(&self) -> Option<(&Vec<i64>, &QLaurent)> {
        self.terms.iter().next()
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lambda, &other.lambda) || self.lambda == other.lambda
    }

    fn check_ambient(&self, other: &Self) -> Result<(), TorusError> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(TorusError::LambdaMismatch)
        }
    }

    fn add_assign_term(&mut self, exp: Vec<i64>, c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_assign_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        out.sub_assign(other);
        Ok(out)
    }

    fn sub_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_assign_term(e.clone(), &-c);
        }
    }

    pub fn neg(&self) -> Self {
        TorusElement {
            lambda: Arc::clone(&self.lambda),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Λ-twisted product, bilinear over M[a]M[b] = q^{(aᵀΛb)/2}·M[a+b].
    pub fn mul(&self, other: &Self) -> Result<Self, TorusError> {
        self.check_ambient(other)?;
        let mut out = Self::zero(Arc::clone(&self.lambda));
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let twist = self.lambda.pairing(a, b);
                let c = (ca * cb).shift(twist);
                out.add_assign_term(vec_add(a, b), &c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, TorusError> {
        let mut out = Self::one(Arc::clone(&self.lambda));
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiply by the central scalar q^{doubled/2}.
    pub fn shift_q(&self, doubled: i64) -> Self {
        TorusElement {
            lambda: Arc::clone(&self.lambda),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shift(doubled))).collect(),
        }
    }

    pub fn scale(&self, s: &QLaurent) -> Self {
        if s.is_zero() {
            return Self::zero(Arc::clone(&self.lambda));
        }
        TorusElement {
            lambda: Arc::clone(&self.lambda),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// The bar involution: fixes every M[a], conjugates coefficients
    /// (q^{1/2} ↦ q^{-1/2}); an antiautomorphism of the torus.
    pub fn bar(&self) -> Self {
        TorusElement {
            lambda: Arc::clone(&self.lambda),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.bar())).collect(),
        }
    }

    /// The integer k with X·Y = q^{k/2}·Y·X, verified on the full products.
    pub fn commutation_exponent(&self, other: &Self) -> Result<i64, TorusError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(TorusError::NotQCommuting);
        }
        let xy = self.mul(other)?;
        let yx = other.mul(self)?;
        let (lead_exp, c1) = xy.leading().ok_or(TorusError::NotQCommuting)?;
        let c2 = yx.terms.get(lead_exp).ok_or(TorusError::NotQCommuting)?;
        let k = c1.min_doubled_exp().ok_or(TorusError::NotQCommuting)?
            - c2.min_doubled_exp().ok_or(TorusError::NotQCommuting)?;
        if xy == yx.shift_q(k) {
            Ok(k)
        } else {
            Err(TorusError::NotQCommuting)
        }
    }

    /// Exact left division: returns Q with self·Q = dividend. The divisor's
    /// leading coefficient must be ±q^{k/2}. The torus is a domain, so in an
    /// exact product the min and max of every coordinate (and the lex
    /// extremes) are additive; any candidate quotient exponent outside the
    /// box those identities force proves inexactness.
    pub fn left_quotient(&self, dividend: &Self) -> Result<Self, TorusError> {
        self.check_ambient(dividend)?;
        if dividend.is_zero() {
            return Ok(Self::zero(Arc::clone(&self.lambda)));
        }
        let (a_d, c_d) = self.leading().ok_or(TorusError::UnsupportedDivisor)?;
        let a_d = a_d.clone();
        let (l, negated) = c_d.as_unit_q_power().ok_or(TorusError::UnsupportedDivisor)?;
        let lex_bound = vec_sub(dividend.trailing().unwrap().0, self.trailing().unwrap().0);
        let m = self.dim();
        let coord_bounds: Vec<(i64, i64)> = (0..m)
            .map(|i| {
                let (dx_lo, dx_hi) = coord_range(&dividend.terms, i);
                let (d_lo, d_hi) = coord_range(&self.terms, i);
                (dx_lo - d_lo, dx_hi - d_hi)
            })
            .collect();
        if coord_bounds.iter().any(|&(lo, hi)| lo > hi) {
            return Err(TorusError::InexactDivision);
        }

        let mut quotient = Self::zero(Arc::clone(&self.lambda));
        let mut remainder = dividend.clone();
        let cap = 1_000_000usize;
        for _ in 0..cap {
            let Some((b_r, c_r)) = remainder.leading() else {
                return Ok(quotient);
            };
            let b = vec_sub(b_r, &a_d);
            if b < lex_bound
                || b.iter().zip(&coord_bounds).any(|(&bi, &(lo, hi))| bi < lo || bi > hi)
            {
                return Err(TorusError::InexactDivision);
            }
            let mut t = c_r.shift(-l - self.lambda.pairing(&a_d, &b));
            if negated {
                t = -&t;
            }
            let piece = Self::monomial(Arc::clone(&self.lambda), b.clone(), t.clone())?;
            remainder.sub_assign(&self.mul(&piece)?);
            quotient.add_assign_term(b, &t);
        }
        Err(TorusError::InexactDivision)
    }

    /// Specialize q^{1/2} ↦ 1 and forget the twist, landing in the commutative
    /// Laurent ring on the same exponent lattice.
    pub fn specialize_classical(&self) -> ClassicalLaurent {
        let mut out = ClassicalLaurent::zero(self.dim());
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.eval_at_one());
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("torus element serializes")
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let exps = e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            if c.is_one() {
                write!(f, "M[{exps}]")?;
            } else if c.num_terms() == 1 {
                write!(f, "{c}*M[{exps}]")?;
            } else {
                write!(f, "({c})*M[{exps}]")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coeff: QLaurent,
}

#[derive(Serialize, Deserialize)]
struct TorusJson {
    m: usize,
    lambda: Vec<Vec<i64>>,
    terms: Vec<TermJson>,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TorusJson {
            m: self.dim(),
            lambda: self.lambda.rows(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TorusJson::deserialize(d)?;
        let lambda = SkewMatrix::new(raw.lambda).map_err(serde::de::Error::custom)?;
        if lambda.dim() != raw.m {
            return Err(serde::de::Error::custom("lambda dimension disagrees with m"));
        }
        TorusElement::from_terms(
            Arc::new(lambda),
            raw.terms.into_iter().map(|t| (t.exp, t.coeff)),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// A commutative Laurent polynomial in a fixed number of variables; the q = 1
/// shadow of a torus element, and the value type of the classical oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalLaurent {
    vars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl ClassicalLaurent {
    pub fn zero(vars: usize) -> Self {
        ClassicalLaurent { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        Self::monomial(vec![0; vars], BigInt::from(1))
    }

    pub fn monomial(exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(exp.len());
        out.add_term(exp, c.into());
        out
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: BigInt) {
        assert_eq!(exp.len(), self.vars, "variable count mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = Self::zero(self.vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(vec_add(a, b), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.vars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Relabel variables: the exponent of new variable i is the old exponent
    /// at position perm[i].
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.vars);
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let ne: Vec<i64> = perm.iter().map(|&p| e[p]).collect();
            out.add_term(ne, c.clone());
        }
        out
    }
}

impl fmt::Display for ClassicalLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exps = e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                format!("{c}*[{exps}]")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::qint;
    use proptest::prelude::*;

    /// The 4×4 quasi-commutation matrix of the principal rank-2 setup with
    /// b₁₂ = 2; fixture for most torus tests.
    pub(crate) fn lambda_k() -> Arc<SkewMatrix> {
        Arc::new(
            SkewMatrix::new(vec![
                vec![0, 0, -1, 0],
                vec![0, 0, 0, -1],
                vec![1, 0, 0, -2],
                vec![0, 1, 2, 0],
            ])
            .unwrap(),
        )
    }

    fn gen(i: usize) -> TorusElement {
        let mut e = vec![0i64; 4];
        e[i] = 1;
        TorusElement::basis(lambda_k(), e).unwrap()
    }

    #[test]
    fn skew_validation() {
        assert_eq!(SkewMatrix::new(vec![vec![0, 1], vec![1, 0]]),
            Err(TorusError::NotSkewSymmetric { i: 0, j: 1 }));
        assert_eq!(SkewMatrix::new(vec![vec![0, 1]]), Err(TorusError::NotSquare));
        assert!(SkewMatrix::new(vec![vec![0, 3], vec![-3, 0]]).is_ok());
    }

    #[test]
    fn basis_products() {
        let (x1, x2, y1) = (gen(0), gen(1), gen(2));
        // x₁x₂ = M[1,1,0,0] = x₂x₁
        let m1100 = TorusElement::basis(lambda_k(), vec![1, 1, 0, 0]).unwrap();
        assert_eq!(x1.mul(&x2).unwrap(), m1100);
        assert_eq!(x2.mul(&x1).unwrap(), m1100);
        // x₁y₁ = q^{-1/2}M[1,0,1,0]
        let p = x1.mul(&y1).unwrap();
        let want = TorusElement::monomial(lambda_k(), vec![1, 0, 1, 0], QLaurent::q_half(-1)).unwrap();
        assert_eq!(p, want);
        // identity
        let one = TorusElement::one(lambda_k());
        assert_eq!(one.mul(&p).unwrap(), p);
        assert_eq!(p.mul(&one).unwrap(), p);
    }

    #[test]
    fn commutation_exponents_on_generators() {
        let (x1, x2, y1, y2) = (gen(0), gen(1), gen(2), gen(3));
        assert_eq!(x1.commutation_exponent(&x2).unwrap(), 0);
        assert_eq!(y1.commutation_exponent(&y2).unwrap(), -4);
        assert_eq!(x1.commutation_exponent(&y1).unwrap(), -2);
        assert_eq!(x2.commutation_exponent(&y2).unwrap(), -2);
        assert_eq!(x1.commutation_exponent(&x1).unwrap(), 0);
        // x₃ = M[-1,0,1,0] + M[-1,2,0,0] q-commutes with y₁ at k = 2.
        let x3 = TorusElement::from_terms(
            lambda_k(),
            [(vec![-1, 0, 1, 0], QLaurent::one()), (vec![-1, 2, 0, 0], QLaurent::one())],
        )
        .unwrap();
        assert_eq!(x3.commutation_exponent(&y1).unwrap(), 2);
        assert_eq!(x3.commutation_exponent(&y2).unwrap(), -4);
        // x₁ + x₂ does not q-commute with y₁.
        let s = x1.add(&x2).unwrap();
        assert_eq!(s.commutation_exponent(&y1), Err(TorusError::NotQCommuting));
    }

    #[test]
    fn lambda_mismatch_is_an_error() {
        let other = Arc::new(SkewMatrix::zero(4));
        let a = TorusElement::basis(lambda_k(), vec![1, 0, 0, 0]).unwrap();
        let b = TorusElement::basis(other, vec![0, 1, 0, 0]).unwrap();
        assert_eq!(a.mul(&b), Err(TorusError::LambdaMismatch));
        assert_eq!(a.add(&b), Err(TorusError::LambdaMismatch));
    }

    #[test]
    fn left_quotient_basics() {
        let (x1, x2) = (gen(0), gen(1));
        let b = TorusElement::monomial(lambda_k(), vec![0, 2, 1, 0], qint(2)).unwrap();
        let prod = x1.mul(&b).unwrap();
        assert_eq!(x1.left_quotient(&prod).unwrap(), b);
        // monomials are units, so x₁ divides x₁ + x₂ with a Laurent quotient
        let s = x1.add(&x2).unwrap();
        let q = x1.left_quotient(&s).unwrap();
        assert_eq!(x1.mul(&q).unwrap(), s);
        assert_eq!(q.num_terms(), 2);
        // 1 + x₁ does not left-divide x₂ (inexact already at q = 1)
        let d1 = TorusElement::one(lambda_k()).add(&x1).unwrap();
        assert_eq!(d1.left_quotient(&x2), Err(TorusError::InexactDivision));
        // ... and 1 has no Laurent quotient by 1 + x₁ either
        assert_eq!(
            d1.left_quotient(&TorusElement::one(lambda_k())),
            Err(TorusError::InexactDivision)
        );
        // a divisor with non-unit leading coefficient is rejected
        let d = TorusElement::monomial(lambda_k(), vec![1, 0, 0, 0], qint(2)).unwrap();
        assert_eq!(d.left_quotient(&prod), Err(TorusError::UnsupportedDivisor));
        // zero dividend
        assert!(x1.left_quotient(&TorusElement::zero(lambda_k())).unwrap().is_zero());
    }

    #[test]
    fn left_quotient_multiterm_divisor() {
        // D = M[-1,0,1,0] + M[-1,2,0,0] (a cluster variable), Q arbitrary.
        let d = TorusElement::from_terms(
            lambda_k(),
            [(vec![-1, 0, 1, 0], QLaurent::one()), (vec![-1, 2, 0, 0], QLaurent::one())],
        )
        .unwrap();
        let q = TorusElement::from_terms(
            lambda_k(),
            [
                (vec![0, -1, 0, 0], qint(3)),
                (vec![2, 0, -1, 1], QLaurent::q_half(-3)),
                (vec![-1, 1, 1, 1], QLaurent::term(1, -4)),
            ],
        )
        .unwrap();
        let x = d.mul(&q).unwrap();
        assert_eq!(d.left_quotient(&x).unwrap(), q);
        // perturb: adding 1 makes it inexact
        let x_bad = x.add(&TorusElement::one(lambda_k())).unwrap();
        assert_eq!(d.left_quotient(&x_bad), Err(TorusError::InexactDivision));
    }

    #[test]
    fn specialization_is_the_q1_shadow() {
        let x3 = TorusElement::from_terms(
            lambda_k(),
            [(vec![-1, 0, 1, 0], QLaurent::one()), (vec![-1, 2, 0, 0], QLaurent::one())],
        )
        .unwrap();
        let mut want = ClassicalLaurent::monomial(vec![-1, 0, 1, 0], 1);
        want = want.add(&ClassicalLaurent::monomial(vec![-1, 2, 0, 0], 1));
        assert_eq!(x3.specialize_classical(), want);
        assert_eq!(
            TorusElement::one(lambda_k()).specialize_classical(),
            ClassicalLaurent::one(4)
        );
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let x = TorusElement::from_terms(
            lambda_k(),
            [
                (vec![-1, 0, 1, 0], qint(2)),
                (vec![-1, 2, 0, 0], QLaurent::term(3, num_bigint::BigInt::from(2u8).pow(80))),
            ],
        )
        .unwrap();
        let s = x.to_json_string();
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.to_json_string(), s);
        assert!(s.starts_with("{\"m\":4,\"lambda\":[[0,0,-1,0],"));
    }

    fn arb_element() -> impl Strategy<Value = TorusElement> {
        prop::collection::vec(
            (prop::collection::vec(-2i64..3, 4), -4i64..4, 1i64..4),
            0..4,
        )
        .prop_map(|items| {
            TorusElement::from_terms(
                lambda_k(),
                items.into_iter().map(|(e, d, c)| (e, QLaurent::term(d, c))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associativity_and_distributivity(
            x in arb_element(), y in arb_element(), z in arb_element()
        ) {
            let xy_z = x.mul(&y).unwrap().mul(&z).unwrap();
            let x_yz = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bar_is_an_antiautomorphism(x in arb_element(), y in arb_element()) {
            prop_assert_eq!(x.bar().bar(), x.clone());
            prop_assert_eq!(x.mul(&y).unwrap().bar(), y.bar().mul(&x.bar()).unwrap());
        }

        #[test]
        fn basis_commutation_is_the_pairing(
            a in prop::collection::vec(-3i64..4, 4),
            b in prop::collection::vec(-3i64..4, 4),
        ) {
            let l = lambda_k();
            let ma = TorusElement::basis(Arc::clone(&l), a.clone()).unwrap();
            let mb = TorusElement::basis(Arc::clone(&l), b.clone()).unwrap();
            prop_assert_eq!(
                ma.commutation_exponent(&mb).unwrap(),
                2 * l.pairing(&a, &b)
            );
        }

        #[test]
        fn quotient_recovers_factor(q in arb_element(), d in -3i64..3, neg in any::<bool>()) {
            // divisor with unit leading coefficient: ±q^{d/2}·M[1,0,0,0] + lower
            let mut c = QLaurent::q_half(d);
            if neg { c = -&c; }
            let divisor = TorusElement::from_terms(
                lambda_k(),
                [(vec![1, 0, 0, 0], c), (vec![0, 0, -1, 0], qint(2))],
            ).unwrap();
            let x = divisor.mul(&q).unwrap();
            prop_assert_eq!(divisor.left_quotient(&x).unwrap(), q);
        }

        #[test]
        fn specialization_is_a_ring_hom(x in arb_element(), y in arb_element()) {
            prop_assert_eq!(
                x.mul(&y).unwrap().specialize_classical(),
                x.specialize_classical().mul(&y.specialize_classical())
            );
            prop_assert_eq!(
                x.add(&y).unwrap().specialize_classical(),
                x.specialize_classical().add(&y.specialize_classical())
            );
        }
    }
}
