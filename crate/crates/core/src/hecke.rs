//! The affine Hecke algebra of `GL_N` over `ℤ[v, v⁻¹]`, `q = v²`.
//!
//! Basis `T_w` for `w` in the extended affine Weyl group, quadratic relation
//! `T_s² = (q − 1)T_s + q`, and `T_x T_y = T_{xy}` when lengths add. Products
//! are computed by peeling the right factor into generator steps, so no
//! structure constants are tabulated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{AffineError, AffinePermutation, Coweight};
use crate::scalar::{LaurentScalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("coweight has rank {got}, expected {expected}")]
    CoweightRank { expected: usize, got: usize },
    #[error("finite simple reflection index {index} out of range 1..{rank}")]
    NotFiniteSimple { index: usize, rank: usize },
    #[error("Bernstein rewriting stalled at {0}")]
    Rewrite(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeckeElement {
    rank: usize,
    terms: BTreeMap<AffinePermutation, LaurentScalar>,
}

pub(crate) fn accumulate<K: Ord + Clone>(map: &mut BTreeMap<K, LaurentScalar>, key: &K, c: &LaurentScalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(key) {
        Some(slot) => {
            *slot += c;
            if slot.is_zero() {
                map.remove(key);
            }
        }
        None => {
            map.insert(key.clone(), c.clone());
        }
    }
}

fn q_minus_one() -> LaurentScalar {
    LaurentScalar::q() - LaurentScalar::one()
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        HeckeElement { rank, terms: BTreeMap::new() }
    }

    /// `T_e`.
    pub fn one(rank: usize) -> Self {
        Self::basis(AffinePermutation::identity(rank))
    }

    pub fn basis(w: AffinePermutation) -> Self {
        let rank = w.rank();
        let mut terms = BTreeMap::new();
        terms.insert(w, LaurentScalar::one());
        HeckeElement { rank, terms }
    }

    pub fn scalar(rank: usize, c: LaurentScalar) -> Self {
        Self::one(rank).scale(&c)
    }

    /// `T_{s_i}`, `0 ≤ i < N`.
    pub fn generator(rank: usize, i: usize) -> Result<Self, HeckeError> {
        Ok(Self::basis(AffinePermutation::simple(rank, i)?))
    }

    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = (AffinePermutation, LaurentScalar)>,
    ) -> Result<Self, HeckeError> {
        let mut out = Self::zero(rank);
        for (w, c) in terms {
            if w.rank() != rank {
                return Err(AffineError::RankMismatch { left: rank, right: w.rank() }.into());
            }
            accumulate(&mut out.terms, &w, &c);
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<AffinePermutation, LaurentScalar> {
        &self.terms
    }

    pub fn coeff(&self, w: &AffinePermutation) -> LaurentScalar {
        self.terms.get(w).cloned().unwrap_or_default()
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

    fn check_rank(&self, other: &Self) -> Result<(), HeckeError> {
        if self.rank != other.rank {
            return Err(AffineError::RankMismatch { left: self.rank, right: other.rank }.into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HeckeError> {
        self.add(&other.scale(&LaurentScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        HeckeElement { rank: self.rank, terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    /// `h · T_{s_i}`.
    pub fn right_mul_generator(&self, i: usize) -> Self {
        let q = LaurentScalar::q();
        let qm1 = q_minus_one();
        let mut out = BTreeMap::new();
        for (x, c) in &self.terms {
            let xs = x.mul_simple_right(i);
            if x.has_right_descent(i) {
                accumulate(&mut out, x, &(c * &qm1));
                accumulate(&mut out, &xs, &(c * &q));
            } else {
                accumulate(&mut out, &xs, c);
            }
        }
        HeckeElement { rank: self.rank, terms: out }
    }

    /// `T_{s_i} · h`.
    pub fn left_mul_generator(&self, i: usize) -> Self {
        let q = LaurentScalar::q();
        let qm1 = q_minus_one();
        let mut out = BTreeMap::new();
        for (x, c) in &self.terms {
            let sx = x.mul_simple_left(i);
            if x.has_left_descent(i) {
                accumulate(&mut out, x, &(c * &qm1));
                accumulate(&mut out, &sx, &(c * &q));
            } else {
                accumulate(&mut out, &sx, c);
            }
        }
        HeckeElement { rank: self.rank, terms: out }
    }

    /// `h · T_{s_i}⁻¹`, using `T_s⁻¹ = q⁻¹T_s + (q⁻¹ − 1)`.
    pub fn right_mul_generator_inverse(&self, i: usize) -> Self {
        let qinv = LaurentScalar::q_pow(-1);
        let shifted = self.right_mul_generator(i).scale(&qinv);
        let rest = self.scale(&(&qinv - &LaurentScalar::one()));
        shifted.add(&rest).expect("same rank")
    }

    /// `h · T_{ω^k}`.
    pub fn right_mul_rotation(&self, k: i64) -> Self {
        let rot = AffinePermutation::rotation_pow(self.rank, k);
        HeckeElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(x, c)| (x.compose_unchecked(&rot), c.clone())).collect(),
        }
    }

    /// `h · T_w`.
    pub fn right_mul_basis(&self, w: &AffinePermutation) -> Result<Self, HeckeError> {
        if w.rank() != self.rank {
            return Err(AffineError::RankMismatch { left: self.rank, right: w.rank() }.into());
        }
        let word = w.reduced_word();
        let mut acc = self.clone();
        for &g in &word.gens {
            acc = acc.right_mul_generator(g);
        }
        Ok(acc.right_mul_rotation(word.rotation))
    }

    /// `h · T_w⁻¹`.
    pub fn right_mul_basis_inverse(&self, w: &AffinePermutation) -> Result<Self, HeckeError> {
        if w.rank() != self.rank {
            return Err(AffineError::RankMismatch { left: self.rank, right: w.rank() }.into());
        }
        let word = w.reduced_word();
        let mut acc = self.right_mul_rotation(-word.rotation);
        for &g in word.gens.iter().rev() {
            acc = acc.right_mul_generator_inverse(g);
        }
        Ok(acc)
    }

    /// `h · θ_λ`.
    pub fn right_mul_theta(&self, lambda: &Coweight) -> Result<Self, HeckeError> {
        let (plus, minus) = lambda.dominant_split();
        self.right_mul_theta_split(&plus, &minus)
    }

    /// `h · θ_λ` computed from an explicit split `λ = plus − minus`.
    pub fn right_mul_theta_split(&self, plus: &Coweight, minus: &Coweight) -> Result<Self, HeckeError> {
        self.check_coweight(plus)?;
        self.check_coweight(minus)?;
        let prefactor =
            LaurentScalar::v_pow(minus.translation_length() as i64 - plus.translation_length() as i64);
        Ok(self
            .right_mul_basis(&coweight_element(plus))?
            .right_mul_basis_inverse(&coweight_element(minus))?
            .scale(&prefactor))
    }

    fn check_coweight(&self, lambda: &Coweight) -> Result<(), HeckeError> {
        if lambda.rank() != self.rank {
            return Err(HeckeError::CoweightRank { expected: self.rank, got: lambda.rank() });
        }
        Ok(())
    }

    /// The product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, HeckeError> {
        self.check_rank(other)?;
        let mut out = BTreeMap::new();
        for (y, c) in &other.terms {
            let part = self.right_mul_basis(y)?;
            for (x, a) in &part.terms {
                accumulate(&mut out, x, &(a * c));
            }
        }
        Ok(HeckeElement { rank: self.rank, terms: out })
    }

    /// Coefficientwise value at `v = 1`.
    pub fn at_one(&self) -> BTreeMap<AffinePermutation, BigInt> {
        self.terms
            .iter()
            .map(|(w, c)| (w.clone(), c.at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// The element of the extended affine Weyl group attached to a coweight.
pub fn coweight_element(lambda: &Coweight) -> AffinePermutation {
    AffinePermutation::translation(lambda)
}

/// `T_w⁻¹`.
pub fn t_inverse(w: &AffinePermutation) -> HeckeElement {
    HeckeElement::one(w.rank()).right_mul_basis_inverse(w).expect("same rank")
}

/// `θ_λ = q^{(ℓ(λ⁻) − ℓ(λ⁺))/2} T_{λ⁺} T_{λ⁻}⁻¹` for the canonical split.
pub fn theta(lambda: &Coweight) -> HeckeElement {
    HeckeElement::one(lambda.rank()).right_mul_theta(lambda).expect("same rank")
}

/// `θ_λ` from a caller-chosen dominant split.
pub fn theta_from_split(plus: &Coweight, minus: &Coweight) -> Result<HeckeElement, HeckeError> {
    HeckeElement::one(plus.rank()).right_mul_theta_split(plus, minus)
}

/// Sign of the finite part of `w`.
pub fn sgn_f(w: &AffinePermutation) -> i32 {
    w.sign_f()
}

/// Checks `T_s θ_{s(λ)} − θ_λ T_s = (1 − q)(θ_λ − θ_{s(λ)}) / (1 − θ_{−α∨})`
/// after clearing the denominator on the right.
pub fn bernstein_check(s: usize, lambda: &Coweight) -> Result<bool, HeckeError> {
    let n = lambda.rank();
    if s == 0 || s >= n {
        return Err(HeckeError::NotFiniteSimple { index: s, rank: n });
    }
    let ts = HeckeElement::generator(n, s)?;
    let s_lambda = lambda.reflect(s);
    let th_l = theta(lambda);
    let th_sl = theta(&s_lambda);
    let commutator = ts.right_mul_theta(&s_lambda)?.sub(&th_l.right_mul_generator(s))?;
    let neg_coroot = Coweight::simple_coroot(n, s).neg();
    let lhs = commutator.sub(&commutator.right_mul_theta(&neg_coroot)?)?;
    let one_minus_q = LaurentScalar::one() - LaurentScalar::q();
    let rhs = th_l.sub(&th_sl)?.scale(&one_minus_q);
    Ok(lhs == rhs)
}

/// For `⟨α, λ⟩ ≥ 1`, checks the commutator against the finite sum
/// `(1 − q) Σ_{i < ⟨α,λ⟩} θ_λ θ_{−α∨}^i` directly.
pub fn bernstein_sum_check(s: usize, lambda: &Coweight) -> Result<Option<bool>, HeckeError> {
    let n = lambda.rank();
    if s == 0 || s >= n {
        return Err(HeckeError::NotFiniteSimple { index: s, rank: n });
    }
    let k = lambda.simple_pairing(s);
    if k < 1 {
        return Ok(None);
    }
    let ts = HeckeElement::generator(n, s)?;
    let commutator = ts.right_mul_theta(&lambda.reflect(s))?.sub(&theta(lambda).right_mul_generator(s))?;
    let neg_coroot = Coweight::simple_coroot(n, s).neg();
    let mut sum = HeckeElement::zero(n);
    for i in 0..k {
        sum = sum.add(&theta(&lambda.add(&neg_coroot.scale(i))))?;
    }
    Ok(Some(commutator == sum.scale(&(LaurentScalar::one() - LaurentScalar::q()))))
}

/// Coordinates in the Bernstein basis `{T_w θ_λ : w finite}`, keyed by the
/// finite permutation (as a rank-`N` affine permutation) and `λ`.
pub type BernsteinCoords = BTreeMap<(AffinePermutation, Coweight), LaurentScalar>;

/// `T_w θ_λ` expanded in the `T`-basis.
pub fn bernstein_basis_element(w: &AffinePermutation, lambda: &Coweight) -> Result<HeckeElement, HeckeError> {
    HeckeElement::basis(w.clone()).right_mul_theta(lambda)
}

/// Rewrites `h` in the Bernstein basis. `T_w θ_λ` equals a unit multiple of
/// `T_{w t_λ}` plus strictly shorter terms, so peeling the longest term
/// terminates.
pub fn to_bernstein(h: &HeckeElement) -> Result<BernsteinCoords, HeckeError> {
    let mut rest = h.clone();
    let mut coords = BTreeMap::new();
    while let Some((x, cx)) = longest_term(&rest) {
        let (w, mu) = x.finite_translation_split();
        let w = AffinePermutation::from_finite(&w)?;
        let b = bernstein_basis_element(&w, &mu)?;
        let lead = b.coeff(&x);
        let (sign, k) = lead.as_unit().ok_or_else(|| HeckeError::Rewrite(format!("{x}: leading coefficient {lead}")))?;
        let len = x.length();
        if b.terms.keys().any(|y| y != &x && y.length() >= len) {
            return Err(HeckeError::Rewrite(format!("{x}: expansion of T_w θ_λ is not triangular")));
        }
        let factor = cx.mul_v_pow(-k).scale(&BigInt::from(sign));
        rest = rest.sub(&b.scale(&factor))?;
        accumulate(&mut coords, &(w, mu), &factor);
    }
    Ok(coords)
}

fn longest_term(h: &HeckeElement) -> Option<(AffinePermutation, LaurentScalar)> {
    h.terms
        .iter()
        .max_by(|a, b| a.0.length().cmp(&b.0.length()).then_with(|| a.0.cmp(b.0)))
        .map(|(x, c)| (x.clone(), c.clone()))
}

/// Inverse of [`to_bernstein`].
pub fn from_bernstein(rank: usize, coords: &BernsteinCoords) -> Result<HeckeElement, HeckeError> {
    let mut out = HeckeElement::zero(rank);
    for ((w, lambda), c) in coords {
        out = out.add(&bernstein_basis_element(w, lambda)?.scale(c))?;
    }
    Ok(out)
}

/// `IM(T_s) = −q T_s⁻¹ = (q − 1) − T_s` for finite simple `s`.
pub fn im_generator(rank: usize, s: usize) -> Result<HeckeElement, HeckeError> {
    if s == 0 || s >= rank {
        return Err(HeckeError::NotFiniteSimple { index: s, rank });
    }
    HeckeElement::scalar(rank, q_minus_one()).sub(&HeckeElement::generator(rank, s)?)
}

/// The Iwahori–Matsumoto involution: `T_s ↦ −q T_s⁻¹` on finite simple
/// reflections and `θ_λ ↦ θ_{−λ}`, evaluated through the Bernstein basis.
pub fn im_involution(h: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    let n = h.rank();
    let coords = to_bernstein(h)?;
    let mut out = HeckeElement::zero(n);
    for ((w, lambda), c) in &coords {
        // IM(T_w) = IM(T_{s_1}) ⋯ IM(T_{s_k}) for a reduced word of finite w
        let mut image = HeckeElement::one(n);
        for &g in &w.reduced_word().gens {
            image = image.mul(&im_generator(n, g)?)?;
        }
        let image = image.right_mul_theta(&lambda.neg())?;
        out = out.add(&image.scale(c))?;
    }
    Ok(out)
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·T{w}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    window: Vec<i64>,
    coeff: LaurentScalar,
}

#[derive(Serialize, Deserialize)]
struct HeckeRepr {
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for HeckeElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        HeckeRepr {
            n: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRepr { window: w.window().to_vec(), coeff: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HeckeElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = HeckeRepr::deserialize(deserializer)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|t| AffinePermutation::new(t.window).map(|w| (w, t.coeff)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        HeckeElement::from_terms(repr.n, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, i: usize) -> AffinePermutation {
        AffinePermutation::simple(n, i).unwrap()
    }

    fn t(n: usize, i: usize) -> HeckeElement {
        HeckeElement::generator(n, i).unwrap()
    }

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec())
    }

    fn q() -> LaurentScalar {
        LaurentScalar::q()
    }

    #[test]
    fn quadratic_relation() {
        for i in 0..4 {
            let sq = t(4, i).mul(&t(4, i)).unwrap();
            let expected = t(4, i).scale(&q_minus_one()).add(&HeckeElement::scalar(4, q())).unwrap();
            assert_eq!(sq, expected);
        }
    }

    #[test]
    fn lengths_add() {
        let prod = t(4, 1).mul(&t(4, 2)).unwrap();
        assert_eq!(prod, HeckeElement::basis(s(4, 1).compose(&s(4, 2)).unwrap()));
        let a = t(4, 1).mul(&t(4, 2)).unwrap().mul(&t(4, 1)).unwrap();
        let b = t(4, 1).mul(&t(4, 2).mul(&t(4, 1)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn left_and_right_generator_products_agree() {
        let x = HeckeElement::basis(AffinePermutation::new(vec![3, -2, 8, 1]).unwrap());
        for i in 0..4 {
            assert_eq!(x.left_mul_generator(i), t(4, i).mul(&x).unwrap());
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(t_inverse(&AffinePermutation::identity(4)), HeckeElement::one(4));
        let inv = t_inverse(&s(4, 1));
        let expected = HeckeElement::from_terms(
            4,
            [
                (s(4, 1), LaurentScalar::q_pow(-1)),
                (AffinePermutation::identity(4), LaurentScalar::q_pow(-1) - LaurentScalar::one()),
            ],
        )
        .unwrap();
        assert_eq!(inv, expected);
        let w = s(4, 1).compose(&s(4, 2)).unwrap();
        assert_eq!(t_inverse(&w), t_inverse(&s(4, 2)).mul(&t_inverse(&s(4, 1))).unwrap());
        assert_eq!(t_inverse(&w).mul(&HeckeElement::basis(w)).unwrap(), HeckeElement::one(4));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&cw(&[0, 0, 0, 0])), HeckeElement::one(4));
        let dom = cw(&[2, 1, 1, 0]);
        let expected = HeckeElement::basis(AffinePermutation::translation(&dom))
            .scale(&LaurentScalar::v_pow(-(dom.translation_length() as i64)));
        assert_eq!(theta(&dom), expected);
        let central = theta(&cw(&[1, 1, 1, 1]));
        assert_eq!(central, HeckeElement::basis(AffinePermutation::rotation_pow(4, 4)));
    }

    #[test]
    fn sgn_f_examples() {
        assert_eq!(sgn_f(&AffinePermutation::identity(4)), 1);
        assert_eq!(sgn_f(&s(4, 1)), -1);
        assert_eq!(sgn_f(&AffinePermutation::translation(&cw(&[1, -2, 0, 5]))), 1);
    }

    #[test]
    fn bernstein_examples() {
        assert!(bernstein_check(1, &cw(&[1, 1, 0, 0])).unwrap());
        assert!(bernstein_check(1, &cw(&[1, 0])).unwrap());
        assert_eq!(bernstein_sum_check(1, &cw(&[1, 0])).unwrap(), Some(true));
        assert!(bernstein_check(2, &cw(&[0, 1, 0, 0])).unwrap());
        assert!(matches!(bernstein_check(0, &cw(&[1, 0])), Err(HeckeError::NotFiniteSimple { .. })));
    }

    #[test]
    fn im_examples() {
        assert_eq!(im_involution(&HeckeElement::one(4)).unwrap(), HeckeElement::one(4));
        let im_s1 = im_involution(&t(4, 1)).unwrap();
        let expected = HeckeElement::scalar(4, q_minus_one()).sub(&t(4, 1)).unwrap();
        assert_eq!(im_s1, expected);
        assert_eq!(im_s1, t_inverse(&s(4, 1)).scale(&(-q())));
        let x = t(4, 1).right_mul_theta(&cw(&[1, 0, 0, 0])).unwrap();
        assert_eq!(im_involution(&im_involution(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn json_shape() {
        let h = t(2, 1).add(&HeckeElement::scalar(2, q())).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(
            s,
            r#"{"N":2,"terms":[{"window":[1,2],"coeff":{"lo":2,"coeffs":[1]}},{"window":[2,1],"coeff":{"lo":0,"coeffs":[1]}}]}"#
        );
        assert_eq!(serde_json::from_str::<HeckeElement>(&s).unwrap(), h);
    }
}
