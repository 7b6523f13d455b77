//! Exact Laurent polynomials in `v`, with `q = v²`.
//!
//! Every coefficient in the Hecke algebra and its modules lives here. Half
//! integer powers of `q` are integer powers of `v`, so nothing ever leaves
//! the ring.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot evaluate a Laurent polynomial at v = 0")]
    ZeroEvaluationPoint,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
}

/// A Laurent polynomial `Σ coeffs[k] · v^(lo + k)`.
///
/// Canonical form: either `coeffs` is empty (zero, with `lo == 0`) or its
/// first and last entries are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentScalar {
    lo: i64,
    coeffs: Vec<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    /// `c · v^k`.
    pub fn monomial(c: BigInt, k: i64) -> Self {
        Self::from_parts(k, vec![c])
    }

    pub fn v_pow(k: i64) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    pub fn q_pow(k: i64) -> Self {
        Self::v_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// Builds a scalar from a lowest exponent and dense coefficients, then
    /// canonicalizes.
    pub fn from_parts(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut s = LaurentScalar { lo, coeffs };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent of `v`; `None` for zero.
    pub fn lowest_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    pub fn highest_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `v^k`.
    pub fn coeff(&self, k: i64) -> BigInt {
        let idx = k - self.lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.lo + k as i64, c))
    }

    /// If this is `±v^k`, returns `(±1, k)`.
    pub fn as_unit(&self) -> Option<(i64, i64)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let c = &self.coeffs[0];
        if c.is_one() {
            Some((1, self.lo))
        } else if (-c).is_one() {
            Some((-1, self.lo))
        } else {
            None
        }
    }

    pub fn mul_v_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentScalar { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_parts(self.lo, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn combine(&self, other: &Self, op: CombineOp) -> Self {
        match op {
            CombineOp::Add => self + other,
            CombineOp::Sub => self - other,
            CombineOp::Mul => self * other,
        }
    }

    /// Exact division. Fails unless `divisor` divides `self` in `ℤ[v, v⁻¹]`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, ScalarError> {
        if divisor.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Both are v^lo times a polynomial with nonzero constant term, so the
        // quotient is a polynomial times v^(lo_a - lo_b).
        let d = &divisor.coeffs;
        let dlead = d.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.len() {
            return Err(self.not_divisible(divisor));
        }
        let qlen = rem.len() - d.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + d.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return Err(self.not_divisible(divisor));
            }
            for (j, dj) in d.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(self.not_divisible(divisor));
        }
        Ok(Self::from_parts(self.lo - divisor.lo, quot))
    }

    fn not_divisible(&self, divisor: &Self) -> ScalarError {
        ScalarError::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() }
    }

    /// Evaluates at a nonzero rational value of `v`.
    pub fn specialize(&self, v: &BigRational) -> Result<BigRational, ScalarError> {
        if v.is_zero() {
            return Err(ScalarError::ZeroEvaluationPoint);
        }
        // Horner on the polynomial part, then the monomial shift.
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + BigRational::from_integer(c.clone());
        }
        let shift = if self.lo >= 0 {
            num_traits::pow(v.clone(), self.lo as usize)
        } else {
            num_traits::pow(v.recip(), (-self.lo) as usize)
        };
        Ok(acc * shift)
    }

    /// Evaluation at `v = 1`, which is also `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "v")?;
                    } else {
                        write!(f, "v^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let lo = self.lo.min(rhs.lo);
        let hi = self.highest_exponent().unwrap().max(rhs.highest_exponent().unwrap());
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.lo = lo;
        }
        self.coeffs.resize((hi - lo + 1) as usize, BigInt::zero());
        for (k, c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[(rhs.lo - lo) as usize + k] += c;
        }
        self.canonicalize();
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        *self += &(-rhs);
    }
}

impl Sub<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Mul<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        if self.is_zero() || rhs.is_zero() {
            return LaurentScalar::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentScalar::from_parts(self.lo + rhs.lo, coeffs)
    }
}

impl MulAssign<&LaurentScalar> for LaurentScalar {
    fn mul_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: &LaurentScalar) -> LaurentScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentScalar> for &LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl From<BigInt> for LaurentScalar {
    fn from(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    lo: i64,
    coeffs: Vec<serde_json::Number>,
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| serde_json::Number::from_str(&c.to_string()).map_err(serde::ser::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        ScalarRepr { lo: self.lo, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|n| BigInt::from_str(&n.to_string()).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentScalar::from_parts(repr.lo, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(lo: i64, cs: &[i64]) -> LaurentScalar {
        LaurentScalar::from_parts(lo, cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares() {
        let a = lp(0, &[1, 1]);
        let b = lp(0, &[-1, 1]);
        assert_eq!(a.combine(&b, CombineOp::Mul), lp(0, &[-1, 0, 1]));
    }

    #[test]
    fn q_squared_minus_one() {
        let q = LaurentScalar::q();
        let one = LaurentScalar::one();
        let prod = (&q - &one) * (&q + &one);
        assert_eq!(prod, lp(0, &[-1, 0, 0, 0, 1]));
    }

    #[test]
    fn additive_identity() {
        let x = lp(-3, &[2, 0, -7]);
        assert_eq!(x.combine(&LaurentScalar::zero(), CombineOp::Add), x);
    }

    #[test]
    fn canonical_form_trims_both_ends() {
        let x = lp(-2, &[0, 0, 5, 0]);
        assert_eq!(x.lowest_exponent(), Some(0));
        assert_eq!(x.coefficients(), &[BigInt::from(5)]);
        let z = lp(4, &[0, 0]);
        assert!(z.is_zero());
        assert_eq!(z, LaurentScalar::zero());
    }

    #[test]
    fn specialize_examples() {
        let q_minus_one = LaurentScalar::q() - LaurentScalar::one();
        assert_eq!(q_minus_one.specialize(&rat(1, 1)).unwrap(), rat(0, 1));
        assert_eq!(LaurentScalar::q_pow(-1).specialize(&rat(2, 1)).unwrap(), rat(1, 4));
        assert_eq!(LaurentScalar::v_pow(3).specialize(&rat(1, 1)).unwrap(), rat(1, 1));
        assert_eq!(
            LaurentScalar::one().specialize(&rat(0, 1)),
            Err(ScalarError::ZeroEvaluationPoint)
        );
    }

    #[test]
    fn exact_division() {
        let q = LaurentScalar::q();
        let one = LaurentScalar::one();
        let num = (&q - &one) * (&q + &one);
        assert_eq!(num.exact_div(&(&q - &one)).unwrap(), &q + &one);
        assert_eq!(LaurentScalar::v_pow(5).exact_div(&LaurentScalar::v_pow(7)).unwrap(), LaurentScalar::v_pow(-2));
        assert!(matches!(q.exact_div(&(&q + &one)), Err(ScalarError::NotDivisible { .. })));
        assert!(matches!(lp(0, &[3]).exact_div(&lp(0, &[2])), Err(ScalarError::NotDivisible { .. })));
        assert_eq!(one.exact_div(&LaurentScalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display() {
        assert_eq!(lp(-1, &[-1, 0, 2]).to_string(), "2*v - v^-1");
        assert_eq!(LaurentScalar::zero().to_string(), "0");
        assert_eq!((LaurentScalar::q() - LaurentScalar::one()).to_string(), "v^2 - 1");
    }

    #[test]
    fn json_shape() {
        let x = lp(-2, &[1, 0, -3]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"lo":-2,"coeffs":[1,0,-3]}"#);
        let back: LaurentScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let big = LaurentScalar::from(BigInt::from(10).pow(30));
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, r#"{"lo":0,"coeffs":[1000000000000000000000000000000]}"#);
        assert_eq!(serde_json::from_str::<LaurentScalar>(&s).unwrap(), big);
    }
}
