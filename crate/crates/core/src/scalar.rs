//! Coefficient rings for series arithmetic.
//!
//! Every series routine is generic over [`Coefficient`]. Two exact rings are
//! provided: [`BigRational`] (the default, closed under division) and
//! [`BigInt`] (faster, used for products known to have integer
//! coefficients; division fails unless exact).

use std::fmt::Debug;
use std::ops::{AddAssign, Neg, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: BigInt) -> Self;

    /// `num / den`, or `None` if the ring cannot represent it.
    fn from_ratio(num: i64, den: i64) -> Option<Self>;

    fn mul_ref(&self, other: &Self) -> Self;

    /// Exact quotient, `None` when `other` is zero or the quotient is not in the ring.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    fn to_rational(&self) -> BigRational;

    fn is_integral(&self) -> bool;

    fn to_i64(&self) -> Option<i64> {
        let r = self.to_rational();
        if r.is_integer() {
            ToPrimitive::to_i64(&r.to_integer())
        } else {
            None
        }
    }
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }

    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(self / other)
        }
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Coefficient for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn from_bigint(v: BigInt) -> Self {
        v
    }

    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        if den == 0 || num % den != 0 {
            return None;
        }
        Some(BigInt::from(num / den))
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn is_integral(&self) -> bool {
        true
    }
}

/// Binomial coefficient `C(n, k)` for arbitrary integer `n` (generalized) and `k >= 0`.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn sigma(k: u32, n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            acc += BigInt::from(d).pow(k);
        }
    }
    acc
}

/// Kronecker symbol `(-4/n)`.
pub fn kronecker_minus4(n: i64) -> i64 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

pub fn rational_to_strings(r: &BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_handles_negative_upper_argument() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-3, 2), BigInt::from(6));
        assert_eq!(binomial(24, 0), BigInt::from(1));
        assert_eq!(binomial(2, 3), BigInt::from(0));
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker_minus4(1), 1);
        assert_eq!(kronecker_minus4(-1), -1);
        assert_eq!(kronecker_minus4(3), -1);
        assert_eq!(kronecker_minus4(-3), 1);
        assert_eq!(kronecker_minus4(4), 0);
    }

    #[test]
    fn bigint_division_is_exact_only() {
        let a = BigInt::from(12);
        assert_eq!(a.div_exact(&BigInt::from(4)), Some(BigInt::from(3)));
        assert_eq!(a.div_exact(&BigInt::from(5)), None);
        assert_eq!(<BigInt as Coefficient>::from_ratio(1, 2), None);
    }

    #[test]
    fn sigma_small() {
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(0, 6), BigInt::from(4));
    }
}
