//! Exact non-negative fractions for thresholds.
//!
//! Every threshold test in this crate has the shape `count ⋚ p/q · total`;
//! [`Rational`] answers those by cross-multiplication so no comparison is
//! ever rounded.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedMul, PrimInt, ToPrimitive, Unsigned};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unsigned integer backing a [`Rational`].
pub trait RationalInt:
    PrimInt + Unsigned + Integer + CheckedMul + ToPrimitive + fmt::Display + FromStr + Send + Sync
{
}

impl<T> RationalInt for T where
    T: PrimInt + Unsigned + Integer + CheckedMul + ToPrimitive + fmt::Display + FromStr + Send + Sync
{
}

/// A fraction `num/den` in lowest terms with `den > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational<T> {
    num: T,
    den: T,
}

impl<T: RationalInt> Rational<T> {
    pub fn new(num: T, den: T) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let g = if g.is_zero() { T::one() } else { g };
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn one() -> Self {
        Self {
            num: T::one(),
            den: T::one(),
        }
    }

    pub fn num(&self) -> T {
        self.num
    }

    pub fn den(&self) -> T {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `0 < self <= 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.num.is_zero() && self.num <= self.den
    }

    pub fn to_real<F: Real>(&self) -> F {
        F::from(self.num).unwrap() / F::from(self.den).unwrap()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real::<f64>()
    }

    /// `log2(self)`, computed from numerator and denominator separately.
    pub fn log2<F: Real>(&self) -> F {
        F::from(self.num).unwrap().log2() - F::from(self.den).unwrap().log2()
    }

    /// `self · other`, or `None` on overflow.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        // cross-reduce first to keep intermediates small
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let g1 = if g1.is_zero() { T::one() } else { g1 };
        let g2 = if g2.is_zero() { T::one() } else { g2 };
        let num = (self.num / g1).checked_mul(&(other.num / g2))?;
        let den = (self.den / g2).checked_mul(&(other.den / g1))?;
        Self::new(num, den).ok()
    }

    /// `self / k` for a positive integer `k`.
    pub fn div_int(&self, k: T) -> Result<Self> {
        let divisor = Self::new(T::one(), k)?;
        self.checked_mul(&divisor)
            .ok_or_else(|| Error::Parameter(format!("{self}/{k} overflows")))
    }

    /// `self^exp`, failing when the result no longer fits `T`.
    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc
                .checked_mul(self)
                .ok_or_else(|| Error::Parameter(format!("({self})^{exp} overflows")))?;
        }
        Ok(acc)
    }

    /// `1 - self` for `self <= 1`.
    pub fn one_minus(&self) -> Result<Self> {
        if self.num > self.den {
            return Err(Error::Parameter(format!("1 - {self} is negative")));
        }
        Self::new(self.den - self.num, self.den)
    }

    /// Compares `lhs · self.den` with `rhs · self.num`, i.e. `lhs` against
    /// `self · rhs` after clearing the denominator.
    fn cmp_scaled(&self, lhs: u128, rhs: u128) -> Ordering {
        let den = self.den.to_u128().unwrap();
        let num = self.num.to_u128().unwrap();
        match (lhs.checked_mul(den), rhs.checked_mul(num)) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => (BigUint::from(lhs) * BigUint::from(den)).cmp(&(BigUint::from(rhs) * BigUint::from(num))),
        }
    }

    /// `count <= self · total`.
    pub fn count_le(&self, count: usize, total: usize) -> bool {
        self.cmp_scaled(count as u128, total as u128) != Ordering::Greater
    }

    /// `count < self · total`.
    pub fn count_lt(&self, count: usize, total: usize) -> bool {
        self.cmp_scaled(count as u128, total as u128) == Ordering::Less
    }

    /// `count >= self · total`.
    pub fn count_ge(&self, count: usize, total: usize) -> bool {
        self.cmp_scaled(count as u128, total as u128) != Ordering::Less
    }

    /// `count > self · total`.
    pub fn count_gt(&self, count: usize, total: usize) -> bool {
        self.cmp_scaled(count as u128, total as u128) == Ordering::Greater
    }

    /// `count >= self^exp · total`, exactly.
    pub fn count_ge_pow(&self, count: usize, total: usize, exp: u32) -> bool {
        let num = BigUint::from(self.num.to_u128().unwrap());
        let den = BigUint::from(self.den.to_u128().unwrap());
        BigUint::from(count) * num_traits::pow::pow(den, exp as usize)
            >= BigUint::from(total) * num_traits::pow::pow(num, exp as usize)
    }

    /// `count <= self^exp · total`, exactly.
    pub fn count_le_pow(&self, count: usize, total: usize, exp: u32) -> bool {
        let num = BigUint::from(self.num.to_u128().unwrap());
        let den = BigUint::from(self.den.to_u128().unwrap());
        BigUint::from(count) * num_traits::pow::pow(den, exp as usize)
            <= BigUint::from(total) * num_traits::pow::pow(num, exp as usize)
    }

    /// Smallest integer `c` with `c >= self · total`.
    pub fn ceil_of(&self, total: usize) -> usize {
        let num = BigUint::from(self.num.to_u128().unwrap()) * BigUint::from(total);
        let den = BigUint::from(self.den.to_u128().unwrap());
        let (q, r) = num.div_rem(&den);
        let q = if r == BigUint::from(0u8) { q } else { q + 1u8 };
        q.to_usize().unwrap_or(usize::MAX)
    }

    /// `floor((den/num)^exp)`, or `None` if it does not fit in `u128`.
    pub fn inverse_pow_floor(&self, exp: u64) -> Option<u128> {
        if self.num.is_zero() {
            return None;
        }
        let num = BigUint::from(self.num.to_u128().unwrap());
        let den = BigUint::from(self.den.to_u128().unwrap());
        let e = u32::try_from(exp).ok()?;
        let top = num_traits::pow::pow(den, e as usize);
        let bottom = num_traits::pow::pow(num, e as usize);
        (top / bottom).to_u128()
    }
}

impl<T: RationalInt> PartialOrd for Rational<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: RationalInt> Ord for Rational<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = BigUint::from(self.num.to_u128().unwrap()) * BigUint::from(other.den.to_u128().unwrap());
        let r = BigUint::from(other.num.to_u128().unwrap()) * BigUint::from(self.den.to_u128().unwrap());
        l.cmp(&r)
    }
}

impl<T: RationalInt> fmt::Display for Rational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl<T: RationalInt> fmt::Debug for Rational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: RationalInt> FromStr for Rational<T> {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parameter(format!("expected a rational 'p/q', got {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse::<T>().map_err(|_| bad())?;
                let q = q.trim().parse::<T>().map_err(|_| bad())?;
                Self::new(p, q)
            }
            None => Self::new(s.parse::<T>().map_err(|_| bad())?, T::one()),
        }
    }
}

impl<T: RationalInt> Serialize for Rational<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, T: RationalInt> Deserialize<'de> for Rational<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational<u64>;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(q("6/8").to_string(), "3/4");
        assert_eq!(q("0/5").to_string(), "0/1");
        assert_eq!(q("7").to_string(), "7/1");
        assert!("1/0".parse::<Q>().is_err());
        assert!("x/2".parse::<Q>().is_err());
    }

    #[test]
    fn threshold_comparisons_are_exact() {
        let eps = q("2/5");
        assert!(eps.count_le(2, 5));
        assert!(!eps.count_lt(2, 5));
        assert!(eps.count_ge(2, 5));
        assert!(!eps.count_gt(2, 5));
        assert!(q("1/2").count_gt(3, 4));
        // 1/3 of 3 is exactly 1
        assert!(q("1/3").count_le(1, 3));
        assert_eq!(q("1/3").ceil_of(3), 1);
        assert_eq!(q("1/3").ceil_of(4), 2);
        assert_eq!(q("1/2").ceil_of(0), 0);
    }

    #[test]
    fn large_products_fall_back_to_bignum() {
        let tiny = Rational::<u128>::new(1, u128::MAX).unwrap();
        assert!(tiny.count_le(0, usize::MAX));
        assert!(!tiny.count_le(2, usize::MAX));
        assert!(tiny.count_ge(2, usize::MAX));
        assert!(tiny.count_ge(1, usize::MAX));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("1/10").div_int(6).unwrap(), q("1/60"));
        assert_eq!(q("1/10").pow(3).unwrap(), q("1/1000"));
        assert!(q("1/10").pow(30).is_err());
        assert_eq!(q("1/4").one_minus().unwrap(), q("3/4"));
        assert_eq!(q("1/2").inverse_pow_floor(5), Some(32));
        assert_eq!(q("2/3").inverse_pow_floor(2), Some(2));
        assert_eq!(q("1/2").inverse_pow_floor(200), None);
        assert!(q("1/3") < q("1/2"));
    }

    #[test]
    fn serde_uses_fraction_strings() {
        let json = serde_json::to_string(&q("3/10")).unwrap();
        assert_eq!(json, "\"3/10\"");
        let back: Q = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q("3/10"));
    }
}
