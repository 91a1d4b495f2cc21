//! Real scalars and log-domain arithmetic.
//!
//! Every quantity of the form `c · b^(x^e)` that shows up in the bounds is far
//! too large or too small to materialize, so bounds are compared through
//! base-2 logarithms. Infinite logarithms are meaningful here: a log that
//! overflows to `+inf` stands for a number beyond any desk-scale count.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `F`.
#[inline]
pub fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("literal representable in scalar type")
}

/// Converts a count into `F`.
#[inline]
pub fn count<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("count representable in scalar type")
}

/// `log2` of a count, `-inf` for zero.
pub fn log2_count<F: Real>(n: usize) -> F {
    if n == 0 {
        F::neg_infinity()
    } else {
        count::<F>(n).log2()
    }
}

/// `log2(2^a + 2^b)` without leaving the log domain.
pub fn log2_add<F: Real>(a: F, b: F) -> F {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == F::neg_infinity() {
        return hi;
    }
    if hi == F::infinity() {
        return hi;
    }
    hi + (F::one() + (lo - hi).exp2()).log2()
}

/// `log2(sum 2^x_i)` over an iterator of logs; `-inf` for an empty sum.
pub fn log2_sum<F: Real, I: IntoIterator<Item = F>>(terms: I) -> F {
    terms.into_iter().fold(F::neg_infinity(), log2_add)
}

/// `lhs <= rhs` up to a relative tolerance `tol` on the log scale.
pub fn log_le<F: Real>(lhs: F, rhs: F, tol: F) -> bool {
    if lhs <= rhs {
        return true;
    }
    if !rhs.is_finite() || !lhs.is_finite() {
        return false;
    }
    lhs - rhs <= tol * F::one().max(rhs.abs())
}

/// The number `coeff · base^(2^exponent_log2)`, held entirely as logarithms.
///
/// `base_log2` is negative for bases below one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tower<F> {
    pub coeff_log2: F,
    pub base_log2: F,
    pub exponent_log2: F,
}

impl<F: Real> Tower<F> {
    pub fn new(coeff_log2: F, base_log2: F, exponent_log2: F) -> Self {
        Self {
            coeff_log2,
            base_log2,
            exponent_log2,
        }
    }

    /// `log2` of the represented number; saturates to `±inf`.
    pub fn log2(&self) -> F {
        if self.base_log2 == F::zero() {
            return self.coeff_log2;
        }
        self.coeff_log2 + self.base_log2 * self.exponent_log2.exp2()
    }

    /// True when `n` is strictly below the represented number.
    pub fn exceeds(&self, n: usize) -> bool {
        log2_count::<F>(n) < self.log2()
    }

    /// True when `n` is at most the represented number (log tolerance `tol`).
    pub fn bounds(&self, n: usize, tol: F) -> bool {
        if n == 0 {
            return true;
        }
        log_le(log2_count::<F>(n), self.log2(), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_add_matches_direct_sum() {
        let got: f64 = log2_add(3.0, 5.0);
        assert!((got - (40.0f64).log2()).abs() < 1e-12);
        assert_eq!(log2_add(f64::NEG_INFINITY, 2.0), 2.0);
        assert_eq!(log2_sum::<f64, _>(Vec::new()), f64::NEG_INFINITY);
    }

    #[test]
    fn tower_saturates() {
        // 0.5^(2^2000) underflows every float; its log must still be -inf, not NaN.
        let t = Tower::<f64>::new(0.0, -1.0, 2000.0);
        assert_eq!(t.log2(), f64::NEG_INFINITY);
        assert!(t.bounds(0, 1e-9));
        assert!(!t.bounds(1, 1e-9));
        let big = Tower::<f64>::new(100f64.log2(), 1.0, 2000.0);
        assert!(big.exceeds(usize::MAX));
    }

    #[test]
    fn tower_works_in_f32() {
        let t = Tower::<f32>::new(0.0, 1.0, 3.0);
        assert!((t.log2() - 8.0).abs() < 1e-6);
        assert!(t.exceeds(255));
        assert!(!t.exceeds(256));
    }
}
