use crate::error::{Error, Result};
use crate::scalar::{count, lit, Real};
use crate::RationalParam;

/// `2·exp(-δ²μ/3)`, the two-sided binomial tail bound at relative deviation `δ`.
pub fn chernoff_tail<F: Real>(mu: F, delta: F) -> Result<F> {
    if !(mu >= F::zero()) {
        return Err(Error::Parameter(format!("mu = {mu} is negative")));
    }
    if !(delta > F::zero() && delta < F::one()) {
        return Err(Error::Parameter(format!("delta = {delta} not in (0, 1)")));
    }
    Ok(lit::<F>(2.0) * (-delta * delta * mu / lit(3.0)).exp())
}

/// Union bound on one draw of the balanced split failing:
/// `2e^{-|A|/54} + |B|·2e^{-α|A|/54}`.
pub fn split_union_bound<F: Real>(a_len: usize, b_len: usize, alpha: &RationalParam) -> F {
    let third = lit::<F>(1.0 / 3.0);
    let half_a = count::<F>(a_len) / lit(2.0);
    let size_tail = chernoff_tail(half_a, third).expect("valid tail arguments");
    let degree_tail =
        chernoff_tail(alpha.to_real::<F>() * half_a, third).expect("valid tail arguments");
    size_tail + count::<F>(b_len) * degree_tail
}

/// Worst case of [`split_union_bound`] over all admissible inputs
/// (`|A| >= 100`, `|B| <= (α/100)|A|`), using `x·e^{-x} <= e^{-1}`:
/// `2e^{-100/54} + 2·(54/100)·e^{-1} ≈ 0.711`.
pub fn split_failure_bound<F: Real>() -> F {
    let two = lit::<F>(2.0);
    two * (lit::<F>(-100.0 / 54.0)).exp() + two * lit::<F>(54.0 / 100.0) * (-F::one()).exp()
}

/// The same bound with the two exponents swapped,
/// `2(e^{-54/100} + 54e^{-1}/100) ≈ 1.56`. It exceeds one, so it bounds
/// nothing.
pub fn split_failure_bound_swapped<F: Real>() -> F {
    lit::<F>(2.0) * ((lit::<F>(-54.0 / 100.0)).exp() + lit::<F>(54.0 / 100.0) * (-F::one()).exp())
}

/// Lower bound on the per-draw acceptance probability of the split.
pub fn split_acceptance_floor<F: Real>() -> F {
    F::one() - split_failure_bound::<F>()
}
