use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, log2_count, log2_sum, log_le, Real};

/// Points at which the defining inequalities are evaluated.
pub const GRID: [f64; 7] = [2.0, 2.5, 3.0, 4.0, 10.0, 100.0, 1e6];

/// Relative tolerance of the grid comparisons.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// Exponents of the main bound for a given `r`.
///
/// `a[0] > a[1] > ... > a[r-1]` satisfy, for all `x >= 2`,
/// `x^{a_i} >= sum_{j>i} x^{a_j}(6x)^{26r} + 13r`, and
/// `x^{c_r} >= (r+x)x^{a_0+2r} + r^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsOf<F> {
    pub r: usize,
    pub a: Vec<u64>,
    pub c_r: u64,
    pub grid: Vec<GridCheck<F>>,
}

/// Log-domain margins at one grid point; non-negative means the inequality
/// holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheck<F> {
    pub x: F,
    /// `log2(x^{a_i}) - log2(rhs_i)` for each `i`.
    pub recurrence_margins: Vec<F>,
    pub bound_margin: F,
}

impl<F: Real> ConstantsOf<F> {
    pub fn a0(&self) -> u64 {
        self.a[0]
    }

    /// Exponent gaps `a_i - a_{i+1} - 26r`; all positive means every ratio in
    /// the recurrence is increasing in `x`, so the grid minimum sits at `x = 2`.
    pub fn gaps(&self) -> Vec<i64> {
        let step = 26 * self.r as i64;
        self.a
            .windows(2)
            .map(|w| w[0] as i64 - w[1] as i64 - step)
            .collect()
    }
}

/// `log2(x^{a_i}) - log2(sum_j x^{a_j}(6x)^{26r} + 13r)` over the exponents
/// `later` (the `a_j` with `j > i`).
pub fn recurrence_margin_log2<F: Real>(x: F, a_i: u64, later: &[u64], r: usize) -> F {
    let lx = x.log2();
    let l6x = (lit::<F>(6.0) * x).log2();
    let width = F::from_usize(26 * r).unwrap();
    let terms = later
        .iter()
        .map(|&a_j| F::from_u64(a_j).unwrap() * lx + width * l6x)
        .chain(std::iter::once(log2_count::<F>(13 * r)));
    F::from_u64(a_i).unwrap() * lx - log2_sum(terms)
}

/// `log2(x^{c}) - log2((r+x)x^{a_0+2r} + r^2)`.
pub fn bound_margin_log2<F: Real>(x: F, c: u64, a0: u64, r: usize) -> F {
    let lx = x.log2();
    let rf = F::from_usize(r).unwrap();
    let head = (rf + x).log2() + F::from_u64(a0 + 2 * r as u64).unwrap() * lx;
    F::from_u64(c).unwrap() * lx - log2_sum([head, lit::<F>(2.0) * rf.log2()])
}

/// Smallest integer `a >= floor` with `recurrence_margin_log2(2, a, later, r) >= 0`.
fn least_exponent<F: Real>(floor: u64, later: &[u64], r: usize) -> u64 {
    let two = lit::<F>(2.0);
    let need = -recurrence_margin_log2(two, 0, later, r);
    let mut a = floor.max(need.ceil().to_u64().unwrap_or(floor));
    while recurrence_margin_log2(two, a, later, r) < F::zero() {
        a += 1;
    }
    while a > floor && recurrence_margin_log2(two, a - 1, later, r) >= F::zero() {
        a -= 1;
    }
    a
}

/// Solves for the exponents and verifies both inequalities on [`GRID`].
///
/// `a_{r-1}` is the least integer `>= 2` with `2^{a} >= 13r`; each earlier
/// `a_i` is the least integer exceeding `a_{i+1} + 26r` that satisfies its
/// inequality at `x = 2`. `c_r = a_0 + 2r + ceil(log2(r+2)) + 3`.
pub fn solve_constants<F: Real>(r: usize) -> Result<ConstantsOf<F>> {
    if r < 2 {
        return Err(Error::Parameter(format!("r = {r}; need r >= 2")));
    }
    let step = 26 * r as u64;
    let mut rev = vec![least_exponent::<F>(2, &[], r)];
    for _ in 1..r {
        let next = *rev.last().unwrap() + step + 1;
        let a = least_exponent::<F>(next, &rev, r);
        rev.push(a);
    }
    rev.reverse();
    let a = rev;
    let log_r2 = ((r + 2) as f64).log2().ceil() as u64;
    let c_r = a[0] + 2 * r as u64 + log_r2 + 3;

    let grid: Vec<GridCheck<F>> = GRID
        .iter()
        .map(|&x| {
            let x = lit::<F>(x);
            GridCheck {
                x,
                recurrence_margins: (0..r)
                    .map(|i| recurrence_margin_log2(x, a[i], &a[i + 1..], r))
                    .collect(),
                bound_margin: bound_margin_log2(x, c_r, a[0], r),
            }
        })
        .collect();
    let out = ConstantsOf { r, a, c_r, grid };

    let tol = lit::<F>(GRID_TOLERANCE);
    for check in &out.grid {
        for (i, m) in check.recurrence_margins.iter().enumerate() {
            if !log_le(F::zero(), *m, tol) {
                return Err(Error::Invariant(format!(
                    "recurrence for a_{i} fails at x = {} (margin {m})",
                    check.x
                )));
            }
        }
        if !log_le(F::zero(), check.bound_margin, tol) {
            return Err(Error::Invariant(format!(
                "bound inequality fails at x = {} (margin {})",
                check.x, check.bound_margin
            )));
        }
    }
    if let Some(g) = out.gaps().iter().position(|&g| g <= 0) {
        return Err(Error::Invariant(format!(
            "exponent gap a_{g} - a_{} not above 26r",
            g + 1
        )));
    }
    if out.a[r - 1] < 2 {
        return Err(Error::Invariant("a_(r-1) below 2".into()));
    }
    Ok(out)
}
