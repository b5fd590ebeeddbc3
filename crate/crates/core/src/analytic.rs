//! The defect function `h(b) = (1 - e^{-l1 b})(1 - e^{-l2 b}) - b`, the
//! giant fraction `beta` (its largest root), the `B_d` probability recursion
//! and the critical curve where `h` first touches zero.
//!
//! On `(0, 1]` the derivative of `h` changes sign at most twice, in the
//! pattern `-, +, -`: `h` dips below zero, climbs to a single interior local
//! maximum, and decreases again. Every search below relies on that shape.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_BETA_TOL: f64 = 1e-12;
pub const DEFAULT_CURVE_TOL: f64 = 1e-8;
/// Largest second intensity tried before a threshold is declared absent.
pub const LAMBDA2_SEARCH_CAP: f64 = 1e6;

const SCAN_POINTS: usize = 1024;
const MAX_BISECTIONS: usize = 400;

/// `h`, `h'` and `h''` at `beta`.
pub fn h_eval(lambda1: f64, lambda2: f64, beta: f64) -> (f64, f64, f64) {
    let e1 = (-lambda1 * beta).exp();
    let e2 = (-lambda2 * beta).exp();
    let a = -(-lambda1 * beta).exp_m1();
    let b = -(-lambda2 * beta).exp_m1();
    let h = a * b - beta;
    let dh = lambda1 * e1 * b + lambda2 * e2 * a - 1.0;
    let d2h = -lambda1 * lambda1 * e1 * b + 2.0 * lambda1 * lambda2 * e1 * e2 - lambda2 * lambda2 * e2 * a;
    (h, dh, d2h)
}

fn h(l1: f64, l2: f64, b: f64) -> f64 {
    h_eval(l1, l2, b).0
}

fn dh(l1: f64, l2: f64, b: f64) -> f64 {
    h_eval(l1, l2, b).1
}

/// Bisection for a sign change of `f` on `[lo, hi]` with `f(lo) > 0 >= f(hi)`.
/// Runs until the bracket is narrower than `tol` or cannot shrink further.
fn bisect_down(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaResult {
    pub lambda1: f64,
    pub lambda2: f64,
    pub beta: f64,
    pub positive_root_count: u8,
    pub residual: f64,
    pub local_max_location: f64,
    pub local_max_value: f64,
}

/// Location and value of the interior local maximum of `h`, or `(0, 0)`
/// when `h` is decreasing on all of `[0, 1]`.
fn local_max(l1: f64, l2: f64) -> (f64, f64) {
    // Uniform scan, preceded by dyadic points below the first grid step so
    // that maxima squeezed against zero (first intensity near 1) are seen.
    let step = 1.0 / (SCAN_POINTS + 1) as f64;
    let mut grid: Vec<f64> = (0..60).rev().map(|k| step * 0.5f64.powi(k + 1)).collect();
    grid.extend((1..=SCAN_POINTS).map(|i| i as f64 * step));
    grid.push(1.0);

    let Some(rise) = grid.iter().position(|&b| dh(l1, l2, b) > 0.0) else {
        return (0.0, 0.0);
    };
    // h'(1) < 0 always, so the fall is found.
    let fall = rise + grid[rise..].iter().position(|&b| dh(l1, l2, b) <= 0.0).unwrap();
    let loc = bisect_down(|b| dh(l1, l2, b), grid[fall - 1], grid[fall], 0.0);
    (loc, h(l1, l2, loc))
}

fn validate(lambdas: &[f64]) -> Result<()> {
    for &l in lambdas {
        if !l.is_finite() || l < 0.0 {
            return Err(Error::param(format!("intensity {l} must be finite and non-negative")));
        }
    }
    Ok(())
}

/// The largest root of `h` in `[0, 1)`.
///
/// Arguments are put in a fixed order first, so `beta(a, b)` and
/// `beta(b, a)` agree bit for bit.
pub fn beta(lambda1: f64, lambda2: f64, tol: f64) -> Result<BetaResult> {
    validate(&[lambda1, lambda2])?;
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let (l1, l2) = if lambda1 <= lambda2 { (lambda1, lambda2) } else { (lambda2, lambda1) };
    let (loc, value) = local_max(l1, l2);
    let (beta, count) = if value > 0.0 {
        (bisect_down(|b| h(l1, l2, b), loc, 1.0, tol), 2)
    } else if value == 0.0 && loc > 0.0 {
        (loc, 1)
    } else {
        (0.0, 0)
    };
    Ok(BetaResult {
        lambda1,
        lambda2,
        beta,
        positive_root_count: count,
        residual: h(l1, l2, beta).abs(),
        local_max_location: loc,
        local_max_value: value,
    })
}

/// `beta` with the default tolerance, returning only the value.
pub fn beta_value(lambda1: f64, lambda2: f64) -> Result<f64> {
    Ok(beta(lambda1, lambda2, DEFAULT_BETA_TOL)?.beta)
}

fn supercritical(l1: f64, l2: f64) -> bool {
    let (a, b) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
    local_max(a, b).1 > 0.0
}

/// `q_0 = 1`, `q_{d+1} = (1 - e^{-l1 q_d})(1 - e^{-l2 q_d})`.
pub fn bd_prob(lambda1: f64, lambda2: f64, d_max: usize) -> Vec<f64> {
    let mut q = Vec::with_capacity(d_max + 1);
    q.push(1.0);
    for d in 0..d_max {
        let prev = q[d];
        q.push((-(-lambda1 * prev).exp_m1()) * (-(-lambda2 * prev).exp_m1()));
    }
    q
}

/// Infimum of the second intensities at which a giant exists for this
/// first intensity, or `None` when there is none (`lambda1 <= 1`).
pub fn critical_lambda2(lambda1: f64, tol: f64) -> Result<Option<f64>> {
    validate(&[lambda1])?;
    if lambda1 <= 0.0 {
        return Err(Error::param("first intensity must be positive"));
    }
    if lambda1 <= 1.0 {
        return Ok(None);
    }
    Ok(search_lambda2(lambda1, tol, LAMBDA2_SEARCH_CAP))
}

/// Monotone bisection on "local maximum of `h` is positive" over the second
/// intensity, doubling the upper end until it qualifies or exceeds `cap`.
pub(crate) fn search_lambda2(lambda1: f64, tol: f64, cap: f64) -> Option<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while !supercritical(lambda1, hi) {
        if hi >= cap {
            return None;
        }
        lo = hi;
        hi = (hi * 2.0).min(cap);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if supercritical(lambda1, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub lambda1: f64,
    pub lambda2_critical: f64,
    /// Double root of `h` at the critical point.
    pub beta_at_critical: f64,
}

fn curve_point(lambda1: f64, tol: f64) -> Result<CurvePoint> {
    let l2 = critical_lambda2(lambda1, tol)?.ok_or_else(|| {
        Error::Numeric(format!("no finite threshold for first intensity {lambda1}"))
    })?;
    let (a, b) = if lambda1 <= l2 { (lambda1, l2) } else { (l2, lambda1) };
    Ok(CurvePoint {
        lambda1,
        lambda2_critical: l2,
        beta_at_critical: local_max(a, b).0,
    })
}

/// The symmetric critical point on the diagonal and the jump size there.
pub fn diagonal_critical(tol: f64) -> Result<(f64, f64)> {
    if !(tol > 0.0) {
        return Err(Error::param("tolerance must be positive"));
    }
    let (mut lo, mut hi) = (1.0, 4.0);
    if supercritical(lo, lo) || !supercritical(hi, hi) {
        return Err(Error::Numeric("diagonal bracket does not straddle the threshold".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if supercritical(mid, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, local_max(hi, hi).0))
}

/// Critical points for first intensities `min, min + step, ... <= max`.
pub fn trace_curve(lambda1_min: f64, lambda1_max: f64, step: f64, tol: f64) -> Result<Vec<CurvePoint>> {
    if !(lambda1_min > 1.0) {
        return Err(Error::param("curve has no finite threshold for first intensity <= 1"));
    }
    if !(lambda1_max > lambda1_min) || !lambda1_max.is_finite() {
        return Err(Error::param("need lambda1_min < lambda1_max"));
    }
    if !(step > 0.0) {
        return Err(Error::param("step must be positive"));
    }
    let count = ((lambda1_max - lambda1_min) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|i| curve_point(lambda1_min + i as f64 * step, tol))
        .collect()
}

/// `lambda_i (1 - e^{-lambda_{3-i} beta})` for `i = 1, 2`.
pub fn epsexist_margins(lambda1: f64, lambda2: f64, beta: f64) -> (f64, f64) {
    (
        lambda1 * -(-lambda2 * beta).exp_m1(),
        lambda2 * -(-lambda1 * beta).exp_m1(),
    )
}

/// True when either no giant exists or both margins exceed one.
pub fn epsexist_check(lambda1: f64, lambda2: f64) -> Result<bool> {
    let b = beta_value(lambda1, lambda2)?;
    if b == 0.0 {
        return Ok(true);
    }
    let (m1, m2) = epsexist_margins(lambda1, lambda2, b);
    Ok(m1 > 1.0 && m2 > 1.0)
}
