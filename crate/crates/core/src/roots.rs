//! Bracketed scalar root finding: bisection safeguarding Illinois secant steps.

use crate::error::{Error, Result};

const MAX_ITER: usize = 300;

/// Finds a root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Iterates until the bracket is narrower than `rel_tol` relative to the
/// iterate (or no longer shrinks in floating point).
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    // endpoint replaced on the previous step (-1 left, 1 right), for Illinois weighting
    let mut kept: i8 = 0;
    let mut ref_width = b - a;
    let mut stalled = 0;
    for _ in 0..MAX_ITER {
        let mid = 0.5 * (a + b);
        if (b - a) <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) || mid <= a || mid >= b {
            return Ok(mid);
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a && x < b) || stalled >= 2 {
            x = mid;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if kept == -1 {
                fb *= 0.5;
            }
            kept = -1;
        } else {
            b = x;
            fb = fx;
            if kept == 1 {
                fa *= 0.5;
            }
            kept = 1;
        }
        if b - a <= 0.5 * ref_width {
            ref_width = b - a;
            stalled = 0;
        } else {
            stalled += 1;
        }
    }
    Ok(0.5 * (a + b))
}
