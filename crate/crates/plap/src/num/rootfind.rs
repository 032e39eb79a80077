//! Bracketed scalar root finding.
//!
//! A safeguarded secant/bisection hybrid: secant steps are taken while they
//! stay inside the current sign-change bracket and shrink it, with bisection
//! as the fallback, so convergence is superlinear on smooth residuals and
//! never worse than bisection.

use crate::error::{Error, Result};

/// Termination controls for [`bracketed_root`].
#[derive(Debug, Clone, Copy)]
pub struct RootCfg {
    /// Absolute tolerance on the abscissa.
    pub xtol_abs: f64,
    /// Relative tolerance on the abscissa.
    pub xtol_rel: f64,
    /// Early-exit tolerance on the residual magnitude (0.0 disables).
    pub ftol: f64,
    /// Iteration cap; hitting it returns the best midpoint rather than erroring
    /// because the bracket is still a correctness guarantee.
    pub max_iter: usize,
}

impl Default for RootCfg {
    fn default() -> Self {
        Self {
            xtol_abs: 1e-15,
            xtol_rel: 4.0 * f64::EPSILON,
            ftol: 0.0,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]`, which must bracket a sign change.
///
/// Returns the abscissa once the bracket is narrower than the configured
/// tolerances or the residual drops below `ftol`.
pub fn bracketed_root<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &RootCfg,
    what: &'static str,
) -> Result<f64> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(Error::BracketFailure { what, lo, hi });
    }

    // Last two iterates drive the secant proposal.
    let (mut x_prev, mut f_prev) = (lo, f_lo);
    let (mut x_cur, mut f_cur) = (hi, f_hi);

    for _ in 0..cfg.max_iter {
        let width = hi - lo;
        let scale = cfg.xtol_abs + cfg.xtol_rel * hi.abs().max(lo.abs());
        if width <= scale {
            break;
        }

        let secant = if f_cur != f_prev {
            x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        } else {
            f64::NAN
        };
        // Accept the secant point only if it lands strictly inside the bracket
        // with a sane margin; otherwise bisect.
        let margin = 0.01 * width;
        let x_new = if secant.is_finite() && secant > lo + margin && secant < hi - margin {
            secant
        } else {
            0.5 * (lo + hi)
        };

        let f_new = f(x_new);
        if !f_new.is_finite() {
            // Retreat to plain bisection on a bad evaluation.
            let mid = 0.5 * (lo + hi);
            let f_mid = f(mid);
            if !f_mid.is_finite() {
                return Err(Error::BracketFailure { what, lo, hi });
            }
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
            x_prev = lo;
            f_prev = f_lo;
            x_cur = hi;
            f_cur = f_hi;
            continue;
        }
        if f_new == 0.0 || (cfg.ftol > 0.0 && f_new.abs() <= cfg.ftol) {
            return Ok(x_new);
        }
        if f_new.signum() == f_lo.signum() {
            lo = x_new;
            f_lo = f_new;
        } else {
            hi = x_new;
            f_hi = f_new;
        }
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = x_new;
        f_cur = f_new;
    }
    // The bracket endpoints' residuals tell which side is closer.
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}
