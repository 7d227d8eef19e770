//! Principal branch `W0` of the Lambert function on the non-negative reals.
//!
//! Two entry points: [`w0`] takes `z` directly, [`w0_from_log`] takes `s = ln z`
//! and never forms `z`, so arguments like `exp(800)` stay representable. The
//! proximal operators only use the log form.

use crate::error::{Error, Result};

const MAX_ITERATIONS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertResult {
    pub w: f64,
    /// Relative residual of the defining equation at `w`.
    pub residual: f64,
    pub iterations: u32,
}

fn initial_guess(z: f64) -> f64 {
    if z < 0.3 {
        z * (1.0 - z)
    } else if z > 3.0 {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        // Winitzki's approximation
        let l = z.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    }
}

/// `W0(z)` for `z >= 0`, by Halley iteration on `w e^w - z`.
pub fn w0(z: f64) -> Result<LambertResult> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "W0 needs a finite non-negative argument, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(LambertResult {
            w: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let mut w = initial_guess(z);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        // f / e^w, which stays finite for large z
        let f = w - z * (-w).exp();
        let wp1 = w + 1.0;
        let step = f / (wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let residual = if z < 1e-300 {
        (w * w.exp() - z).abs()
    } else {
        ((w - z * (-w).exp()) * w.exp() / z).abs()
    };
    if !w.is_finite() {
        return Err(Error::Numerical(format!(
            "W0 iteration diverged for z = {z}"
        )));
    }
    Ok(LambertResult {
        w,
        residual,
        iterations,
    })
}

/// `W0(e^s)` for any finite `s`: solves `w + ln w = s`.
///
/// The iteration runs on `u = ln w`, i.e. on `u + e^u - s = 0`, which is well
/// conditioned from `s = -700` up to `s = 1e300`.
pub fn w0_from_log(s: f64) -> Result<LambertResult> {
    if !s.is_finite() {
        return Err(Error::Domain(format!(
            "W0 log argument must be finite, got {s}"
        )));
    }
    let mut u = if s < -1.0 {
        s - s.exp()
    } else if s > 3.0 {
        let ls = s.ln();
        (s - ls + ls / s).ln()
    } else {
        initial_guess(s.exp()).ln()
    };
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let eu = u.exp();
        let g = u + eu - s;
        let g1 = 1.0 + eu;
        let step = g * g1 / (g1 * g1 - 0.5 * g * eu);
        u -= step;
        if step.abs() <= 2.0 * f64::EPSILON * u.abs().max(1.0) {
            break;
        }
    }
    if !u.is_finite() {
        return Err(Error::Numerical(format!(
            "W0 log iteration diverged for s = {s}"
        )));
    }
    let w = u.exp();
    let residual = (u + w - s).abs() / s.abs().max(1.0);
    Ok(LambertResult {
        w,
        residual,
        iterations,
    })
}
