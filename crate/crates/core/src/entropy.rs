//! Generalised entropy regulariser.
//!
//! The scalar potential
//!
//! ```text
//! phi(x) = alpha * (|x| + beta) * ln(|x| / beta + 1) - alpha * |x|
//! ```
//!
//! interpolates between `|x|` and `x^2`. Summed over coordinates it gives the
//! time-varying regulariser `psi_t` used by every exponentiated learner in this
//! crate; its gradient and the gradient of its convex conjugate form the mirror
//! maps.

use crate::error::{check_dim, Error, Result};

/// Largest `|theta| / alpha` for which the conjugate maps are evaluated.
pub const MAX_DUAL_EXPONENT: f64 = 700.0;

/// Scale `alpha` and offset `beta` of the generalised entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    alpha: f64,
    beta: f64,
}

impl EntropyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[inline]
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `ln(|x| / beta + 1)`, the mirror map at unit scale.
#[inline]
pub fn log_magnitude(x: f64, beta: f64) -> f64 {
    (x.abs() / beta).ln_1p()
}

/// Inverse of [`log_magnitude`] on magnitudes: `beta * (e^l - 1)`.
pub fn magnitude_from_log(l: f64, beta: f64) -> Result<f64> {
    if l > MAX_DUAL_EXPONENT {
        return Err(Error::NumericRange {
            what: "|theta|/alpha",
            value: l,
        });
    }
    Ok(beta * l.exp_m1())
}

pub fn phi(x: f64, p: EntropyParams) -> f64 {
    let a = x.abs();
    p.alpha * ((a + p.beta) * log_magnitude(a, p.beta) - a)
}

pub fn phi_grad(x: f64, p: EntropyParams) -> f64 {
    p.alpha * log_magnitude(x, p.beta) * sgn(x)
}

pub fn phi_hess(x: f64, p: EntropyParams) -> f64 {
    p.alpha / (x.abs() + p.beta)
}

fn check_exponent(theta: f64, p: EntropyParams) -> Result<f64> {
    let e = theta.abs() / p.alpha;
    if e > MAX_DUAL_EXPONENT || e.is_nan() {
        Err(Error::NumericRange {
            what: "|theta|/alpha",
            value: e,
        })
    } else {
        Ok(e)
    }
}

/// Convex conjugate `alpha*beta*e^{|theta|/alpha} - beta*|theta| - alpha*beta`.
pub fn phi_conj(theta: f64, p: EntropyParams) -> Result<f64> {
    let e = check_exponent(theta, p)?;
    // alpha*beta*(e^u - 1 - u) with u = |theta|/alpha
    Ok(p.alpha * p.beta * (e.exp_m1() - e))
}

pub fn phi_conj_grad(theta: f64, p: EntropyParams) -> Result<f64> {
    let e = check_exponent(theta, p)?;
    Ok(p.beta * e.exp_m1() * sgn(theta))
}

pub fn phi_conj_hess(theta: f64, p: EntropyParams) -> Result<f64> {
    let e = check_exponent(theta, p)?;
    Ok(p.beta / p.alpha * e.exp())
}

/// `psi(x) = sum_i phi(x_i)`.
pub fn psi_value(x: &[f64], p: EntropyParams) -> f64 {
    x.iter().map(|&xi| phi(xi, p)).sum()
}

pub fn psi_grad(x: &[f64], p: EntropyParams) -> Vec<f64> {
    x.iter().map(|&xi| phi_grad(xi, p)).collect()
}

pub fn psi_conj_grad(theta: &[f64], p: EntropyParams) -> Result<Vec<f64>> {
    theta.iter().map(|&t| phi_conj_grad(t, p)).collect()
}

/// Bregman divergence `psi(x) - psi(y) - <grad psi(y), x - y>`.
pub fn bregman(x: &[f64], y: &[f64], p: EntropyParams) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    let b = p.beta;
    let total: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let ax = xi.abs();
            let lx = log_magnitude(ax, b);
            let ly = log_magnitude(yi, b);
            (ax + b) * (lx - ly) + (ax - sgn(yi) * xi) * ly - (ax - yi.abs())
        })
        .sum();
    Ok(p.alpha * total)
}
