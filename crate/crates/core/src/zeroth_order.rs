//! Two-point gradient estimation for black-box objectives.
//!
//! ```text
//! g = (1/b) sum_{i=1}^b (delta/mu) (f(x + mu v_i) - f(x)) v_i
//! ```
//!
//! `f(x)` is evaluated once per call and shared by the batch, so a call costs
//! exactly `b + 1` evaluations.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionLaw {
    /// Uniform on the unit sphere (normalised Gaussian draws).
    UnitSphere,
    /// Independent ±1 entries.
    Rademacher,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub delta: f64,
    pub mu: f64,
    pub batch: usize,
    pub direction_law: DirectionLaw,
}

impl EstimatorConfig {
    pub fn new(delta: f64, mu: f64, batch: usize, direction_law: DirectionLaw) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "smoothing mu must be positive, got {mu}"
            )));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if batch == 0 {
            return Err(Error::InvalidParameter("batch must be at least 1".into()));
        }
        Ok(Self {
            delta,
            mu,
            batch,
            direction_law,
        })
    }

    /// `mu = 1/sqrt(d T)`
    pub fn default_mu(dim: usize, horizon: usize) -> f64 {
        1.0 / ((dim * horizon) as f64).sqrt()
    }

    /// Rademacher directions with `delta = 1`, for the exponentiated learners.
    pub fn rademacher(dim: usize, horizon: usize, batch: usize) -> Result<Self> {
        Self::new(
            1.0,
            Self::default_mu(dim, horizon),
            batch,
            DirectionLaw::Rademacher,
        )
    }

    /// Unit-sphere directions with `delta = d`, for the AdaGrad-style learners.
    pub fn unit_sphere(dim: usize, horizon: usize, batch: usize) -> Result<Self> {
        Self::new(
            dim as f64,
            Self::default_mu(dim, horizon),
            batch,
            DirectionLaw::UnitSphere,
        )
    }
}

/// Draws one direction of length `dim`.
pub fn sample_direction<R: Rng + ?Sized>(law: DirectionLaw, dim: usize, rng: &mut R) -> Vec<f64> {
    match law {
        DirectionLaw::Rademacher => (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect(),
        DirectionLaw::UnitSphere => loop {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-300 {
                break v.into_iter().map(|a| a / norm).collect();
            }
        },
    }
}

/// Batch-averaged two-point estimate of the gradient of `f` at `x`.
pub fn two_point_grad<F, E, R>(
    mut f: F,
    x: &[f64],
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> std::result::Result<Vec<f64>, E>
where
    F: FnMut(&[f64]) -> std::result::Result<f64, E>,
    R: Rng + ?Sized,
{
    let d = x.len();
    let fx = f(x)?;
    let mut grad = vec![0.0; d];
    let mut probe = vec![0.0; d];
    let scale = cfg.delta / (cfg.mu * cfg.batch as f64);
    for _ in 0..cfg.batch {
        let v = sample_direction(cfg.direction_law, d, rng);
        for i in 0..d {
            probe[i] = x[i] + cfg.mu * v[i];
        }
        let diff = f(&probe)? - fx;
        for i in 0..d {
            grad[i] += scale * diff * v[i];
        }
    }
    Ok(grad)
}
