//! Comparison learners: diagonal AdaGrad, AdaFTRL and EG±.
//!
//! AdaGrad and AdaFTRL use the proximal matrix `H = diag(h)^{1/2}` with
//! `h_i = 1e-6 + sum_s g_{s,i}^2` (the current gradient included). In ball
//! mode the argmin is the projection onto the l1 ball in the `H`-weighted
//! Euclidean norm, computed by bisection on the multiplier of the weighted
//! soft-threshold.
//!
//! The hint-aware entry points accumulate `(g - h_prev)^2` instead of `g^2`
//! and add the hint to the linear term; with zero hints they reduce to the
//! plain methods. The accelerated AdaGrad-style comparators rely on them.

use crate::error::{check_dim, Error, Result};
use crate::learners::{FeasibleMode, OnlineLearner};
use crate::prox::{BallConstraint, CompositeRegularizer};

/// Initial value of every diagonal entry of the proximal matrix.
pub const H_FLOOR: f64 = 1e-6;

/// `argmin_{|x|_1 <= D} 1/2 sum_i s_i (x_i - v_i)^2` for weights `s_i > 0`.
pub fn weighted_l1_ball_project(v: &[f64], s: &[f64], c: BallConstraint) -> Vec<f64> {
    let radius = c.radius();
    let norm: f64 = v.iter().map(|x| x.abs()).sum();
    if norm <= radius {
        return v.to_vec();
    }
    let mass = |lambda: f64| -> f64 {
        v.iter()
            .zip(s)
            .map(|(vi, si)| (vi.abs() - lambda / si).max(0.0))
            .sum()
    };
    let mut lo = 0.0;
    let mut hi = v
        .iter()
        .zip(s)
        .fold(0.0, |m: f64, (vi, si)| m.max(vi.abs() * si));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > radius {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // exact multiplier on the support found by bisection
    let (num, den) = v
        .iter()
        .zip(s)
        .filter(|(vi, si)| vi.abs() * **si > lo)
        .fold((0.0, 0.0), |(n, d), (vi, si)| (n + vi.abs(), d + 1.0 / si));
    let mut lambda = if den > 0.0 { (num - radius) / den } else { hi };
    if !(lambda >= lo && lambda <= hi) {
        lambda = hi;
    }
    let mut x: Vec<f64> = v
        .iter()
        .zip(s)
        .map(|(vi, si)| vi.signum() * (vi.abs() - lambda / si).max(0.0))
        .collect();
    let xn: f64 = x.iter().map(|a| a.abs()).sum();
    if xn > radius {
        let k = radius / xn;
        x.iter_mut().for_each(|a| *a *= k);
    }
    x
}

/// `argmin_x 1/2 sum_i s_i (x_i - v_i)^2 + r(x)`, or the weighted projection.
fn resolve_diag(v: Vec<f64>, s: &[f64], mode: &FeasibleMode) -> Vec<f64> {
    match mode {
        FeasibleMode::Free => v,
        FeasibleMode::Ball(c) => weighted_l1_ball_project(&v, s, *c),
        FeasibleMode::Regularized(r) => v
            .iter()
            .zip(s)
            .map(|(vi, si)| vi.signum() * (si * vi.abs() - r.gamma1).max(0.0) / (si + r.gamma2))
            .collect(),
    }
}

/// Shared state of the diagonal AdaGrad family.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagProxState {
    h_diag: Vec<f64>,
    g_accum: Vec<f64>,
    x: Vec<f64>,
    h_prev: Vec<f64>,
    reg_accum: CompositeRegularizer,
    round: usize,
}

impl DiagProxState {
    /// Starts at `x1` with `h = 1e-6`. For the FTRL variant `x1` must be 0
    /// (its regulariser is centred at the origin).
    pub fn new(x1: Vec<f64>) -> Self {
        let d = x1.len();
        Self {
            h_diag: vec![H_FLOOR; d],
            g_accum: vec![0.0; d],
            x: x1,
            h_prev: vec![0.0; d],
            reg_accum: CompositeRegularizer::zero(),
            round: 1,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn h_diag(&self) -> &[f64] {
        &self.h_diag
    }

    pub fn g_accum(&self) -> &[f64] {
        &self.g_accum
    }

    pub fn round(&self) -> usize {
        self.round
    }

    fn check(&self, g: &[f64], h_next: &[f64]) -> Result<()> {
        check_dim(self.x.len(), g.len())?;
        check_dim(self.x.len(), h_next.len())?;
        if g.iter().chain(h_next).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite gradient or hint".into()));
        }
        Ok(())
    }

    fn grown_h(&self, g: &[f64]) -> Vec<f64> {
        self.h_diag
            .iter()
            .zip(g.iter().zip(&self.h_prev))
            .map(|(h, (gi, hi))| h + (gi - hi) * (gi - hi))
            .collect()
    }

    /// AdaGrad (mirror-descent form) step.
    pub fn adagrad_step(&mut self, g: &[f64], mode: &FeasibleMode) -> Result<&[f64]> {
        let zeros = vec![0.0; g.len()];
        self.adagrad_step_with_hint(g, &zeros, mode)
    }

    /// AdaFTRL step.
    pub fn adaftrl_step(&mut self, g: &[f64], mode: &FeasibleMode) -> Result<&[f64]> {
        let zeros = vec![0.0; g.len()];
        self.adaftrl_step_with_hint(g, &zeros, mode)
    }

    pub fn adagrad_step_with_hint(
        &mut self,
        g: &[f64],
        h_next: &[f64],
        mode: &FeasibleMode,
    ) -> Result<&[f64]> {
        self.check(g, h_next)?;
        let h = self.grown_h(g);
        let s: Vec<f64> = h.iter().map(|v| v.sqrt()).collect();
        let v: Vec<f64> = (0..g.len())
            .map(|i| self.x[i] - (g[i] - self.h_prev[i] + h_next[i]) / s[i])
            .collect();
        self.x = resolve_diag(v, &s, mode);
        self.h_diag = h;
        self.h_prev.copy_from_slice(h_next);
        self.round += 1;
        Ok(&self.x)
    }

    pub fn adaftrl_step_with_hint(
        &mut self,
        g: &[f64],
        h_next: &[f64],
        mode: &FeasibleMode,
    ) -> Result<&[f64]> {
        self.check(g, h_next)?;
        let h = self.grown_h(g);
        let s: Vec<f64> = h.iter().map(|v| v.sqrt()).collect();
        let g_accum: Vec<f64> = self.g_accum.iter().zip(g).map(|(a, b)| a + b).collect();
        let v: Vec<f64> = (0..g.len())
            .map(|i| -(g_accum[i] + h_next[i]) / s[i])
            .collect();
        let (reg_accum, effective) = match mode {
            FeasibleMode::Regularized(r) => {
                let acc = self.reg_accum + *r;
                (acc, FeasibleMode::Regularized(acc))
            }
            other => (self.reg_accum, *other),
        };
        self.x = resolve_diag(v, &s, &effective);
        self.g_accum = g_accum;
        self.reg_accum = reg_accum;
        self.h_diag = h;
        self.h_prev.copy_from_slice(h_next);
        self.round += 1;
        Ok(&self.x)
    }
}

#[derive(Debug, Clone)]
pub struct AdaGrad {
    state: DiagProxState,
    mode: FeasibleMode,
}

impl AdaGrad {
    pub fn new(x1: Vec<f64>, mode: FeasibleMode) -> Self {
        Self {
            state: DiagProxState::new(x1),
            mode,
        }
    }
}

impl OnlineLearner for AdaGrad {
    type Point = Vec<f64>;

    fn current(&self) -> &Vec<f64> {
        &self.state.x
    }

    fn update(&mut self, g: &Vec<f64>, hint: &Vec<f64>, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state
            .adagrad_step_with_hint(g, hint, &mode)
            .map(|_| ())
    }
}

#[derive(Debug, Clone)]
pub struct AdaFtrl {
    state: DiagProxState,
    mode: FeasibleMode,
}

impl AdaFtrl {
    pub fn new(dim: usize, mode: FeasibleMode) -> Self {
        let mut state = DiagProxState::new(vec![0.0; dim]);
        state.reg_accum = mode.regularizer();
        Self { state, mode }
    }
}

impl OnlineLearner for AdaFtrl {
    type Point = Vec<f64>;

    fn current(&self) -> &Vec<f64> {
        &self.state.x
    }

    fn update(&mut self, g: &Vec<f64>, hint: &Vec<f64>, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state
            .adaftrl_step_with_hint(g, hint, &mode)
            .map(|_| ())
    }
}

/// EG± on the l1 ball of radius `D`: exponentiated weights over `2d`
/// coordinates with total mass `D`, decision `w_+ - w_-`.
#[derive(Debug, Clone, PartialEq)]
pub struct EgPmState {
    /// Log-weights of the probability vector over `[+e_i, -e_i]`.
    log_w: Vec<f64>,
    radius: f64,
    sum_sq: f64,
    x: Vec<f64>,
    round: usize,
}

impl EgPmState {
    /// Uniform start: every one of the `2d` weights carries `D / (2d)`.
    pub fn new(dim: usize, c: BallConstraint) -> Self {
        let lw = -((2 * dim) as f64).ln();
        Self {
            log_w: vec![lw; 2 * dim],
            radius: c.radius(),
            sum_sq: 0.0,
            x: vec![0.0; dim],
            round: 1,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Weights `[w_+, w_-]`, summing to `D`.
    pub fn weights(&self) -> Vec<f64> {
        self.log_w.iter().map(|l| self.radius * l.exp()).collect()
    }

    /// Default stepsize `(sum_{s<=t} |g_s|_inf^2)^{-1/2}` after observing `g`.
    pub fn default_stepsize(&self, g: &[f64]) -> f64 {
        let gi = g.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let total = self.sum_sq + gi * gi;
        if total > 0.0 {
            total.sqrt().recip()
        } else {
            0.0
        }
    }

    /// Multiplicative update with the doubled gradient `(D/2) [g, -g]`.
    pub fn eg_pm_step(&mut self, g: &[f64], stepsize: f64) -> Result<&[f64]> {
        let d = self.x.len();
        check_dim(d, g.len())?;
        let gi = g.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let half = 0.5 * self.radius;
        let (plus, minus) = self.log_w.split_at_mut(d);
        for ((p, m), v) in plus.iter_mut().zip(minus.iter_mut()).zip(g) {
            *p -= stepsize * half * v;
            *m += stepsize * half * v;
        }
        let top = self.log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = top + self.log_w.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
        self.log_w.iter_mut().for_each(|l| *l -= lse);
        for i in 0..d {
            self.x[i] = self.radius * (self.log_w[i].exp() - self.log_w[d + i].exp());
        }
        self.sum_sq += gi * gi;
        self.round += 1;
        Ok(&self.x)
    }
}

#[derive(Debug, Clone)]
pub struct EgPm {
    state: EgPmState,
}

impl EgPm {
    pub fn new(dim: usize, c: BallConstraint) -> Self {
        Self {
            state: EgPmState::new(dim, c),
        }
    }
}

impl OnlineLearner for EgPm {
    type Point = Vec<f64>;

    fn current(&self) -> &Vec<f64> {
        &self.state.x
    }

    /// Hints and regulariser scaling are ignored.
    fn update(&mut self, g: &Vec<f64>, _hint: &Vec<f64>, _reg_scale: f64) -> Result<()> {
        let eta = self.state.default_stepsize(g);
        self.state.eg_pm_step(g, eta).map(|_| ())
    }
}
