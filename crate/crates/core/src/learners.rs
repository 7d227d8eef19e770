//! Adaptive optimistic mirror descent (AO-OMD) and FTRL (AO-FTRL) on `R^d`.
//!
//! Both learners are driven through the same two-step reduction: form a dual
//! point `z_{t+1}`, map it back with `grad psi*_{t+1}`, then resolve the
//! regulariser or constraint. The dual point is kept at unit scale,
//! `theta = z / alpha_{t+1}`, so that `|theta_i| = ln(|y_i|/beta + 1)` is
//! handed to the prox solvers without ever forming `y` (which overflows once
//! `|theta_i|` passes ~709).
//!
//! Stepsizes follow `alpha_{t+1} = eta * sqrt(eps0 + sum_{s<=t} |g_s - h_s|_inf^2)`
//! with `beta = 1/d` and `eta = (ln(D+1) + ln d)^{-1/2}` by default.

use crate::entropy::{log_magnitude, magnitude_from_log, EntropyParams};
use crate::error::{check_dim, Error, Result};
use crate::prox::{
    elastic_net_prox_log, l1_ball_project_log, BallConstraint, CompositeRegularizer,
};

/// Stepsize schedule shared by the vector learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleParams {
    pub dim: usize,
    pub radius: f64,
    pub eta: f64,
    pub beta: f64,
    /// Added under the square root so that `alpha` stays positive before any
    /// non-zero prediction error has been seen.
    pub epsilon0: f64,
}

impl ScheduleParams {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let d = dim as f64;
        Ok(Self {
            dim,
            radius,
            eta: (1.0 / ((radius + 1.0).ln() + d.ln())).sqrt(),
            beta: 1.0 / d,
            epsilon0: 1e-12,
        })
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_epsilon0(mut self, epsilon0: f64) -> Self {
        self.epsilon0 = epsilon0;
        self
    }

    pub fn alpha(&self, sum_sq: f64) -> f64 {
        self.eta * (self.epsilon0 + sum_sq).sqrt()
    }

    pub(crate) fn entropy(&self, sum_sq: f64) -> Result<EntropyParams> {
        EntropyParams::new(self.alpha(sum_sq), self.beta)
    }
}

/// How the argmin of each step is restricted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibleMode {
    Ball(BallConstraint),
    Regularized(CompositeRegularizer),
    Free,
}

impl FeasibleMode {
    /// Regulariser of this mode, zero for `Ball` and `Free`.
    pub fn regularizer(&self) -> CompositeRegularizer {
        match self {
            FeasibleMode::Regularized(r) => *r,
            _ => CompositeRegularizer::zero(),
        }
    }

    /// Same mode with the regulariser weights multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            FeasibleMode::Regularized(r) => FeasibleMode::Regularized(r.scaled(k)),
            other => *other,
        }
    }
}

pub(crate) fn linf_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

#[inline]
fn signed_log(x: f64, beta: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * log_magnitude(x, beta)
    }
}

/// Maps a unit-scale dual point back to the primal and applies `mode`.
pub(crate) fn resolve(theta: &[f64], mode: &FeasibleMode, p: EntropyParams) -> Result<Vec<f64>> {
    match mode {
        FeasibleMode::Free => theta
            .iter()
            .map(|&t| Ok(magnitude_from_log(t.abs(), p.beta())? * if t < 0.0 { -1.0 } else { 1.0 }))
            .collect(),
        FeasibleMode::Regularized(r) => elastic_net_prox_log(theta, *r, p),
        FeasibleMode::Ball(c) => l1_ball_project_log(theta, *c, p),
    }
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numerical(format!("non-finite entry in {what}")))
    }
}

/// State of AO-OMD: the current decision, the accumulated squared prediction
/// errors and the hint that was issued for the current round.
#[derive(Debug, Clone, PartialEq)]
pub struct OmdState {
    x: Vec<f64>,
    sum_sq: f64,
    h_prev: Vec<f64>,
    round: usize,
}

impl OmdState {
    /// Starts at the anchor `x1` (caller guarantees feasibility), hint `h_1 = 0`.
    pub fn new(x1: Vec<f64>) -> Self {
        let h = vec![0.0; x1.len()];
        Self {
            x: x1,
            sum_sq: 0.0,
            h_prev: h,
            round: 1,
        }
    }

    pub fn with_initial_hint(mut self, h1: Vec<f64>) -> Self {
        assert_eq!(h1.len(), self.x.len(), "hint dimension");
        self.h_prev = h1;
        self
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    pub fn h_prev(&self) -> &[f64] {
        &self.h_prev
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// One AO-OMD step: observes `g_t`, receives the hint `h_{t+1}` and moves to
    /// `x_{t+1}`. On error the state is left untouched.
    pub fn step(
        &mut self,
        g: &[f64],
        h_next: &[f64],
        mode: &FeasibleMode,
        sched: &ScheduleParams,
    ) -> Result<&[f64]> {
        let d = self.x.len();
        check_dim(d, g.len())?;
        check_dim(d, h_next.len())?;
        check_dim(sched.dim, d)?;
        check_finite(g, "gradient")?;
        check_finite(h_next, "hint")?;

        let err = linf_diff(g, &self.h_prev);
        let sum_sq = self.sum_sq + err * err;
        let p = sched.entropy(sum_sq)?;
        let alpha = p.alpha();
        let theta: Vec<f64> = (0..d)
            .map(|i| signed_log(self.x[i], p.beta()) - (g[i] - self.h_prev[i] + h_next[i]) / alpha)
            .collect();
        let x = resolve(&theta, mode, p)?;

        self.x = x;
        self.sum_sq = sum_sq;
        self.h_prev.copy_from_slice(h_next);
        self.round += 1;
        Ok(&self.x)
    }
}

/// State of AO-FTRL.
#[derive(Debug, Clone, PartialEq)]
pub struct FtrlState {
    x: Vec<f64>,
    x1: Vec<f64>,
    /// `grad psi(x1)` at unit scale.
    theta1: Vec<f64>,
    g_accum: Vec<f64>,
    reg_accum: CompositeRegularizer,
    sum_sq: f64,
    h_prev: Vec<f64>,
    round: usize,
}

impl FtrlState {
    /// Anchored at `x1`. The regulariser of `mode` counts as `r_1`, so after
    /// `t` plain steps the cumulative regulariser is `(t+1) r`.
    pub fn new(x1: Vec<f64>, mode: &FeasibleMode, beta: f64) -> Self {
        let d = x1.len();
        let theta1 = x1.iter().map(|&v| signed_log(v, beta)).collect();
        Self {
            x: x1.clone(),
            x1,
            theta1,
            g_accum: vec![0.0; d],
            reg_accum: mode.regularizer(),
            sum_sq: 0.0,
            h_prev: vec![0.0; d],
            round: 1,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn g_accum(&self) -> &[f64] {
        &self.g_accum
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn cumulative_regularizer(&self) -> CompositeRegularizer {
        self.reg_accum
    }

    /// One AO-FTRL step. For `Regularized(r)` the given `r` is `r_{t+1}` and is
    /// added to the running sum `r_{1:t+1}` used by the prox.
    pub fn step(
        &mut self,
        g: &[f64],
        h_next: &[f64],
        mode: &FeasibleMode,
        sched: &ScheduleParams,
    ) -> Result<&[f64]> {
        let d = self.x.len();
        check_dim(d, g.len())?;
        check_dim(d, h_next.len())?;
        check_dim(sched.dim, d)?;
        check_finite(g, "gradient")?;
        check_finite(h_next, "hint")?;

        let err = linf_diff(g, &self.h_prev);
        let sum_sq = self.sum_sq + err * err;
        let g_accum: Vec<f64> = self.g_accum.iter().zip(g).map(|(a, b)| a + b).collect();
        let p = sched.entropy(sum_sq)?;
        let alpha = p.alpha();
        let theta: Vec<f64> = (0..d)
            .map(|i| self.theta1[i] - (g_accum[i] + h_next[i]) / alpha)
            .collect();
        let (reg_accum, effective) = match mode {
            FeasibleMode::Regularized(r) => {
                let acc = self.reg_accum + *r;
                (acc, FeasibleMode::Regularized(acc))
            }
            other => (self.reg_accum, *other),
        };
        let x = resolve(&theta, &effective, p)?;

        self.x = x;
        self.g_accum = g_accum;
        self.reg_accum = reg_accum;
        self.sum_sq = sum_sq;
        self.h_prev.copy_from_slice(h_next);
        self.round += 1;
        Ok(&self.x)
    }
}

/// Common driver interface of every online learner in the crate.
pub trait OnlineLearner: Send {
    type Point;

    /// Decision `x_t` to be played in the current round.
    fn current(&self) -> &Self::Point;

    /// Feeds `g_t` and the hint `h_{t+1}`; the learner's regulariser is scaled
    /// by `reg_scale` for round `t+1` (1 for plain online use).
    fn update(&mut self, g: &Self::Point, hint: &Self::Point, reg_scale: f64) -> Result<()>;
}

/// AO-OMD with the exponentiated update ("Exp-MD").
#[derive(Debug, Clone)]
pub struct ExpMd {
    state: OmdState,
    mode: FeasibleMode,
    sched: ScheduleParams,
    x: Vec<f64>,
}

impl ExpMd {
    pub fn new(x1: Vec<f64>, mode: FeasibleMode, sched: ScheduleParams) -> Self {
        Self {
            x: x1.clone(),
            state: OmdState::new(x1),
            mode,
            sched,
        }
    }

    pub fn state(&self) -> &OmdState {
        &self.state
    }
}

impl OnlineLearner for ExpMd {
    type Point = Vec<f64>;

    fn current(&self) -> &Vec<f64> {
        &self.x
    }

    fn update(&mut self, g: &Vec<f64>, hint: &Vec<f64>, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state.step(g, hint, &mode, &self.sched)?;
        self.x.copy_from_slice(self.state.x());
        Ok(())
    }
}

/// AO-FTRL with the exponentiated update ("Exp-FTRL").
#[derive(Debug, Clone)]
pub struct ExpFtrl {
    state: FtrlState,
    mode: FeasibleMode,
    sched: ScheduleParams,
    x: Vec<f64>,
}

impl ExpFtrl {
    pub fn new(x1: Vec<f64>, mode: FeasibleMode, sched: ScheduleParams) -> Self {
        Self {
            x: x1.clone(),
            state: FtrlState::new(x1, &mode, sched.beta),
            mode,
            sched,
        }
    }

    pub fn state(&self) -> &FtrlState {
        &self.state
    }
}

impl OnlineLearner for ExpFtrl {
    type Point = Vec<f64>;

    fn current(&self) -> &Vec<f64> {
        &self.x
    }

    fn update(&mut self, g: &Vec<f64>, hint: &Vec<f64>, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state.step(g, hint, &mode, &self.sched)?;
        self.x.copy_from_slice(self.state.x());
        Ok(())
    }
}

/// Running cumulative regret `sum_{s<=t} (player_s - comparator_s)`.
pub fn regret(losses_player: &[f64], losses_comparator: &[f64]) -> Result<Vec<f64>> {
    if losses_player.len() != losses_comparator.len() {
        return Err(Error::LengthMismatch(
            losses_player.len(),
            losses_comparator.len(),
        ));
    }
    let mut acc = 0.0;
    Ok(losses_player
        .iter()
        .zip(losses_comparator)
        .map(|(p, c)| {
            acc += p - c;
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn sched(d: usize, radius: f64) -> ScheduleParams {
        ScheduleParams::new(d, radius).unwrap()
    }

    #[test]
    fn default_schedule() {
        let s = sched(10, 2.0);
        assert!((s.beta - 0.1).abs() < 1e-16);
        assert!((s.eta - (1.0 / (3f64.ln() + 10f64.ln())).sqrt()).abs() < 1e-15);
        assert!(ScheduleParams::new(0, 1.0).is_err());
        assert!(ScheduleParams::new(3, 0.0).is_err());
    }

    #[test]
    fn perfect_hint_is_a_fixed_point() {
        let s = sched(3, 5.0);
        let mut st = OmdState::new(vec![0.4, -0.2, 0.0]).with_initial_hint(vec![1.0, 2.0, -3.0]);
        let before = st.x().to_vec();
        st.step(&[1.0, 2.0, -3.0], &[0.0; 3], &FeasibleMode::Free, &s)
            .unwrap();
        for (a, b) in st.x().iter().zip(&before) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(st.sum_sq(), 0.0);
    }

    #[test]
    fn analytic_step_from_origin() {
        // alpha_2 = 1: eta = 1, eps0 = 0, |g|_inf = 1
        let s = sched(2, 1.0)
            .with_eta(1.0)
            .with_beta(1.0)
            .with_epsilon0(0.0);
        let mut st = OmdState::new(vec![0.0, 0.0]);
        st.step(&[1.0, -1.0], &[0.0, 0.0], &FeasibleMode::Free, &s)
            .unwrap();
        assert!((st.x()[0] + (E - 1.0)).abs() < 1e-14);
        assert!((st.x()[1] - (E - 1.0)).abs() < 1e-14);

        let mode = FeasibleMode::Free;
        let mut f = FtrlState::new(vec![0.0, 0.0], &mode, 1.0);
        f.step(&[1.0, -1.0], &[0.0, 0.0], &mode, &s).unwrap();
        assert_eq!(f.x(), st.x());
    }

    #[test]
    fn ftrl_anchor_before_any_step() {
        let mode = FeasibleMode::Free;
        let f = FtrlState::new(vec![0.0; 4], &mode, 0.25);
        assert_eq!(f.x(), &[0.0; 4]);
        assert_eq!(f.round(), 1);
    }

    #[test]
    fn dimension_errors_leave_state_untouched() {
        let s = sched(3, 1.0);
        let mut st = OmdState::new(vec![0.0; 3]);
        let before = st.clone();
        assert!(matches!(
            st.step(&[1.0, 2.0], &[0.0; 3], &FeasibleMode::Free, &s),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(st, before);
        assert!(st
            .step(&[f64::NAN, 0.0, 0.0], &[0.0; 3], &FeasibleMode::Free, &s)
            .is_err());
    }

    #[test]
    fn free_mode_overflow_is_reported() {
        let s = sched(1, 1.0).with_epsilon0(0.0);
        let mut st = OmdState::new(vec![0.0]).with_initial_hint(vec![0.0]);
        // a huge hint pushes the dual point past the representable range
        st.step(&[1.0], &[0.0], &FeasibleMode::Free, &s).unwrap();
        let r = st.step(&[1.0], &[1e6], &FeasibleMode::Free, &s);
        assert!(matches!(r, Err(Error::NumericRange { .. })));
    }

    #[test]
    fn ball_mode_never_overflows() {
        let s = sched(2, 1.0);
        let c = BallConstraint::new(1.0).unwrap();
        let mode = FeasibleMode::Ball(c);
        let mut st = OmdState::new(vec![0.0, 0.0]);
        st.step(&[1.0, 0.0], &[1e6, -1e6], &mode, &s).unwrap();
        let n: f64 = st.x().iter().map(|v| v.abs()).sum();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ftrl_accumulates_regulariser() {
        let r = CompositeRegularizer::new(0.1, 0.2).unwrap();
        let mode = FeasibleMode::Regularized(r);
        let s = sched(2, 1.0);
        let mut f = FtrlState::new(vec![0.0; 2], &mode, s.beta);
        for _ in 0..3 {
            f.step(&[0.5, -0.5], &[0.0; 2], &mode, &s).unwrap();
        }
        let acc = f.cumulative_regularizer();
        assert!((acc.gamma1 - 0.4).abs() < 1e-15 && (acc.gamma2 - 0.8).abs() < 1e-15);
        assert_eq!(f.g_accum(), &[1.5, -1.5]);
    }

    #[test]
    fn regret_examples() {
        assert_eq!(regret(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(regret(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), vec![1.0, 2.0]);
        assert!(matches!(
            regret(&[1.0], &[]),
            Err(Error::LengthMismatch(1, 0))
        ));
    }
}
