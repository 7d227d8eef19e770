//! Online-to-batch stochastic acceleration around an optimistic learner.
//!
//! With weights `a_t = t`, round `t` plays the averaged point
//! `z_t = (a_t / a_{1:t}) x_t + (1 - a_t / a_{1:t}) z_{t-1}`, queries a
//! stochastic gradient `g_t` there and feeds the inner learner the scaled
//! gradient `a_t g_t`, the hint `a_{t+1} g_t` and the regulariser scaled by
//! `a_{t+1}`.

use crate::error::{Error, Result};
use crate::learners::OnlineLearner;
use crate::point::Point;

/// Source of (stochastic) gradients of the smooth part of the objective.
pub trait GradientOracle<P> {
    fn gradient(&mut self, at: &P) -> Result<P>;
}

impl<P, F> GradientOracle<P> for F
where
    F: FnMut(&P) -> Result<P>,
{
    fn gradient(&mut self, at: &P) -> Result<P> {
        self(at)
    }
}

#[derive(Debug, Clone)]
pub struct AccelState<L: OnlineLearner> {
    z: L::Point,
    weight_sum: f64,
    round: usize,
    inner: L,
}

impl<L> AccelState<L>
where
    L: OnlineLearner,
    L::Point: Point,
{
    /// Wraps `inner`; `z_0` is the zero element (it never influences `z_1`).
    pub fn new(inner: L) -> Self {
        let z = inner.current().zeros_like();
        Self {
            z,
            weight_sum: 0.0,
            round: 0,
            inner,
        }
    }

    /// Averaged point `z_t` after the last step.
    pub fn z(&self) -> &L::Point {
        &self.z
    }

    /// `a_{1:t}`
    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn inner(&self) -> &L {
        &self.inner
    }

    /// Runs one round and returns the new averaged point `z_t`.
    pub fn step<O: GradientOracle<L::Point>>(&mut self, oracle: &mut O) -> Result<&L::Point> {
        let t = (self.round + 1) as f64;
        let a_t = t;
        let a_next = t + 1.0;
        let weight_sum = self.weight_sum + a_t;
        let ratio = a_t / weight_sum;

        let x_t = self.inner.current();
        let z = x_t.lincomb(ratio, &self.z, 1.0 - ratio);
        let g = oracle.gradient(&z)?;
        if g.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: z.len(),
                got: g.len(),
            });
        }
        self.inner
            .update(&g.scaled(a_t), &g.scaled(a_next), a_next)?;

        self.z = z;
        self.weight_sum = weight_sum;
        self.round += 1;
        Ok(&self.z)
    }
}

/// Accelerated `step` for `t` rounds; returns `z_1, ..., z_T`.
pub fn run<L, O>(state: &mut AccelState<L>, oracle: &mut O, rounds: usize) -> Result<Vec<L::Point>>
where
    L: OnlineLearner,
    L::Point: Point,
    O: GradientOracle<L::Point>,
{
    (0..rounds).map(|_| state.step(oracle).cloned()).collect()
}
