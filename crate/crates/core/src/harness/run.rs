//! Trial driver: every algorithm of a trial sees the same stream.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acceleration::AccelState;
use crate::baselines::{AdaFtrl, AdaGrad, EgPm};
use crate::error::{Error, Result};
use crate::harness::data::{
    gen_blackbox_instance, gen_logistic_stream, gen_multitask_stream, substream, BlackboxInstance,
    DATA_LANE,
};
use crate::harness::spec::{Algorithm, ExperimentKind, ExperimentSpec};
use crate::learners::{ExpFtrl, ExpMd, FeasibleMode, OnlineLearner, ScheduleParams};
use crate::point::Point;
use crate::prox::{BallConstraint, CompositeRegularizer};
use crate::spectral::{nuclear_norm, Matrix, SpectralExpFtrl, SpectralExpMd, SpectralSchedule};
use crate::zeroth_order::{two_point_grad, EstimatorConfig};

/// One row of the output table. `value` is cumulative regret for the online
/// experiments and the composite objective at `z_t` for the black-box one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretRecord {
    pub experiment: String,
    pub algorithm: String,
    pub trial: usize,
    pub round: usize,
    pub value: f64,
    /// Set on the (last) record of a series that stopped on a numeric error.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Per-round outcome of one series before labelling.
type Series = Vec<(f64, Option<String>)>;

/// Ball radius used when the scaled truth has zero norm.
pub const FALLBACK_RADIUS: f64 = 1.0;

/// Nominal radius entering the stepsize of the black-box learners.
pub const BLACKBOX_SCHEDULE_RADIUS: f64 = 1.0;

fn radius_for(norm: f64, spec: &ExperimentSpec) -> f64 {
    let r = spec.radius_mode.factor() * norm;
    if r > 0.0 && r.is_finite() {
        r
    } else {
        FALLBACK_RADIUS
    }
}

/// Plays `horizon` rounds and tracks the cumulative regret against the fixed
/// comparator losses. Stops at the first error, which is recorded.
fn drive<L, F, G>(
    mut learner: L,
    horizon: usize,
    mut loss: F,
    mut grad: G,
    comparator: &[f64],
) -> Series
where
    L: OnlineLearner,
    L::Point: Point,
    F: FnMut(usize, &L::Point) -> f64,
    G: FnMut(usize, &L::Point) -> L::Point,
{
    let mut out = Vec::with_capacity(horizon);
    let mut regret = 0.0;
    for t in 0..horizon {
        let x = learner.current().clone();
        let l = loss(t, &x);
        if !l.is_finite() {
            out.push((
                f64::NAN,
                Some(format!("non-finite loss at round {}", t + 1)),
            ));
            break;
        }
        regret += l - comparator[t];
        out.push((regret, None));
        let g = grad(t, &x);
        if let Err(e) = learner.update(&g, &g.zeros_like(), 1.0) {
            out[t] = (f64::NAN, Some(e.to_string()));
            break;
        }
    }
    out
}

/// Runs a vector learner on `vec(W)` (column-major) for matrix streams.
struct Vectorised<L> {
    inner: L,
    rows: usize,
    cols: usize,
    current: Matrix,
}

impl<L: OnlineLearner<Point = Vec<f64>>> Vectorised<L> {
    fn new(inner: L, rows: usize, cols: usize) -> Self {
        let current = Matrix::from_column_slice(rows, cols, inner.current());
        Self {
            inner,
            rows,
            cols,
            current,
        }
    }
}

impl<L: OnlineLearner<Point = Vec<f64>>> OnlineLearner for Vectorised<L> {
    type Point = Matrix;

    fn current(&self) -> &Matrix {
        &self.current
    }

    fn update(&mut self, g: &Matrix, hint: &Matrix, reg_scale: f64) -> Result<()> {
        self.inner
            .update(&g.as_slice().to_vec(), &hint.as_slice().to_vec(), reg_scale)?;
        self.current = Matrix::from_column_slice(self.rows, self.cols, self.inner.current());
        Ok(())
    }
}

fn logistic_trial(spec: &ExperimentSpec, algs: &[Algorithm], trial: usize) -> Result<Vec<Series>> {
    let stream = gen_logistic_stream(spec, &mut substream(spec.seed, trial, DATA_LANE));
    let d = spec.dim;
    let radius = radius_for(stream.w_star.iter().map(|v| v.abs()).sum(), spec);
    let ball = BallConstraint::new(radius)?;
    let mode = FeasibleMode::Ball(ball);
    let sched = ScheduleParams::new(d, radius)?;
    let comparator: Vec<f64> = (0..spec.horizon)
        .map(|t| stream.loss(t, &stream.w_star))
        .collect();
    let loss = |t: usize, w: &Vec<f64>| stream.loss(t, w);
    let grad = |t: usize, w: &Vec<f64>| stream.grad(t, w);
    let x1 = vec![0.0; d];
    Ok(algs
        .iter()
        .map(|a| match a {
            Algorithm::ExpMd => drive(
                ExpMd::new(x1.clone(), mode, sched),
                spec.horizon,
                loss,
                grad,
                &comparator,
            ),
            Algorithm::ExpFtrl => drive(
                ExpFtrl::new(x1.clone(), mode, sched),
                spec.horizon,
                loss,
                grad,
                &comparator,
            ),
            Algorithm::AdaGrad => drive(
                AdaGrad::new(x1.clone(), mode),
                spec.horizon,
                loss,
                grad,
                &comparator,
            ),
            Algorithm::AdaFtrl => {
                drive(AdaFtrl::new(d, mode), spec.horizon, loss, grad, &comparator)
            }
            Algorithm::EgPm => drive(EgPm::new(d, ball), spec.horizon, loss, grad, &comparator),
            _ => unreachable!("validated against the experiment kind"),
        })
        .collect())
}

fn multitask_trial(spec: &ExperimentSpec, algs: &[Algorithm], trial: usize) -> Result<Vec<Series>> {
    let stream = gen_multitask_stream(spec, &mut substream(spec.seed, trial, DATA_LANE));
    let (d, k) = (spec.dim, spec.tasks);
    let radius = radius_for(nuclear_norm(&stream.w_star)?, spec);
    let ball = BallConstraint::new(radius)?;
    let mode = FeasibleMode::Ball(ball);
    let sched = SpectralSchedule::new(d, k, radius)?;
    let comparator: Vec<f64> = (0..spec.horizon)
        .map(|t| stream.loss(t, &stream.w_star))
        .collect();
    let loss = |t: usize, w: &Matrix| stream.loss(t, w);
    let grad = |t: usize, w: &Matrix| stream.grad(t, w);
    let x1 = Matrix::zeros(d, k);
    algs.iter()
        .map(|a| {
            Ok(match a {
                Algorithm::ExpMd => drive(
                    SpectralExpMd::new(x1.clone(), mode, sched)?,
                    spec.horizon,
                    loss,
                    grad,
                    &comparator,
                ),
                Algorithm::ExpFtrl => drive(
                    SpectralExpFtrl::new(x1.clone(), mode, sched)?,
                    spec.horizon,
                    loss,
                    grad,
                    &comparator,
                ),
                Algorithm::AdaGrad => {
                    let l = Vectorised::new(AdaGrad::new(vec![0.0; d * k], mode), d, k);
                    drive(l, spec.horizon, loss, grad, &comparator)
                }
                Algorithm::AdaFtrl => {
                    let l = Vectorised::new(AdaFtrl::new(d * k, mode), d, k);
                    drive(l, spec.horizon, loss, grad, &comparator)
                }
                _ => unreachable!("validated against the experiment kind"),
            })
        })
        .collect()
}

fn accelerated<L>(
    inner: L,
    inst: &BlackboxInstance,
    cfg: EstimatorConfig,
    spec: &ExperimentSpec,
    trial: usize,
    lane: u64,
) -> Series
where
    L: OnlineLearner<Point = Vec<f64>>,
{
    let mut rng = substream(spec.seed, trial, lane);
    let mut oracle = |x: &Vec<f64>| {
        two_point_grad(
            |p: &[f64]| Ok::<f64, Error>(inst.smooth_part(p)),
            x,
            &cfg,
            &mut rng,
        )
    };
    let mut state = AccelState::new(inner);
    let mut out = Vec::with_capacity(spec.horizon);
    for _ in 0..spec.horizon {
        match state.step(&mut oracle) {
            Ok(z) => {
                let v = inst.objective(z);
                if v.is_finite() {
                    out.push((v, None));
                } else {
                    out.push((f64::NAN, Some("non-finite objective".into())));
                    break;
                }
            }
            Err(e) => {
                out.push((f64::NAN, Some(e.to_string())));
                break;
            }
        }
    }
    out
}

fn blackbox_trial(spec: &ExperimentSpec, algs: &[Algorithm], trial: usize) -> Result<Vec<Series>> {
    let inst = gen_blackbox_instance(spec, &mut substream(spec.seed, trial, DATA_LANE));
    let d = spec.dim;
    let mode = FeasibleMode::Regularized(CompositeRegularizer::new(spec.gamma1, spec.gamma2)?);
    let sched = ScheduleParams::new(d, BLACKBOX_SCHEDULE_RADIUS)?;
    let horizon = spec.horizon.max(1);
    let rademacher = EstimatorConfig::rademacher(d, horizon, spec.batch)?;
    let sphere = EstimatorConfig::unit_sphere(d, horizon, spec.batch)?;
    let x1 = vec![0.0; d];
    Ok(algs
        .iter()
        .map(|a| {
            let lane = 1 + Algorithm::ALL.iter().position(|b| b == a).unwrap_or(0) as u64;
            match a {
                Algorithm::AccExpMd => accelerated(
                    ExpMd::new(x1.clone(), mode, sched),
                    &inst,
                    rademacher,
                    spec,
                    trial,
                    lane,
                ),
                Algorithm::AccExpFtrl => accelerated(
                    ExpFtrl::new(x1.clone(), mode, sched),
                    &inst,
                    rademacher,
                    spec,
                    trial,
                    lane,
                ),
                Algorithm::AccAdaGrad => accelerated(
                    AdaGrad::new(x1.clone(), mode),
                    &inst,
                    sphere,
                    spec,
                    trial,
                    lane,
                ),
                Algorithm::AccAdaFtrl => {
                    accelerated(AdaFtrl::new(d, mode), &inst, sphere, spec, trial, lane)
                }
                _ => unreachable!("validated against the experiment kind"),
            }
        })
        .collect())
}

/// Runs every trial (in parallel) and returns the records ordered by
/// algorithm (in listed order), trial and round.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RegretRecord>> {
    spec.validate()?;
    let algs = spec.parsed_algorithms()?;
    let per_trial: Vec<Vec<Series>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| match spec.kind {
            ExperimentKind::Logistic => logistic_trial(spec, &algs, trial),
            ExperimentKind::Multitask => multitask_trial(spec, &algs, trial),
            ExperimentKind::BlackboxComposite => blackbox_trial(spec, &algs, trial),
        })
        .collect::<Result<_>>()?;

    let label = spec.label();
    let mut records = Vec::with_capacity(algs.len() * spec.trials * spec.horizon);
    for (ai, alg) in algs.iter().enumerate() {
        for (trial, series) in per_trial.iter().enumerate() {
            for (t, (value, failure)) in series[ai].iter().enumerate() {
                records.push(RegretRecord {
                    experiment: label.clone(),
                    algorithm: alg.name().to_string(),
                    trial,
                    round: t + 1,
                    value: *value,
                    failure: failure.clone(),
                });
            }
        }
    }
    Ok(records)
}

/// True when there is at least one series and every series ended in a numeric
/// failure.
pub fn all_series_failed(records: &[RegretRecord], spec: &ExperimentSpec) -> bool {
    let failed = records.iter().filter(|r| r.failure.is_some()).count();
    let series = spec.trials * spec.algorithms.len();
    spec.horizon > 0 && series > 0 && failed == series
}
