//! Seeded randomised checks of the core invariants, run from the command line.

use rand::Rng;

use crate::entropy::{bregman, psi_conj_grad, psi_grad, EntropyParams};
use crate::error::Result;
use crate::harness::data::substream;
use crate::lambert::w0;
use crate::learners::{ExpFtrl, ExpMd, FeasibleMode, OnlineLearner, ScheduleParams};
use crate::prox::{elastic_net_prox, project_or_pass, BallConstraint, CompositeRegularizer};
use crate::spectral::{diag_embed, spectral_prox, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct PropOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl PropOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn params<R: Rng>(rng: &mut R) -> EntropyParams {
    EntropyParams::new(rng.random_range(0.1..5.0), rng.random_range(0.01..2.0))
        .expect("positive draws")
}

fn vector<R: Rng>(rng: &mut R, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

fn check<F>(name: &'static str, cases: usize, seed: u64, lane: u64, mut case: F) -> PropOutcome
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> Result<Option<String>>,
{
    let mut rng = substream(seed, 0, lane);
    for _ in 0..cases {
        match case(&mut rng) {
            Ok(None) => {}
            Ok(Some(msg)) => {
                return PropOutcome {
                    name,
                    cases,
                    failure: Some(msg),
                }
            }
            Err(e) => {
                return PropOutcome {
                    name,
                    cases,
                    failure: Some(e.to_string()),
                }
            }
        }
    }
    PropOutcome {
        name,
        cases,
        failure: None,
    }
}

/// Runs every suite with `cases` random cases each.
pub fn run_all(seed: u64, cases: usize) -> Vec<PropOutcome> {
    vec![
        check("mirror maps invert each other", cases, seed, 1, |rng| {
            let p = params(rng);
            let x = vector(rng, 8, 50.0);
            let back = psi_conj_grad(&psi_grad(&x, p), p)?;
            Ok(x.iter()
                .zip(&back)
                .find(|(a, b)| (*a - *b).abs() > 1e-12 * a.abs().max(1.0))
                .map(|(a, b)| format!("{a} -> {b}")))
        }),
        check(
            "Bregman divergence is non-negative",
            cases,
            seed,
            2,
            |rng| {
                let p = params(rng);
                let (x, y) = (vector(rng, 6, 10.0), vector(rng, 6, 10.0));
                let b = bregman(&x, &y, p)?;
                Ok((b < -1e-12).then(|| format!("B = {b}")))
            },
        ),
        check("Lambert residual is tiny", cases, seed, 3, |rng| {
            let z = 10f64.powf(rng.random_range(-300.0..300.0));
            let r = w0(z)?;
            Ok((r.residual > 1e-12).then(|| format!("z = {z}, residual {}", r.residual)))
        }),
        check(
            "prox shrinks toward zero and keeps signs",
            cases,
            seed,
            4,
            |rng| {
                let p = params(rng);
                let r = CompositeRegularizer::new(
                    rng.random_range(0.0..2.0),
                    rng.random_range(0.0..2.0),
                )?;
                let y = vector(rng, 8, 20.0);
                let x = elastic_net_prox(&y, r, p)?;
                Ok(y.iter()
                    .zip(&x)
                    .find(|(yi, xi)| xi.abs() > yi.abs() * (1.0 + 1e-12) || **xi * **yi < 0.0)
                    .map(|(yi, xi)| format!("{yi} -> {xi}")))
            },
        ),
        check(
            "projection lands in the ball with signs kept",
            cases,
            seed,
            5,
            |rng| {
                let p = params(rng);
                let c = BallConstraint::new(rng.random_range(0.1..10.0))?;
                let y = vector(rng, 10, 5.0);
                let x = project_or_pass(&y, c, p);
                let n: f64 = x.iter().map(|v| v.abs()).sum();
                let signs = y
                    .iter()
                    .zip(&x)
                    .all(|(a, b)| *b == 0.0 || a.signum() == b.signum());
                Ok((n > c.radius() * (1.0 + 1e-10) || !signs)
                    .then(|| format!("norm {n}, radius {}", c.radius())))
            },
        ),
        check(
            "learner iterates stay feasible",
            cases.div_ceil(10),
            seed,
            6,
            |rng| {
                let d = rng.random_range(2..12);
                let radius = rng.random_range(0.5..5.0);
                let mode = FeasibleMode::Ball(BallConstraint::new(radius)?);
                let sched = ScheduleParams::new(d, radius)?;
                let mut md = ExpMd::new(vec![0.0; d], mode, sched);
                let mut ftrl = ExpFtrl::new(vec![0.0; d], mode, sched);
                for _ in 0..50 {
                    let g = vector(rng, d, 3.0);
                    let h = vector(rng, d, 1.0);
                    md.update(&g, &h, 1.0)?;
                    ftrl.update(&g, &h, 1.0)?;
                    for x in [md.current(), ftrl.current()] {
                        let n: f64 = x.iter().map(|v| v.abs()).sum();
                        if n > radius * (1.0 + 1e-10) {
                            return Ok(Some(format!("norm {n} > {radius}")));
                        }
                    }
                }
                Ok(None)
            },
        ),
        check(
            "spectral prox reduces to the vector prox on diagonals",
            cases.div_ceil(10),
            seed,
            7,
            |rng| {
                let p = params(rng);
                let r = CompositeRegularizer::new(
                    rng.random_range(0.0..1.0),
                    rng.random_range(0.0..1.0),
                )?;
                let v = vector(rng, 3, 5.0);
                let got = spectral_prox(&diag_embed(&v, 4, 3), r, p)?;
                let want = diag_embed(&elastic_net_prox(&v, r, p)?, 4, 3);
                let err = (got - want).norm();
                let scale = Matrix::from_row_slice(1, 3, &v).norm().max(1.0);
                Ok((err > 1e-10 * scale).then(|| format!("error {err}")))
            },
        ),
    ]
}
