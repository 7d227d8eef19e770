//! Two-point gradient estimates driving an accelerated learner on a
//! black-box objective.

use exp_oco::acceleration::{run, AccelState};
use exp_oco::learners::{ExpMd, FeasibleMode, ScheduleParams};
use exp_oco::prox::BallConstraint;
use exp_oco::zeroth_order::{two_point_grad, EstimatorConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let d = 10;
    let horizon = 3000;
    let target: Vec<f64> = (0..d).map(|i| if i < 3 { 0.5 } else { 0.0 }).collect();
    let f = move |x: &[f64]| -> f64 {
        x.iter()
            .zip(&target)
            .map(|(a, b)| (a - b).powi(2) + 0.1 * (a - b).abs())
            .sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = EstimatorConfig::rademacher(d, horizon, 4).unwrap();
    println!("smoothing mu = {:.2e}, batch {}", cfg.mu, cfg.batch);

    let mode = FeasibleMode::Ball(BallConstraint::new(2.0).unwrap());
    let mut state = AccelState::new(ExpMd::new(
        vec![0.0; d],
        mode,
        ScheduleParams::new(d, 2.0).unwrap(),
    ));
    let mut oracle =
        |x: &Vec<f64>| two_point_grad(|p: &[f64]| Ok::<_, exp_oco::Error>(f(p)), x, &cfg, &mut rng);
    let zs = run(&mut state, &mut oracle, horizon).unwrap();
    for t in [10, 100, 1000, horizon] {
        println!("T={t:5}: f(z_T) = {:.5}", f(&zs[t - 1]));
    }
}
