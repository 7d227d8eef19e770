//! Online-to-batch acceleration on a constrained quadratic.

use exp_oco::acceleration::{run, AccelState};
use exp_oco::learners::{ExpFtrl, FeasibleMode, ScheduleParams};
use exp_oco::prox::BallConstraint;
use exp_oco::Result;

fn main() {
    let d = 20;
    let radius = 10.0;
    let c: Vec<f64> = (0..d)
        .map(|i| if i % 2 == 0 { 1.2 } else { -0.8 })
        .collect();
    let f = |z: &[f64]| 0.5 * z.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>();

    let mode = FeasibleMode::Ball(BallConstraint::new(radius).unwrap());
    let mut state = AccelState::new(ExpFtrl::new(
        vec![0.0; d],
        mode,
        ScheduleParams::new(d, radius).unwrap(),
    ));
    let mut oracle =
        |x: &Vec<f64>| -> Result<Vec<f64>> { Ok(x.iter().zip(&c).map(|(a, b)| a - b).collect()) };
    let zs = run(&mut state, &mut oracle, 4000).unwrap();

    // Euclidean projection of c onto the ball: soft-threshold at 0.5
    let best = f(&c
        .iter()
        .map(|v| v.signum() * (v.abs() - 0.5))
        .collect::<Vec<_>>());
    for t in [250, 500, 1000, 2000, 4000] {
        println!("T={t:5}: f(z_T) - f* = {:.3e}", f(&zs[t - 1]) - best);
    }
}
