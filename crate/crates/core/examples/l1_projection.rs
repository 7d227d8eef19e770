//! Bregman projection onto the l1 ball with operation counts.

use exp_oco::entropy::EntropyParams;
use exp_oco::prox::{l1_ball_project_counted, project_or_pass, BallConstraint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let p = EntropyParams::new(1.0, 0.2).unwrap();
    let ball = BallConstraint::new(2.0).unwrap();

    let y = vec![3.0, -1.0, 0.5, 0.0, -0.2];
    let (x, counts) = l1_ball_project_counted(&y, ball, p);
    let norm: f64 = x.iter().map(|v| v.abs()).sum();
    println!("projection {x:.6?}, norm {norm:.12}, {counts:?}");

    let inside = vec![0.5, -0.5];
    println!("inside the ball: {:?}", project_or_pass(&inside, ball, p));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [16, 256, 4096] {
        let y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = EntropyParams::new(1.0, 1.0 / d as f64).unwrap();
        let (_, c) = l1_ball_project_counted(&y, BallConstraint::new(0.1).unwrap(), p);
        println!(
            "d={d:5}: {} sort, {} passes, {} comparisons",
            c.sorts, c.passes, c.comparisons
        );
    }
}
