//! Nuclear-norm geometry: spectral prox, nuclear-ball projection and the
//! matrix learner tracking a low-rank target.

use exp_oco::entropy::EntropyParams;
use exp_oco::learners::{FeasibleMode, OnlineLearner};
use exp_oco::prox::{BallConstraint, CompositeRegularizer};
use exp_oco::spectral::{
    nuclear_ball_project, nuclear_norm, singular_values, spectral_prox, Matrix, SpectralExpFtrl,
    SpectralSchedule,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (m, n) = (8, 5);
    let mut gauss = || Matrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng));

    let p = EntropyParams::new(1.0, 0.2).unwrap();
    let y = gauss();
    println!(
        "singular values of Y:   {:.4?}",
        singular_values(&y).unwrap()
    );
    let x = spectral_prox(&y, CompositeRegularizer::new(0.8, 0.1).unwrap(), p).unwrap();
    println!(
        "after spectral prox:    {:.4?}",
        singular_values(&x).unwrap()
    );
    let x = nuclear_ball_project(&y, BallConstraint::new(2.0).unwrap(), p).unwrap();
    println!(
        "projected to |X|_* = 2: {:.4?}",
        singular_values(&x).unwrap()
    );

    // rank-1 target, squared loss on random linear measurements
    let u = gauss().column(0).into_owned();
    let v = gauss().row(0).into_owned();
    let target = &u * &v;
    let radius = nuclear_norm(&target).unwrap();
    let mode = FeasibleMode::Ball(BallConstraint::new(radius).unwrap());
    let mut learner = SpectralExpFtrl::new(
        Matrix::zeros(m, n),
        mode,
        SpectralSchedule::new(m, n, radius).unwrap(),
    )
    .unwrap();
    for t in 1..=2000 {
        let a = gauss();
        let x = learner.current().clone();
        let residual = (&x - &target).component_mul(&a).sum();
        let g = a * residual;
        learner.update(&g, &Matrix::zeros(m, n), 1.0).unwrap();
        if t % 500 == 0 {
            let err = (learner.current() - &target).norm() / target.norm();
            println!("round {t:4}: relative error {err:.4}");
        }
    }
}
