//! Online sparse logistic regression: exponentiated learners against the
//! AdaGrad family and EG± on a single stream.

use exp_oco::baselines::{AdaFtrl, AdaGrad, EgPm};
use exp_oco::harness::data::{
    gen_logistic_stream, logistic_grad, logistic_loss, substream, DATA_LANE,
};
use exp_oco::harness::ExperimentSpec;
use exp_oco::learners::{ExpFtrl, ExpMd, FeasibleMode, OnlineLearner, ScheduleParams};
use exp_oco::prox::BallConstraint;

fn play<L: OnlineLearner<Point = Vec<f64>>>(
    mut learner: L,
    xs: &[Vec<f64>],
    ys: &[f64],
    w_star: &[f64],
) -> f64 {
    let mut regret = 0.0;
    let zero = vec![0.0; w_star.len()];
    for (x, &y) in xs.iter().zip(ys) {
        let w = learner.current().clone();
        regret += logistic_loss(&w, x, y) - logistic_loss(w_star, x, y);
        learner
            .update(&logistic_grad(&w, x, y), &zero, 1.0)
            .unwrap();
    }
    regret
}

fn main() {
    let mut spec = ExperimentSpec::logistic();
    spec.dim = 200;
    spec.horizon = 1000;
    let data = gen_logistic_stream(&spec, &mut substream(spec.seed, 0, DATA_LANE));
    let d = spec.dim;
    let radius: f64 = data.w_star.iter().map(|v| v.abs()).sum();
    let ball = BallConstraint::new(radius).unwrap();
    let mode = FeasibleMode::Ball(ball);
    let sched = ScheduleParams::new(d, radius).unwrap();

    let (xs, ys, w) = (&data.xs, &data.ys, &data.w_star);
    println!("d={d}, T={}, |w*|_1={radius:.2}", spec.horizon);
    println!(
        "exp-md   {:8.2}",
        play(ExpMd::new(vec![0.0; d], mode, sched), xs, ys, w)
    );
    println!(
        "exp-ftrl {:8.2}",
        play(ExpFtrl::new(vec![0.0; d], mode, sched), xs, ys, w)
    );
    println!(
        "adagrad  {:8.2}",
        play(AdaGrad::new(vec![0.0; d], mode), xs, ys, w)
    );
    println!("adaftrl  {:8.2}", play(AdaFtrl::new(d, mode), xs, ys, w));
    println!("eg-pm    {:8.2}", play(EgPm::new(d, ball), xs, ys, w));
}
