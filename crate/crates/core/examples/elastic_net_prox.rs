//! Elastic-net prox under the entropy geometry.

use exp_oco::entropy::{log_magnitude, EntropyParams};
use exp_oco::prox::{elastic_net_prox, elastic_net_prox_log, CompositeRegularizer};

fn main() {
    let p = EntropyParams::new(2.0, 0.1).unwrap();
    let y = vec![3.0, -0.05, 0.8, -2.0, 0.0];

    for (g1, g2) in [(0.0, 0.0), (0.5, 0.0), (0.5, 1.0), (5.0, 1.0)] {
        let r = CompositeRegularizer::new(g1, g2).unwrap();
        let x = elastic_net_prox(&y, r, p).unwrap();
        println!("gamma1={g1} gamma2={g2}: {x:.5?}");
    }

    // a dual point whose magnitude is far beyond f64 range
    let r = CompositeRegularizer::new(0.5, 1.0).unwrap();
    let theta = vec![1500.0, -900.0, log_magnitude(0.2, p.beta())];
    println!(
        "log-domain prox: {:.5?}",
        elastic_net_prox_log(&theta, r, p).unwrap()
    );
}
