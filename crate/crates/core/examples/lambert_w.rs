//! Principal Lambert branch, directly and from the logarithm of its argument.

use exp_oco::lambert::{w0, w0_from_log};

fn main() {
    for z in [0.0, 0.3, 1.0, std::f64::consts::E, 1e6] {
        let r = w0(z).unwrap();
        println!(
            "W({z:>10.4}) = {:.15}  residual {:.1e}  iters {}",
            r.w, r.residual, r.iterations
        );
    }

    // arguments given as ln z
    for s in [10.0, 700.0, 1500.0] {
        let r = w0_from_log(s).unwrap();
        println!("W(exp({s})) = {:.12}", r.w);
    }
}
