//! Mirror maps of the generalised entropy and its Bregman divergence.

use exp_oco::entropy::{bregman, phi, phi_conj, psi_conj_grad, psi_grad, EntropyParams};

fn main() {
    let p = EntropyParams::new(1.0, 0.25).unwrap();

    for x in [-3.0, -0.1, 0.0, 0.1, 3.0] {
        println!("phi({x:5.1}) = {:.6}", phi(x, p));
    }
    println!("phi*(2.0)   = {:.6}", phi_conj(2.0, p).unwrap());

    let x = vec![0.5, -1.5, 0.0, 2.0];
    let theta = psi_grad(&x, p);
    let back = psi_conj_grad(&theta, p).unwrap();
    println!("x          = {x:?}");
    println!("grad psi   = {theta:.4?}");
    println!("round trip = {back:?}");

    let y = vec![0.4, -1.0, 0.3, 2.5];
    println!("B(x, y)    = {:.6}", bregman(&x, &y, p).unwrap());

    // rejected: dual exponent above the limit
    println!("phi*(1e3)  = {:?}", phi_conj(1e3, p));
}
