//! Mean-value witnesses for the g ≡ 0 solution: present only when Γ(σ)Γ(2-σ) > 2.
//!
//! Run with `cargo run --example mean_value_witness`.

use frac_ivp::prelude::*;

fn main() {
    println!("{:>6} {:>14} {:>14} {:>14}", "sigma", "G(s)G(2-s)", "witness", "closed form");
    for sigma in [1.2, 1.5, 1.6, 1.65, 1.8, 1.9] {
        let spec = ProblemSpec::new(sigma, 1.0, 1.0, Expr::parse("0").unwrap(), 5.0, 5.0).unwrap();
        let sol = picard_solve(&spec, &SolverConfig::default().with_n(1024)).unwrap();
        let product = gamma(sigma).unwrap() * gamma(2.0 - sigma).unwrap();
        let found = mean_value_witness(sigma, &sol, 1.0);
        let closed = (product > 2.0).then(|| (2.0 / product).powf(1.0 / (sigma - 1.0)));
        let show = |m: Option<f64>| m.map_or("none".to_string(), |m| format!("{m:.8}"));
        println!("{sigma:>6} {product:>14.8} {:>14} {:>14}", show(found), show(closed));
    }
}
