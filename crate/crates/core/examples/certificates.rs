//! Nagumo, Krasnoselskii–Krein and Osgood checks on a nonlinear right-hand side.
//!
//! Run with `cargo run --release --example certificates`.

use frac_ivp::certificates::kk_alpha_floor;
use frac_ivp::prelude::*;

fn main() {
    let g = Expr::parse("0.2*sin(w) + 0.05*v").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 1.0, g, 5.0, 5.0).unwrap();

    let l = estimate_lipschitz(&spec, 20_000, 0).unwrap();
    println!("estimated Lipschitz constant: {l:.6}");
    println!("Nagumo bound at sigma=1.5, T=1: {:.12}", nagumo_threshold(1.5, 1.0));
    for l in [0.2, 0.3] {
        let report = nagumo_check(&spec, l).unwrap();
        println!("nagumo L={l}: holds={} margin={:+.6}", report.holds, report.margin("nagumo_margin").unwrap());
    }

    println!("\nKK alpha floor at sigma=1.9, L=2: {:.10}", kk_alpha_floor(1.9, 2.0));
    let report = kk_check(&spec, 0.5, 1.0, 0.5, 2000, 11).unwrap();
    println!("kk L=0.5 C=1 alpha=0.5: holds={}", report.holds);

    let params = OsgoodParams::new(Expr::parse_modulus("u").unwrap(), 3.0, 100.0);
    let report = osgood_check(&spec, &params).unwrap();
    println!("\nosgood report:\n{}", report.to_json());
}
