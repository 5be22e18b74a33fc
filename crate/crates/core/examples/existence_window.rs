//! Existence windows T0 = min(T, (r/C)^(1/alpha)) across the three exponent cases.
//!
//! Run with `cargo run --example existence_window`.

use frac_ivp::prelude::*;

fn main() {
    let g = Expr::parse("1").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 10.0, g, 0.5, 0.5).unwrap().with_bound(1.0).unwrap();
    let w = existence_window(&spec).unwrap();
    println!("sigma=1.5 b=1 r=1 M=1: C={:.10} alpha={} T0={:.10} case={}", w.c, w.alpha, w.t0, w.case.tag());

    println!("\n{:>6} {:>8} {:>14} {:>8} {:>14} case", "sigma", "r", "C", "alpha", "T0");
    for sigma in [1.2, 1.5, 1.8] {
        for r in [0.5, 5.0, 50.0] {
            let w = window_for(sigma, 1.0, 1.0, r, 100.0);
            println!("{sigma:>6} {r:>8} {:>14.8} {:>8.3} {:>14.8e} {}", w.c, w.alpha, w.t0, w.case.tag());
        }
    }

    let g = Expr::parse("0.2*sin(w) + 0.05*v").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 1.0, g, 5.0, 5.0).unwrap();
    let m = bound_m(&spec, 21).unwrap();
    println!("\nestimated M for 0.2 sin(w) + 0.05 v on the box r1=r2=5: {m:.6}");
    println!("window: {:?}", existence_window(&spec).unwrap());
}
