//! Solving the linear problem g = x^0.5 w, whose solution is a Mittag-Leffler function.
//!
//! Run with `cargo run --release --example solve_mittag_leffler`.

use frac_ivp::prelude::*;

fn main() {
    let g = Expr::parse("x^0.5*w").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 0.8, g, 3.0, 1000.0).unwrap().with_bound(3.0).unwrap();
    let sol = picard_solve(&spec, &SolverConfig::default().with_n(2048)).unwrap();
    println!("iterations: {}", sol.iterations);
    for (k, norm) in sol.update_history.iter().enumerate() {
        println!("  update {:>2}: {norm:.3e}", k + 1);
    }
    let mut worst = 0.0f64;
    for (i, x) in sol.grid.points().enumerate().skip(1) {
        let exact = x.sqrt() * mittag_leffler(1.5, 1.5, x.powf(1.5)).unwrap();
        worst = worst.max(((sol.w[i] - exact) / exact).abs());
    }
    println!("max relative error in w against x^0.5 E_(1.5,1.5)(x^1.5): {worst:.2e}");
    println!("box escape: {:?}", sol.box_escape);
}
