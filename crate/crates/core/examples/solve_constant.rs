//! Solving g ≡ 1, whose solution is known in closed form.
//!
//! Run with `cargo run --example solve_constant`.

use frac_ivp::prelude::*;

fn main() {
    let g = Expr::parse("1").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 0.5, g, 5.0, 5.0).unwrap().with_bound(1.0).unwrap();
    let sol = picard_solve(&spec, &SolverConfig::default().with_n(512)).unwrap();
    let (g15, g05) = (gamma(1.5).unwrap(), gamma(0.5).unwrap());
    println!("solved on [0, {}] in {} iterations", sol.grid.end(), sol.iterations);
    println!("{:>8} {:>20} {:>10} {:>20} {:>10}", "x", "w", "err", "v", "err");
    for (i, x) in sol.grid.points().enumerate().step_by(64) {
        let w = x.sqrt() / g15 + g05 * x;
        let v = 1.0 + 2.0 * x.sqrt();
        println!("{x:>8.4} {:>20.15} {:>10.1e} {:>20.15} {:>10.1e}", sol.w[i], (sol.w[i] - w).abs(), sol.v[i], (sol.v[i] - v).abs());
    }
    let (rw, rv) = residual(&spec, &sol).unwrap();
    println!("residual: w {rw:.1e}, v {rv:.1e}");
}
