//! Grid-refinement study with empirical orders against an exact solution.
//!
//! Run with `cargo run --release --example refinement_study`.

use frac_ivp::prelude::*;

fn main() {
    let g = Expr::parse("x^0.5*w").unwrap();
    let spec = ProblemSpec::new(1.5, 1.0, 0.8, g, 3.0, 1000.0).unwrap().with_bound(3.0).unwrap();
    let exact = |x: f64| {
        let z = x.powf(1.5);
        (x.sqrt() * mittag_leffler(1.5, 1.5, z).unwrap(), mittag_leffler(1.5, 1.0, z).unwrap())
    };
    let config = SolverConfig::default().with_tol(1e-13);
    let rows = refine_study(&spec, &[16, 32, 64, 128, 256], &config, &exact).unwrap();
    let order = |o: Option<f64>| o.map_or("NA".to_string(), |o| format!("{o:.2}"));
    println!("{:>5} {:>12} {:>12} {:>8} {:>8}", "n", "err_w", "err_v", "order_w", "order_v");
    for r in &rows {
        println!("{:>5} {:>12.3e} {:>12.3e} {:>8} {:>8}", r.n, r.err_w, r.err_v, order(r.order_w), order(r.order_v));
    }

    // g ≡ K is reproduced to rounding, so its orders are not defined
    let spec = ProblemSpec::new(1.5, 1.0, 0.5, Expr::parse("1").unwrap(), 5.0, 5.0).unwrap();
    let oracle = ExprOracle {
        w: Expr::parse_in_x("x^0.5/0.886226925452758 + 1.772453850905516*x").unwrap(),
        v: Expr::parse_in_x("1 + 2*x^0.5").unwrap(),
    };
    println!("\ng = 1:");
    for r in refine_study(&spec, &[16, 32, 64], &config, &oracle).unwrap() {
        println!("{:>5} {:>12.3e} {:>12.3e} {:>8} {:>8}", r.n, r.err_w, r.err_v, order(r.order_w), order(r.order_v));
    }
}
