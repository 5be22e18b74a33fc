//! Gamma and Mittag-Leffler evaluations across their regimes.
//!
//! Run with `cargo run --example special_functions`.

use frac_ivp::specfun::{gamma, ln_gamma, mittag_leffler};

fn main() {
    println!("{:>8} {:>22} {:>22}", "x", "gamma(x)", "ln_gamma(x)");
    for x in [0.5, 1.5, 2.5, -0.5, 10.0, 100.0] {
        let g = gamma(x).map_or("overflow".to_string(), |g| format!("{g:.15e}"));
        println!("{x:>8} {g:>22} {:>22.15e}", ln_gamma(x.abs()).unwrap());
    }

    println!();
    println!("E_(1,1)(z) = e^z and E_(1/2,1)(1) = e erfc(-1):");
    for (alpha, beta, z) in [(1.0, 1.0, 1.0), (0.5, 1.0, 1.0), (1.5, 1.5, 2.0), (1.5, 1.0, -10.0), (0.8, 1.0, -50.0)] {
        // far out on the negative axis the evaluation budget is exceeded and reported, not guessed
        match mittag_leffler(alpha, beta, z) {
            Ok(value) => println!("  E_({alpha},{beta})({z:>6}) = {value:.15e}"),
            Err(e) => println!("  E_({alpha},{beta})({z:>6}) : {e}"),
        }
    }
    println!("  exp(1)             = {:.15e}", 1f64.exp());
}
