//! Discrete Riemann–Liouville operators on a uniform grid versus the power rule.
//!
//! Run with `cargo run --example fractional_operators`.

use frac_ivp::prelude::*;

fn main() {
    let sigma = 1.5;
    let mu = 2.0;
    // D^s x^μ = Γ(μ+1)/Γ(μ+1-s) x^{μ-s}
    let exact = |s: f64, x: f64| gamma(mu + 1.0).unwrap() / gamma(mu + 1.0 - s).unwrap() * x.powf(mu - s);
    println!("u = x^{mu} declared with leading power {mu}, sigma = {sigma}, max errors at interior grid points:");
    println!("{:>5} {:>12} {:>12} {:>12}", "n", "I^s", "D^(s-1)", "D^s");
    for n in [16, 32, 64, 128] {
        let grid = Grid::new(1.0, n).unwrap();
        let u = SampledFunction::from_fn(grid, mu, |x| x * x).unwrap();
        let err = |f: &SampledFunction, s: f64| {
            // interior points: the end values of D^s are linear extrapolations
            grid.points().zip(f.values()).skip(1).take(n - 1).map(|(x, y)| (y - exact(s, x)).abs()).fold(0.0, f64::max)
        };
        let i = frac_integral(sigma, &u).unwrap();
        let d1 = frac_derivative_minus_one(sigma, &u).unwrap();
        let d = frac_derivative(sigma, &u).unwrap();
        println!("{n:>5} {:>12.2e} {:>12.2e} {:>12.2e}", err(&i, -sigma), err(&d1, sigma - 1.0), err(&d, sigma));
    }

    println!("\ncomposition defects for u = x^s e^x:");
    for n in [32, 64, 128, 256] {
        let grid = Grid::new(1.0, n).unwrap();
        let u = SampledFunction::from_fn(grid, sigma, |x| x.powf(sigma) * x.exp()).unwrap();
        let d = check_composition(sigma, &u, 0.0).unwrap();
        println!("  n={n:>3}  I^s D^s u - u: {:.2e}   D^s I^s u - u: {:.2e}", d.integral_of_derivative, d.derivative_of_integral);
    }
}
