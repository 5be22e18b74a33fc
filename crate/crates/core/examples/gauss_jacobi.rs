//! Gauss–Jacobi product rules absorbing the kernel singularities of the solver.
//!
//! Run with `cargo run --example gauss_jacobi`.

use frac_ivp::specfun::{beta_mass, gauss_jacobi_rule};

fn main() {
    let sigma = 1.5;
    for (a, b) in [(1.0 - sigma, sigma - 1.0), (1.0 - sigma, 0.0)] {
        println!("weight tau^{a} (1-tau)^{b}");
        for n in [4, 8, 16, 32] {
            let rule = gauss_jacobi_rule(a, b, n).unwrap();
            // ∫ τ^a (1-τ)^b cos(τ) dτ against a 64-point reference
            let approx = rule.integrate(f64::cos);
            let reference = gauss_jacobi_rule(a, b, 64).unwrap().integrate(f64::cos);
            println!(
                "  n={n:>2}  mass error={:.1e}  cos integral={approx:.16}  error={:.1e}",
                (rule.mass() - beta_mass(a, b)).abs(),
                (approx - reference).abs()
            );
        }
    }
    let rule = gauss_jacobi_rule(-0.5, 0.5, 5).unwrap();
    println!("\nnodes and weights, n = 5, (a, b) = (-0.5, 0.5):");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  {x:.16}  {w:.16}");
    }
}
