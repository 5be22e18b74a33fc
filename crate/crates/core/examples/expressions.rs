//! Parsing, printing and evaluating right-hand sides, including error reporting.
//!
//! Run with `cargo run --example expressions`.

use frac_ivp::expr::Expr;

fn main() {
    for text in ["0.2*sin(w) + 0.05*v", "-x^2", "x^w^v", "pow(x, 1.5)*w", "2^-1*exp(-x)"] {
        let e = Expr::parse(text).unwrap();
        println!("{text:<22} prints as {:<28} g(0.5, 1, 2) = {:.12}", e.to_string(), e.eval(0.5, 1.0, 2.0).unwrap());
    }

    println!();
    for text in ["2+*3", "sin(x", "x + y", "1.2.3"] {
        println!("{text:<8} -> {}", Expr::parse(text).unwrap_err());
    }
    for text in ["log(w - 1)", "1/(x - 0.5)"] {
        let err = Expr::parse(text).unwrap().eval(0.5, 1.0, 0.0).unwrap_err();
        println!("{text:<12} at (0.5, 1, 0) -> {err}");
    }

    let modulus = Expr::parse_modulus("u*abs(log(u))").unwrap();
    println!("\nmodulus u|ln u| at u = 0.1: {:.12}", modulus.eval_u(0.1).unwrap());
}
