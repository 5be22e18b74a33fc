//! Fixtures shared by the integration tests and the acceptance harness.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use frac_ivp::expr::{EvalError, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Expressions paired with a fully parenthesised rewriting of the intended precedence.
pub const PRECEDENCE_CORPUS: [(&str, &str); 50] = [
    ("2+3*x", "2+(3*x)"),
    ("2*3+x", "(2*3)+x"),
    ("x-w-v", "(x-w)-v"),
    ("x/w/v", "(x/w)/v"),
    ("x^w^v", "x^(w^v)"),
    ("-x^2", "-(x^2)"),
    ("-x*w", "(-x)*w"),
    ("x^-w", "x^(-w)"),
    ("2^-1", "2^(-1)"),
    ("x*w+v*x", "(x*w)+(v*x)"),
    ("x+w*v^2", "x+(w*(v^2))"),
    ("x-w+v", "(x-w)+v"),
    ("x/w*v", "(x/w)*v"),
    ("-(x+w)*v", "(-(x+w))*v"),
    ("--x", "-(-x)"),
    ("x^2^0.5", "x^(2^0.5)"),
    ("exp(x)*w^2", "(exp(x))*(w^2)"),
    ("sin(x)^2+cos(x)^2", "((sin(x))^2)+((cos(x))^2)"),
    ("log(x*w)/v", "(log((x*w)))/v"),
    ("sqrt(x)+abs(w-v)", "(sqrt(x))+(abs((w-v)))"),
    ("pow(x, 1.5)*w", "(pow(x,1.5))*w"),
    ("x^0.5*w", "(x^0.5)*w"),
    ("0.2*sin(w)+0.05*v", "(0.2*(sin(w)))+(0.05*v)"),
    ("pi*x^2", "pi*(x^2)"),
    ("1-x/2", "1-(x/2)"),
    ("x*-w", "x*(-w)"),
    ("-x^-w", "-(x^(-w))"),
    ("2*x^3-4*x^2+x-1", "(((2*(x^3))-(4*(x^2)))+x)-1"),
    ("(x+w)*(v-x)", "((x+w)*(v-x))"),
    ("x/(w+v)", "x/((w+v))"),
    ("neg(x)+w", "(neg(x))+w"),
    ("exp(-x^2)", "exp((-(x^2)))"),
    ("w^2-v", "(w^2)-v"),
    ("x*w*v", "(x*w)*v"),
    ("x+w+v+1", "((x+w)+v)+1"),
    ("1/x/w", "(1/x)/w"),
    ("x^w*v^x", "(x^w)*(v^x)"),
    ("-2^2", "-(2^2)"),
    ("(-2)^2", "((-2))^2"),
    ("3e-1*x", "(3e-1)*x"),
    ("cos(pi*x)*w", "(cos((pi*x)))*w"),
    ("abs(-x)*2", "(abs((-x)))*2"),
    ("sqrt(x^2+w^2)", "sqrt(((x^2)+(w^2)))"),
    ("x - -w", "x-(-w)"),
    ("  x*( w + v )  ", "x*(w+v)"),
    ("log(x)^2/2", "((log(x))^2)/2"),
    ("x^(1/3)", "x^((1/3))"),
    ("w*exp(x)-v*sin(x)", "(w*(exp(x)))-(v*(sin(x)))"),
    ("-w+v", "(-w)+v"),
    ("2*-x^2", "2*(-(x^2))"),
];

/// Malformed inputs and the byte offset the error must point at.
pub const MALFORMED: [(&str, usize); 18] = [
    ("2+*3", 2),
    ("", 0),
    ("x+", 2),
    ("(x+w", 4),
    ("x+w)", 3),
    ("sin x", 4),
    ("sin(x", 5),
    ("x y", 2),
    ("q+1", 0),
    ("x+foo(2)", 2),
    ("pow(x, w)", 7),
    ("1e", 1),
    ("x^^2", 2),
    ("*x", 0),
    ("x$2", 1),
    ("sin()", 4),
    ("x,w", 1),
    ("1.5.2", 3),
];

/// Outcome comparable bit for bit, including which domain error occurred.
pub fn outcome(r: Result<f64, EvalError>) -> Result<u64, String> {
    r.map(f64::to_bits).map_err(|e| e.kind.to_string())
}

/// Seeded evaluation points with all variables in [0.1, 2].
pub fn triples(count: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(0.1..2.0), rng.random_range(0.1..2.0), rng.random_range(0.1..2.0)))
        .collect()
}

/// First triple where the two expressions evaluate differently, if any.
pub fn first_disagreement(a: &Expr, b: &Expr, points: &[(f64, f64, f64)]) -> Option<(f64, f64, f64)> {
    points.iter().copied().find(|&(x, w, v)| outcome(a.eval(x, w, v)) != outcome(b.eval(x, w, v)))
}

/// Writes `text` to `name` inside `dir`.
pub fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write fixture");
    path
}

/// Constant right-hand side: closed form w = x^0.5/Γ(1.5) + Γ(0.5) x, v = 1 + 2 x^0.5.
pub const CONSTANT_PROBLEM: &str = "sigma = 1.5\nb = 1.0\nT = 0.5\ng = \"1\"\nr1 = 5.0\nr2 = 5.0\nM = 1.0\n";

/// `D^1.5 w = w`: w = x^0.5 E_{1.5,1.5}(x^1.5), v = E_{1.5,1}(x^1.5).
pub const LINEAR_PROBLEM: &str = "sigma = 1.5\nb = 1.0\nT = 0.8\ng = \"x^0.5*w\"\nr1 = 3.0\nr2 = 1000.0\nM = 3.0\n";

/// A nonlinear problem with Lipschitz constant 0.2 in the sum norm.
pub const NONLINEAR_PROBLEM: &str = "sigma = 1.5\nb = 1.0\nT = 1.0\ng = \"0.2*sin(w) + 0.05*v\"\nr1 = 5.0\nr2 = 5.0\n\n[certificates]\nL = 0.2\nC = 1.0\nalpha = 0.5\np = 3.0\nmodulus = \"u\"\nsamples = 2000\nseed = 11\n";
