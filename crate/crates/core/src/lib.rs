//! Picard solver and hypothesis audits for the Riemann–Liouville initial value problem
//!
//! ```text
//! D^σ ω(x) = f(x, ω(x), D^{σ-1} ω(x)),   x > 0,   1 < σ < 2
//! ω(0) = 0,   D^{σ-1} ω(0) = b
//! ```
//!
//! where the right-hand side may blow up like `x^{1-σ}` at the origin. Problems are
//! described through the *regular part* `g(x, w, v) = x^{σ-1} f(x, w, v)`, which is
//! continuous on the closed box, and are solved through the equivalent weakly
//! singular Volterra system
//!
//! ```text
//! ω(x)         = b x^{σ-1}/Γ(σ) + (x/Γ(σ)) ∫₀¹ τ^{1-σ} (1-τ)^{σ-1} g(xτ, ω(xτ), v(xτ)) dτ
//! D^{σ-1}ω(x)  = b + x^{2-σ} ∫₀¹ τ^{1-σ} g(xτ, ω(xτ), v(xτ)) dτ
//! ```
//!
//! with Gauss–Jacobi product quadrature absorbing both singular factors.
//!
//! Modules:
//! - [`specfun`]: Gamma, Mittag-Leffler, Gauss–Jacobi rules and adaptive quadrature.
//! - [`expr`]: parser and evaluator for right-hand sides and moduli.
//! - [`fracops`]: discrete Riemann–Liouville operators on uniform grids.
//! - [`problem`]: the problem model, sup-bound estimation and the existence window.
//! - [`solver`]: Picard iteration, residuals and grid-refinement studies.
//! - [`certificates`]: Nagumo, Krasnoselskii–Krein and Osgood hypothesis checks.
//! - [`cli`]: problem files and the commands behind the `frac-ivp` binary.
//!
//! Quick start:
//!
//! ```rust
//! use frac_ivp::prelude::*;
//!
//! let g = Expr::parse("1").unwrap();
//! let spec = ProblemSpec::new(1.5, 1.0, 0.5, g, 5.0, 5.0).unwrap().with_bound(1.0).unwrap();
//! let sol = picard_solve(&spec, &SolverConfig::default().with_n(64)).unwrap();
//! assert_eq!(sol.w[0], 0.0);
//! assert_eq!(sol.v[0], 1.0);
//! ```

// tabulated nodes and reference values are kept at their published digits
#![allow(clippy::excessive_precision)]

pub mod certificates;
pub mod cli;
pub mod expr;
pub mod fracops;
pub mod interp;
pub mod problem;
pub mod solver;
pub mod specfun;

#[cfg(test)]
mod testutil;

pub mod prelude {
    pub use crate::certificates::{
        estimate_lipschitz, kk_check, mean_value_witness, nagumo_check, nagumo_threshold,
        osgood_check, CertificateKind, CertificateReport, OsgoodParams,
    };
    pub use crate::expr::Expr;
    pub use crate::fracops::{
        check_composition, frac_derivative, frac_derivative_minus_one, frac_integral, Grid,
        SampledFunction,
    };
    pub use crate::problem::{
        bound_m, existence_constant, existence_window, window_for, ExistenceWindow, ProblemSpec,
        WindowCase,
    };
    pub use crate::solver::{
        picard_solve, picard_solve_from, refine_study, residual, ExprOracle, InitialIterate,
        SolutionPair, SolverConfig, StudyRow,
    };
    pub use crate::specfun::{gamma, gauss_jacobi_rule, mittag_leffler, QuadratureRule};
}
