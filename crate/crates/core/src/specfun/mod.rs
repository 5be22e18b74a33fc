//! Special functions and quadrature rules.

mod gamma;
mod jacobi;
mod kronrod;
mod mittag_leffler;

pub use gamma::{gamma, ln_gamma};
pub(crate) use gamma::tgamma;
pub use jacobi::{beta_mass, gauss_jacobi_rule, QuadratureRule};
pub use kronrod::{adaptive_integrate, Integral};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_with, MittagLefflerOptions};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),
    #[error("argument {0} is not finite")]
    NonFinite(f64),
    #[error("invalid exponent {name} = {value}: must exceed -1")]
    InvalidExponent { name: &'static str, value: f64 },
    #[error("quadrature rule needs at least one point")]
    EmptyRule,
    #[error("invalid Mittag-Leffler parameter {name} = {value}: must be positive")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("series budget exceeded for z = {z}: {reason}")]
    BudgetExceeded { z: f64, reason: String },
    #[error("Newton iteration for Jacobi node {index} of {n} did not converge")]
    NodeNotConverged { index: usize, n: usize },
    #[error("adaptive quadrature failed on [{a}, {b}]: {reason}")]
    QuadratureFailed { a: f64, b: f64, reason: String },
}
