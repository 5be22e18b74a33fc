//! Discrete Riemann–Liouville integrals and derivatives on uniform grids.
//!
//! A [`SampledFunction`] declares `u(x) = x^λ r(x)` near the origin with a regular part
//! `r`. Integrals map `∫₀^x (x-t)^{ν-1} u(t) dt` onto `[0, 1]` with `t = xτ` and apply
//! a Gauss–Jacobi rule with exponents `(λ, ν-1)` to `r(xτ)`, which is interpolated
//! between grid points by a cubic Hermite interpolant with centred slopes, so every
//! operator is exactly linear in the samples. Derivatives differentiate
//! `I^{2-σ}u = x^p K(x)` through the product rule, finite-differencing only the smooth
//! factor `K`.

use thiserror::Error;

use crate::interp::HermiteCubic;
use crate::specfun::{gauss_jacobi_rule, tgamma, QuadratureRule, SpecFunError};

/// Gauss–Jacobi points used per grid point by the operators in this module.
pub const DEFAULT_RULE_POINTS: usize = 32;

const EXPONENT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracOpsError {
    #[error("invalid order {0}")]
    InvalidOrder(f64),
    #[error("grid needs a positive finite endpoint and at least {min} subintervals (got X = {end}, n = {n})")]
    InvalidGrid { end: f64, n: usize, min: usize },
    #[error("sampled values have length {got}, grid has {want} points")]
    LengthMismatch { got: usize, want: usize },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("leading exponent {0} must be finite and non-negative")]
    InvalidLeadingExponent(f64),
    #[error("declared leading exponent {0} requires values[0] = 0")]
    NonZeroOrigin(f64),
    #[error("D^(sigma-1) is unbounded at 0: leading exponent {lambda} < sigma - 1 = {need}")]
    InsufficientRegularity { lambda: f64, need: f64 },
    #[error(transparent)]
    Quadrature(#[from] SpecFunError),
}

/// Uniform mesh `x_i = i X / n`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    end: f64,
    n: usize,
}

impl Grid {
    pub fn new(end: f64, n: usize) -> Result<Self, FracOpsError> {
        if !(end > 0.0 && end.is_finite()) || n < 1 {
            return Err(FracOpsError::InvalidGrid { end, n, min: 1 });
        }
        Ok(Self { end, n })
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Number of subintervals.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.end / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.n {
            self.end
        } else {
            self.end * i as f64 / self.n as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|i| self.point(i))
    }

    /// Index of the grid point equal to `x` up to rounding.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let s = x / self.step();
        let i = s.round();
        if i < 0.0 || i > self.n as f64 || (s - i).abs() > 1e-9 {
            return None;
        }
        Some(i as usize)
    }
}

/// Samples of `u` on a grid with a declared leading power at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
    leading_exponent: f64,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>, leading_exponent: f64) -> Result<Self, FracOpsError> {
        if values.len() != grid.len() {
            return Err(FracOpsError::LengthMismatch { got: values.len(), want: grid.len() });
        }
        if !(leading_exponent >= 0.0 && leading_exponent.is_finite()) {
            return Err(FracOpsError::InvalidLeadingExponent(leading_exponent));
        }
        if leading_exponent > 0.0 && values[0] != 0.0 {
            return Err(FracOpsError::NonZeroOrigin(leading_exponent));
        }
        Ok(Self { grid, values, leading_exponent })
    }

    /// Samples `f` on the grid; `values[0]` is forced to zero when `leading_exponent > 0`.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid, leading_exponent: f64, f: F) -> Result<Self, FracOpsError> {
        let values = grid
            .points()
            .enumerate()
            .map(|(i, x)| if i == 0 && leading_exponent > 0.0 { 0.0 } else { f(x) })
            .collect();
        Self::new(grid, values, leading_exponent)
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.len()], leading_exponent: 0.0 }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn leading_exponent(&self) -> f64 {
        self.leading_exponent
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `r_i = u_i / x_i^λ`; at the origin `r_0 = u_0` when `λ = 0`, otherwise quadratic
    /// extrapolation from `r_1, r_2, r_3`.
    pub fn regular_part(&self) -> Vec<f64> {
        let lambda = self.leading_exponent;
        if lambda == 0.0 {
            return self.values.clone();
        }
        let mut r: Vec<f64> = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(x, u)| if x > 0.0 { u / x.powf(lambda) } else { 0.0 })
            .collect();
        r[0] = match r.len() {
            0 | 1 => 0.0,
            2 => r[1],
            3 => 2.0 * r[1] - r[2],
            _ => 3.0 * r[1] - 3.0 * r[2] + r[3],
        };
        r
    }

    /// `a·self + b·other` on a shared grid and leading exponent.
    pub fn combine(&self, a: f64, other: &SampledFunction, b: f64) -> Result<SampledFunction, FracOpsError> {
        if self.grid != other.grid || self.leading_exponent != other.leading_exponent {
            return Err(FracOpsError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(u, w)| a * u + b * w).collect();
        Ok(SampledFunction { grid: self.grid, values, leading_exponent: self.leading_exponent })
    }
}

/// `K_i = (1/Γ(ν)) ∫₀¹ τ^λ (1-τ)^{ν-1} r(x_i τ) dτ`, so that `I^ν u (x_i) = x_i^{ν+λ} K_i`.
fn integral_factor(nu: f64, u: &SampledFunction, points: usize) -> Result<Vec<f64>, FracOpsError> {
    let rule: QuadratureRule = gauss_jacobi_rule(u.leading_exponent, nu - 1.0, points)?;
    let grid = u.grid;
    let reg = HermiteCubic::centred(0.0, grid.step(), u.regular_part());
    let scale = 1.0 / tgamma(nu);
    Ok(grid
        .points()
        .map(|x| scale * rule.integrate(|t| reg.eval(x * t)))
        .collect())
}

fn check_order(sigma: f64, lo: f64, hi: f64) -> Result<(), FracOpsError> {
    if sigma > lo && sigma < hi {
        Ok(())
    } else {
        Err(FracOpsError::InvalidOrder(sigma))
    }
}

/// Riemann–Liouville integral `I^σ u` for `σ ∈ (0, 2)`.
pub fn frac_integral(sigma: f64, u: &SampledFunction) -> Result<SampledFunction, FracOpsError> {
    frac_integral_with(sigma, u, DEFAULT_RULE_POINTS)
}

pub fn frac_integral_with(sigma: f64, u: &SampledFunction, points: usize) -> Result<SampledFunction, FracOpsError> {
    check_order(sigma, 0.0, 2.0)?;
    let k = integral_factor(sigma, u, points)?;
    let p = sigma + u.leading_exponent;
    let values = u
        .grid
        .points()
        .zip(&k)
        .map(|(x, k)| if x > 0.0 { x.powf(p) * k } else { 0.0 })
        .collect();
    Ok(SampledFunction { grid: u.grid, values, leading_exponent: p })
}

// First and second derivatives of grid samples: centred in the interior, second-order
// one-sided at the ends.
fn first_difference(h: f64, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            d[0] = (k[1] - k[0]) / h;
            d[1] = d[0];
        }
        return d;
    }
    for i in 1..n - 1 {
        d[i] = (k[i + 1] - k[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * k[0] + 4.0 * k[1] - k[2]) / (2.0 * h);
    d[n - 1] = (3.0 * k[n - 1] - 4.0 * k[n - 2] + k[n - 3]) / (2.0 * h);
    d
}

fn second_difference(h: f64, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let mut d = vec![0.0; n];
    for i in 1..n.saturating_sub(1) {
        d[i] = (k[i + 1] - 2.0 * k[i] + k[i - 1]) / (h * h);
    }
    d
}

/// Pieces of `J = I^{2-σ}u = x^p K(x)` needed by both derivatives.
struct Antiderivative {
    p: f64,
    k: Vec<f64>,
    dk: Vec<f64>,
    grid: Grid,
    origin_slope: f64,
}

fn antiderivative(sigma: f64, u: &SampledFunction, points: usize) -> Result<Antiderivative, FracOpsError> {
    check_order(sigma, 1.0, 2.0)?;
    if u.grid.n < 2 {
        return Err(FracOpsError::InvalidGrid { end: u.grid.end, n: u.grid.n, min: 2 });
    }
    let k = integral_factor(2.0 - sigma, u, points)?;
    let p = 2.0 - sigma + u.leading_exponent;
    let dk = first_difference(u.grid.step(), &k);
    // J'(0) = lim p x^{p-1} K(x)
    let origin_slope = if p - 1.0 > EXPONENT_SLACK {
        0.0
    } else if (p - 1.0).abs() <= EXPONENT_SLACK {
        p * k[0]
    } else {
        let scale = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if k[0].abs() <= 1e-12 * scale || k[0] == 0.0 {
            0.0
        } else {
            return Err(FracOpsError::InsufficientRegularity {
                lambda: u.leading_exponent,
                need: sigma - 1.0,
            });
        }
    };
    Ok(Antiderivative { p, k, dk, grid: u.grid, origin_slope })
}

/// `D^{σ-1} u = d/dx I^{2-σ} u` for `σ ∈ (1, 2)`.
pub fn frac_derivative_minus_one(sigma: f64, u: &SampledFunction) -> Result<SampledFunction, FracOpsError> {
    frac_derivative_minus_one_with(sigma, u, DEFAULT_RULE_POINTS)
}

pub fn frac_derivative_minus_one_with(
    sigma: f64,
    u: &SampledFunction,
    points: usize,
) -> Result<SampledFunction, FracOpsError> {
    let a = antiderivative(sigma, u, points)?;
    let p = a.p;
    let values: Vec<f64> = a
        .grid
        .points()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                a.origin_slope
            } else {
                p * x.powf(p - 1.0) * a.k[i] + x.powf(p) * a.dk[i]
            }
        })
        .collect();
    let lead = if p - 1.0 > EXPONENT_SLACK { p - 1.0 } else { 0.0 };
    Ok(SampledFunction { grid: a.grid, values, leading_exponent: lead })
}

/// `D^σ u = d²/dx² I^{2-σ} u` for `σ ∈ (1, 2)` on interior points; the two end values are
/// linear extrapolations. Less accurate than [`frac_derivative_minus_one`].
pub fn frac_derivative(sigma: f64, u: &SampledFunction) -> Result<SampledFunction, FracOpsError> {
    frac_derivative_with(sigma, u, DEFAULT_RULE_POINTS)
}

pub fn frac_derivative_with(sigma: f64, u: &SampledFunction, points: usize) -> Result<SampledFunction, FracOpsError> {
    let a = antiderivative(sigma, u, points)?;
    let n = a.grid.n;
    if n < 3 {
        return Err(FracOpsError::InvalidGrid { end: a.grid.end, n, min: 3 });
    }
    let p = a.p;
    let ddk = second_difference(a.grid.step(), &a.k);
    let mut values = vec![0.0; n + 1];
    for (i, value) in values.iter_mut().enumerate().take(n).skip(1) {
        let x = a.grid.point(i);
        *value = p * (p - 1.0) * x.powf(p - 2.0) * a.k[i]
            + 2.0 * p * x.powf(p - 1.0) * a.dk[i]
            + x.powf(p) * ddk[i];
    }
    values[0] = 2.0 * values[1] - values[2];
    values[n] = 2.0 * values[n - 1] - values[n - 2];
    Ok(SampledFunction { grid: a.grid, values, leading_exponent: 0.0 })
}

/// Max-norm defects of the two composition identities over the grid interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionDefect {
    /// `I^σ D^σ u - (u - d_init x^{σ-1}/Γ(σ))`
    pub integral_of_derivative: f64,
    /// `D^σ I^σ u - u`
    pub derivative_of_integral: f64,
}

impl CompositionDefect {
    pub fn max(&self) -> f64 {
        self.integral_of_derivative.max(self.derivative_of_integral)
    }
}

/// Checks `I^σ D^σ u = u - D^{σ-1}u(0) x^{σ-1}/Γ(σ)` and `D^σ I^σ u = u`, where `d_init`
/// is the known value of `D^{σ-1}u(0)`.
pub fn check_composition(sigma: f64, u: &SampledFunction, d_init: f64) -> Result<CompositionDefect, FracOpsError> {
    check_order(sigma, 1.0, 2.0)?;
    let grid = u.grid;
    let n = grid.n;
    let g_sigma = tgamma(sigma);

    let d = frac_derivative(sigma, u)?;
    let back = frac_integral(sigma, &d)?;
    let integral_of_derivative = (1..n)
        .map(|i| {
            let x = grid.point(i);
            let want = u.values[i] - d_init * x.powf(sigma - 1.0) / g_sigma;
            (back.values[i] - want).abs()
        })
        .fold(0.0, f64::max);

    let up = frac_integral(sigma, u)?;
    let down = frac_derivative(sigma, &up)?;
    let derivative_of_integral = (1..n)
        .map(|i| (down.values[i] - u.values[i]).abs())
        .fold(0.0, f64::max);

    Ok(CompositionDefect { integral_of_derivative, derivative_of_integral })
}
