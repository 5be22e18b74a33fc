//! Problem data and the existence window.
//!
//! A problem is `D^σ ω = f(x, ω, D^{σ-1}ω)` with `ω(0) = 0`, `D^{σ-1}ω(0) = b`, stored
//! through the regular part `g(x, w, v) = x^{σ-1} f(x, w, v)` together with the box
//! `[0, T] × [-r₁, r₁] × [b - r₂, b + r₂]` on which `|g| ≤ M`.

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::specfun::tgamma;

/// Safety factor applied to a lattice estimate of `sup |g|`.
pub const BOUND_INFLATION: f64 = 1.1;

/// Lattice points per axis used when `M` has to be estimated.
pub const DEFAULT_BOUND_DENSITY: usize = 21;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("sigma must lie strictly between 1 and 2 (got {0})")]
    Sigma(f64),
    #[error("b must be finite and non-zero (got {0})")]
    InitialValue(f64),
    #[error("T must be positive and finite (got {0})")]
    Horizon(f64),
    #[error("{name} must be positive and finite (got {value})")]
    Radius { name: &'static str, value: f64 },
    #[error("M must be positive and finite (got {0})")]
    Bound(f64),
    #[error("bound density must be at least 1")]
    Density,
    #[error("evaluating g: {0}")]
    Eval(#[from] EvalError),
}

/// Problem data. `M`, when present, is trusted as an upper bound of `|g|` on the box.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    sigma: f64,
    b: f64,
    horizon: f64,
    g: Expr,
    r1: f64,
    r2: f64,
    bound: Option<f64>,
}

impl ProblemSpec {
    pub fn new(sigma: f64, b: f64, horizon: f64, g: Expr, r1: f64, r2: f64) -> Result<Self, ProblemError> {
        if !(sigma > 1.0 && sigma < 2.0) {
            return Err(ProblemError::Sigma(sigma));
        }
        if !(b.is_finite() && b != 0.0) {
            return Err(ProblemError::InitialValue(b));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(ProblemError::Horizon(horizon));
        }
        for (name, value) in [("r1", r1), ("r2", r2)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ProblemError::Radius { name, value });
            }
        }
        Ok(Self { sigma, b, horizon, g, r1, r2, bound: None })
    }

    /// Declares `M = sup |g|` on the box.
    pub fn with_bound(mut self, m: f64) -> Result<Self, ProblemError> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(ProblemError::Bound(m));
        }
        self.bound = Some(m);
        Ok(self)
    }

    /// Same problem on a different horizon `T`.
    pub fn with_horizon(mut self, horizon: f64) -> Result<Self, ProblemError> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(ProblemError::Horizon(horizon));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The horizon `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Total radius `r = r₁ + r₂`.
    pub fn radius(&self) -> f64 {
        self.r1 + self.r2
    }

    /// The declared `M`, if any.
    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// `g(x, w, v)`.
    pub fn eval_g(&self, x: f64, w: f64, v: f64) -> Result<f64, EvalError> {
        self.g.eval(x, w, v)
    }

    /// `f(x, w, v) = x^{1-σ} g(x, w, v)` for `x > 0`; for display and diagnostics only.
    pub fn eval_f(&self, x: f64, w: f64, v: f64) -> Result<f64, EvalError> {
        Ok(x.powf(1.0 - self.sigma) * self.g.eval(x, w, v)?)
    }

    /// Whether `(w, v)` lies in `[-r₁, r₁] × [b - r₂, b + r₂]`.
    pub fn in_box(&self, w: f64, v: f64) -> bool {
        w.abs() <= self.r1 && (v - self.b).abs() <= self.r2
    }

    /// The box as `([0, T], [-r₁, r₁], [b - r₂, b + r₂])`.
    pub fn box_ranges(&self) -> [(f64, f64); 3] {
        [
            (0.0, self.horizon),
            (-self.r1, self.r1),
            (self.b - self.r2, self.b + self.r2),
        ]
    }
}

/// `M` for the problem: the declared bound, otherwise `1.1 · max |g|` over a
/// `density³` lattice on the box (endpoints included when `density ≥ 2`).
///
/// The lattice maximum is a lower estimate of the true supremum; the inflation factor
/// is a heuristic margin, not a guarantee.
pub fn bound_m(spec: &ProblemSpec, density: usize) -> Result<f64, ProblemError> {
    if let Some(m) = spec.bound {
        return Ok(m);
    }
    if density == 0 {
        return Err(ProblemError::Density);
    }
    let axes: Vec<Vec<f64>> = spec.box_ranges().iter().map(|&(lo, hi)| lattice(lo, hi, density)).collect();
    let mut max = 0.0f64;
    for &x in &axes[0] {
        for &w in &axes[1] {
            for &v in &axes[2] {
                max = max.max(spec.g.eval(x, w, v)?.abs());
            }
        }
    }
    Ok(BOUND_INFLATION * max)
}

fn lattice(lo: f64, hi: f64, density: usize) -> Vec<f64> {
    if density == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let last = (density - 1) as f64;
    (0..density)
        .map(|k| if k + 1 == density { hi } else { lo + (hi - lo) * k as f64 / last })
        .collect()
}

/// `C(b, σ, M) = |b|/Γ(σ) + M (1 + Γ(3-σ))/(2-σ)`.
pub fn existence_constant(b: f64, sigma: f64, m: f64) -> f64 {
    b.abs() / tgamma(sigma) + m * (1.0 + tgamma(3.0 - sigma)) / (2.0 - sigma)
}

/// Which exponent rule produced `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowCase {
    /// `r/C ≥ 1`, so `α = 1`.
    RatioAtLeastOne,
    /// `r/C < 1` and `σ ≤ 1.5`, so `α = σ - 1`.
    SigmaAtMostHalf,
    /// `r/C < 1` and `σ > 1.5`, so `α = 2 - σ`.
    SigmaAboveHalf,
}

impl WindowCase {
    pub fn tag(self) -> &'static str {
        match self {
            WindowCase::RatioAtLeastOne => "ratio_at_least_one",
            WindowCase::SigmaAtMostHalf => "sigma_at_most_1.5",
            WindowCase::SigmaAboveHalf => "sigma_above_1.5",
        }
    }
}

/// The horizon on which a solution is guaranteed to exist inside the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExistenceWindow {
    /// `T₀ = min(T, (r/C)^{1/α})`.
    pub t0: f64,
    pub alpha: f64,
    /// `C(b, σ, M)`.
    pub c: f64,
    /// The `M` used.
    pub m: f64,
    /// `r/C`.
    pub ratio: f64,
    pub case: WindowCase,
    /// `T` was smaller than `(r/C)^{1/α}` and became `T₀`.
    pub truncated: bool,
}

/// Existence window with `M` from [`bound_m`] at [`DEFAULT_BOUND_DENSITY`].
pub fn existence_window(spec: &ProblemSpec) -> Result<ExistenceWindow, ProblemError> {
    let m = bound_m(spec, DEFAULT_BOUND_DENSITY)?;
    Ok(window_for(spec.sigma, spec.b, m, spec.radius(), spec.horizon))
}

/// `T₀ = min(T, (r/C)^{1/α})` with `α = 1` when `r/C ≥ 1` and otherwise the smaller of
/// the exponents `σ - 1`, `2 - σ`, which keeps `C T₀^α ≤ r`.
pub fn window_for(sigma: f64, b: f64, m: f64, r: f64, horizon: f64) -> ExistenceWindow {
    let c = existence_constant(b, sigma, m);
    let ratio = r / c;
    let (alpha, case) = if ratio >= 1.0 {
        (1.0, WindowCase::RatioAtLeastOne)
    } else if sigma <= 1.5 {
        (sigma - 1.0, WindowCase::SigmaAtMostHalf)
    } else {
        (2.0 - sigma, WindowCase::SigmaAboveHalf)
    };
    let reach = ratio.powf(1.0 / alpha);
    let truncated = horizon < reach;
    ExistenceWindow { t0: reach.min(horizon), alpha, c, m, ratio, case, truncated }
}
