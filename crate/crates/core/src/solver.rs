//! Picard iteration on the weakly singular Volterra system
//!
//! ```text
//! w(x) = b x^{σ-1}/Γ(σ) + (x/Γ(σ)) ∫₀¹ τ^{1-σ}(1-τ)^{σ-1} g(xτ, w(xτ), v(xτ)) dτ
//! v(x) = b + x^{2-σ} ∫₀¹ τ^{1-σ} g(xτ, w(xτ), v(xτ)) dτ
//! ```
//!
//! Iterates are stored through their regular parts `φ`, `ψ`:
//! `w = b x^{σ-1}/Γ(σ) + x φ(x)` and `v = b + x^{2-σ} ψ(x)`. Both integrals above are
//! exactly `φ` and `ψ` of the next iterate, so each sweep is one Gauss–Jacobi rule per
//! grid point and equation, with `φ`, `ψ` between grid points taken from a monotone
//! cubic. The initial conditions `w(0) = 0`, `v(0) = b` hold by construction.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::fracops::{FracOpsError, Grid};
use crate::interp::HermiteCubic;
use crate::problem::{existence_window, ProblemError, ProblemSpec};
use crate::specfun::{gauss_jacobi_rule, tgamma, QuadratureRule, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("Picard iteration did not converge in {iterations} iterations (last update norm {last_update:e})")]
    NotConverged { iterations: usize, last_update: f64 },
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("evaluating g: {0}")]
    Eval(#[from] EvalError),
    #[error("evaluating the oracle: {0}")]
    Oracle(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Grid(#[from] FracOpsError),
    #[error(transparent)]
    Quadrature(#[from] SpecFunError),
}

/// Discretisation and stopping parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of subintervals, at least 8.
    pub n: usize,
    /// Gauss–Jacobi points per integral.
    pub quad_points: usize,
    /// Stop once `‖Δw‖∞ + ‖Δv‖∞ < tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Right end of the solve interval; defaults to, and is capped at, `T₀`.
    pub endpoint: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { n: 512, quad_points: 32, tol: 1e-10, max_iter: 200, endpoint: None }
    }
}

impl SolverConfig {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_quad_points(mut self, quad_points: usize) -> Self {
        self.quad_points = quad_points;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_endpoint(mut self, endpoint: f64) -> Self {
        self.endpoint = Some(endpoint);
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::Config(m));
        if self.n < 8 {
            return bad(format!("n must be at least 8 (got {})", self.n));
        }
        if self.quad_points == 0 {
            return bad("quad_points must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive (got {})", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if let Some(x) = self.endpoint {
            if !(x > 0.0 && x.is_finite()) {
                return bad(format!("endpoint must be positive (got {x})"));
            }
        }
        Ok(())
    }
}

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Starting iterate `(w₀, v₀)`.
#[derive(Clone, Default)]
pub enum InitialIterate {
    /// `w₀ = b x^{σ-1}/Γ(σ)`, `v₀ ≡ b`: the solution for `g ≡ 0`.
    #[default]
    Affine,
    /// Arbitrary bounded functions, evaluated exactly during the first sweep.
    Custom { w: Profile, v: Profile },
}

impl InitialIterate {
    pub fn custom(
        w: impl Fn(f64) -> f64 + Send + Sync + 'static,
        v: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        InitialIterate::Custom { w: Arc::new(w), v: Arc::new(v) }
    }
}

impl std::fmt::Debug for InitialIterate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialIterate::Affine => f.write_str("Affine"),
            InitialIterate::Custom { .. } => f.write_str("Custom"),
        }
    }
}

/// Converged samples of `ω` and `v = D^{σ-1}ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPair {
    pub grid: Grid,
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub iterations: usize,
    pub final_update_norm: f64,
    /// Some iterate left `[-r₁, r₁] × [b - r₂, b + r₂]`, where existence is no longer
    /// guaranteed.
    pub box_escape: bool,
    /// `‖Δw‖∞ + ‖Δv‖∞` after each sweep.
    pub update_history: Vec<f64>,
    /// Gauss–Jacobi points used, so that residuals are measured with the same rules.
    pub quad_points: usize,
}

impl SolutionPair {
    /// Wraps externally produced samples (closed forms, perturbations) for [`residual`].
    pub fn from_samples(grid: Grid, w: Vec<f64>, v: Vec<f64>, quad_points: usize) -> Result<Self, SolverError> {
        if w.len() != grid.len() || v.len() != grid.len() {
            return Err(SolverError::Config(format!(
                "expected {} samples, got {} and {}",
                grid.len(),
                w.len(),
                v.len()
            )));
        }
        Ok(Self {
            grid,
            w,
            v,
            iterations: 0,
            final_update_norm: 0.0,
            box_escape: false,
            update_history: vec![],
            quad_points,
        })
    }
}

/// The two product rules and the constants of one problem on one grid.
struct Operator<'a> {
    spec: &'a ProblemSpec,
    grid: Grid,
    sigma: f64,
    b: f64,
    inv_gamma: f64,
    rule_w: QuadratureRule,
    rule_v: QuadratureRule,
}

/// Regular parts of one iterate on the grid.
struct Iterate {
    phi: Vec<f64>,
    psi: Vec<f64>,
}

/// How the current iterate is evaluated between grid points.
enum Lookup<'a> {
    Exact(&'a Profile, &'a Profile),
    Interpolated { phi: HermiteCubic, psi: HermiteCubic },
}

impl<'a> Operator<'a> {
    fn new(spec: &'a ProblemSpec, grid: Grid, quad_points: usize) -> Result<Self, SolverError> {
        let sigma = spec.sigma();
        Ok(Self {
            spec,
            grid,
            sigma,
            b: spec.b(),
            inv_gamma: 1.0 / tgamma(sigma),
            rule_w: gauss_jacobi_rule(1.0 - sigma, sigma - 1.0, quad_points)?,
            rule_v: gauss_jacobi_rule(1.0 - sigma, 0.0, quad_points)?,
        })
    }

    fn affine(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.b * x.powf(self.sigma - 1.0) * self.inv_gamma
        } else {
            0.0
        }
    }

    fn w_from(&self, x: f64, phi: f64) -> f64 {
        self.affine(x) + x * phi
    }

    fn v_from(&self, x: f64, psi: f64) -> f64 {
        if x > 0.0 {
            self.b + x.powf(2.0 - self.sigma) * psi
        } else {
            self.b
        }
    }

    fn lookup<'b>(&self, it: &Iterate) -> Lookup<'b> {
        let h = self.grid.step();
        Lookup::Interpolated {
            phi: HermiteCubic::monotone(0.0, h, it.phi.clone()),
            psi: HermiteCubic::monotone(0.0, h, it.psi.clone()),
        }
    }

    fn state(&self, lookup: &Lookup<'_>, x: f64) -> (f64, f64) {
        match lookup {
            Lookup::Exact(w, v) => (w(x), v(x)),
            Lookup::Interpolated { phi, psi } => (self.w_from(x, phi.eval(x)), self.v_from(x, psi.eval(x))),
        }
    }

    /// One application of the solution operator, returning the new regular parts.
    fn apply(&self, lookup: &Lookup<'_>) -> Result<Iterate, SolverError> {
        let g = self.spec.g();
        let pairs: Result<Vec<(f64, f64)>, EvalError> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let x = self.grid.point(i);
                let eval = |t: f64| -> Result<f64, EvalError> {
                    let y = x * t;
                    let (w, v) = self.state(lookup, y);
                    eval_g(g, y, w, v)
                };
                let mut phi = 0.0;
                for (t, wt) in self.rule_w.nodes().iter().zip(self.rule_w.weights()) {
                    phi += wt * eval(*t)?;
                }
                let mut psi = 0.0;
                for (t, wt) in self.rule_v.nodes().iter().zip(self.rule_v.weights()) {
                    psi += wt * eval(*t)?;
                }
                Ok((phi * self.inv_gamma, psi))
            })
            .collect();
        let (phi, psi) = pairs?.into_iter().unzip();
        Ok(Iterate { phi, psi })
    }

    fn samples(&self, it: &Iterate) -> (Vec<f64>, Vec<f64>) {
        self.grid
            .points()
            .zip(it.phi.iter().zip(&it.psi))
            .map(|(x, (p, q))| (self.w_from(x, *p), self.v_from(x, *q)))
            .unzip()
    }

    /// Regular parts of arbitrary samples; the origin values are those every iterate of
    /// the operator has there.
    fn regular_parts(&self, w: &[f64], v: &[f64]) -> Result<Iterate, SolverError> {
        let g0 = eval_g(self.spec.g(), 0.0, 0.0, self.b)?;
        let mut phi = vec![g0 * self.rule_w.mass() * self.inv_gamma];
        let mut psi = vec![g0 * self.rule_v.mass()];
        for (i, x) in self.grid.points().enumerate().skip(1) {
            phi.push((w[i] - self.affine(x)) / x);
            psi.push((v[i] - self.b) / x.powf(2.0 - self.sigma));
        }
        Ok(Iterate { phi, psi })
    }
}

fn eval_g(g: &Expr, x: f64, w: f64, v: f64) -> Result<f64, EvalError> {
    g.eval(x, w, v)
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Solve interval `[0, X]` with `X = min(endpoint, T₀)`.
pub fn solve_grid(spec: &ProblemSpec, config: &SolverConfig) -> Result<Grid, SolverError> {
    config.validate()?;
    let t0 = existence_window(spec)?.t0;
    let end = config.endpoint.map_or(t0, |x| x.min(t0));
    Ok(Grid::new(end, config.n)?)
}

/// Picard iteration from the affine initial iterate.
pub fn picard_solve(spec: &ProblemSpec, config: &SolverConfig) -> Result<SolutionPair, SolverError> {
    picard_solve_from(spec, config, &InitialIterate::Affine)
}

/// Picard iteration from a chosen initial iterate.
pub fn picard_solve_from(
    spec: &ProblemSpec,
    config: &SolverConfig,
    init: &InitialIterate,
) -> Result<SolutionPair, SolverError> {
    let grid = solve_grid(spec, config)?;
    let op = Operator::new(spec, grid, config.quad_points)?;

    let (mut w, mut v): (Vec<f64>, Vec<f64>);
    let mut next = match init {
        InitialIterate::Affine => {
            w = grid.points().map(|x| op.affine(x)).collect();
            v = vec![op.b; grid.len()];
            let zero = Iterate { phi: vec![0.0; grid.len()], psi: vec![0.0; grid.len()] };
            op.apply(&op.lookup(&zero))?
        }
        InitialIterate::Custom { w: fw, v: fv } => {
            w = grid.points().map(|x| fw(x)).collect();
            v = grid.points().map(|x| fv(x)).collect();
            op.apply(&Lookup::Exact(fw, fv))?
        }
    };
    let mut box_escape = w.iter().zip(&v).any(|(a, b)| !spec.in_box(*a, *b));
    let mut history = Vec::new();
    loop {
        let (nw, nv) = op.samples(&next);
        let update = sup_diff(&nw, &w) + sup_diff(&nv, &v);
        history.push(update);
        box_escape |= nw.iter().zip(&nv).any(|(a, b)| !spec.in_box(*a, *b));
        w = nw;
        v = nv;
        if update < config.tol {
            return Ok(SolutionPair {
                grid,
                w,
                v,
                iterations: history.len(),
                final_update_norm: update,
                box_escape,
                update_history: history,
                quad_points: config.quad_points,
            });
        }
        if history.len() >= config.max_iter || !update.is_finite() {
            return Err(SolverError::NotConverged { iterations: history.len(), last_update: update });
        }
        next = op.apply(&op.lookup(&next))?;
    }
}

/// Max-norm defects `(‖w - S_w(w, v)‖∞, ‖v - S_v(w, v)‖∞)` of the samples in `sol`
/// substituted into both integral equations, using one extra sweep.
pub fn residual(spec: &ProblemSpec, sol: &SolutionPair) -> Result<(f64, f64), SolverError> {
    if sol.w.len() != sol.grid.len() || sol.v.len() != sol.grid.len() {
        return Err(SolverError::Config("solution samples do not match the grid".into()));
    }
    let op = Operator::new(spec, sol.grid, sol.quad_points)?;
    let current = op.regular_parts(&sol.w, &sol.v)?;
    let image = op.apply(&op.lookup(&current))?;
    let (w, v) = op.samples(&image);
    Ok((sup_diff(&w, &sol.w), sup_diff(&v, &sol.v)))
}

/// An exact solution pair `x ↦ (ω(x), D^{σ-1}ω(x))` to compare against.
pub trait ExactSolution {
    fn exact(&self, x: f64) -> Result<(f64, f64), SolverError>;
}

impl<F> ExactSolution for F
where
    F: Fn(f64) -> (f64, f64),
{
    fn exact(&self, x: f64) -> Result<(f64, f64), SolverError> {
        Ok(self(x))
    }
}

/// Exact solution given as two expressions in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprOracle {
    pub w: Expr,
    pub v: Expr,
}

impl ExactSolution for ExprOracle {
    fn exact(&self, x: f64) -> Result<(f64, f64), SolverError> {
        let at = |e: &Expr| e.eval(x, 0.0, 0.0).map_err(|err| SolverError::Oracle(err.to_string()));
        Ok((at(&self.w)?, at(&self.v)?))
    }
}

/// Errors below this are treated as rounding noise and get no empirical order.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// One line of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub n: usize,
    pub err_w: f64,
    pub err_v: f64,
    /// `ln(e_prev/e)/ln(n/n_prev)` against the previous row; `None` on the first row or
    /// when either error is at rounding level.
    pub order_w: Option<f64>,
    pub order_v: Option<f64>,
}

/// Solves on each grid size and compares with `oracle` in the max norm.
pub fn refine_study(
    spec: &ProblemSpec,
    ns: &[usize],
    config: &SolverConfig,
    oracle: &dyn ExactSolution,
) -> Result<Vec<StudyRow>, SolverError> {
    let mut rows: Vec<StudyRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let sol = picard_solve(spec, &config.clone().with_n(n))?;
        let (mut err_w, mut err_v) = (0.0f64, 0.0f64);
        for (i, x) in sol.grid.points().enumerate() {
            let (w, v) = oracle.exact(x)?;
            err_w = err_w.max((sol.w[i] - w).abs());
            err_v = err_v.max((sol.v[i] - v).abs());
        }
        let order = |prev: Option<(usize, f64)>, e: f64| {
            let (pn, pe) = prev?;
            if pe < ROUNDING_FLOOR || e < ROUNDING_FLOOR || pn == n {
                return None;
            }
            Some((pe / e).ln() / (n as f64 / pn as f64).ln())
        };
        let last = rows.last();
        rows.push(StudyRow {
            n,
            err_w,
            err_v,
            order_w: order(last.map(|r| (r.n, r.err_w)), err_w),
            order_v: order(last.map(|r| (r.n, r.err_v)), err_v),
        });
    }
    Ok(rows)
}
