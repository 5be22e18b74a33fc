//! Hypothesis checks for the Nagumo, Krasnoselskii–Krein and Osgood uniqueness results,
//! and the mean-value diagnostic.
//!
//! Conditions that quantify over the whole box are checked on seeded random point
//! pairs. A failed sample is a counterexample; a passed run is evidence only. Reports
//! carry the tightest margin of each sampled inequality together with the point pair
//! that realised it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::problem::{existence_window, ProblemError, ProblemSpec};
use crate::solver::SolutionPair;
use crate::specfun::{adaptive_integrate, tgamma, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    #[error("q = {q} violates 1 + (1 - sigma) q > 0, i.e. q < {q_max} (p must exceed {p_min})")]
    QRange { q: f64, q_max: f64, p_min: f64 },
    #[error("modulus must vanish at 0 (got {0})")]
    ModulusAtZero(f64),
    #[error("modulus is negative at u = {u} (value {value})")]
    ModulusNegative { u: f64, value: f64 },
    #[error("modulus decreases between u = {u1} and u = {u2}")]
    ModulusNotMonotone { u1: f64, u2: f64 },
    #[error("evaluating: {0}")]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Quadrature(#[from] SpecFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Nagumo,
    KrasnoselskiiKrein,
    Osgood,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Nagumo => "nagumo",
            CertificateKind::KrasnoselskiiKrein => "krasnoselskii_krein",
            CertificateKind::Osgood => "osgood",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

fn named(name: &str, value: f64) -> NamedValue {
    NamedValue { name: name.to_string(), value }
}

/// A sampled pair `(x, w₁, v₁)`, `(x, w₂, v₂)` and the margin it produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub condition: String,
    pub x: f64,
    pub w1: f64,
    pub v1: f64,
    pub w2: f64,
    pub v2: f64,
    pub margin: f64,
}

/// One value of the divergence probe `∫_ε^γ du / modulus(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeValue {
    pub eps: f64,
    pub integral: f64,
}

/// Outcome of one certificate check. `holds` implies every margin is non-negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    pub holds: bool,
    pub thresholds: Vec<NamedValue>,
    pub margins: Vec<NamedValue>,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probe: Vec<ProbeValue>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    fn new(kind: CertificateKind) -> Self {
        Self { kind, holds: false, thresholds: vec![], margins: vec![], witnesses: vec![], probe: vec![], notes: vec![] }
    }

    pub fn threshold(&self, name: &str) -> Option<f64> {
        self.thresholds.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn margin(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite-safe plain data")
    }
}

/// Two box points sharing `x`.
#[derive(Debug, Clone, Copy)]
struct PointPair {
    x: f64,
    a: (f64, f64),
    b: (f64, f64),
}

/// Seeded pairs on the box: one third differ only in `w`, one third only in `v`, the rest
/// in both. Axis-aligned pairs expose the extreme ratios of sum-norm conditions that
/// generic pairs approach only slowly.
fn sample_pairs(spec: &ProblemSpec, samples: usize, seed: u64) -> Vec<PointPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [(x0, x1), (w0, w1), (v0, v1)] = spec.box_ranges();
    (0..samples)
        .map(|k| {
            let x = rng.random_range(x0..=x1);
            let mut w = || rng.random_range(w0..=w1);
            let (wa, wb) = (w(), w());
            let mut v = || rng.random_range(v0..=v1);
            let (va, vb) = (v(), v());
            match k % 3 {
                0 => PointPair { x, a: (wa, va), b: (wb, va) },
                1 => PointPair { x, a: (wa, va), b: (wa, vb) },
                _ => PointPair { x, a: (wa, va), b: (wb, vb) },
            }
        })
        .collect()
}

/// `|g(x, a) - g(x, b)|` and a rounding allowance for the two evaluations.
fn g_gap(g: &Expr, p: &PointPair) -> Result<(f64, f64), EvalError> {
    let ga = g.eval(p.x, p.a.0, p.a.1)?;
    let gb = g.eval(p.x, p.b.0, p.b.1)?;
    Ok(((ga - gb).abs(), 16.0 * f64::EPSILON * (ga.abs() + gb.abs())))
}

/// Tightest margin `rhs(pair) - |Δg| + rounding allowance` over the samples.
fn tightest<F>(spec: &ProblemSpec, pairs: &[PointPair], condition: &str, rhs: F) -> Result<Witness, CertificateError>
where
    F: Fn(&PointPair) -> Result<f64, CertificateError>,
{
    let mut best: Option<Witness> = None;
    for p in pairs {
        let (gap, slack) = g_gap(spec.g(), p)?;
        let margin = rhs(p)? - gap + slack;
        if best.as_ref().is_none_or(|b| margin < b.margin) {
            best = Some(Witness {
                condition: condition.to_string(),
                x: p.x,
                w1: p.a.0,
                v1: p.a.1,
                w2: p.b.0,
                v2: p.b.1,
                margin,
            });
        }
    }
    Ok(best.unwrap_or(Witness {
        condition: condition.to_string(),
        x: 0.0,
        w1: 0.0,
        v1: 0.0,
        w2: 0.0,
        v2: 0.0,
        margin: 0.0,
    }))
}

fn check_samples(samples: usize) -> Result<(), CertificateError> {
    if samples == 0 {
        return Err(CertificateError::InvalidParameter { name: "samples", value: 0.0, reason: "must be positive" });
    }
    Ok(())
}

/// Largest observed `|g(x, a) - g(x, b)| / (|a₁ - b₁| + |a₂ - b₂|)` over `samples`
/// seeded pairs. This is a lower estimate of the Lipschitz constant on the box.
pub fn estimate_lipschitz(spec: &ProblemSpec, samples: usize, seed: u64) -> Result<f64, CertificateError> {
    check_samples(samples)?;
    let mut best = 0.0f64;
    for p in sample_pairs(spec, samples, seed) {
        let dist = (p.a.0 - p.b.0).abs() + (p.a.1 - p.b.1).abs();
        if dist == 0.0 {
            continue;
        }
        best = best.max(g_gap(spec.g(), &p)?.0 / dist);
    }
    Ok(best)
}

/// `(2 - σ) / (T (1 + Γ(3 - σ)))`.
pub fn nagumo_threshold(sigma: f64, horizon: f64) -> f64 {
    (2.0 - sigma) / (horizon * (1.0 + tgamma(3.0 - sigma)))
}

/// Nagumo condition on the horizon of `spec`: holds iff `L ≤ (2-σ)/(T(1+Γ(3-σ)))`.
/// Pass `spec.with_horizon(T₀)` to certify the existence window instead.
pub fn nagumo_check(spec: &ProblemSpec, l: f64) -> Result<CertificateReport, CertificateError> {
    if !(l >= 0.0 && l.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "L", value: l, reason: "must be finite and non-negative" });
    }
    let threshold = nagumo_threshold(spec.sigma(), spec.horizon());
    let mut report = CertificateReport::new(CertificateKind::Nagumo);
    report.thresholds.push(named("nagumo_bound", threshold));
    report.thresholds.push(named("L", l));
    report.thresholds.push(named("T", spec.horizon()));
    report.margins.push(named("nagumo_margin", threshold - l));
    report.holds = l <= threshold;
    report.notes.push("L is taken as given; estimate_lipschitz only bounds it from below".into());
    Ok(report)
}

/// Lower end of the open interval of `α` satisfying `(1-σ)(1-α) - L(1-α) + 1 > 0`; the
/// upper end is 1.
pub fn kk_alpha_floor(sigma: f64, l: f64) -> f64 {
    (1.0 - 1.0 / (sigma - 1.0 + l)).max(0.0)
}

/// Krasnoselskii–Krein conditions: the exponent inequality, the `L/2` sum-norm bound
/// and the `C (|Δw| + x^{α(σ-1)} |Δv|)` bound, the last two on seeded samples.
pub fn kk_check(
    spec: &ProblemSpec,
    l: f64,
    c: f64,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<CertificateReport, CertificateError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CertificateError::InvalidParameter { name: "alpha", value: alpha, reason: "must lie in (0, 1)" });
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "L", value: l, reason: "must be positive" });
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "C", value: c, reason: "must be positive" });
    }
    check_samples(samples)?;
    let sigma = spec.sigma();
    let exponent = (1.0 - sigma) * (1.0 - alpha) - l * (1.0 - alpha) + 1.0;
    let pairs = sample_pairs(spec, samples, seed);
    let half_l = tightest(spec, &pairs, "half_lipschitz", |p| {
        Ok(0.5 * l * ((p.a.0 - p.b.0).abs() + (p.a.1 - p.b.1).abs()))
    })?;
    let weighted = tightest(spec, &pairs, "weighted_lipschitz", |p| {
        Ok(c * ((p.a.0 - p.b.0).abs() + p.x.powf(alpha * (sigma - 1.0)) * (p.a.1 - p.b.1).abs()))
    })?;

    let mut report = CertificateReport::new(CertificateKind::KrasnoselskiiKrein);
    report.thresholds.push(named("feasible_alpha_low", kk_alpha_floor(sigma, l)));
    report.thresholds.push(named("feasible_alpha_high", 1.0));
    report.thresholds.push(named("L", l));
    report.thresholds.push(named("C", c));
    report.thresholds.push(named("alpha", alpha));
    report.margins.push(named("exponent_condition", exponent));
    report.margins.push(named("half_lipschitz", half_l.margin));
    report.margins.push(named("weighted_lipschitz", weighted.margin));
    report.holds = exponent > 0.0 && half_l.margin >= 0.0 && weighted.margin >= 0.0;
    report.witnesses = vec![half_l, weighted];
    report.notes.push(format!("sampled inequalities checked on {samples} seeded point pairs; uniqueness is then on [0, min(T0, 1)]"));
    Ok(report)
}

/// Parameters of the Osgood check.
#[derive(Debug, Clone, PartialEq)]
pub struct OsgoodParams {
    /// Modulus of continuity in the variable `u`.
    pub modulus: Expr,
    pub p: f64,
    pub c: f64,
    pub samples: usize,
    pub seed: u64,
    /// Strictly decreasing positive lower limits, at least four, all below `gamma`.
    pub eps: Vec<f64>,
    /// Upper limit of the divergence probe.
    pub gamma: f64,
}

impl OsgoodParams {
    /// `samples = 1000`, `seed = 0`, `eps = 10^{-1}, …, 10^{-8}`, `gamma = 1`.
    pub fn new(modulus: Expr, p: f64, c: f64) -> Self {
        Self {
            modulus,
            p,
            c,
            samples: 1000,
            seed: 0,
            eps: (1..=8).map(|k| 10f64.powi(-k)).collect(),
            gamma: 1.0,
        }
    }
}

/// Points on which the modulus is checked for `modulus(0) = 0`, positivity and
/// monotonicity.
const MODULUS_GRID: usize = 2000;

fn check_modulus(modulus: &Expr, top: f64) -> Result<(), CertificateError> {
    let at_zero = modulus.eval_u(0.0)?;
    if at_zero != 0.0 {
        return Err(CertificateError::ModulusAtZero(at_zero));
    }
    let mut prev = (0.0f64, 0.0f64);
    for k in 1..=MODULUS_GRID {
        let u = top * k as f64 / MODULUS_GRID as f64;
        let value = modulus.eval_u(u)?;
        if value < 0.0 {
            return Err(CertificateError::ModulusNegative { u, value });
        }
        if value < prev.1 - 1e-14 * prev.1.abs() {
            return Err(CertificateError::ModulusNotMonotone { u1: prev.0, u2: u });
        }
        prev = (u, value);
    }
    Ok(())
}

/// `∫_ε^γ du / modulus(u)` through `u = e^s`, which flattens the `1/u`-type growth at 0.
fn probe_integral(modulus: &Expr, eps: f64, gamma: f64) -> Result<f64, CertificateError> {
    let mut failure = None;
    let integrand = |s: f64| {
        let u = s.exp();
        match modulus.eval_u(u) {
            Ok(m) => u / m,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let result = adaptive_integrate(integrand, eps.ln(), gamma.ln(), 1e-12, 1e-10, 2000);
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(result?.value)
}

/// Osgood conditions: the conjugate-exponent range, the lower bound on `C^q`, the
/// sampled modulus bound, and a divergence probe along `eps`.
///
/// The probe is "consistent with divergence" when the integrals increase and their last
/// three increments do not shrink. That is a heuristic, not a proof.
pub fn osgood_check(spec: &ProblemSpec, params: &OsgoodParams) -> Result<CertificateReport, CertificateError> {
    let sigma = spec.sigma();
    let p = params.p;
    if !(p > 1.0 && p.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "p", value: p, reason: "must exceed 1" });
    }
    let q = p / (p - 1.0);
    let q_max = 1.0 / (sigma - 1.0);
    if q >= q_max {
        return Err(CertificateError::QRange { q, q_max, p_min: q_max / (q_max - 1.0) });
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "C", value: params.c, reason: "must be positive" });
    }
    check_samples(params.samples)?;
    if !(params.gamma > 0.0 && params.gamma.is_finite()) {
        return Err(CertificateError::InvalidParameter { name: "gamma", value: params.gamma, reason: "must be positive" });
    }
    if params.eps.len() < 4 {
        return Err(CertificateError::InvalidParameter {
            name: "eps",
            value: params.eps.len() as f64,
            reason: "needs at least four values",
        });
    }
    for pair in params.eps.windows(2) {
        if pair[1].partial_cmp(&pair[0]) != Some(std::cmp::Ordering::Less) {
            return Err(CertificateError::InvalidParameter { name: "eps", value: pair[1], reason: "must strictly decrease" });
        }
    }
    if let Some(&bad) = params.eps.iter().find(|&&e| !(e > 0.0 && e < params.gamma)) {
        return Err(CertificateError::InvalidParameter { name: "eps", value: bad, reason: "must lie in (0, gamma)" });
    }

    let (r1, r2) = (spec.r1(), spec.r2());
    let reach = (2.0 * r1).powf(p) + (2.0 * r2).powf(p);
    check_modulus(&params.modulus, reach.max(params.gamma))?;

    let window = existence_window(spec)?;
    let t0 = window.t0;
    let first = spec.b().abs() * tgamma(sigma).powf(q)
        / (t0 * tgamma(1.0 + (1.0 - sigma) * q) * tgamma(1.0 + (sigma - 1.0) * q));
    let second = (1.0 + (1.0 - sigma) * q) * t0.powf(-1.0 - q * (1.0 - sigma));
    let need = 2.0 * first.max(second);
    let constant_margin = params.c.powf(q) - need;

    let pairs = sample_pairs(spec, params.samples, params.seed);
    let modulus_bound = tightest(spec, &pairs, "modulus_bound", |pp| {
        let u = (pp.a.0 - pp.b.0).abs().powf(p) + (pp.a.1 - pp.b.1).abs().powf(p);
        Ok(params.c * params.modulus.eval_u(u)?.powf(1.0 / p))
    })?;

    let mut probe = Vec::with_capacity(params.eps.len());
    for &eps in &params.eps {
        probe.push(ProbeValue { eps, integral: probe_integral(&params.modulus, eps, params.gamma)? });
    }
    let increments: Vec<f64> = probe.windows(2).map(|w| w[1].integral - w[0].integral).collect();
    let last = &increments[increments.len() - 3..];
    let diverging = increments.iter().all(|&d| d > 0.0) && last[1] >= last[0] && last[2] >= last[1];

    let mut report = CertificateReport::new(CertificateKind::Osgood);
    report.thresholds.push(named("p", p));
    report.thresholds.push(named("q", q));
    report.thresholds.push(named("osgood_q_max", q_max));
    report.thresholds.push(named("T0", t0));
    report.thresholds.push(named("C", params.c));
    report.thresholds.push(named("C_min", need.powf(1.0 / q)));
    report.margins.push(named("q_range", 1.0 + (1.0 - sigma) * q));
    report.margins.push(named("constant_condition", constant_margin));
    report.margins.push(named("modulus_bound", modulus_bound.margin));
    report.margins.push(named("divergence_probe", if diverging { last[2] } else { -1.0 }));
    report.holds = constant_margin >= 0.0 && modulus_bound.margin >= 0.0 && diverging;
    report.witnesses.push(modulus_bound);
    report.probe = probe;
    report.notes.push(if diverging {
        "divergence probe consistent with divergence (numerical evidence, not a proof)".into()
    } else {
        "divergence probe not consistent with divergence: increments shrink".into()
    });
    report.notes.push("the constant condition uses |b|".into());
    Ok(report)
}

/// Searches `(0, x)` for a root of
/// `F(μ) = ω(x) + v(0) x^{σ-1}/Γ(σ) - Γ(2-σ) μ^{σ-1} v(μ)`
/// by a sign-change scan over the grid and bisection with `v` interpolated linearly.
/// Returns `x/2` when `F` vanishes identically and `None` when `x` is not a positive grid
/// point or no sign change exists.
pub fn mean_value_witness(sigma: f64, sol: &SolutionPair, x: f64) -> Option<f64> {
    let i = sol.grid.index_of(x)?;
    if i == 0 || !(sigma > 1.0 && sigma < 2.0) {
        return None;
    }
    let x = sol.grid.point(i);
    let head = sol.w[i] + sol.v[0] * x.powf(sigma - 1.0) / tgamma(sigma);
    let g2 = tgamma(2.0 - sigma);
    let h = sol.grid.step();
    let f = |mu: f64| {
        let s = (mu / h).clamp(0.0, i as f64);
        let j = (s.floor() as usize).min(i - 1);
        let t = s - j as f64;
        let v = (1.0 - t) * sol.v[j] + t * sol.v[j + 1];
        head - g2 * mu.powf(sigma - 1.0) * v
    };
    let values: Vec<f64> = (0..i).map(|j| f(sol.grid.point(j))).collect();
    // F at the right end of the last cell, the limit of F from inside (0, x)
    let right = f(x);
    if right == 0.0 && values.iter().all(|&v| v == 0.0) {
        return Some(0.5 * x);
    }
    if let Some(j) = (1..i).find(|&j| values[j] == 0.0) {
        return Some(sol.grid.point(j));
    }
    for j in 0..i {
        let (fa, fb) = (values[j], if j + 1 < i { values[j + 1] } else { right });
        if fa * fb < 0.0 {
            let (mut a, mut b, mut fa) = (sol.grid.point(j), sol.grid.point(j + 1), fa);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm == 0.0 || b - a <= 4.0 * f64::EPSILON * x {
                    return Some(m);
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            return Some(0.5 * (a + b));
        }
    }
    None
}
