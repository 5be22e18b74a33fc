use std::f64::consts::PI;

use super::gamma::{ln_gamma_pos, tgamma};
use super::SpecFunError;

/// Gauss rule on `[0, 1]` for the weight `τ^a (1-τ)^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exponent_left: f64,
    exponent_right: f64,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exponent_left(&self) -> f64 {
        self.exponent_left
    }

    pub fn exponent_right(&self) -> f64 {
        self.exponent_right
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_j f(τ_j)`, approximating `∫₀¹ τ^a (1-τ)^b f(τ) dτ`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Total mass of the weight function, `B(a+1, b+1)`.
    pub fn mass(&self) -> f64 {
        beta_mass(self.exponent_left, self.exponent_right)
    }
}

/// `∫₀¹ τ^a (1-τ)^b dτ = Γ(a+1)Γ(b+1)/Γ(a+b+2)`.
pub fn beta_mass(a: f64, b: f64) -> f64 {
    if a + b + 2.0 < 150.0 {
        tgamma(a + 1.0) * tgamma(b + 1.0) / tgamma(a + b + 2.0)
    } else {
        (ln_gamma_pos(a + 1.0) + ln_gamma_pos(b + 1.0) - ln_gamma_pos(a + b + 2.0)).exp()
    }
}

/// Jacobi polynomial `P_n^{(α,β)}(x)` and `P_{n-1}^{(α,β)}(x)` by the three-term recurrence.
fn jacobi_pair(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    if n == 0 {
        return (p_prev, 0.0);
    }
    let mut p = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// `d/dx P_n` from `P_n` and `P_{n-1}`.
fn jacobi_derivative(n: usize, alpha: f64, beta: f64, x: f64, p: f64, p_prev: f64) -> f64 {
    let nf = n as f64;
    let c = 2.0 * nf + alpha + beta;
    let one_minus_x2 = (1.0 - x) * (1.0 + x);
    (nf * (alpha - beta - c * x) * p + 2.0 * (nf + alpha) * (nf + beta) * p_prev) / (c * one_minus_x2)
}

/// `Γ(n+α+1)Γ(n+β+1) / (Γ(n+α+β+1) Γ(n+1))`, built up from `n = 1`.
fn christoffel_factor(n: usize, alpha: f64, beta: f64) -> f64 {
    let ab = alpha + beta;
    let mut r = tgamma(alpha + 2.0) * tgamma(beta + 2.0) / tgamma(ab + 2.0);
    for k in 2..=n {
        let k = k as f64;
        r *= (k + alpha) * (k + beta) / ((k + ab) * k);
    }
    r
}

/// `n`-point Gauss–Jacobi rule for `∫₀¹ τ^a (1-τ)^b f(τ) dτ`, exact for polynomials of
/// degree `≤ 2n-1`.
///
/// Nodes are roots of `P_n^{(b,a)}` on `[-1, 1]` mapped through `τ = (1+x)/2`. Each root
/// is found by Newton's method from an asymptotic cosine guess, with Maehly deflation
/// against the roots already found so that no root is located twice.
pub fn gauss_jacobi_rule(
    exponent_left: f64,
    exponent_right: f64,
    n: usize,
) -> Result<QuadratureRule, SpecFunError> {
    if exponent_left <= -1.0 || !exponent_left.is_finite() {
        return Err(SpecFunError::InvalidExponent { name: "exponent_left", value: exponent_left });
    }
    if exponent_right <= -1.0 || !exponent_right.is_finite() {
        return Err(SpecFunError::InvalidExponent { name: "exponent_right", value: exponent_right });
    }
    if n == 0 {
        return Err(SpecFunError::EmptyRule);
    }
    // (1-x)^α (1+x)^β on [-1, 1] maps to τ^a (1-τ)^b with α = b, β = a.
    let alpha = exponent_right;
    let beta = exponent_left;
    let nf = n as f64;

    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = (k as f64 - 0.25 + 0.5 * alpha) * PI / (nf + 0.5 * (alpha + beta + 1.0));
        let mut x = theta.cos().clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        let mut converged = false;
        for _ in 0..200 {
            let (p, p_prev) = jacobi_pair(n, alpha, beta, x);
            let dp = jacobi_derivative(n, alpha, beta, x, p, p_prev);
            let deflation: f64 = roots.iter().map(|r| 1.0 / (x - r)).sum();
            let step = p / (dp - p * deflation);
            let next = (x - step).clamp(-1.0 + 1e-300, 1.0 - 1e-300);
            let delta = (next - x).abs();
            x = next;
            if delta <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                converged = true;
                break;
            }
        }
        if !converged || !x.is_finite() {
            return Err(SpecFunError::NodeNotConverged { index: k, n });
        }
        roots.push(x);
    }
    roots.sort_by(|a, b| a.total_cmp(b));

    let factor = christoffel_factor(n, alpha, beta);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for &x in &roots {
        let (p, p_prev) = jacobi_pair(n, alpha, beta, x);
        let dp = jacobi_derivative(n, alpha, beta, x, p, p_prev);
        let one_minus_x2 = (1.0 - x) * (1.0 + x);
        nodes.push(0.5 * (1.0 + x));
        weights.push(factor / (one_minus_x2 * dp * dp));
    }
    for pair in nodes.windows(2) {
        if pair[1] <= pair[0] {
            return Err(SpecFunError::NodeNotConverged { index: 0, n });
        }
    }
    Ok(QuadratureRule { nodes, weights, exponent_left, exponent_right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::tanh_sinh;

    fn moment_oracle(a: f64, b: f64, k: i32) -> f64 {
        tanh_sinh(|t, s| t.powf(a) * s.powf(b) * t.powi(k))
    }

    #[test]
    fn single_point_legendre_is_midpoint() {
        let rule = gauss_jacobi_rule(0.0, 0.0, 1).unwrap();
        assert!((rule.nodes()[0] - 0.5).abs() < 1e-15);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_beta_mass_for_kernel() {
        let sigma = 1.5;
        for n in [1, 2, 5, 16, 32, 64, 128] {
            let rule = gauss_jacobi_rule(1.0 - sigma, sigma - 1.0, n).unwrap();
            let total: f64 = rule.weights().iter().sum();
            let want = std::f64::consts::FRAC_PI_2;
            assert!(((total - want) / want).abs() <= 1e-12, "n = {n}, sum = {total}");
        }
    }

    #[test]
    fn second_moment_for_two_point_rule() {
        let rule = gauss_jacobi_rule(-0.5, 0.5, 2).unwrap();
        let got = rule.integrate(|t| t * t);
        let oracle = moment_oracle(-0.5, 0.5, 2);
        assert!((got - oracle).abs() <= 1e-12, "{got} vs {oracle}");
        assert!((oracle - 0.196_349_540_849_362_077_4).abs() < 1e-13);
    }

    #[test]
    fn moments_exact_to_degree_2n_minus_1() {
        let exps = [(0.0, 0.0), (-0.5, 0.5), (-0.3, 0.3), (-0.9, 0.0), (0.7, -0.6), (-0.5, -0.5), (1.5, 0.0)];
        for (a, b) in exps {
            for n in [1, 2, 3, 4, 8, 12] {
                let rule = gauss_jacobi_rule(a, b, n).unwrap();
                let total: f64 = rule.weights().iter().sum();
                assert!(((total - beta_mass(a, b)) / beta_mass(a, b)).abs() <= 1e-12);
                for k in 0..(2 * n as i32) {
                    let got = rule.integrate(|t| t.powi(k));
                    let oracle = moment_oracle(a, b, k);
                    assert!(
                        (got - oracle).abs() <= 1e-10,
                        "a={a} b={b} n={n} k={k}: {got} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_rules_stay_ordered_and_positive() {
        for (a, b) in [(-0.5, 0.5), (-0.1, 0.9), (0.3, -0.8)] {
            let rule = gauss_jacobi_rule(a, b, 200).unwrap();
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
            assert!(rule.nodes()[0] > 0.0 && *rule.nodes().last().unwrap() < 1.0);
            assert!(rule.weights().iter().all(|&w| w > 0.0));
            let total: f64 = rule.weights().iter().sum();
            assert!(((total - rule.mass()) / rule.mass()).abs() <= 1e-12);
        }
    }

    #[test]
    fn invalid_exponents_are_rejected() {
        assert!(matches!(gauss_jacobi_rule(-1.0, 0.0, 3), Err(SpecFunError::InvalidExponent { .. })));
        assert!(matches!(gauss_jacobi_rule(0.0, -1.5, 3), Err(SpecFunError::InvalidExponent { .. })));
        assert!(matches!(gauss_jacobi_rule(0.0, f64::NAN, 3), Err(SpecFunError::InvalidExponent { .. })));
        assert_eq!(gauss_jacobi_rule(0.0, 0.0, 0), Err(SpecFunError::EmptyRule));
    }
}
