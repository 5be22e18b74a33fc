//! Independent oracles shared by unit tests.

/// Tanh-sinh quadrature of `∫₀¹ f(τ, 1-τ) dτ`; both arguments are passed so that
/// endpoint singularities are evaluated without cancellation.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F) -> f64 {
    let h = 1.0 / 64.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut sum = 0.0;
    for k in -400i32..=400 {
        let u = k as f64 * h;
        let y = half_pi * u.sinh();
        let t = 1.0 / (1.0 + (-2.0 * y).exp());
        let s = 1.0 / (1.0 + (2.0 * y).exp());
        if t < f64::MIN_POSITIVE || s < f64::MIN_POSITIVE {
            continue;
        }
        let weight = 2.0 * t * s * half_pi * u.cosh();
        sum += weight * f(t, s);
    }
    sum * h
}

/// Power-rule closed form `I^ν x^μ = Γ(μ+1)/Γ(μ+1+ν) x^{μ+ν}`; negative `ν` gives the
/// Riemann–Liouville derivative, with `1/Γ(pole) = 0`.
pub fn power_rule(mu: f64, nu: f64, x: f64) -> f64 {
    let denom_arg = mu + 1.0 + nu;
    if denom_arg <= 0.0 && denom_arg == denom_arg.floor() {
        return 0.0;
    }
    crate::specfun::tgamma(mu + 1.0) / crate::specfun::tgamma(denom_arg) * x.powf(mu + nu)
}
