use std::f64::consts::PI;

use super::SpecFunError;

// Lanczos approximation, g = 7, nine coefficients (Godfrey).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;
const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for real `x`, with a pole error at the non-positive integers.
pub fn gamma(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if is_pole(x) {
        return Err(SpecFunError::Pole(x));
    }
    Ok(tgamma(x))
}

/// Unchecked Γ(x); NaN at poles, +inf past the overflow threshold.
pub(crate) fn tgamma(x: f64) -> f64 {
    if is_pole(x) || x.is_nan() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * tgamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x == x.floor() && x <= 23.0 {
        // exact for small integers
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^(z+1/2) e^{-t} does not overflow before the product does
    let half = t.powf(0.5 * (z + 0.5));
    SQRT_TWO_PI * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite(x));
    }
    if x <= 0.0 {
        return Err(SpecFunError::Pole(x));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 20.0 {
        return tgamma(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}
