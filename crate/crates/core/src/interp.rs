//! Piecewise cubic Hermite interpolation on uniform grids.

/// Cubic Hermite interpolant of samples at `x0 + i·h`.
///
/// [`HermiteCubic::monotone`] uses Fritsch–Carlson slopes: interior slopes are the
/// harmonic mean of neighbouring secants (zero at local extrema) and end slopes use the
/// three-point formula limited to preserve shape. The interpolant never overshoots the
/// data but depends nonlinearly on it.
///
/// [`HermiteCubic::centred`] uses centred differences (second-order one-sided at the
/// ends), which makes the interpolant a linear function of the data.
///
/// Both reproduce constant and linear data exactly.
#[derive(Debug, Clone)]
pub struct HermiteCubic {
    x0: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl HermiteCubic {
    /// Shape-preserving interpolant. Panics if `values` is empty or `h <= 0`.
    pub fn monotone(x0: f64, h: f64, values: Vec<f64>) -> Self {
        Self::build(x0, h, values, monotone_slopes)
    }

    /// Interpolant that is linear in the data. Panics if `values` is empty or `h <= 0`.
    pub fn centred(x0: f64, h: f64, values: Vec<f64>) -> Self {
        Self::build(x0, h, values, centred_slopes)
    }

    fn build(x0: f64, h: f64, values: Vec<f64>, rule: fn(f64, &[f64]) -> Vec<f64>) -> Self {
        assert!(!values.is_empty(), "interpolant needs at least one sample");
        assert!(h > 0.0, "grid spacing must be positive");
        let slopes = rule(h, &values);
        Self { x0, h, values, slopes }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Evaluates the interpolant; arguments outside the grid are clamped.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        if n == 1 {
            return self.values[0];
        }
        let s = ((x - self.x0) / self.h).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
    }
}

fn centred_slopes(h: f64, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    match n {
        1 => return vec![0.0],
        2 => {
            let d = (y[1] - y[0]) / h;
            return vec![d, d];
        }
        _ => {}
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        d[k] = (y[k + 1] - y[k - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    d
}

fn monotone_slopes(h: f64, y: &[f64]) -> Vec<f64> {
    let n = y.len();
    if n == 1 {
        return vec![0.0];
    }
    let delta: Vec<f64> = y.windows(2).map(|p| (p[1] - p[0]) / h).collect();
    if n == 2 {
        return vec![delta[0], delta[0]];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        d[k] = if a == b {
            a
        } else if a * b <= 0.0 {
            0.0
        } else {
            2.0 / (1.0 / a + 1.0 / b)
        };
    }
    d[0] = edge_slope(delta[0], delta[1]);
    d[n - 1] = edge_slope(delta[n - 2], delta[n - 3]);
    d
}

// Three-point end slope on a uniform grid, limited as in Fritsch–Carlson.
fn edge_slope(near: f64, far: f64) -> f64 {
    let d = 1.5 * near - 0.5 * far;
    if d.signum() != near.signum() || near == 0.0 {
        0.0
    } else if near.signum() != far.signum() && d.abs() > 3.0 * near.abs() {
        3.0 * near
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_constants_and_lines() {
        for build in [HermiteCubic::monotone, HermiteCubic::centred] {
            let c = build(0.0, 0.25, vec![3.0; 5]);
            for i in 0..=40 {
                assert_eq!(c.eval(i as f64 * 0.025), 3.0);
            }
            let lin: Vec<f64> = (0..9).map(|i| 1.0 + 2.0 * 0.5 * i as f64).collect();
            let l = build(0.0, 0.5, lin);
            for i in 0..=80 {
                let x = i as f64 * 0.05;
                assert!((l.eval(x) - (1.0 + 2.0 * x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn interpolates_nodes_and_converges() {
        for build in [HermiteCubic::monotone, HermiteCubic::centred] {
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let y: Vec<f64> = (0..=n).map(|i| (i as f64 * h).exp()).collect();
            let p = build(0.0, h, y.clone());
            for (i, yi) in y.iter().enumerate() {
                assert_eq!(p.eval(i as f64 * h), *yi);
            }
            (0..1000).map(|k| {
                let x = k as f64 / 999.0;
                (p.eval(x) - x.exp()).abs()
            }).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 / e2 > 4.0, "{e1} {e2}");
        }
    }

    #[test]
    fn centred_interpolant_is_linear_in_data() {
        let u: Vec<f64> = (0..=20).map(|i| (i as f64 * 0.3).sin()).collect();
        let w: Vec<f64> = (0..=20).map(|i| (i as f64 * 0.1).powi(3) - 1.0).collect();
        let combo: Vec<f64> = u.iter().zip(&w).map(|(a, b)| 2.0 * a - 0.7 * b).collect();
        let (pu, pw, pc) = (
            HermiteCubic::centred(0.0, 0.1, u),
            HermiteCubic::centred(0.0, 0.1, w),
            HermiteCubic::centred(0.0, 0.1, combo),
        );
        for k in 0..=200 {
            let x = k as f64 * 0.01;
            assert!((pc.eval(x) - (2.0 * pu.eval(x) - 0.7 * pw.eval(x))).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn monotone_data_gives_monotone_interpolant(steps in prop::collection::vec(0.0f64..5.0, 2..20)) {
            let mut acc = 0.0;
            let y: Vec<f64> = std::iter::once(0.0).chain(steps.iter().map(|s| { acc += s; acc })).collect();
            let n = y.len();
            let p = HermiteCubic::monotone(0.0, 1.0, y);
            let mut prev = f64::NEG_INFINITY;
            for k in 0..=(20 * (n - 1)) {
                let v = p.eval(k as f64 / 20.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
