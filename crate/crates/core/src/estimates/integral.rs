use serde::{Deserialize, Serialize};
use statrs::function::beta::beta;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub a: f64,
    pub b: f64,
    pub t: f64,
    /// `sup_{t ≤ T} ∫_0^t (t-s)^{-a} s^{-b} ds`, attained at `t = T`.
    pub sup_value: f64,
    /// `T^{1-a-b} B(1-a, 1-b)`.
    pub closed_form: f64,
    pub abs_error: f64,
    /// `log2(value(2T) / value(T))`, to compare with `1 - a - b`.
    pub scaling_exponent: f64,
}

/// `∫_0^1 (1-σ)^{-a} σ^{-b} dσ` by the tanh-sinh rule with `points` nodes.
///
/// With `σ = 1/(1 + e^{-u})`, `u = π sinh x`, both endpoint factors are
/// formed from `ln σ = -ln(1 + e^{-u})` and `ln(1-σ) = -ln(1 + e^{u})`, so
/// nodes clustered at the endpoints lose no precision.
pub fn beta_integral_tanh_sinh(a: f64, b: f64, points: usize) -> f64 {
    const HALF_WIDTH: f64 = 6.5;
    let h = 2.0 * HALF_WIDTH / points.max(2) as f64;
    let softplus = |v: f64| if v > 0.0 { v + (-v).exp().ln_1p() } else { v.exp().ln_1p() };
    let mut sum = 0.0;
    let half = (points / 2) as i64 + 1;
    for j in -half..=half {
        let x = j as f64 * h;
        let u = std::f64::consts::PI * x.sinh();
        let ln_s = -softplus(-u);
        let ln_1ms = -softplus(u);
        let ln_w = (std::f64::consts::PI * x.cosh()).ln() + ln_s + ln_1ms;
        sum += (ln_w - a * ln_1ms - b * ln_s).exp();
    }
    h * sum
}

/// Checks `∫_0^t (t-s)^{-a} s^{-b} ds = t^{1-a-b} B(1-a, 1-b)` at `t = T`.
pub fn verify_integral_estimate(a: f64, b: f64, t: f64, quad_points: usize) -> Result<IntegralReport> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::Precondition(format!("exponents must be non-negative, got a={a}, b={b}")));
    }
    if !(a + b < 1.0) {
        return Err(Error::Precondition(format!("need a + b < 1, got {}", a + b)));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("T must be positive, got {t}")));
    }
    if quad_points < 16 {
        return Err(Error::Precondition("need at least 16 quadrature points".into()));
    }
    let unit = beta_integral_tanh_sinh(a, b, quad_points);
    // ∫_0^t (t-s)^{-a} s^{-b} ds = t^{1-a-b} ∫_0^1 (1-σ)^{-a} σ^{-b} dσ
    let value = |t: f64| t.powf(1.0 - a - b) * unit;
    let sup_value = value(t);
    let closed_form = t.powf(1.0 - a - b) * beta(1.0 - a, 1.0 - b);
    Ok(IntegralReport {
        a,
        b,
        t,
        sup_value,
        closed_form,
        abs_error: (sup_value - closed_form).abs(),
        scaling_exponent: (value(2.0 * t) / sup_value).log2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_limit() {
        let r = verify_integral_estimate(0.0, 0.0, 0.7, 200).unwrap();
        assert!((r.sup_value - 0.7).abs() < 1e-12);
    }

    #[test]
    fn half_quarter_against_fine_oracle() {
        // midpoint rule after σ = w^4 (removes σ^{-1/4}) and 1-σ = v^2 splits
        let r = verify_integral_estimate(0.5, 0.25, 1.0, 400).unwrap();
        let oracle = {
            // ∫_0^1 (1-σ)^{-1/2} σ^{-1/4} dσ, split at 1/2
            let n = 200_000;
            let mut left = 0.0;
            // σ = w^4 on [0, 2^{-1/4}]: integrand 4 w^3 (1-w^4)^{-1/2} w^{-1}
            let wmax = 0.5f64.powf(0.25);
            for i in 0..n {
                let w = (i as f64 + 0.5) * wmax / n as f64;
                left += 4.0 * w * w / (1.0 - w.powi(4)).sqrt();
            }
            left *= wmax / n as f64;
            // 1-σ = v^2 on [0, 2^{-1/2}]: integrand 2 (1-v^2)^{-1/4}
            let vmax = 0.5f64.sqrt();
            let mut right = 0.0;
            for i in 0..n {
                let v = (i as f64 + 0.5) * vmax / n as f64;
                right += 2.0 / (1.0 - v * v).powf(0.25);
            }
            right *= vmax / n as f64;
            left + right
        };
        assert!((r.sup_value - oracle).abs() < 1e-8, "{} vs {oracle}", r.sup_value);
        assert!(r.abs_error < 1e-10);
    }

    #[test]
    fn homogeneity() {
        let r = verify_integral_estimate(0.3, 0.45, 0.2, 300).unwrap();
        assert!((r.scaling_exponent - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonintegrable() {
        assert!(verify_integral_estimate(0.5, 0.5, 1.0, 100).is_err());
        assert!(verify_integral_estimate(-0.1, 0.5, 1.0, 100).is_err());
    }
}
