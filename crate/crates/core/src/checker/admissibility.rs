//! Divergence of the global-regularity integrals and Mikhlin-type derivative
//! bounds for damping functions `g`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::GFunction;

/// Which log-damping integral to test. With `g1 = g2 = g3 = g`:
/// `tao` integrates `1/(s g^4)`, `wu` integrates `1/(s (2g)^2)`, and
/// `yamazaki` integrates `1/(s g^5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdmissibilityKind {
    Tao,
    Wu,
    Yamazaki,
}

impl AdmissibilityKind {
    pub const ALL: [AdmissibilityKind; 3] = [AdmissibilityKind::Tao, AdmissibilityKind::Wu, AdmissibilityKind::Yamazaki];

    /// Integrand with respect to `ds/s`.
    fn weight(self, g: f64) -> f64 {
        match self {
            AdmissibilityKind::Tao => 1.0 / g.powi(4),
            AdmissibilityKind::Wu => 1.0 / (4.0 * g * g),
            AdmissibilityKind::Yamazaki => 1.0 / g.powi(5),
        }
    }
}

impl FromStr for AdmissibilityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tao" => Ok(AdmissibilityKind::Tao),
            "wu" => Ok(AdmissibilityKind::Wu),
            "yamazaki" => Ok(AdmissibilityKind::Yamazaki),
            other => Err(Error::InvalidConfig(format!("unknown admissibility kind '{other}'"))),
        }
    }
}

impl fmt::Display for AdmissibilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdmissibilityKind::Tao => "tao",
            AdmissibilityKind::Wu => "wu",
            AdmissibilityKind::Yamazaki => "yamazaki",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub kind: AdmissibilityKind,
    pub x: f64,
    /// `∫_1^x` of the integrand.
    pub partial_integral: f64,
    /// Partial integrals at `x = 1e2, 1e4, 1e6`.
    pub probes: [f64; 3],
    /// Estimated tail decay exponent; the integrand behaves like `(ln s)^-κ`.
    pub tail_exponent: f64,
    pub diverging: bool,
}

const PROBES: [f64; 3] = [1e2, 1e4, 1e6];
const QUAD_TOL: f64 = 1e-12;

/// `∫_1^x` of the chosen integrand for `g`, plus a divergence verdict.
pub fn g_admissibility(g: GFunction, kind: AdmissibilityKind, x: f64) -> Result<AdmissibilityReport> {
    g_admissibility_with(|s| g.eval(s), kind, x)
}

/// [`g_admissibility`] for an arbitrary damping function.
///
/// The integral is computed in `u = ln s`, where it becomes `∫_0^{ln x} w(g(e^u)) du`.
/// Divergence is judged from the increments `Δ1 = I(1e4) - I(1e2)` and
/// `Δ2 = I(1e6) - I(1e4)`: a tail `u^-κ` gives `Δ1/Δ2 ≈ (5/3)^κ`, and the
/// integral diverges iff `κ ≤ 1`.
pub fn g_admissibility_with<G: Fn(f64) -> f64>(g: G, kind: AdmissibilityKind, x: f64) -> Result<AdmissibilityReport> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Precondition(format!("upper limit must be a finite X > 1, got {x}")));
    }
    let f = |u: f64| kind.weight(g(u.exp()));
    let integral = |upper: f64| adaptive_simpson(&f, 0.0, upper.ln(), QUAD_TOL);
    let partial_integral = integral(x);
    let probes = PROBES.map(integral);
    let d1 = probes[1] - probes[0];
    let d2 = probes[2] - probes[1];
    let tail_exponent = if d2 > 0.0 && d1 > 0.0 {
        (d1 / d2).ln() / (5.0f64 / 3.0).ln()
    } else {
        f64::INFINITY
    };
    if !partial_integral.is_finite() {
        return Err(Error::NonFinite("admissibility integral"));
    }
    Ok(AdmissibilityReport {
        kind,
        x,
        partial_integral,
        probes,
        tail_exponent,
        diverging: tail_exponent <= 1.0,
    })
}

/// Adaptive Simpson quadrature with Richardson correction.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MikhlinReport {
    /// `sup_s s^k |g^(k)(s)|` for `k = 1..=max_order`.
    pub sup_by_order: Vec<f64>,
    /// Sup over the upper half (in `ln s`) of the sample range, per order.
    pub tail_sup_by_order: Vec<f64>,
    pub samples: usize,
    pub pass: bool,
}

/// Finite-difference check of `|g^(k)(s)| ≤ C s^-k` on log-spaced samples in
/// `[1, 1e6]`.
pub fn mikhlin_check(g: GFunction, max_order: u32, samples: usize) -> Result<MikhlinReport> {
    mikhlin_check_with(|s| g.eval(s), max_order, samples)
}

/// [`mikhlin_check`] for an arbitrary function.
///
/// Derivatives use central differences with step `h = ε^{1/(k+2)} s`. An order
/// passes when its scaled derivatives are finite and do not grow: the sup
/// over the upper half of the range is at most twice the sup over the lower
/// half.
pub fn mikhlin_check_with<G: Fn(f64) -> f64>(g: G, max_order: u32, samples: usize) -> Result<MikhlinReport> {
    if max_order < 1 {
        return Err(Error::Precondition("max_order must be >= 1".into()));
    }
    if samples < 4 {
        return Err(Error::Precondition("need at least 4 samples".into()));
    }
    let (lo, hi) = (0.0f64, 1e6f64.ln());
    let mut sup = vec![0.0f64; max_order as usize];
    let mut head = vec![0.0f64; max_order as usize];
    let mut tail = vec![0.0f64; max_order as usize];
    for i in 0..samples {
        let u = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let s = u.exp();
        for k in 1..=max_order {
            let h = f64::EPSILON.powf(1.0 / (k as f64 + 2.0)) * s;
            let scaled = (s.powi(k as i32) * central_difference(&g, s, h, k)).abs();
            let scaled = if scaled.is_nan() { f64::INFINITY } else { scaled };
            let idx = (k - 1) as usize;
            sup[idx] = sup[idx].max(scaled);
            if 2 * i < samples {
                head[idx] = head[idx].max(scaled);
            } else {
                tail[idx] = tail[idx].max(scaled);
            }
        }
    }
    let pass = sup
        .iter()
        .zip(head.iter().zip(&tail))
        .all(|(s, (h, t))| s.is_finite() && *t <= 2.0 * h + 1e-9);
    Ok(MikhlinReport {
        sup_by_order: sup,
        tail_sup_by_order: tail,
        samples,
        pass,
    })
}

/// k-th central difference `δ_h^k g(s) / h^k`.
fn central_difference<G: Fn(f64) -> f64>(g: &G, s: f64, h: f64, k: u32) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let x = s + (k as f64 / 2.0 - j as f64) * h;
        acc += sign * binom * g(x);
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    acc / h.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_tao_at_e_is_one() {
        let r = g_admissibility(GFunction::Unit, AdmissibilityKind::Tao, std::f64::consts::E).unwrap();
        assert!((r.partial_integral - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_diverges_for_every_kind() {
        for kind in AdmissibilityKind::ALL {
            let r = g_admissibility(GFunction::Unit, kind, 10.0).unwrap();
            assert!(r.diverging, "{kind}");
            assert!(r.tail_exponent.abs() < 1e-9);
        }
    }

    #[test]
    fn log_tao_matches_fine_simpson() {
        let x = 1e4;
        let r = g_admissibility(GFunction::Log, AdmissibilityKind::Tao, x).unwrap();
        // composite Simpson in s on a geometric mesh of panels
        let f = |s: f64| 1.0 / (s * (std::f64::consts::E + s).ln().powi(4));
        let panels = 4000;
        let mut total = 0.0;
        for i in 0..panels {
            let a = x.powf(i as f64 / panels as f64);
            let b = x.powf((i + 1) as f64 / panels as f64);
            let m = 0.5 * (a + b);
            let (c, d) = (0.5 * (a + m), 0.5 * (m + b));
            total += (m - a) / 6.0 * (f(a) + 4.0 * f(c) + f(m)) + (b - m) / 6.0 * (f(m) + 4.0 * f(d) + f(b));
        }
        assert!((r.partial_integral - total).abs() < 1e-8, "{} vs {total}", r.partial_integral);
    }

    #[test]
    fn rejects_small_upper_limit() {
        assert!(g_admissibility(GFunction::Unit, AdmissibilityKind::Wu, 1.0).is_err());
    }

    #[test]
    fn mikhlin_unit_and_log() {
        let r = mikhlin_check(GFunction::Unit, 3, 200).unwrap();
        assert!(r.pass);
        assert!(r.sup_by_order.iter().all(|&v| v == 0.0));

        let r = mikhlin_check(GFunction::Log, 2, 400).unwrap();
        assert!(r.pass);
        // s g'(s) = s / (e + s) < 1
        let exact = 1e6 / (std::f64::consts::E + 1e6);
        assert!((r.sup_by_order[0] - exact).abs() < 1e-7, "{:?}", r.sup_by_order);
        assert!(r.sup_by_order[0] < 1.0);
    }

    #[test]
    fn mikhlin_exponential_fails() {
        let r = mikhlin_check_with(f64::exp, 1, 100).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn mikhlin_rejects_order_zero() {
        assert!(mikhlin_check(GFunction::Log, 0, 100).is_err());
    }
}
