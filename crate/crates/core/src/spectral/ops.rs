use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GFunction, SpectralField};
use crate::error::{Error, Result};

/// One generalized dissipation operator `L` with symbol `-|ξ|^γ / g(|ξ|)`.
///
/// `epsilon` realizes the "arbitrarily close from below" order `γ^- = γ - ε`
/// used by estimates and the parameter checker; the operators themselves
/// always use `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSpec {
    pub gamma: f64,
    pub g: GFunction,
    pub epsilon: f64,
}

impl MultiplierSpec {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    /// Spec with `ε = min(1e-9, γ/2)`.
    pub fn new(gamma: f64, g: GFunction) -> Result<Self> {
        let epsilon = if gamma > 0.0 {
            Self::DEFAULT_EPSILON.min(gamma / 2.0)
        } else {
            0.0
        };
        Self::with_epsilon(gamma, g, epsilon)
    }

    pub fn with_epsilon(gamma: f64, g: GFunction, epsilon: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidMultiplier(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        let eps_ok = if gamma == 0.0 {
            epsilon == 0.0
        } else {
            epsilon > 0.0 && epsilon < gamma
        };
        if !eps_ok {
            return Err(Error::InvalidMultiplier(format!(
                "epsilon must lie in (0, gamma) (gamma = {gamma}, epsilon = {epsilon})"
            )));
        }
        Ok(MultiplierSpec { gamma, g, epsilon })
    }

    /// `γ^- = γ - ε`.
    pub fn gamma_minus(&self) -> f64 {
        self.gamma - self.epsilon
    }

    /// Symbol as a function of `|k|²`.
    #[inline]
    pub fn symbol_k2(&self, k2: f64) -> f64 {
        if k2 == 0.0 {
            return 0.0;
        }
        -k2.powf(0.5 * self.gamma) / self.g.eval(k2.sqrt())
    }
}

/// `-|k|^γ / g(|k|)`; zero at the origin.
pub fn symbol_eval(spec: &MultiplierSpec, k: &[i64]) -> f64 {
    let k2: f64 = k.iter().map(|&kj| (kj * kj) as f64).sum();
    spec.symbol_k2(k2)
}

pub fn apply_multiplier(spec: &MultiplierSpec, f: &SpectralField) -> SpectralField {
    f.map_modes(|k2, _| spec.symbol_k2(k2))
}

/// `e^{tL} f`.
pub fn apply_semigroup(spec: &MultiplierSpec, t: f64, f: &SpectralField) -> Result<SpectralField> {
    if !t.is_finite() {
        return Err(Error::NonFinite("semigroup time"));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(f.map_modes(|k2, _| (t * spec.symbol_k2(k2)).exp()))
}

/// `(1 - L)^{-1} f`, mode-wise factor `1 / (1 + |k|^γ / g(|k|))`.
pub fn apply_helmholtz_inverse(spec: &MultiplierSpec, f: &SpectralField) -> SpectralField {
    f.map_modes(|k2, _| 1.0 / (1.0 - spec.symbol_k2(k2)))
}

/// Leray projection `(I - k kᵀ/|k|²)` on every non-zero mode.
///
/// # Panics
/// If `f` is not a vector field (`dim` components).
pub fn leray_project(f: &SpectralField) -> SpectralField {
    f.require_vector().expect("Leray projection needs a vector field");
    let grid = f.grid();
    let dim = grid.dim();
    let mut out = f.clone();
    let comps = out.components_mut();
    for idx in 0..grid.len() {
        let k = grid.wave_vector(idx);
        let k2 = grid.k_squared(idx);
        if k2 == 0.0 {
            continue;
        }
        let kc = comps
            .iter()
            .zip(&k[..dim])
            .fold(Complex64::new(0.0, 0.0), |acc, (c, &kj)| acc + c[idx] * kj as f64)
            / k2;
        for (c, &kj) in comps.iter_mut().zip(&k[..dim]) {
            c[idx] -= kc * kj as f64;
        }
    }
    out
}

/// `(1 - Δ)^{r/2} f`.
pub fn bessel_potential(f: &SpectralField, r: f64) -> SpectralField {
    f.map_modes(|k2, _| (1.0 + k2).powf(0.5 * r))
}

/// Grid-quadrature `L^p` norm of the pointwise Euclidean magnitude under the
/// normalized measure, for `1 <= p <= ∞`.
pub fn lebesgue_norm(f: &SpectralField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let phys = f.to_physical();
    let npts = f.grid().len();
    let magnitude = |i: usize| phys.iter().map(|c| c[i].norm_sqr()).sum::<f64>().sqrt();
    if p.is_infinite() {
        return Ok((0..npts).map(magnitude).fold(0.0, f64::max));
    }
    let peak = (0..npts).map(magnitude).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    // scaled by the peak to keep |f|^p in range for large p
    let mean = (0..npts).map(|i| (magnitude(i) / peak).powf(p)).sum::<f64>() / npts as f64;
    Ok(peak * mean.powf(1.0 / p))
}

/// Bessel-potential Sobolev norm `‖(1 - Δ)^{r/2} f‖_{L^p}`.
///
/// `p = 2` is evaluated exactly by Plancherel; other exponents by grid
/// quadrature of the inverse transform. Negative `r` is accepted.
pub fn sobolev_norm(f: &SpectralField, r: f64, p: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::NonFinite("sobolev regularity r"));
    }
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if !f.is_finite() {
        return Err(Error::NonFinite("field coefficients"));
    }
    let weighted = bessel_potential(f, r);
    if p == 2.0 {
        return Ok(weighted.l2_norm());
    }
    lebesgue_norm(&weighted, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn heat() -> MultiplierSpec {
        MultiplierSpec::new(2.0, GFunction::Unit).unwrap()
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(symbol_eval(&heat(), &[2, 0, 0]), -4.0);
        let s = MultiplierSpec::new(1.0, GFunction::Log).unwrap();
        assert_eq!(symbol_eval(&s, &[0, 0, 0]), 0.0);
        // ln(e + 1) = 1.3132616875182228...
        assert!((symbol_eval(&s, &[1, 0, 0]) + 1.0 / 1.313_261_687_518_222_8).abs() < 1e-12);
        assert!((symbol_eval(&s, &[1, 0, 0]) + 0.761_462_859_6).abs() < 1e-10);
    }

    #[test]
    fn spec_validation() {
        assert!(MultiplierSpec::with_epsilon(2.0, GFunction::Unit, 0.0).is_err());
        assert!(MultiplierSpec::with_epsilon(2.0, GFunction::Unit, 2.0).is_err());
        assert!(MultiplierSpec::with_epsilon(-1.0, GFunction::Unit, 0.1).is_err());
        assert!(MultiplierSpec::new(0.0, GFunction::Unit).is_ok());
    }

    #[test]
    fn multiplier_on_modes() {
        let g = Grid::new(3, 8).unwrap();
        let c = SpectralField::from_fn(g, 3, |_, c| 1.0 + c as f64);
        assert_eq!(apply_multiplier(&heat(), &c).max_abs(), 0.0);

        let one = [Complex64::new(1.0, 0.0)];
        let m = SpectralField::real_mode(g, &[1, 0, 0], &one).unwrap();
        let lm = apply_multiplier(&heat(), &m);
        assert_eq!(lm.coef(0, &[1, 0, 0]), Complex64::new(-1.0, 0.0));

        let s3 = MultiplierSpec::new(3.0, GFunction::Log).unwrap();
        let m2 = SpectralField::real_mode(g, &[0, 2, 0], &one).unwrap();
        let expect = -8.0 / (std::f64::consts::E + 2.0).ln();
        assert!((apply_multiplier(&s3, &m2).coef(0, &[0, 2, 0]).re - expect).abs() < 1e-13);
        assert!(apply_multiplier(&s3, &m2).hermitian_defect() == 0.0);
    }

    #[test]
    fn semigroup_examples() {
        let g = Grid::new(2, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = SpectralField::random_band_limited(g, 2, 3, &mut rng);
        assert_eq!(apply_semigroup(&heat(), 0.0, &f).unwrap(), f);
        assert_eq!(apply_semigroup(&heat(), -1.0, &f), Err(Error::NegativeTime(-1.0)));

        let m = SpectralField::real_mode(g, &[0, 1], &[Complex64::new(1.0, 0.0)]).unwrap();
        let half = apply_semigroup(&heat(), std::f64::consts::LN_2, &m).unwrap();
        assert!((half.coef(0, &[0, 1]).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helmholtz_inverse_examples() {
        let g = Grid::new(2, 8).unwrap();
        let m = SpectralField::real_mode(g, &[1, 0], &[Complex64::new(1.0, 0.0)]).unwrap();
        assert!((apply_helmholtz_inverse(&heat(), &m).coef(0, &[1, 0]).re - 0.5).abs() < 1e-16);
        let c = SpectralField::from_fn(g, 1, |_, _| 3.0);
        assert_eq!(apply_helmholtz_inverse(&heat(), &c), c);
    }

    #[test]
    fn leray_examples() {
        let g = Grid::new(2, 8).unwrap();
        // mode k=(1,0), vector coefficient (1,1) -> (0,1)
        let mut f = SpectralField::zero_vector(g);
        f.set_coef(0, &[1, 0], Complex64::new(1.0, 0.0));
        f.set_coef(1, &[1, 0], Complex64::new(1.0, 0.0));
        let p = leray_project(&f);
        assert_eq!(p.coef(0, &[1, 0]), Complex64::new(0.0, 0.0));
        assert_eq!(p.coef(1, &[1, 0]), Complex64::new(1.0, 0.0));

        // gradient of a pure mode: coefficient i k φ
        let k = [2i64, -1];
        let amp: Vec<Complex64> = k.iter().map(|&kj| Complex64::new(0.0, kj as f64)).collect();
        let grad = SpectralField::real_mode(g, &k, &amp).unwrap();
        assert!(leray_project(&grad).max_abs() < 1e-15);
    }

    #[test]
    fn sobolev_examples() {
        let g = Grid::new(2, 16).unwrap();
        let c = SpectralField::from_fn(g, 1, |_, _| -2.5);
        for (r, p) in [(0.0, 2.0), (1.5, 3.0), (2.0, 7.5)] {
            assert!((sobolev_norm(&c, r, p).unwrap() - 2.5).abs() < 1e-13);
        }
        let mut mode = SpectralField::zeros(g, 1);
        mode.set_coef(0, &[1, 0], Complex64::new(1.0, 0.0));
        assert!((sobolev_norm(&mode, 1.0, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        // pointwise |e^{ik·x}| = 1, so every L^p norm agrees
        assert!((sobolev_norm(&mode, 1.0, 4.0).unwrap() - 2f64.sqrt()).abs() < 1e-13);
        assert_eq!(sobolev_norm(&SpectralField::zeros(g, 2), 3.0, 3.0).unwrap(), 0.0);
        assert!(sobolev_norm(&c, 0.0, 1.0).is_err());
        assert!(sobolev_norm(&c, 0.0, f64::INFINITY).is_err());
        assert!(sobolev_norm(&c, f64::NAN, 2.0).is_err());
    }

    #[test]
    fn plancherel_agrees_with_quadrature_at_p2() {
        let g = Grid::new(3, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = SpectralField::random_band_limited(g, 3, 3, &mut rng);
        let w = bessel_potential(&f, 0.7);
        let quad = lebesgue_norm(&w, 2.0).unwrap();
        assert!((quad - sobolev_norm(&f, 0.7, 2.0).unwrap()).abs() < 1e-12 * quad);
    }
}
