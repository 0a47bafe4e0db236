//! Bilinear terms of the projected gMHD-α system.
//!
//! Products are evaluated pseudo-spectrally: inputs are truncated, moved to
//! the physical grid, multiplied pointwise, transformed back and truncated
//! again. Derivatives are taken spectrally.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{leray_project, MultiplierSpec, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DealiasRule {
    /// Keep only modes with `3|k_j| < N` on every axis.
    #[default]
    TwoThirds,
    None,
}

impl DealiasRule {
    /// Whether wave vector `k` survives truncation on an `n`-point axis.
    #[inline]
    pub fn keeps(self, k: &[i64], n: usize) -> bool {
        match self {
            DealiasRule::None => true,
            DealiasRule::TwoThirds => k.iter().all(|kj| 3 * kj.unsigned_abs() < n as u64),
        }
    }
}

impl fmt::Display for DealiasRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DealiasRule::TwoThirds => "two_thirds",
            DealiasRule::None => "none",
        })
    }
}

impl FromStr for DealiasRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "two_thirds" | "2/3" => Ok(DealiasRule::TwoThirds),
            "none" => Ok(DealiasRule::None),
            other => Err(Error::InvalidConfig(format!("unknown dealias rule '{other}'"))),
        }
    }
}

pub fn dealias(f: &SpectralField, rule: DealiasRule) -> SpectralField {
    if rule == DealiasRule::None {
        return f.clone();
    }
    let n = f.grid().points_per_axis();
    f.map_modes(|_, k| if rule.keeps(k, n) { 1.0 } else { 0.0 })
}

fn check_pair(x: &SpectralField, y: &SpectralField) -> Result<()> {
    x.check_same_shape(y)?;
    x.require_vector()
}

fn forward_product(grid: crate::spectral::Grid, a: &[Complex64], b: &[Complex64]) -> SpectralField {
    let values: Vec<Complex64> = a.iter().zip(b).map(|(p, q)| p * q).collect();
    let mut f = SpectralField::from_raw_coefficients(grid, vec![values]).expect("grid sized");
    crate::spectral::forward_in_place(&mut f);
    f
}

/// Spectral derivative `∂_axis f`, component-wise.
pub fn partial(f: &SpectralField, axis: usize) -> SpectralField {
    let grid = f.grid();
    let mut out = f.clone();
    for comp in out.components_mut() {
        for (idx, c) in comp.iter_mut().enumerate() {
            let k = grid.wave_vector(idx)[axis] as f64;
            *c *= Complex64::new(0.0, k);
        }
    }
    out
}

/// `div(x ⊗ y)`, whose `j`-th component is `Σ_i ∂_i (x_i y_j)`.
pub fn tensor_divergence(x: &SpectralField, y: &SpectralField, rule: DealiasRule) -> Result<SpectralField> {
    check_pair(x, y)?;
    let grid = x.grid();
    let dim = grid.dim();
    let xp = dealias(x, rule).to_physical();
    let yp = dealias(y, rule).to_physical();
    let components: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for (i, xi) in xp.iter().enumerate() {
                let prod = forward_product(grid, xi, &yp[j]);
                for (idx, (a, p)) in acc.iter_mut().zip(prod.component(0)).enumerate() {
                    let ki = grid.wave_vector(idx)[i] as f64;
                    *a += p * Complex64::new(0.0, ki);
                }
            }
            acc
        })
        .collect();
    let mut out = SpectralField::from_raw_coefficients(grid, components)?;
    out = dealias(&out, rule);
    out.symmetrize();
    Ok(out)
}

/// `Σ_i y_i ∇x_i`.
pub fn gradient_contraction(x: &SpectralField, y: &SpectralField, rule: DealiasRule) -> Result<SpectralField> {
    check_pair(x, y)?;
    let grid = x.grid();
    let dim = grid.dim();
    let xd = dealias(x, rule);
    let yp = dealias(y, rule).to_physical();
    let components: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let grad_j = partial(&xd, j).to_physical();
            let sum: Vec<Complex64> = (0..grid.len())
                .map(|p| (0..dim).map(|i| yp[i][p] * grad_j[i][p]).sum())
                .collect();
            let mut f = SpectralField::from_raw_coefficients(grid, vec![sum]).expect("grid sized");
            crate::spectral::forward_in_place(&mut f);
            f.components()[0].clone()
        })
        .collect();
    let mut out = SpectralField::from_raw_coefficients(grid, components)?;
    out = dealias(&out, rule);
    out.symmetrize();
    Ok(out)
}

/// `(1 - α² L_3)^{-1} f`.
pub fn helmholtz_inverse_alpha(spec3: &MultiplierSpec, alpha: f64, f: &SpectralField) -> SpectralField {
    let a2 = alpha * alpha;
    f.map_modes(|k2, _| 1.0 / (1.0 - a2 * spec3.symbol_k2(k2)))
}

/// `W1(x, y) = P (1 - α² L_3)^{-1} div(x ⊗ y)`.
pub fn w1_alpha(
    x: &SpectralField,
    y: &SpectralField,
    spec3: &MultiplierSpec,
    alpha: f64,
    rule: DealiasRule,
) -> Result<SpectralField> {
    let d = tensor_divergence(x, y, rule)?;
    Ok(leray_project(&helmholtz_inverse_alpha(spec3, alpha, &d)))
}

/// `W2(x, y) = P (1 - α² L_3)^{-1} Σ_i y_i ∇x_i`.
pub fn w2_alpha(
    x: &SpectralField,
    y: &SpectralField,
    spec3: &MultiplierSpec,
    alpha: f64,
    rule: DealiasRule,
) -> Result<SpectralField> {
    let c = gradient_contraction(x, y, rule)?;
    Ok(leray_project(&helmholtz_inverse_alpha(spec3, alpha, &c)))
}

/// `W1(x, y) = P (1 - L_3)^{-1} div(x ⊗ y)`.
pub fn w1(x: &SpectralField, y: &SpectralField, spec3: &MultiplierSpec, rule: DealiasRule) -> Result<SpectralField> {
    w1_alpha(x, y, spec3, 1.0, rule)
}

/// `W2(x, y) = P (1 - L_3)^{-1} Σ_i y_i ∇x_i`.
pub fn w2(x: &SpectralField, y: &SpectralField, spec3: &MultiplierSpec, rule: DealiasRule) -> Result<SpectralField> {
    w2_alpha(x, y, spec3, 1.0, rule)
}

/// `W3(x, y) = P div(x ⊗ y)`. Not symmetric in its arguments.
pub fn w3(x: &SpectralField, y: &SpectralField, rule: DealiasRule) -> Result<SpectralField> {
    Ok(leray_project(&tensor_divergence(x, y, rule)?))
}

/// `v = (1 - α² L_3) u`.
pub fn filtered_velocity(u: &SpectralField, spec3: &MultiplierSpec, alpha: f64) -> Result<SpectralField> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
    }
    let a2 = alpha * alpha;
    Ok(u.map_modes(|k2, _| 1.0 - a2 * spec3.symbol_k2(k2)))
}
