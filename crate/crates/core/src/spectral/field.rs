use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{fft, Grid};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Vector field on the torus stored as Fourier coefficients, one array per
/// Cartesian component, with `f(x) = Σ_k c_k e^{ik·x}`.
///
/// Fields built from real data are Hermitian (`c_{-k} = conj(c_k)`) with the
/// Nyquist planes cleared. [`SpectralField::from_raw_coefficients`] skips
/// that projection and may carry genuinely complex fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    components: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, n_components: usize) -> Self {
        SpectralField {
            grid,
            components: vec![vec![ZERO; grid.len()]; n_components],
        }
    }

    /// Zero vector field with `dim` components.
    pub fn zero_vector(grid: Grid) -> Self {
        Self::zeros(grid, grid.dim())
    }

    /// Coefficients taken verbatim; no symmetrization.
    pub fn from_raw_coefficients(grid: Grid, components: Vec<Vec<Complex64>>) -> Result<Self> {
        for c in &components {
            if c.len() != grid.len() {
                return Err(Error::InvalidGrid(format!(
                    "component has {} coefficients, grid {grid} needs {}",
                    c.len(),
                    grid.len()
                )));
            }
        }
        Ok(SpectralField { grid, components })
    }

    /// Forward transform of real physical samples (row-major per component).
    pub fn from_physical(grid: Grid, values: &[Vec<f64>]) -> Result<Self> {
        let components = values
            .iter()
            .map(|v| {
                if v.len() != grid.len() {
                    return Err(Error::InvalidGrid(format!(
                        "component has {} samples, grid {grid} needs {}",
                        v.len(),
                        grid.len()
                    )));
                }
                let mut data: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft::forward(&grid, &mut data);
                Ok(data)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = SpectralField { grid, components };
        f.symmetrize();
        Ok(f)
    }

    /// Samples `value(x)` on the grid.
    pub fn from_fn(grid: Grid, n_components: usize, value: impl Fn([f64; 3], usize) -> f64) -> Self {
        let values: Vec<Vec<f64>> = (0..n_components)
            .map(|c| (0..grid.len()).map(|i| value(grid.point(i), c)).collect())
            .collect();
        Self::from_physical(grid, &values).expect("sample count matches grid")
    }

    /// Real single-mode field `a e^{ik·x} + conj(a) e^{-ik·x}`.
    ///
    /// For `k = 0` only the real part of `a` is kept.
    pub fn real_mode(grid: Grid, k: &[i64], amplitude: &[Complex64]) -> Result<Self> {
        let mut f = Self::zeros(grid, amplitude.len());
        let idx = grid.index_of(k);
        if grid.is_nyquist(idx) {
            return Err(Error::InvalidGrid(format!("mode {k:?} lies on the Nyquist plane")));
        }
        let conj = grid.conjugate_index(idx);
        for (c, a) in amplitude.iter().enumerate() {
            if idx == conj {
                f.components[c][idx] = Complex64::new(a.re, 0.0);
            } else {
                f.components[c][idx] = *a;
                f.components[c][conj] = a.conj();
            }
        }
        Ok(f)
    }

    /// Real random field whose modes satisfy `|k_j| <= band`, with standard
    /// normal real and imaginary parts before symmetrization.
    pub fn random_band_limited<R: Rng + ?Sized>(
        grid: Grid,
        n_components: usize,
        band: i64,
        rng: &mut R,
    ) -> Self {
        let mut f = Self::zeros(grid, n_components);
        for comp in f.components.iter_mut() {
            for (idx, c) in comp.iter_mut().enumerate() {
                let k = grid.wave_vector(idx);
                if k[..grid.dim()].iter().all(|kj| kj.abs() <= band) {
                    *c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                }
            }
        }
        f.symmetrize();
        f
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.components
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn coef(&self, c: usize, k: &[i64]) -> Complex64 {
        self.components[c][self.grid.index_of(k)]
    }

    pub fn set_coef(&mut self, c: usize, k: &[i64], value: Complex64) {
        let idx = self.grid.index_of(k);
        self.components[c][idx] = value;
    }

    /// Projects onto Hermitian-symmetric coefficients and clears the Nyquist
    /// planes.
    pub fn symmetrize(&mut self) {
        let grid = self.grid;
        for comp in self.components.iter_mut() {
            for idx in 0..grid.len() {
                if grid.is_nyquist(idx) {
                    comp[idx] = ZERO;
                    continue;
                }
                let conj = grid.conjugate_index(idx);
                if conj < idx {
                    continue;
                }
                let avg = (comp[idx] + comp[conj].conj()) * 0.5;
                comp[idx] = avg;
                comp[conj] = avg.conj();
            }
        }
    }

    /// Largest violation `|c_k - conj(c_{-k})|` over all modes.
    pub fn hermitian_defect(&self) -> f64 {
        let grid = self.grid;
        let mut worst: f64 = 0.0;
        for comp in &self.components {
            for idx in 0..grid.len() {
                let conj = grid.conjugate_index(idx);
                worst = worst.max((comp[idx] - comp[conj].conj()).norm());
            }
        }
        worst
    }

    /// Complex physical samples, one array per component.
    pub fn to_physical(&self) -> Vec<Vec<Complex64>> {
        self.components
            .iter()
            .map(|c| {
                let mut data = c.clone();
                fft::inverse(&self.grid, &mut data);
                data
            })
            .collect()
    }

    /// Real parts of the physical samples.
    pub fn to_physical_real(&self) -> Vec<Vec<f64>> {
        self.to_physical()
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.re).collect())
            .collect()
    }

    /// Applies a real mode-wise factor `factor(k², k)` to every component.
    pub fn map_modes(&self, factor: impl Fn(f64, &[i64]) -> f64) -> Self {
        let mut out = self.clone();
        out.scale_modes(factor);
        out
    }

    pub(crate) fn scale_modes(&mut self, factor: impl Fn(f64, &[i64]) -> f64) {
        let grid = self.grid;
        let dim = grid.dim();
        let factors: Vec<f64> = (0..grid.len())
            .map(|idx| {
                let k = grid.wave_vector(idx);
                factor(grid.k_squared(idx), &k[..dim])
            })
            .collect();
        for comp in self.components.iter_mut() {
            for (c, f) in comp.iter_mut().zip(&factors) {
                *c *= *f;
            }
        }
    }

    pub fn check_same_shape(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                left: self.grid.to_string(),
                right: other.grid.to_string(),
            });
        }
        if self.n_components() != other.n_components() {
            return Err(Error::ComponentMismatch {
                expected: self.n_components(),
                found: other.n_components(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_vector(&self) -> Result<()> {
        if self.n_components() != self.grid.dim() {
            return Err(Error::ComponentMismatch {
                expected: self.grid.dim(),
                found: self.n_components(),
            });
        }
        Ok(())
    }

    /// `self + scale * other`, in place.
    pub fn axpy(&mut self, scale: f64, other: &SpectralField) {
        debug_assert!(self.check_same_shape(other).is_ok());
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * scale;
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.components
            .iter_mut()
            .flat_map(|c| c.iter_mut())
            .for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &SpectralField) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.axpy(1.0, other);
        Ok(out)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.axpy(-1.0, other);
        Ok(out)
    }

    /// Plancherel norm `(Σ_k |c_k|²)^{1/2}`, equal to the L² norm under the
    /// normalized measure.
    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// `Σ_k |c_k|²`.
    pub fn energy(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm_sqr())
            .sum()
    }

    /// Real part of the L² inner product `Σ_k c_k conj(d_k)`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(x, y)| (x * y.conj()).re)
            .sum()
    }

    /// Largest per-mode coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max_k |k·c(k)| / |k|`, relative to `max_k ‖c(k)‖`: the divergence
    /// residual measured against the scale of the field (zero for the zero
    /// field).
    pub fn divergence_residual(&self) -> f64 {
        let grid = self.grid;
        let dim = grid.dim();
        if self.n_components() != dim {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for idx in 0..grid.len() {
            let k = grid.wave_vector(idx);
            let mut div = ZERO;
            let mut mag = 0.0;
            for (comp, &kj) in self.components.iter().zip(&k[..dim]) {
                let c = comp[idx];
                div += c * kj as f64;
                mag += c.norm_sqr();
            }
            scale = scale.max(mag);
            let k2 = grid.k_squared(idx);
            if k2 > 0.0 {
                worst = worst.max(div.norm() / k2.sqrt());
            }
        }
        if scale > 0.0 {
            worst / scale.sqrt()
        } else {
            0.0
        }
    }

    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.divergence_residual() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}
