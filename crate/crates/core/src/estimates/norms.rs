use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dirichlet_kernel, max_ratio, random_trials};
use crate::error::{Error, Result};
use crate::nonlinear::partial;
use crate::spectral::{
    apply_helmholtz_inverse, bessel_potential, lebesgue_norm, sobolev_norm, Grid, MultiplierSpec, SpectralField,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub n: usize,
    pub candidates: usize,
    pub sup_ratio: f64,
    /// Target Lebesgue exponent, when derived (embedding).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

/// `‖f‖_{r,p}`, with `p = ∞` allowed.
fn norm(f: &SpectralField, r: f64, p: f64) -> Result<f64> {
    if p.is_infinite() {
        lebesgue_norm(&bessel_potential(f, r), p)
    } else {
        sobolev_norm(f, r, p)
    }
}

fn constant(grid: Grid) -> SpectralField {
    let mut f = SpectralField::zeros(grid, 1);
    f.set_coef(0, &[0, 0, 0][..grid.dim()], num_complex::Complex64::new(1.0, 0.0));
    f
}

fn report(grid: Grid, ratios: Vec<Result<f64>>, q: Option<f64>) -> Result<RatioReport> {
    Ok(RatioReport {
        n: grid.points_per_axis(),
        candidates: ratios.len(),
        sup_ratio: max_ratio(ratios)?,
        q,
    })
}

/// Supremum of `‖(1 - L)^{-1} f‖_{r,p} / ‖f‖_{r-γ^-,p}` over random fields, a
/// Dirichlet kernel and the constant; for `p = 2` the exact single-shell
/// ratios are included.
pub fn verify_inverse_estimate(
    spec3: &MultiplierSpec,
    r: f64,
    p: f64,
    grid: Grid,
    trials: usize,
    seed: u64,
) -> Result<RatioReport> {
    let g = spec3.gamma_minus();
    let band = grid.points_per_axis() as i64 / 2 - 1;
    let mut fields = random_trials(grid, band, trials, seed);
    fields.push(dirichlet_kernel(grid, band));
    fields.push(constant(grid));
    let mut ratios: Vec<Result<f64>> = fields
        .par_iter()
        .map(|f| Ok(norm(&apply_helmholtz_inverse(spec3, f), r, p)? / norm(f, r - g, p)?))
        .collect();
    if p == 2.0 {
        ratios.extend((0..grid.len()).filter(|&i| !grid.is_nyquist(i)).map(|i| {
            let k2 = grid.k_squared(i);
            Ok((1.0 + k2).powf(0.5 * g) / (1.0 - spec3.symbol_k2(k2)))
        }));
    }
    report(grid, ratios, None)
}

/// `q` with `1/q - r/n = 1/p - s/n`.
pub fn embedding_exponent(s: f64, r: f64, p: f64, n: usize) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    if !(s >= r) {
        return Err(Error::Precondition(format!("need s >= r, got s={s}, r={r}")));
    }
    if !((s - r) * p < n as f64) {
        return Err(Error::Precondition(format!("need (s - r) p < n, got {}", (s - r) * p)));
    }
    let inv_q = 1.0 / p - (s - r) / n as f64;
    if !(inv_q > 0.0) {
        return Err(Error::InvalidExponent(1.0 / inv_q));
    }
    Ok(1.0 / inv_q)
}

/// Supremum of `‖f‖_{r,q} / ‖f‖_{s,p}` with `q` from the scaling relation.
/// Candidates: random band-limited fields, Dirichlet kernels of several
/// widths, and single modes along the first axis.
pub fn verify_sobolev_embedding(s: f64, r: f64, p: f64, grid: Grid, trials: usize, seed: u64) -> Result<RatioReport> {
    let q = embedding_exponent(s, r, p, grid.dim())?;
    let half = grid.points_per_axis() as i64 / 2;
    let mut fields = random_trials(grid, half - 1, trials, seed);
    let mut band = half - 1;
    while band >= 1 {
        fields.push(dirichlet_kernel(grid, band));
        band /= 2;
    }
    for k in 0..half {
        let mut wave = [0i64; 3];
        wave[0] = k;
        fields.push(SpectralField::real_mode(grid, &wave[..grid.dim()], &[num_complex::Complex64::new(1.0, 0.0)])?);
    }
    let ratios = fields
        .par_iter()
        .map(|f| Ok(norm(f, r, q)? / norm(f, s, p)?))
        .collect();
    report(grid, ratios, Some(q))
}

/// Hölder splits `1/p = 1/p1 + 1/p2 = 1/q1 + 1/q2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSplit {
    pub p1: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
}

impl ProductSplit {
    pub fn validate(&self, p: f64) -> Result<()> {
        if !(p > 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        for e in [self.p1, self.p2, self.q1, self.q2] {
            if !(e >= p) {
                return Err(Error::Precondition(format!("split exponent {e} is below p = {p}")));
            }
        }
        let tol = 1e-12;
        if (1.0 / p - 1.0 / self.p1 - 1.0 / self.p2).abs() > tol || (1.0 / p - 1.0 / self.q1 - 1.0 / self.q2).abs() > tol
        {
            return Err(Error::Precondition(format!("exponents {self:?} do not split 1/{p}")));
        }
        Ok(())
    }
}

/// Pointwise product of two real scalar fields.
fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let (a, b) = (f.to_physical_real(), g.to_physical_real());
    let values: Vec<f64> = a[0].iter().zip(&b[0]).map(|(x, y)| x * y).collect();
    SpectralField::from_physical(f.grid(), &[values])
}

/// Supremum of `‖fg‖_{r,p} / (‖f‖_{p1} ‖g‖_{r,p2} + ‖f‖_{r,q1} ‖g‖_{q2})`.
///
/// Factors are band-limited to `|k_j| < N/4`, so their product is resolved
/// exactly on the grid.
pub fn verify_product_estimate(
    r: f64,
    p: f64,
    split: &ProductSplit,
    grid: Grid,
    trials: usize,
    seed: u64,
) -> Result<RatioReport> {
    if !(r >= 0.0) {
        return Err(Error::Precondition(format!("need r >= 0, got {r}")));
    }
    split.validate(p)?;
    let band = grid.points_per_axis() as i64 / 4 - 1;
    let fs = random_trials(grid, band, trials, seed);
    let gs = random_trials(grid, band, trials, seed.wrapping_add(1 << 32));
    let mut pairs: Vec<(SpectralField, SpectralField)> = fs.into_iter().zip(gs).collect();
    let kernel = dirichlet_kernel(grid, band);
    pairs.push((kernel.clone(), kernel.clone()));
    pairs.push((kernel.clone(), constant(grid)));
    pairs.push((partial(&kernel, 0), kernel));
    let ratios = pairs
        .par_iter()
        .map(|(f, g)| {
            let lhs = norm(&product(f, g)?, r, p)?;
            let rhs = norm(f, 0.0, split.p1)? * norm(g, r, split.p2)? + norm(f, r, split.q1)? * norm(g, 0.0, split.q2)?;
            Ok(lhs / rhs)
        })
        .collect();
    report(grid, ratios, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GFunction;
    use num_complex::Complex64;

    fn cosine(grid: Grid) -> SpectralField {
        SpectralField::real_mode(grid, &[1, 0], &[Complex64::new(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn inverse_estimate_unit_heat() {
        let spec = MultiplierSpec::new(2.0, GFunction::Unit).unwrap();
        let grid = Grid::new(2, 16).unwrap();
        let r = verify_inverse_estimate(&spec, 1.0, 2.0, grid, 8, 7).unwrap();
        // every mode ratio is (1+|k|²)^{-ε/2} ≤ 1, with equality at k = 0
        assert!((r.sup_ratio - 1.0).abs() < 1e-12, "{}", r.sup_ratio);
    }

    #[test]
    fn inverse_estimate_constant_only() {
        let spec = MultiplierSpec::new(2.0, GFunction::Log).unwrap();
        let grid = Grid::new(2, 16).unwrap();
        let c = constant(grid);
        let ratio = sobolev_norm(&apply_helmholtz_inverse(&spec, &c), 1.0, 3.0).unwrap()
            / sobolev_norm(&c, 1.0 - spec.gamma_minus(), 3.0).unwrap();
        assert!((ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn embedding_identity_and_exponent() {
        assert_eq!(embedding_exponent(0.5, 0.5, 3.0, 2).unwrap(), 3.0);
        assert!((embedding_exponent(0.5, 0.0, 2.0, 2).unwrap() - 4.0).abs() < 1e-12);
        assert!(embedding_exponent(1.0, 0.0, 2.0, 2).is_err());
        let grid = Grid::new(2, 16).unwrap();
        let r = verify_sobolev_embedding(0.7, 0.7, 2.0, grid, 3, 1).unwrap();
        assert!((r.sup_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embedding_single_mode_closed_form() {
        // cos(x): ‖·‖_{r,q} = 2^{r/2} ‖cos‖_q, ‖cos‖_4 = (3/8)^{1/4}, ‖cos‖_2 = 2^{-1/2}
        let grid = Grid::new(2, 16).unwrap();
        let f = cosine(grid);
        let ratio = norm(&f, 0.0, 4.0).unwrap() / norm(&f, 0.5, 2.0).unwrap();
        let exact = 0.375f64.powf(0.25) / (2f64.powf(0.25) * 0.5f64.sqrt());
        assert!((ratio - exact).abs() < 1e-13);
    }

    #[test]
    fn product_pure_mode() {
        let grid = Grid::new(2, 16).unwrap();
        let f = cosine(grid);
        let split = ProductSplit {
            p1: 4.0,
            p2: 4.0,
            q1: 4.0,
            q2: 4.0,
        };
        let lhs = norm(&product(&f, &f).unwrap(), 0.0, 2.0).unwrap();
        let rhs = 2.0 * norm(&f, 0.0, 4.0).unwrap().powi(2);
        assert!((lhs / rhs - 0.5).abs() < 1e-13);
        let r = verify_product_estimate(0.0, 2.0, &split, grid, 4, 2).unwrap();
        assert!(r.sup_ratio.is_finite() && r.sup_ratio <= 0.5 + 1e-12);
    }

    #[test]
    fn product_with_constant_is_holder() {
        let grid = Grid::new(2, 16).unwrap();
        let one = constant(grid);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let f = SpectralField::random_band_limited(grid, 1, 3, &mut rng);
        let split = ProductSplit {
            p1: 2.0,
            p2: f64::INFINITY,
            q1: 2.0,
            q2: f64::INFINITY,
        };
        let lhs = norm(&product(&f, &one).unwrap(), 0.0, 2.0).unwrap();
        let rhs = norm(&f, 0.0, split.p1).unwrap() * norm(&one, 0.0, split.p2).unwrap()
            + norm(&f, 0.0, split.q1).unwrap() * norm(&one, 0.0, split.q2).unwrap();
        assert!(lhs / rhs <= 1.0);
    }

    #[test]
    fn invalid_split() {
        let grid = Grid::new(2, 16).unwrap();
        let split = ProductSplit {
            p1: 4.0,
            p2: 3.0,
            q1: 4.0,
            q2: 4.0,
        };
        assert!(verify_product_estimate(0.0, 2.0, &split, grid, 1, 0).is_err());
    }
}
