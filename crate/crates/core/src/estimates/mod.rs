//! Numerical probes of the smoothing, inverse, singular-integral, embedding
//! and product estimates, on torus-grid proxies of the whole-space setting.
//!
//! Constants are reported, never asserted: what is checked is an exponent
//! (fitted against a prediction) or the stability of a supremum under grid
//! refinement.

mod integral;
mod norms;
mod semigroup;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use integral::{beta_integral_tanh_sinh, verify_integral_estimate, IntegralReport};
pub use norms::{
    embedding_exponent, verify_inverse_estimate, verify_product_estimate, verify_sobolev_embedding, ProductSplit,
    RatioReport,
};
pub use semigroup::{
    bessel_heat_sup, homogeneous_heat_sup, homogeneous_mode_sup, mode_sup_ratio, verify_semigroup_estimate,
    SemigroupReport, SemigroupRow,
};

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// First line of every CSV report.
pub const PROXY_NOTE: &str = "# periodic torus-grid proxy; not the whole-space L^p setting";

/// One step of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub n: usize,
    pub ratio: f64,
    /// `ratio(N) / ratio(N/2) - 1`; zero on the coarsest grid.
    pub growth: f64,
}

/// Runs `probe` on each grid size and records relative growth of its result.
pub fn refinement_study<F>(dim: usize, sizes: &[usize], probe: F) -> Result<Vec<RefinementRow>>
where
    F: Fn(Grid) -> Result<f64>,
{
    let mut rows: Vec<RefinementRow> = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let ratio = probe(Grid::new(dim, n)?)?;
        let growth = rows.last().map_or(0.0, |prev| ratio / prev.ratio - 1.0);
        rows.push(RefinementRow { n, ratio, growth });
    }
    Ok(rows)
}

/// Largest relative growth across a refinement study.
pub fn max_growth(rows: &[RefinementRow]) -> f64 {
    rows.iter().skip(1).map(|r| r.growth).fold(f64::NEG_INFINITY, f64::max)
}

/// Writes `rows` as CSV preceded by [`PROXY_NOTE`].
pub fn write_report_csv<W: Write, R: Serialize>(mut out: W, rows: &[R]) -> Result<()> {
    writeln!(out, "{PROXY_NOTE}")?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Scalar random fields, one independent stream per trial.
fn random_trials(grid: Grid, band: i64, trials: usize, seed: u64) -> Vec<SpectralField> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            SpectralField::random_band_limited(grid, 1, band, &mut rng)
        })
        .collect()
}

/// Real scalar field with unit coefficients on every mode `|k_j| <= band`:
/// a Dirichlet kernel, concentrated at the origin.
fn dirichlet_kernel(grid: Grid, band: i64) -> SpectralField {
    let mut f = SpectralField::zeros(grid, 1);
    let dim = grid.dim();
    for idx in 0..grid.len() {
        let k = grid.wave_vector(idx);
        if k[..dim].iter().all(|kj| kj.abs() <= band) {
            f.components_mut()[0][idx] = num_complex::Complex64::new(1.0, 0.0);
        }
    }
    f
}

fn max_ratio(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
