use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gmhd_core::estimates::{
    max_growth, refinement_study, verify_integral_estimate, verify_inverse_estimate,
    verify_product_estimate, verify_semigroup_estimate, verify_sobolev_embedding, write_report_csv, ProductSplit,
    RefinementRow,
};
use gmhd_core::{Grid, MultiplierSpec};
use serde::Serialize;

use crate::config::{self, VerifyConfig, VerifySection};
use crate::error::CliError;
use crate::{Common, Verdict};

/// Tolerance on the recovered `T`-scaling exponent of the integral estimate.
const SCALING_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Serialize)]
struct Outcome {
    criterion: &'static str,
    pass: bool,
    detail: String,
}

fn log_spaced(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi > lo && hi.is_finite() && points >= 2) {
        return Err(CliError::config(format!("need 0 < t_min < t_max and t_points >= 2, got {lo}, {hi}, {points}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect())
}

fn write_csv<R: Serialize>(out: Option<&Path>, name: &str, rows: &[R]) -> Result<(), CliError> {
    if let Some(dir) = out {
        let mut w = BufWriter::new(File::create(dir.join(name))?);
        write_report_csv(&mut w, rows)?;
        w.flush()?;
    }
    Ok(())
}

fn check_sizes(sizes: &[usize]) -> Result<(), CliError> {
    if sizes.len() < 2 {
        return Err(CliError::config("a refinement study needs at least two sizes"));
    }
    Ok(())
}

fn refinement_outcome(criterion: &'static str, rows: &[RefinementRow], limit: f64) -> Outcome {
    let growth = max_growth(rows);
    let last = rows.last().map_or(f64::NAN, |r| r.ratio);
    Outcome {
        criterion,
        pass: growth <= limit && last.is_finite(),
        detail: format!("sup ratio {last:.6e} at N = {}, max growth {growth:.3e} (limit {limit})", rows.last().map_or(0, |r| r.n)),
    }
}

fn run(section: &VerifySection, seed: u64, out: Option<&Path>) -> Result<Outcome, CliError> {
    match section {
        VerifySection::Semigroup {
            gamma,
            g,
            epsilon,
            r1,
            p1,
            r2,
            p2,
            dim,
            n,
            t_min,
            t_max,
            t_points,
            trials,
            tolerance,
        } => {
            let spec = MultiplierSpec::with_epsilon(*gamma, *g, *epsilon)?;
            let times = log_spaced(*t_min, *t_max, *t_points)?;
            let r = verify_semigroup_estimate(&spec, *r1, *p1, *r2, *p2, Grid::new(*dim, *n)?, &times, *trials, seed)?;
            write_csv(out, "semigroup.csv", &r.rows)?;
            Ok(Outcome {
                criterion: "semigroup",
                pass: r.relative_error <= *tolerance,
                detail: format!(
                    "fitted slope {:.6} vs predicted {:.6} (relative error {:.3e}, tolerance {tolerance})",
                    r.fitted_exponent, r.predicted_exponent, r.relative_error
                ),
            })
        }
        VerifySection::Inverse {
            gamma,
            g,
            epsilon,
            r,
            p,
            dim,
            sizes,
            trials,
            max_growth,
        } => {
            check_sizes(sizes)?;
            let spec = MultiplierSpec::with_epsilon(*gamma, *g, *epsilon)?;
            let rows = refinement_study(*dim, sizes, |grid| {
                Ok(verify_inverse_estimate(&spec, *r, *p, grid, *trials, seed)?.sup_ratio)
            })?;
            write_csv(out, "inverse.csv", &rows)?;
            Ok(refinement_outcome("inverse", &rows, *max_growth))
        }
        VerifySection::Integral {
            a,
            b,
            t,
            quad_points,
            tolerance,
        } => {
            let r = verify_integral_estimate(*a, *b, *t, *quad_points)?;
            write_csv(out, "integral.csv", &[r])?;
            let scaling_error = (r.scaling_exponent - (1.0 - a - b)).abs();
            Ok(Outcome {
                criterion: "integral",
                pass: r.abs_error <= *tolerance && scaling_error <= SCALING_TOLERANCE,
                detail: format!(
                    "quadrature {:.12e} vs Beta form {:.12e} (error {:.3e}); scaling exponent {:.10} (error {:.3e})",
                    r.sup_value, r.closed_form, r.abs_error, r.scaling_exponent, scaling_error
                ),
            })
        }
        VerifySection::Embedding {
            s,
            r,
            p,
            dim,
            sizes,
            trials,
            max_growth,
        } => {
            check_sizes(sizes)?;
            let rows = refinement_study(*dim, sizes, |grid| {
                Ok(verify_sobolev_embedding(*s, *r, *p, grid, *trials, seed)?.sup_ratio)
            })?;
            write_csv(out, "embedding.csv", &rows)?;
            Ok(refinement_outcome("embedding", &rows, *max_growth))
        }
        VerifySection::Product {
            r,
            p,
            p1,
            p2,
            q1,
            q2,
            dim,
            sizes,
            trials,
            max_growth,
        } => {
            check_sizes(sizes)?;
            let split = ProductSplit {
                p1: *p1,
                p2: *p2,
                q1: *q1,
                q2: *q2,
            };
            let rows = refinement_study(*dim, sizes, |grid| {
                Ok(verify_product_estimate(*r, *p, &split, grid, *trials, seed)?.sup_ratio)
            })?;
            write_csv(out, "product.csv", &rows)?;
            Ok(refinement_outcome("product", &rows, *max_growth))
        }
    }
}

pub fn run_verify(args: &Common) -> Result<Verdict, CliError> {
    let cfg: VerifyConfig = config::load(&args.config)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let out = args.out.as_deref().map(config::ensure_dir).transpose()?;
    let outcome = run(&cfg.verify, seed, out.as_deref())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        println!("{} {}: {}", if outcome.pass { "PASS" } else { "FAIL" }, outcome.criterion, outcome.detail);
    }
    Ok(Verdict::from_bool(outcome.pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gmhd_core::estimates::log_log_slope;

    #[test]
    fn log_spacing_hits_endpoints() {
        let t = log_spaced(1e-3, 1e-1, 5).unwrap();
        assert!((t[0] - 1e-3).abs() < 1e-15 && (t[4] - 1e-1).abs() < 1e-15);
        assert!((t[2] - 1e-2).abs() < 1e-15);
        let slope = log_log_slope(&t, &t.iter().map(|x| x.powf(-0.5)).collect::<Vec<_>>());
        assert!((slope + 0.5).abs() < 1e-12);
    }
}
