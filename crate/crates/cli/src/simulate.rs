use std::fs::{self, File};
use std::io::{BufWriter, Write};

use gmhd_core::solver::{
    diagnostics, picard_solve, write_diagnostics_csv, write_trajectory_snapshots, ContractionDiagnostics, NormParams,
    SolverConfig, Specs,
};
use gmhd_core::spectral::leray_project;
use gmhd_core::{Grid, MultiplierSpec, SpectralField};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{self, InitialField, SimulateConfig};
use crate::error::CliError;
use crate::{Common, Verdict};

/// Unit vector orthogonal to `k` (`k ≠ 0`), so a single mode along it is
/// divergence-free.
fn transverse(k: &[i64]) -> Vec<f64> {
    let kf: Vec<f64> = k.iter().map(|&x| x as f64).collect();
    let mut v = if kf.len() == 2 {
        vec![-kf[1], kf[0]]
    } else {
        // k × e with e the axis least aligned with k
        let axis = (0..3)
            .min_by(|&a, &b| kf[a].abs().total_cmp(&kf[b].abs()))
            .unwrap_or(0);
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        vec![kf[1] * e[2] - kf[2] * e[1], kf[2] * e[0] - kf[0] * e[2], kf[0] * e[1] - kf[1] * e[0]]
    };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

fn initial_field(grid: Grid, spec: &InitialField, rng: &mut ChaCha8Rng) -> Result<SpectralField, CliError> {
    let dim = grid.dim();
    let field = match spec {
        InitialField::Zero => SpectralField::zero_vector(grid),
        InitialField::SingleMode { k, amplitude } => {
            if k.len() != dim {
                return Err(CliError::config(format!("single_mode k = {k:?} needs {dim} entries")));
            }
            if k.iter().all(|&x| x == 0) {
                return Err(CliError::config("single_mode needs a nonzero wave vector"));
            }
            let half = grid.points_per_axis() as i64 / 2;
            if k.iter().any(|x| x.abs() >= half) {
                return Err(CliError::config(format!("single_mode k = {k:?} is not resolved on N = {}", 2 * half)));
            }
            let a: Vec<Complex64> = transverse(k).into_iter().map(|x| Complex64::new(x * amplitude, 0.0)).collect();
            SpectralField::real_mode(grid, k, &a)?
        }
        InitialField::TaylorGreenLike { amplitude } => {
            let a = *amplitude;
            SpectralField::from_fn(grid, dim, move |x, c| {
                let z = if dim == 3 { x[2].cos() } else { 1.0 };
                match c {
                    0 => a * x[0].sin() * x[1].cos() * z,
                    1 => -a * x[0].cos() * x[1].sin() * z,
                    _ => 0.0,
                }
            })
        }
        InitialField::RandomBandLimited { band, amplitude } => {
            if *band < 1 {
                return Err(CliError::config(format!("random_band_limited band must be >= 1, got {band}")));
            }
            let f = leray_project(&SpectralField::random_band_limited(grid, dim, *band, rng));
            let norm = f.l2_norm();
            if norm > 0.0 {
                f.scaled(amplitude / norm)
            } else {
                f
            }
        }
    };
    Ok(field)
}

#[derive(Serialize)]
struct Summary<'a> {
    status: &'static str,
    seed: u64,
    dim: usize,
    n: usize,
    solver: &'a SolverConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    contraction: Option<&'a ContractionDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_divergence_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<&'a [f64]>,
}

pub fn run_simulate(args: &Common) -> Result<Verdict, CliError> {
    let cfg: SimulateConfig = config::load(&args.config)?;
    let seed = args.seed.unwrap_or(cfg.seed);
    let grid = Grid::new(cfg.grid.dim, cfg.grid.n)?;
    let op = cfg.operators;
    let specs = Specs {
        l1: MultiplierSpec::with_epsilon(op.gamma1, op.g1, op.epsilon)?,
        l2: MultiplierSpec::with_epsilon(op.gamma2, op.g2, op.epsilon)?,
        l3: MultiplierSpec::with_epsilon(op.gamma3, op.g3, op.epsilon)?,
    };
    let solver = cfg.solver.config(NormParams::from(cfg.norms));
    solver.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u0 = initial_field(grid, &cfg.initial.u, &mut rng)?;
    let b0 = initial_field(grid, &cfg.initial.b, &mut rng)?;

    let out = args.out.as_deref().map(config::ensure_dir).transpose()?;
    let mut summary = Summary {
        status: "converged",
        seed,
        dim: grid.dim(),
        n: grid.points_per_axis(),
        solver: &solver,
        contraction: None,
        max_divergence_residual: None,
        error: None,
        residuals: None,
    };

    let solved = picard_solve(&u0, &b0, &specs, &solver);
    let (traj, diag) = match &solved {
        Ok(pair) => pair,
        Err(e) => {
            summary.status = match e {
                gmhd_core::Error::NonConvergence { .. } => "non_convergence",
                gmhd_core::Error::Blowup { .. } => "blowup",
                _ => "error",
            };
            if let gmhd_core::Error::NonConvergence { residuals, .. } = e {
                summary.residuals = Some(residuals);
            }
            summary.error = Some(e.to_string());
            emit(&summary, out.as_deref(), args.json)?;
            return Err(e.clone().into());
        }
    };
    let rows = diagnostics(traj, &specs.l3, solver.alpha)?;
    summary.contraction = Some(diag);
    summary.max_divergence_residual = Some(traj.max_divergence_residual());

    if let Some(dir) = &out {
        let mut w = BufWriter::new(File::create(dir.join("diagnostics.csv"))?);
        write_diagnostics_csv(&mut w, &rows)?;
        w.flush()?;
        if cfg.snapshots {
            let snaps = dir.join("snapshots");
            fs::create_dir_all(&snaps)?;
            write_trajectory_snapshots(&snaps, traj)?;
        }
    }
    emit(&summary, out.as_deref(), args.json)?;
    if !args.json {
        let last = rows.last().expect("diagnostics include t = 0");
        println!(
            "converged in {} iterations; ratio {}; final E_kin = {:e}, E_mag = {:e}, div residual {:e}",
            diag.iterations,
            diag.estimated_ratio.map_or("n/a".into(), |r| format!("{r:.3e}")),
            last.e_kin,
            last.e_mag,
            summary.max_divergence_residual.unwrap_or(0.0)
        );
    }
    Ok(Verdict::Pass)
}

fn emit(summary: &Summary, out: Option<&std::path::Path>, json: bool) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(summary)?;
    if let Some(dir) = out {
        fs::write(dir.join("summary.json"), format!("{text}\n"))?;
    }
    if json {
        println!("{text}");
    }
    Ok(())
}
