//! Duhamel fixed-point map and its Picard iteration.
//!
//! Time is sampled on uniform nodes `t_m = mT/M`, `m = 0..=M`; the Duhamel
//! integrals use the product trapezoid rule with exact exponential weights
//! (see [`quadrature`]), evaluated by the one-step recursion
//! `D(t_{m+1}) = e^{hL} D(t_m) + h (ψ(hL) N_m + φ(hL) N_{m+1})`.

mod io;
pub mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use io::{write_diagnostics_csv, write_trajectory_snapshots};
use quadrature::StepWeights;

use crate::checker::TheoremInstance;
use crate::error::{Error, Result};
use crate::nonlinear::{filtered_velocity, w1_alpha, w2_alpha, w3, DealiasRule};
use crate::spectral::{apply_semigroup, leray_project, sobolev_norm, MultiplierSpec, SpectralField};

/// Initial data must be solenoidal to this relative tolerance.
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;
/// Iteration is declared divergent once a norm exceeds this multiple of the
/// initial norm.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Exponents of the three norms `‖·‖_{r0,p0}`, `‖·‖_{r1,p1}` (time-weighted)
/// and `‖·‖_{r2,p2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub r0: f64,
    pub p0: f64,
    pub r1: f64,
    pub p1: f64,
    pub r2: f64,
    pub p2: f64,
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams {
            r0: 0.0,
            p0: 2.0,
            r1: 1.0,
            p1: 2.0,
            r2: 0.0,
            p2: 2.0,
        }
    }
}

impl From<&TheoremInstance> for NormParams {
    fn from(inst: &TheoremInstance) -> Self {
        NormParams {
            r0: inst.r0,
            p0: inst.p0,
            r1: inst.r1,
            p1: inst.p1,
            r2: inst.r2,
            p2: inst.p2,
        }
    }
}

/// The dissipation operators `L1` (velocity), `L2` (magnetic field) and the
/// filter operator `L3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Specs {
    pub l1: MultiplierSpec,
    pub l2: MultiplierSpec,
    pub l3: MultiplierSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Horizon `T`.
    #[serde(rename = "T")]
    pub t_final: f64,
    /// Number of time nodes `M` on `(0, T]`.
    pub nodes: usize,
    pub picard_tol: f64,
    pub max_iters: usize,
    /// Exponent of the `t^{a1}` weight.
    pub a1: f64,
    pub alpha: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub dealias: DealiasRule,
    pub norms: NormParams,
    /// Disabling the nonlinearity reduces the map to the linear semigroup;
    /// used for consistency checks.
    pub nonlinear: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t_final: 0.1,
            nodes: 16,
            picard_tol: 1e-10,
            max_iters: 50,
            a1: 0.0,
            alpha: 1.0,
            nu1: 1.0,
            nu2: 1.0,
            dealias: DealiasRule::TwoThirds,
            norms: NormParams::default(),
            nonlinear: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("T must be positive and finite, got {}", self.t_final));
        }
        if self.nodes < 2 {
            return bad(format!("nodes must be >= 2, got {}", self.nodes));
        }
        if !(self.picard_tol > 0.0) {
            return bad(format!("picard_tol must be positive, got {}", self.picard_tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be >= 1".into());
        }
        if !(self.a1 >= 0.0 && self.a1 < 1.0) {
            return Err(Error::A1OutOfRange(self.a1));
        }
        for (name, v) in [("alpha", self.alpha), ("nu1", self.nu1), ("nu2", self.nu2)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let n = &self.norms;
        for (name, p) in [("p0", n.p0), ("p1", n.p1), ("p2", n.p2)] {
            if !(p > 1.0) {
                return bad(format!("{name} must exceed 1, got {p}"));
            }
        }
        Ok(())
    }

    /// Step `h = T / M`.
    pub fn step(&self) -> f64 {
        self.t_final / self.nodes as f64
    }

    /// Nodes `t_1 < ... < t_M = T`.
    pub fn times(&self) -> Vec<f64> {
        (1..=self.nodes).map(|m| self.t_final * m as f64 / self.nodes as f64).collect()
    }
}

/// States on the nodes `t_1..t_M`, together with the initial data at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub u0: SpectralField,
    pub b0: SpectralField,
    pub times: Vec<f64>,
    pub u: Vec<SpectralField>,
    pub b: Vec<SpectralField>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_u(&self) -> &SpectralField {
        self.u.last().unwrap_or(&self.u0)
    }

    pub fn final_b(&self) -> &SpectralField {
        self.b.last().unwrap_or(&self.b0)
    }

    /// `(u, B)` at node `m` with `m = 0` the initial data.
    pub fn state(&self, m: usize) -> (&SpectralField, &SpectralField) {
        if m == 0 {
            (&self.u0, &self.b0)
        } else {
            (&self.u[m - 1], &self.b[m - 1])
        }
    }

    /// Filtered velocity `v = (1 - α² L3) u` at node `m`.
    pub fn filtered(&self, m: usize, spec3: &MultiplierSpec, alpha: f64) -> Result<SpectralField> {
        filtered_velocity(self.state(m).0, spec3, alpha)
    }

    /// `e^{t ν1 L1} u0`, `e^{t ν2 L2} B0` on every node.
    pub fn semigroup(u0: &SpectralField, b0: &SpectralField, specs: &Specs, cfg: &SolverConfig) -> Result<Self> {
        check_initial(u0, b0)?;
        let times = cfg.times();
        let u = times
            .iter()
            .map(|&t| apply_semigroup(&specs.l1, cfg.nu1 * t, u0))
            .collect::<Result<Vec<_>>>()?;
        let b = times
            .iter()
            .map(|&t| apply_semigroup(&specs.l2, cfg.nu2 * t, b0))
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory {
            u0: u0.clone(),
            b0: b0.clone(),
            times,
            u,
            b,
        })
    }

    /// Largest relative divergence residual over all stored states.
    pub fn max_divergence_residual(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.b)
            .map(SpectralField::divergence_residual)
            .fold(0.0, f64::max)
    }
}

fn check_initial(u0: &SpectralField, b0: &SpectralField) -> Result<()> {
    u0.require_vector()?;
    u0.check_same_shape(b0)?;
    for f in [u0, b0] {
        if !f.is_finite() {
            return Err(Error::NonFinite("initial data"));
        }
        let r = f.divergence_residual();
        if r > DIVERGENCE_TOLERANCE {
            return Err(Error::NotDivergenceFree(r));
        }
    }
    Ok(())
}

/// Right-hand sides `(W1(u,v) + W2(u,v) - W1(B,B), W3(u,B) - W3(B,u))`.
pub fn nonlinear_terms(
    u: &SpectralField,
    b: &SpectralField,
    specs: &Specs,
    cfg: &SolverConfig,
) -> Result<(SpectralField, SpectralField)> {
    let v = filtered_velocity(u, &specs.l3, cfg.alpha)?;
    let ((w1, w2), w1b) = rayon::join(
        || {
            rayon::join(
                || w1_alpha(u, &v, &specs.l3, cfg.alpha, cfg.dealias),
                || w2_alpha(u, &v, &specs.l3, cfg.alpha, cfg.dealias),
            )
        },
        || w1_alpha(b, b, &specs.l3, cfg.alpha, cfg.dealias),
    );
    let mut nu = w1?;
    nu.axpy(1.0, &w2?);
    nu.axpy(-1.0, &w1b?);
    let (a, c) = rayon::join(|| w3(u, b, cfg.dealias), || w3(b, u, cfg.dealias));
    let mut nb = a?;
    nb.axpy(-1.0, &c?);
    Ok((nu, nb))
}

/// One application of the fixed-point map `Φ = (Φ1, Φ2)` to `traj`.
pub fn duhamel_phi(
    u0: &SpectralField,
    b0: &SpectralField,
    traj: &Trajectory,
    specs: &Specs,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_initial(u0, b0)?;
    if traj.len() != cfg.nodes {
        return Err(Error::NodeMismatch(format!(
            "trajectory has {} nodes, configuration expects {}",
            traj.len(),
            cfg.nodes
        )));
    }
    let expected = cfg.times();
    if traj.times.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-12 * cfg.t_final) {
        return Err(Error::NodeMismatch("trajectory times differ from the configured nodes".into()));
    }
    traj.u0.check_same_shape(u0)?;

    let mut out = Trajectory::semigroup(u0, b0, specs, cfg)?;
    if !cfg.nonlinear {
        out.u = out.u.iter().map(leray_project).collect();
        out.b = out.b.iter().map(leray_project).collect();
        return Ok(out);
    }

    // N_m at every node, m = 0 using the initial data
    let rhs: Vec<(SpectralField, SpectralField)> = (0..=cfg.nodes)
        .into_par_iter()
        .map(|m| {
            let (u, b) = if m == 0 { (u0, b0) } else { traj.state(m) };
            nonlinear_terms(u, b, specs, cfg)
        })
        .collect::<Result<_>>()?;

    let grid = u0.grid();
    let h = cfg.step();
    let (wu, wb) = rayon::join(
        || StepWeights::new(grid, &specs.l1, cfg.nu1, h),
        || StepWeights::new(grid, &specs.l2, cfg.nu2, h),
    );
    let mut du = SpectralField::zero_vector(grid);
    let mut db = SpectralField::zero_vector(grid);
    for m in 0..cfg.nodes {
        step_integral(&mut du, &wu, &rhs[m].0, &rhs[m + 1].0);
        step_integral(&mut db, &wb, &rhs[m].1, &rhs[m + 1].1);
        out.u[m].axpy(-1.0, &du);
        out.b[m].axpy(-1.0, &db);
        out.u[m] = leray_project(&out.u[m]);
        out.b[m] = leray_project(&out.b[m]);
    }
    Ok(out)
}

/// `d ← e^{hL} d + h ψ(hL) left + h φ(hL) right`, mode-wise.
fn step_integral(d: &mut SpectralField, w: &StepWeights, left: &SpectralField, right: &SpectralField) {
    let comps = d.components_mut();
    for (c, comp) in comps.iter_mut().enumerate() {
        let (l, r) = (left.component(c), right.component(c));
        for idx in 0..comp.len() {
            comp[idx] = comp[idx] * w.decay[idx] + l[idx] * w.left[idx] + r[idx] * w.right[idx];
        }
    }
}

/// Suprema over the nodes entering the `X × Y` norms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedNorms {
    /// `sup ‖u(t) - e^{tL1}u0‖_{r0,p0}`.
    pub u_deviation: f64,
    /// `sup t^{a1} ‖u(t)‖_{r1,p1}`.
    pub u_weighted: f64,
    /// `sup ‖B(t) - e^{tL2}B0‖_{r2,p2}`.
    pub b_deviation: f64,
}

impl WeightedNorms {
    pub fn total(&self) -> f64 {
        self.u_deviation + self.u_weighted + self.b_deviation
    }
}

/// The `X × Y` suprema of `traj` relative to its own initial data.
pub fn trajectory_norms(traj: &Trajectory, specs: &Specs, cfg: &SolverConfig) -> Result<WeightedNorms> {
    let n = &cfg.norms;
    let mut out = WeightedNorms::default();
    for (m, &t) in traj.times.iter().enumerate() {
        let lin_u = apply_semigroup(&specs.l1, cfg.nu1 * t, &traj.u0)?;
        let lin_b = apply_semigroup(&specs.l2, cfg.nu2 * t, &traj.b0)?;
        out.u_deviation = out.u_deviation.max(sobolev_norm(&traj.u[m].sub(&lin_u)?, n.r0, n.p0)?);
        out.u_weighted = out.u_weighted.max(t.powf(cfg.a1) * sobolev_norm(&traj.u[m], n.r1, n.p1)?);
        out.b_deviation = out.b_deviation.max(sobolev_norm(&traj.b[m].sub(&lin_b)?, n.r2, n.p2)?);
    }
    Ok(out)
}

/// Weighted distance `sup‖Δu‖_{r0,p0} + sup t^{a1}‖Δu‖_{r1,p1} + sup‖ΔB‖_{r2,p2}`.
pub fn weighted_distance(a: &Trajectory, b: &Trajectory, cfg: &SolverConfig) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::NodeMismatch(format!("{} vs {} nodes", a.len(), b.len())));
    }
    let n = &cfg.norms;
    let parts: Vec<[f64; 3]> = (0..a.len())
        .into_par_iter()
        .map(|m| -> Result<[f64; 3]> {
            let du = a.u[m].sub(&b.u[m])?;
            let db = a.b[m].sub(&b.b[m])?;
            Ok([
                sobolev_norm(&du, n.r0, n.p0)?,
                a.times[m].powf(cfg.a1) * sobolev_norm(&du, n.r1, n.p1)?,
                sobolev_norm(&db, n.r2, n.p2)?,
            ])
        })
        .collect::<Result<_>>()?;
    let sup = |i: usize| parts.iter().map(|p| p[i]).fold(0.0, f64::max);
    Ok(sup(0) + sup(1) + sup(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionDiagnostics {
    /// Weighted norms `‖Φ^{k+1} - Φ^k‖`, one per sweep.
    pub iterate_residuals: Vec<f64>,
    /// Geometric mean of successive residual ratios; needs three residuals.
    pub estimated_ratio: Option<f64>,
    pub iterations: usize,
    pub weighted_norms: WeightedNorms,
}

/// `(r_last / r_first)^{1/(n-1)}`, the geometric mean of successive ratios.
pub fn estimated_ratio(residuals: &[f64]) -> Option<f64> {
    if residuals.len() < 3 {
        return None;
    }
    let (first, last) = (residuals[0], residuals[residuals.len() - 1]);
    (first > 0.0).then(|| (last / first).powf(1.0 / (residuals.len() - 1) as f64))
}

/// Picard iteration from the semigroup trajectory until the weighted residual
/// drops to `picard_tol`.
pub fn picard_solve(
    u0: &SpectralField,
    b0: &SpectralField,
    specs: &Specs,
    cfg: &SolverConfig,
) -> Result<(Trajectory, ContractionDiagnostics)> {
    cfg.validate()?;
    let n = &cfg.norms;
    let initial = sobolev_norm(u0, n.r0, n.p0)? + sobolev_norm(b0, n.r2, n.p2)?;
    let threshold = BLOWUP_FACTOR * initial;

    let mut traj = Trajectory::semigroup(u0, b0, specs, cfg)?;
    let mut residuals = Vec::new();
    for iteration in 1..=cfg.max_iters {
        let next = duhamel_phi(u0, b0, &traj, specs, cfg)?;
        let size = (0..next.len())
            .map(|m| -> Result<f64> { Ok(sobolev_norm(&next.u[m], n.r0, n.p0)? + sobolev_norm(&next.b[m], n.r2, n.p2)?) })
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)));
        let size = match size {
            Ok(v) => v,
            Err(Error::NonFinite(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if !size.is_finite() || (initial > 0.0 && size > threshold) {
            return Err(Error::Blowup {
                iteration,
                norm: size,
                threshold,
            });
        }
        let r = weighted_distance(&next, &traj, cfg)?;
        residuals.push(r);
        traj = next;
        if r <= cfg.picard_tol {
            let weighted_norms = trajectory_norms(&traj, specs, cfg)?;
            let diag = ContractionDiagnostics {
                estimated_ratio: estimated_ratio(&residuals),
                iterations: iteration,
                iterate_residuals: residuals,
                weighted_norms,
            };
            return Ok((traj, diag));
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iters,
        last_residual: residuals.last().copied().unwrap_or(f64::NAN),
        residuals,
    })
}

/// Per-node energy and constraint record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub t: f64,
    pub div_residual: f64,
    #[serde(rename = "E_kin")]
    pub e_kin: f64,
    #[serde(rename = "E_mag")]
    pub e_mag: f64,
    #[serde(rename = "E_filtered")]
    pub e_filtered: f64,
}

/// Diagnostics at `t = 0` and every node: divergence residual (worst of `u`
/// and `B`), `‖u‖²`, `‖B‖²` and `⟨u, v⟩`.
pub fn diagnostics(traj: &Trajectory, spec3: &MultiplierSpec, alpha: f64) -> Result<Vec<DiagnosticRow>> {
    (0..=traj.len())
        .map(|m| {
            let (u, b) = traj.state(m);
            let v = traj.filtered(m, spec3, alpha)?;
            Ok(DiagnosticRow {
                t: if m == 0 { 0.0 } else { traj.times[m - 1] },
                div_residual: u.divergence_residual().max(b.divergence_residual()),
                e_kin: u.energy(),
                e_mag: b.energy(),
                e_filtered: u.inner(&v),
            })
        })
        .collect()
}
