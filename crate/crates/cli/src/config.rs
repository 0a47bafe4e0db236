//! TOML configuration schema. Every section maps onto one core type; unknown
//! keys are rejected so typos surface as line-anchored errors.

use std::fs;
use std::path::{Path, PathBuf};

use gmhd_core::checker::{SpecialCase, SpecialParams, TheoremInstance};
use gmhd_core::nonlinear::DealiasRule;
use gmhd_core::solver::{NormParams, SolverConfig};
use gmhd_core::GFunction;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

/// Reads and parses `path`, anchoring parse errors to a line.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text, path)
}

pub fn parse<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        CliError::Config {
            location: match line {
                Some(l) => format!("{}:{l}", path.display()),
                None => path.display().to_string(),
            },
            message: e.message().trim().to_string(),
        }
    })
}

const fn default_epsilon() -> f64 {
    TheoremInstance::DEFAULT_EPSILON
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSection {
    pub n: u32,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl From<&InstanceSection> for TheoremInstance {
    fn from(s: &InstanceSection) -> Self {
        TheoremInstance {
            n: s.n,
            r0: s.r0,
            r1: s.r1,
            r2: s.r2,
            p0: s.p0,
            p1: s.p1,
            p2: s.p2,
            gamma1: s.gamma1,
            gamma2: s.gamma2,
            gamma3: s.gamma3,
            epsilon: s.epsilon,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialSection {
    pub kind: SpecialCase,
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl SpecialSection {
    pub fn params(&self) -> SpecialParams {
        SpecialParams {
            n: self.n,
            p: self.p,
            q: self.q,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            gamma3: self.gamma3,
            epsilon: self.epsilon,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// `check` and `sweep`: exactly one of `[instance]` / `[special]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    pub instance: Option<InstanceSection>,
    pub special: Option<SpecialSection>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorsSection {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    #[serde(default)]
    pub g1: GFunction,
    #[serde(default)]
    pub g2: GFunction,
    #[serde(default)]
    pub g3: GFunction,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub nodes: usize,
    pub picard_tol: f64,
    pub max_iters: usize,
    pub a1: f64,
    pub alpha: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub dealias: DealiasRule,
    pub nonlinear: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSection {
            t_final: d.t_final,
            nodes: d.nodes,
            picard_tol: d.picard_tol,
            max_iters: d.max_iters,
            a1: d.a1,
            alpha: d.alpha,
            nu1: d.nu1,
            nu2: d.nu2,
            dealias: d.dealias,
            nonlinear: d.nonlinear,
        }
    }
}

impl SolverSection {
    pub fn config(&self, norms: NormParams) -> SolverConfig {
        SolverConfig {
            t_final: self.t_final,
            nodes: self.nodes,
            picard_tol: self.picard_tol,
            max_iters: self.max_iters,
            a1: self.a1,
            alpha: self.alpha,
            nu1: self.nu1,
            nu2: self.nu2,
            dealias: self.dealias,
            norms,
            nonlinear: self.nonlinear,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormsSection {
    pub r0: f64,
    pub p0: f64,
    pub r1: f64,
    pub p1: f64,
    pub r2: f64,
    pub p2: f64,
}

impl Default for NormsSection {
    fn default() -> Self {
        let d = NormParams::default();
        NormsSection {
            r0: d.r0,
            p0: d.p0,
            r1: d.r1,
            p1: d.p1,
            r2: d.r2,
            p2: d.p2,
        }
    }
}

impl From<NormsSection> for NormParams {
    fn from(s: NormsSection) -> Self {
        NormParams {
            r0: s.r0,
            p0: s.p0,
            r1: s.r1,
            p1: s.p1,
            r2: s.r2,
            p2: s.p2,
        }
    }
}

/// Named analytic families of divergence-free initial data.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialField {
    Zero,
    SingleMode {
        k: Vec<i64>,
        amplitude: f64,
    },
    TaylorGreenLike {
        amplitude: f64,
    },
    RandomBandLimited {
        band: i64,
        /// L² norm of the projected field.
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub u: InitialField,
    pub b: InitialField,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSection,
    pub operators: OperatorsSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub norms: NormsSection,
    pub initial: InitialSection,
    /// Write per-node snapshot files (default on).
    #[serde(default = "yes")]
    pub snapshots: bool,
}

const fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub seed: u64,
    pub verify: VerifySection,
}

fn default_sizes() -> Vec<usize> {
    vec![16, 32, 64]
}

const fn default_trials() -> usize {
    8
}

/// One estimate verifier and its parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerifySection {
    Semigroup {
        gamma: f64,
        #[serde(default)]
        g: GFunction,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        r1: f64,
        p1: f64,
        r2: f64,
        p2: f64,
        dim: usize,
        n: usize,
        t_min: f64,
        t_max: f64,
        #[serde(default = "default_t_points")]
        t_points: usize,
        #[serde(default = "default_trials")]
        trials: usize,
        /// Accepted relative error of the fitted exponent.
        #[serde(default = "default_slope_tolerance")]
        tolerance: f64,
    },
    Inverse {
        gamma: f64,
        #[serde(default)]
        g: GFunction,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        r: f64,
        p: f64,
        dim: usize,
        #[serde(default = "default_sizes")]
        sizes: Vec<usize>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "default_inverse_growth")]
        max_growth: f64,
    },
    Integral {
        a: f64,
        b: f64,
        #[serde(rename = "T")]
        t: f64,
        #[serde(default = "default_quad_points")]
        quad_points: usize,
        #[serde(default = "default_integral_tolerance")]
        tolerance: f64,
    },
    Embedding {
        s: f64,
        r: f64,
        p: f64,
        dim: usize,
        #[serde(default = "default_sizes")]
        sizes: Vec<usize>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "default_growth")]
        max_growth: f64,
    },
    Product {
        r: f64,
        p: f64,
        p1: f64,
        p2: f64,
        q1: f64,
        q2: f64,
        dim: usize,
        #[serde(default = "default_product_sizes")]
        sizes: Vec<usize>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "default_growth")]
        max_growth: f64,
    },
}

const fn default_t_points() -> usize {
    9
}

const fn default_slope_tolerance() -> f64 {
    0.1
}

const fn default_inverse_growth() -> f64 {
    0.05
}

const fn default_growth() -> f64 {
    0.10
}

fn default_product_sizes() -> Vec<usize> {
    vec![16, 32]
}

const fn default_quad_points() -> usize {
    400
}

const fn default_integral_tolerance() -> f64 {
    1e-6
}

/// Output directory, created on demand.
pub fn ensure_dir(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir.to_path_buf())
}
