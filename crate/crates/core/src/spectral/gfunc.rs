use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Damping function `g` in the multiplier symbol `-|ξ|^γ / g(|ξ|)`.
///
/// All families satisfy `g >= 1` and are non-decreasing; `unit` and `log`
/// have `g(0) = 1`, while `loglog(0) = ln(e + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GFunction {
    /// `g(s) = 1`
    #[default]
    Unit,
    /// `g(s) = ln(e + s)`
    Log,
    /// `g(s) = ln(e + ln(e + s))`
    LogLog,
}

impl GFunction {
    pub const ALL: [GFunction; 3] = [GFunction::Unit, GFunction::Log, GFunction::LogLog];

    #[inline]
    pub fn eval(self, s: f64) -> f64 {
        let e = std::f64::consts::E;
        match self {
            GFunction::Unit => 1.0,
            GFunction::Log => (e + s).ln(),
            GFunction::LogLog => (e + (e + s).ln()).ln(),
        }
    }

    /// Samples `g` on `[0, s_max]` and confirms `g >= 1` and monotonicity.
    pub fn check_shape(self, s_max: f64, samples: usize) -> bool {
        let mut prev = self.eval(0.0);
        if prev < 1.0 {
            return false;
        }
        for i in 1..=samples {
            let s = s_max * i as f64 / samples as f64;
            let v = self.eval(s);
            if v < 1.0 || v < prev {
                return false;
            }
            prev = v;
        }
        true
    }

    pub fn name(self) -> &'static str {
        match self {
            GFunction::Unit => "unit",
            GFunction::Log => "log",
            GFunction::LogLog => "loglog",
        }
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unit" | "1" => Ok(GFunction::Unit),
            "log" => Ok(GFunction::Log),
            "loglog" => Ok(GFunction::LogLog),
            other => Err(Error::InvalidMultiplier(format!(
                "unknown g family '{other}' (expected unit, log or loglog)"
            ))),
        }
    }
}
