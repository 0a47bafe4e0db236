//! Exact exponential weights for the product trapezoid rule.
//!
//! On an interval of length `h` with mode-wise rate `λ ≤ 0` and `z = λh`,
//! `∫ e^{λ(t-s)} N(s) ds` with `N` linear between its endpoint values `N_a`,
//! `N_b` equals `h (ψ(z) N_a + φ(z) N_b)` when `t` is the right endpoint.

use crate::spectral::{Grid, MultiplierSpec};

/// `∫_0^1 θ e^{zθ} dθ = (e^z (z - 1) + 1) / z²`: weight of the left endpoint.
pub fn psi(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        // 1/2 + z/3 + z²/8 + z³/30 + z^4/144
        0.5 + z * (1.0 / 3.0 + z * (0.125 + z * (1.0 / 30.0 + z / 144.0)))
    } else {
        (z.exp() * (z - 1.0) + 1.0) / (z * z)
    }
}

/// `∫_0^1 (1 - θ) e^{zθ} dθ = (e^z - 1 - z) / z²`: weight of the right endpoint.
pub fn phi(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        // 1/2 + z/6 + z²/24 + z³/120 + z^4/720
        0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)))
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Per-mode step data for one operator `ν L`.
#[derive(Debug, Clone)]
pub(crate) struct StepWeights {
    pub decay: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl StepWeights {
    pub fn new(grid: Grid, spec: &MultiplierSpec, nu: f64, h: f64) -> Self {
        let n = grid.len();
        let mut w = StepWeights {
            decay: Vec::with_capacity(n),
            left: Vec::with_capacity(n),
            right: Vec::with_capacity(n),
        };
        for idx in 0..n {
            let z = h * nu * spec.symbol_k2(grid.k_squared(idx));
            w.decay.push(z.exp());
            w.left.push(h * psi(z));
            w.right.push(h * phi(z));
        }
        w
    }
}
