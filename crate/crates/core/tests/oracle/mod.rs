//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the FFT or operator code of the crate; fields are
//! only read through their coefficient accessors.
#![allow(dead_code)]

use std::collections::HashMap;

use gmhd_core::{Grid, SpectralField};
use num_complex::Complex64;

pub type Modes = HashMap<Vec<i64>, Vec<Complex64>>;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn in_band(k: &[i64], n: usize) -> bool {
    k.iter().all(|kj| 3 * kj.unsigned_abs() < n as u64)
}

/// Non-zero coefficients inside the 2/3 band, keyed by wave vector.
pub fn band_modes(f: &SpectralField) -> Modes {
    let grid = f.grid();
    let dim = grid.dim();
    let mut out = Modes::new();
    for idx in 0..grid.len() {
        let k = grid.wave_vector(idx)[..dim].to_vec();
        if !in_band(&k, grid.points_per_axis()) {
            continue;
        }
        let c: Vec<Complex64> = (0..f.n_components()).map(|c| f.component(c)[idx]).collect();
        if c.iter().any(|v| v.norm() > 0.0) {
            out.insert(k, c);
        }
    }
    out
}

/// Exact (non-periodic) convolution of component `ca` of `a` with component
/// `cb` of `b`, restricted to the band.
pub fn convolve(a: &Modes, ca: usize, b: &Modes, cb: usize, n: usize) -> HashMap<Vec<i64>, Complex64> {
    let mut out = HashMap::new();
    for (p, ap) in a {
        for (q, bq) in b {
            let k: Vec<i64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            if !in_band(&k, n) {
                continue;
            }
            *out.entry(k).or_insert(Complex64::new(0.0, 0.0)) += ap[ca] * bq[cb];
        }
    }
    out
}

fn k2(k: &[i64]) -> f64 {
    k.iter().map(|&x| (x * x) as f64).sum()
}

/// `Σ_i ∂_i (x_i y_j)`.
pub fn tensor_divergence(x: &Modes, y: &Modes, dim: usize, n: usize) -> Modes {
    let mut out = Modes::new();
    for j in 0..dim {
        for i in 0..dim {
            for (k, v) in convolve(x, i, y, j, n) {
                let e = out.entry(k.clone()).or_insert(vec![Complex64::new(0.0, 0.0); dim]);
                e[j] += I * k[i] as f64 * v;
            }
        }
    }
    out
}

/// `(x·∇) y`, component `j` is `Σ_i x_i ∂_i y_j`.
pub fn advection(x: &Modes, y: &Modes, dim: usize, n: usize) -> Modes {
    let mut out = Modes::new();
    for i in 0..dim {
        let dy: Modes = y
            .iter()
            .map(|(q, c)| (q.clone(), c.iter().map(|v| I * q[i] as f64 * v).collect()))
            .collect();
        for j in 0..dim {
            for (k, v) in convolve(x, i, &dy, j, n) {
                out.entry(k).or_insert(vec![Complex64::new(0.0, 0.0); dim])[j] += v;
            }
        }
    }
    out
}

/// `Σ_i y_i ∂_j x_i`.
pub fn gradient_contraction(x: &Modes, y: &Modes, dim: usize, n: usize) -> Modes {
    let mut out = Modes::new();
    for j in 0..dim {
        for i in 0..dim {
            let dx: Modes = x
                .iter()
                .map(|(q, c)| (q.clone(), c.iter().map(|v| I * q[j] as f64 * v).collect()))
                .collect();
            for (k, v) in convolve(y, i, &dx, i, n) {
                out.entry(k).or_insert(vec![Complex64::new(0.0, 0.0); dim])[j] += v;
            }
        }
    }
    out
}

/// Mode-wise `1/(1 + |k|^γ/g(|k|))` for a caller-supplied scalar `g`.
pub fn helmholtz_inverse(f: &Modes, gamma: f64, g: impl Fn(f64) -> f64) -> Modes {
    f.iter()
        .map(|(k, c)| {
            let s = k2(k).sqrt();
            let factor = if s == 0.0 { 1.0 } else { 1.0 / (1.0 + s.powf(gamma) / g(s)) };
            (k.clone(), c.iter().map(|v| v * factor).collect())
        })
        .collect()
}

/// Explicit projection matrix `δ_ij - k_i k_j/|k|²`.
pub fn leray(f: &Modes) -> Modes {
    f.iter()
        .map(|(k, c)| {
            let kk = k2(k);
            if kk == 0.0 {
                return (k.clone(), c.clone());
            }
            let dim = c.len();
            let out = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            let delta = if i == j { 1.0 } else { 0.0 };
                            c[j] * (delta - (k[i] * k[j]) as f64 / kk)
                        })
                        .sum()
                })
                .collect();
            (k.clone(), out)
        })
        .collect()
}

pub fn sub(a: &Modes, b: &Modes) -> Modes {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(k.clone()).or_insert(vec![Complex64::new(0.0, 0.0); c.len()]);
        for (x, y) in e.iter_mut().zip(c) {
            *x -= y;
        }
    }
    out
}

/// Largest coefficient difference between a field and oracle modes; modes
/// absent from the oracle must vanish in the field.
pub fn max_deviation(field: &SpectralField, oracle: &Modes) -> f64 {
    let grid: Grid = field.grid();
    let dim = grid.dim();
    let mut worst: f64 = 0.0;
    for idx in 0..grid.len() {
        let k = grid.wave_vector(idx)[..dim].to_vec();
        for c in 0..field.n_components() {
            let expect = oracle.get(&k).map(|v| v[c]).unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((field.component(c)[idx] - expect).norm());
        }
    }
    worst
}

/// Divergence-free real single mode on a 2-D grid: amplitude `a k^⊥`.
pub fn solenoidal_mode_2d(grid: Grid, k: [i64; 2], a: Complex64) -> SpectralField {
    let amp = [a * (-k[1] as f64), a * k[0] as f64];
    SpectralField::real_mode(grid, &k, &amp).unwrap()
}
