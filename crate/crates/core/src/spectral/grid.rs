use std::fmt;

use crate::error::{Error, Result};

/// Uniform grid on the torus `[0, 2π)^dim` with `points_per_axis` samples per
/// axis. Coefficient arrays are stored row-major, axis 0 slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if points_per_axis < 8 || !points_per_axis.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be even and >= 8, got {points_per_axis}"
            )));
        }
        Ok(Grid {
            dim,
            n: points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    /// Total number of grid points (and of Fourier modes).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed wavenumber for FFT slot `i`, in `[-N/2, N/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    #[inline]
    fn slot(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Wave vector of flat index `idx`; unused trailing entries are zero.
    #[inline]
    pub fn wave_vector(&self, idx: usize) -> [i64; 3] {
        let mut k = [0i64; 3];
        let mut rest = idx;
        for axis in (0..self.dim).rev() {
            k[axis] = self.wavenumber(rest % self.n);
            rest /= self.n;
        }
        k
    }

    /// Flat index of wave vector `k` (taken modulo N on each axis).
    pub fn index_of(&self, k: &[i64]) -> usize {
        k.iter()
            .take(self.dim)
            .fold(0usize, |acc, &kj| acc * self.n + self.slot(kj))
    }

    /// Flat index of `-k`.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let k = self.wave_vector(idx);
        let neg = [-k[0], -k[1], -k[2]];
        self.index_of(&neg[..self.dim])
    }

    #[inline]
    pub fn k_squared(&self, idx: usize) -> f64 {
        let k = self.wave_vector(idx);
        k.iter().map(|&kj| (kj * kj) as f64).sum()
    }

    /// True when any component of the wave vector sits on the Nyquist plane
    /// `k_j = -N/2`, where `-k` aliases back onto `k`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = (self.n / 2) as i64;
        self.wave_vector(idx)[..self.dim].iter().any(|&kj| kj == -half)
    }

    /// Physical coordinate of grid point `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = 2.0 * std::f64::consts::PI / self.n as f64;
        let mut x = [0.0; 3];
        let mut rest = idx;
        for axis in (0..self.dim).rev() {
            x[axis] = (rest % self.n) as f64 * h;
            rest /= self.n;
        }
        x
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.n, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(2, 6).is_err());
        assert!(Grid::new(2, 9).is_err());
        assert!(Grid::new(4, 16).is_err());
        assert!(Grid::new(3, 8).is_ok());
    }

    #[test]
    fn wave_vectors_cover_half_open_band() {
        let g = Grid::new(2, 8).unwrap();
        let mut seen = std::collections::HashSet::new();
        for idx in 0..g.len() {
            let k = g.wave_vector(idx);
            assert!(k[0] >= -4 && k[0] < 4 && k[1] >= -4 && k[1] < 4);
            assert_eq!(g.index_of(&k[..2]), idx);
            seen.insert((k[0], k[1]));
        }
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn conjugate_index_negates() {
        let g = Grid::new(3, 8).unwrap();
        let idx = g.index_of(&[1, -2, 3]);
        assert_eq!(g.wave_vector(g.conjugate_index(idx)), [-1, 2, -3]);
        let nyq = g.index_of(&[-4, 0, 0]);
        assert_eq!(g.conjugate_index(nyq), nyq);
        assert!(g.is_nyquist(nyq));
    }
}
