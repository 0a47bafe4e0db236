//! Torus grids, spectral vector fields and the Fourier multipliers of the
//! gMHD-α system.

mod fft;
mod field;
mod gfunc;
mod grid;
mod ops;
pub mod snapshot;

pub use field::SpectralField;
pub use gfunc::GFunction;
pub use grid::Grid;
pub use ops::{
    apply_helmholtz_inverse, apply_multiplier, apply_semigroup, bessel_potential, lebesgue_norm,
    leray_project, sobolev_norm, symbol_eval, MultiplierSpec,
};

/// Replaces complex physical samples with their Fourier coefficients.
pub(crate) fn forward_in_place(f: &mut SpectralField) {
    let grid = f.grid();
    for comp in f.components_mut() {
        fft::forward(&grid, comp);
    }
}
