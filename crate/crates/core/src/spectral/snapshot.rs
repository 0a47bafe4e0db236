//! Binary field snapshots.
//!
//! Layout (little-endian):
//!
//! | bytes | content                      |
//! |-------|------------------------------|
//! | 4     | magic `GMHD`                 |
//! | 4     | version (`u32`, currently 1) |
//! | 4     | dim (`u32`)                  |
//! | 4     | points per axis N (`u32`)    |
//! | 4     | component count (`u32`)      |
//! | 8     | time (`f64`)                 |
//!
//! followed, component by component, by the `N^dim` coefficients in row-major
//! order as interleaved `(re, im)` pairs of `f64`.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::{Grid, SpectralField};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"GMHD";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 28;

pub fn write_snapshot<W: Write>(mut w: W, field: &SpectralField, time: f64) -> Result<()> {
    let grid = field.grid();
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(grid.dim() as u32)?;
    w.write_u32::<LittleEndian>(grid.points_per_axis() as u32)?;
    w.write_u32::<LittleEndian>(field.n_components() as u32)?;
    w.write_f64::<LittleEndian>(time)?;
    for comp in field.components() {
        for c in comp {
            w.write_f64::<LittleEndian>(c.re)?;
            w.write_f64::<LittleEndian>(c.im)?;
        }
    }
    Ok(())
}

/// Returns the field and its time stamp.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<(SpectralField, f64)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Snapshot(format!("bad magic {magic:?}")));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let dim = r.read_u32::<LittleEndian>()? as usize;
    let n = r.read_u32::<LittleEndian>()? as usize;
    let count = r.read_u32::<LittleEndian>()? as usize;
    let time = r.read_f64::<LittleEndian>()?;
    let grid = Grid::new(dim, n).map_err(|e| Error::Snapshot(e.to_string()))?;
    let mut components = Vec::with_capacity(count);
    for _ in 0..count {
        let mut comp = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = r.read_f64::<LittleEndian>()?;
            let im = r.read_f64::<LittleEndian>()?;
            comp.push(Complex64::new(re, im));
        }
        components.push(comp);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::Snapshot("trailing bytes after coefficients".into()));
    }
    Ok((SpectralField::from_raw_coefficients(grid, components)?, time))
}
