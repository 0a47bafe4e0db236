use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{DiagnosticRow, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::snapshot::write_snapshot;

/// Writes diagnostics as CSV with header `t,div_residual,E_kin,E_mag,E_filtered`.
pub fn write_diagnostics_csv<W: Write>(out: W, rows: &[DiagnosticRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `u_NNNN.bin` and `b_NNNN.bin` for node `0..=M` into `dir`.
pub fn write_trajectory_snapshots(dir: &Path, traj: &Trajectory) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(2 * (traj.len() + 1));
    for m in 0..=traj.len() {
        let (u, b) = traj.state(m);
        let t = if m == 0 { 0.0 } else { traj.times[m - 1] };
        for (name, field) in [("u", u), ("b", b)] {
            let path = dir.join(format!("{name}_{m:04}.bin"));
            let mut w = BufWriter::new(File::create(&path)?);
            write_snapshot(&mut w, field, t)?;
            w.flush()?;
            written.push(path);
        }
    }
    Ok(written)
}
