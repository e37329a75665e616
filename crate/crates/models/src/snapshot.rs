//! CSV export of grid fields.

use std::io::Write;

use epavf_spectral::SpectralGrid;

use crate::error::{ModelError, Result};

/// Writes one row per grid point: `t`, the coordinates, then each field.
pub fn write_snapshot_csv<W: Write>(
    out: W,
    grid: &SpectralGrid,
    t: f64,
    fields: &[(&str, &[f64])],
    header: bool,
) -> Result<()> {
    let pts = grid.points();
    if let Some((name, f)) = fields.iter().find(|(_, f)| f.len() != pts.len()) {
        return Err(ModelError::InvalidParams(format!(
            "field {name} has {} values for {} points",
            f.len(),
            pts.len()
        )));
    }
    let two_d = grid.dimension() == 2;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| ModelError::InvalidParams(format!("snapshot write failed: {e}"));
    if header {
        let mut cols = vec!["t", "x"];
        if two_d {
            cols.push("y");
        }
        cols.extend(fields.iter().map(|(n, _)| *n));
        w.write_record(&cols).map_err(io)?;
    }
    for (k, &(x, y)) in pts.iter().enumerate() {
        let mut rec = vec![format!("{t:.17e}"), format!("{x:.17e}")];
        if two_d {
            rec.push(format!("{y:.17e}"));
        }
        rec.extend(fields.iter().map(|(_, f)| format!("{:.17e}", f[k])));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| ModelError::InvalidParams(format!("snapshot write failed: {e}")))?;
    Ok(())
}
