//! Snapshot series on disk.
//!
//! CSV with header `t,id,x[,y],vx[,vy],m,h,rho`, one row per particle per
//! snapshot time, every number written with 17 significant digits so that
//! parsing reproduces the in-memory values bit for bit. The `y` columns
//! are present exactly for two-dimensional runs.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{Diagnostics, Snapshot, SnapshotSeries};
use crate::kernels::Dimension;
use crate::sph::ParticleState;
use crate::vector::Vec2;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(dim: Dimension) -> &'static [&'static str] {
    match dim {
        Dimension::One => &["t", "id", "x", "vx", "m", "h", "rho"],
        Dimension::Two => &["t", "id", "x", "y", "vx", "vy", "m", "h", "rho"],
    }
}

pub fn write_series_csv<W: Write>(series: &SnapshotSeries, out: W) -> Result<()> {
    let dim = series
        .snapshots
        .first()
        .map(|s| s.state.dim)
        .ok_or_else(|| Error::Format("empty snapshot series".into()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(dim))?;
    let mut row = Vec::with_capacity(9);
    for snap in &series.snapshots {
        let s = &snap.state;
        if s.dim != dim {
            return Err(Error::Format("mixed dimensions in one series".into()));
        }
        for i in 0..s.len() {
            row.clear();
            row.push(num(snap.time));
            row.push(i.to_string());
            row.push(num(s.positions[i].x));
            if dim == Dimension::Two {
                row.push(num(s.positions[i].y));
            }
            row.push(num(s.velocities[i].x));
            if dim == Dimension::Two {
                row.push(num(s.velocities[i].y));
            }
            row.push(num(s.masses[i]));
            row.push(num(s.smoothing_lengths[i]));
            row.push(num(s.densities[i]));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Parses a series written by [`write_series_csv`]. Diagnostics are
/// recomputed from the particles; total energy is not recoverable and is
/// left empty.
pub fn read_series_csv<R: Read>(input: R) -> Result<SnapshotSeries> {
    let mut r = csv::Reader::from_reader(input);
    let head: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let dim = if head == header(Dimension::One) {
        Dimension::One
    } else if head == header(Dimension::Two) {
        Dimension::Two
    } else {
        return Err(Error::Format(format!("unexpected snapshot header {head:?}")));
    };
    let two = dim == Dimension::Two;
    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut current: Option<(f64, Vec<[f64; 7]>)> = None;
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let field = |k: usize| -> Result<f64> {
            record
                .get(k)
                .ok_or_else(|| Error::Format(format!("row {}: missing column {k}", line + 2)))?
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("row {}: {e}", line + 2)))
        };
        let t = field(0)?;
        let id: usize = record[1]
            .parse()
            .map_err(|e| Error::Format(format!("row {}: {e}", line + 2)))?;
        let values = if two {
            [field(2)?, field(3)?, field(4)?, field(5)?, field(6)?, field(7)?, field(8)?]
        } else {
            [field(2)?, 0.0, field(3)?, 0.0, field(4)?, field(5)?, field(6)?]
        };
        let same = matches!(&current, Some((ct, _)) if ct.to_bits() == t.to_bits());
        if !same {
            if let Some((ct, rows)) = current.take() {
                snapshots.push(snapshot_from_rows(dim, ct, rows)?);
            }
            current = Some((t, Vec::new()));
        }
        let rows = &mut current.as_mut().expect("current snapshot").1;
        if id != rows.len() {
            return Err(Error::Format(format!("row {}: particle ids out of order", line + 2)));
        }
        rows.push(values);
    }
    if let Some((ct, rows)) = current {
        snapshots.push(snapshot_from_rows(dim, ct, rows)?);
    }
    if snapshots.is_empty() {
        return Err(Error::Format("snapshot file has no rows".into()));
    }
    Ok(SnapshotSeries { snapshots })
}

fn snapshot_from_rows(dim: Dimension, time: f64, rows: Vec<[f64; 7]>) -> Result<Snapshot> {
    let positions = rows.iter().map(|r| Vec2::new(r[0], r[1])).collect();
    let velocities = rows.iter().map(|r| Vec2::new(r[2], r[3])).collect();
    let masses = rows.iter().map(|r| r[4]).collect();
    let h = rows.iter().map(|r| r[5]).collect();
    let mut state = ParticleState::new(dim, positions, velocities, masses, h)?;
    state.densities = rows.iter().map(|r| r[6]).collect();
    Ok(Snapshot {
        time,
        diagnostics: Diagnostics {
            total_mass: state.total_mass(),
            momentum: state.momentum(),
            kinetic_energy: state.kinetic_energy(),
            total_energy: None,
        },
        state,
    })
}

/// JSON companion of a snapshot CSV: the configuration that produced it and
/// the per-snapshot diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSidecar {
    pub experiment: String,
    /// Resolution parameter as given on the command line (`l` for the
    /// droplet, `N` for the shock tube).
    pub level: usize,
    pub particles: usize,
    pub dimension: u8,
    pub config: serde_json::Value,
    pub times: Vec<f64>,
    pub diagnostics: Vec<Diagnostics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
}

impl SeriesSidecar {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
