use std::fs;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::QuantumState;
use crate::algebra::AlgebraRep;
use crate::error::{Error, Result};

pub const STATE_SCHEMA: &str = "qdof.state/v1";

/// A state on disk: a pointer to its rep manifest plus the amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub schema: String,
    /// path of the rep manifest, relative to the state file
    pub rep_manifest: String,
    pub dim: usize,
    /// `[re, im]` pairs
    pub amplitudes: Vec<[f64; 2]>,
}

pub fn write_state(state: &QuantumState, rep_manifest: &str, path: &Path) -> Result<()> {
    let file = StateFile {
        schema: STATE_SCHEMA.into(),
        rep_manifest: rep_manifest.into(),
        dim: state.dim(),
        amplitudes: state.as_slice().iter().map(|z| [z.re, z.im]).collect(),
    };
    fs::write(path, serde_json::to_string(&file)?)?;
    Ok(())
}

/// Reads a state and checks it against `rep`.
pub fn read_state(path: &Path, rep: &AlgebraRep) -> Result<QuantumState> {
    let file: StateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if file.schema != STATE_SCHEMA {
        return Err(Error::Config(format!("unsupported state schema `{}`", file.schema)));
    }
    if file.dim != file.amplitudes.len() {
        return Err(Error::DimensionMismatch { expected: file.dim, found: file.amplitudes.len() });
    }
    let v = DVector::from_iterator(file.dim, file.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)));
    QuantumState::new(v, rep)
}

/// One row of a (q, p) grid export.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRow {
    pub coords: Vec<f64>,
    pub delta: f64,
}

/// CSV with columns `q1,p1,...,qm,pm,delta_g`.
pub fn write_grid_csv(path: &Path, rows: &[GridRow]) -> Result<()> {
    let pairs = rows.first().map_or(0, |r| r.coords.len() / 2);
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (1..=pairs).flat_map(|i| [format!("q{i}"), format!("p{i}")]).collect();
    header.push("delta_g".into());
    w.write_record(&header)?;
    for row in rows {
        if row.coords.len() != 2 * pairs {
            return Err(Error::DimensionMismatch { expected: 2 * pairs, found: row.coords.len() });
        }
        let mut rec: Vec<String> = row.coords.iter().map(|x| format!("{x:.17e}")).collect();
        rec.push(format!("{:.17e}", row.delta));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
