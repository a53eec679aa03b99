//! On-disk form of a representation: a JSON manifest plus a little-endian
//! binary blob holding the sparse operator entries.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AlgebraKind, AlgebraRep, Factor, Generator};
use crate::error::{Error, Result};
use crate::linalg::Operator;

pub const REP_SCHEMA: &str = "qdof.rep/v1";
const BLOB_MAGIC: &[u8; 8] = b"QDOFREP1";
const ENTRY_BYTES: usize = 4 + 4 + 8 + 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEntry {
    pub label: String,
    pub role: OperatorRole,
    pub hermitian: bool,
    pub quantumness: bool,
    pub nnz: usize,
    /// byte offset of the first entry in the blob
    pub offset: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorRole {
    Generator,
    Casimir,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepManifest {
    pub schema: String,
    pub kind: AlgebraKind,
    pub dim_hilbert: usize,
    pub rank: usize,
    pub dim_algebra: usize,
    pub truncated: bool,
    pub factors: Vec<Factor>,
    pub operators: Vec<OperatorEntry>,
    /// blob file name, relative to the manifest
    pub blob: String,
    pub blob_layout: String,
}

/// Writes `<stem>.json` and `<stem>.bin` into `dir`.
pub fn write_rep(rep: &AlgebraRep, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let mut blob = BLOB_MAGIC.to_vec();
    let mut operators = Vec::new();
    let tagged = rep
        .generators
        .iter()
        .map(|g| (OperatorRole::Generator, g))
        .chain(rep.chain_casimirs.iter().map(|g| (OperatorRole::Casimir, g)));
    for (role, g) in tagged {
        let offset = blob.len();
        let mut nnz = 0;
        for (r, c, v) in g.op.triplets() {
            blob.extend_from_slice(&(r as u32).to_le_bytes());
            blob.extend_from_slice(&(c as u32).to_le_bytes());
            blob.extend_from_slice(&v.re.to_le_bytes());
            blob.extend_from_slice(&v.im.to_le_bytes());
            nnz += 1;
        }
        operators.push(OperatorEntry {
            label: g.label.clone(),
            role,
            hermitian: g.hermitian,
            quantumness: g.quantumness,
            nnz,
            offset,
        });
    }
    let bin_name = format!("{stem}.bin");
    let manifest = RepManifest {
        schema: REP_SCHEMA.to_string(),
        kind: rep.kind.clone(),
        dim_hilbert: rep.dim_hilbert,
        rank: rep.rank,
        dim_algebra: rep.dim_algebra,
        truncated: rep.truncated,
        factors: rep.factors.clone(),
        operators,
        blob: bin_name.clone(),
        blob_layout: "magic QDOFREP1, then per entry: u32 row, u32 col, f64 re, f64 im (little-endian)".into(),
    };
    let json_path = dir.join(format!("{stem}.json"));
    let bin_path = dir.join(bin_name);
    fs::write(&bin_path, blob)?;
    fs::write(&json_path, serde_json::to_string_pretty(&manifest)?)?;
    Ok((json_path, bin_path))
}

pub fn read_rep(manifest_path: &Path) -> Result<AlgebraRep> {
    let manifest: RepManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    if manifest.schema != REP_SCHEMA {
        return Err(Error::Config(format!("unsupported rep schema `{}`", manifest.schema)));
    }
    let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
    let blob = fs::read(dir.join(&manifest.blob))?;
    if blob.len() < BLOB_MAGIC.len() || &blob[..BLOB_MAGIC.len()] != BLOB_MAGIC {
        return Err(Error::Config("rep blob has a bad magic tag".into()));
    }
    let n = manifest.dim_hilbert;
    let mut generators = Vec::new();
    let mut casimirs = Vec::new();
    for entry in &manifest.operators {
        let end = entry.offset + entry.nnz * ENTRY_BYTES;
        if end > blob.len() {
            return Err(Error::Config(format!("rep blob truncated in `{}`", entry.label)));
        }
        let mut triplets = Vec::with_capacity(entry.nnz);
        for chunk in blob[entry.offset..end].chunks_exact(ENTRY_BYTES) {
            let r = u32::from_le_bytes(chunk[0..4].try_into().unwrap()) as usize;
            let c = u32::from_le_bytes(chunk[4..8].try_into().unwrap()) as usize;
            let re = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[16..24].try_into().unwrap());
            if r >= n || c >= n {
                return Err(Error::Config(format!("entry out of range in `{}`", entry.label)));
            }
            triplets.push((r, c, Complex64::new(re, im)));
        }
        let g = Generator {
            label: entry.label.clone(),
            op: Operator::from_triplets(n, n, triplets),
            hermitian: entry.hermitian,
            quantumness: entry.quantumness,
        };
        match entry.role {
            OperatorRole::Generator => generators.push(g),
            OperatorRole::Casimir => casimirs.push(g),
        }
    }
    Ok(AlgebraRep {
        kind: manifest.kind,
        dim_hilbert: n,
        generators,
        rank: manifest.rank,
        dim_algebra: manifest.dim_algebra,
        chain_casimirs: casimirs,
        truncated: manifest.truncated,
        factors: manifest.factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_h4_rep, build_su3_symmetric_rep, direct_sum_rep};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rep = direct_sum_rep(&[build_h4_rep(4).unwrap(), build_su3_symmetric_rep(2).unwrap()]).unwrap();
        let (json, _) = write_rep(&rep, dir.path(), "rep").unwrap();
        let back = read_rep(&json).unwrap();
        assert_eq!(back.kind, rep.kind);
        assert_eq!(back.generators.len(), rep.generators.len());
        for (a, b) in back.generators.iter().zip(&rep.generators) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.op, b.op);
        }
        assert_eq!(back.chain_casimirs.len(), rep.chain_casimirs.len());
    }

    #[test]
    fn rejects_foreign_schema() {
        let dir = tempfile::tempdir().unwrap();
        let rep = build_h4_rep(3).unwrap();
        let (json, _) = write_rep(&rep, dir.path(), "h").unwrap();
        let text = fs::read_to_string(&json).unwrap().replace(REP_SCHEMA, "other/v9");
        fs::write(&json, text).unwrap();
        assert!(matches!(read_rep(&json), Err(Error::Config(_))));
    }
}
