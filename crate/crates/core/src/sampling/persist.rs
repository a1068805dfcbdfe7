//! Sample-set files: `row,col` CSV in selection order plus a JSON sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sample_set::SampleSet;
use crate::error::{Error, Result};
use crate::graphs::Shape;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub method: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub q: Option<f64>,
    pub zeta: Option<usize>,
    pub iter_counts: Vec<usize>,
    pub wall_time_seconds: f64,
}

/// `samples.csv` → `samples.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn write_samples(path: &Path, set: &SampleSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["row", "col"])
        .map_err(|e| csv_error(path, e))?;
    for &(i, j) in set.pairs() {
        w.write_record([i.to_string(), j.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a `row,col` file written by [`write_samples`]. A header line is
/// optional.
pub fn read_samples(path: &Path, shape: Shape) -> Result<SampleSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let pairs = parse_pairs(&text, path)?;
    let mut set = SampleSet::new(shape, pairs.len());
    for (line, (i, j)) in pairs {
        set.push(i, j).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
    }
    Ok(set)
}

/// `(line number, (row, col))` for every data line.
pub fn parse_pairs(text: &str, origin: &Path) -> Result<Vec<(usize, (usize, usize))>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        if out.is_empty() && fields == ["row", "col"] {
            continue;
        }
        let parse = |f: &str| {
            f.parse::<usize>().map_err(|_| Error::Parse {
                path: origin.to_path_buf(),
                line,
                message: format!("expected `row,col` with nonnegative integers, got `{s}`"),
            })
        };
        if fields.len() != 2 {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line,
                message: format!("expected 2 fields, got {}", fields.len()),
            });
        }
        out.push((line, (parse(fields[0])?, parse(fields[1])?)));
    }
    Ok(out)
}

pub fn write_meta(path: &Path, meta: &SampleMeta) -> Result<()> {
    let text = serde_json::to_string_pretty(meta)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_meta(path: &Path) -> Result<SampleMeta> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("{other:?}"),
        },
    }
}
