use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const METRICS_HEADER: [&str; 7] = [
    "method",
    "seed",
    "K",
    "rmse",
    "lambda_min_est",
    "wall_time_seconds",
    "lobpcg_total_iters",
];

/// One experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub method: String,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub rmse: f64,
    pub lambda_min_est: f64,
    /// Time spent sampling; graph construction and completion excluded.
    pub wall_time_seconds: f64,
    pub lobpcg_total_iters: usize,
}

impl MetricsRow {
    pub fn key(&self) -> (&str, u64, usize) {
        (&self.method, self.seed, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rmse", self.rmse),
            ("lambda_min_est", self.lambda_min_est),
            ("wall_time_seconds", self.wall_time_seconds),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} in row {:?}",
                    self.key()
                )));
            }
        }
        Ok(())
    }
}

/// A cell that failed at some stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRow {
    pub method: String,
    pub seed: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub stage: String,
    pub error: String,
}

/// Sorts rows by `(method, seed, K)`.
pub fn sort_rows(rows: &mut [MetricsRow]) {
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
}

fn check_unique(rows: &[MetricsRow]) -> Result<()> {
    let mut keys: Vec<_> = rows.iter().map(MetricsRow::key).collect();
    keys.sort();
    match keys.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::InvalidArgument(format!(
            "duplicate metrics key {:?}",
            w[0]
        ))),
        None => Ok(()),
    }
}

pub fn export_metrics(rows: &[MetricsRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no metric rows to export".into()));
    }
    check_unique(rows)?;
    for r in rows {
        r.validate()?;
    }
    write_csv(rows, path)
}

pub fn export_failures(rows: &[FailureRow], path: &Path) -> Result<()> {
    write_csv(rows, path)
}

fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(METRICS_HEADER) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!(
                "unexpected header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    r.deserialize()
        .map(|row| row.map_err(|e| csv_error(path, e)))
        .collect()
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        kind => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{kind:?}"),
        },
    }
}
