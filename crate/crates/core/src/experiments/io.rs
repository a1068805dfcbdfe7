//! Text formats for ratings and node features.
//!
//! Ratings: one `row,col,value` triplet per line, 0-based indices. An
//! optional first data line `row,col,value` is a header. Lines starting with
//! `#` are comments, except `# m=<rows> n=<cols>`, which fixes the
//! dimensions (otherwise they are inferred from the largest indices).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::RatingMatrix;

fn parse_dims(comment: &str) -> Option<(Option<usize>, Option<usize>)> {
    let mut m = None;
    let mut n = None;
    for tok in comment.split_whitespace() {
        if let Some(v) = tok.strip_prefix("m=") {
            m = Some(v.parse().ok()?);
        } else if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse().ok()?);
        }
    }
    (m.is_some() || n.is_some()).then_some((m, n))
}

pub fn parse_ratings(text: &str, origin: &Path) -> Result<RatingMatrix> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let mut dims: (Option<usize>, Option<usize>) = (None, None);
    let mut triplets = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(comment) = s.strip_prefix('#') {
            if let Some((m, n)) = parse_dims(comment) {
                dims = (m.or(dims.0), n.or(dims.1));
            }
            continue;
        }
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        if !seen_data && fields == ["row", "col", "value"] {
            seen_data = true;
            continue;
        }
        seen_data = true;
        if fields.len() != 3 {
            return Err(err(line, format!("expected `row,col,value`, got `{s}`")));
        }
        let i: usize = fields[0]
            .parse()
            .map_err(|_| err(line, format!("bad row index `{}`", fields[0])))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| err(line, format!("bad column index `{}`", fields[1])))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| err(line, format!("bad value `{}`", fields[2])))?;
        triplets.push((line, i, j, v));
    }
    let m = dims
        .0
        .unwrap_or_else(|| triplets.iter().map(|t| t.1 + 1).max().unwrap_or(0));
    let n = dims
        .1
        .unwrap_or_else(|| triplets.iter().map(|t| t.2 + 1).max().unwrap_or(0));
    let mut r = RatingMatrix::new(m, n);
    for (line, i, j, v) in triplets {
        r.insert(i, j, v).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(r)
}

pub fn load_ratings(path: &Path) -> Result<RatingMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ratings(&text, path)
}

/// Writes the dimension directive, a header and the triplets.
pub fn write_ratings(path: &Path, r: &RatingMatrix) -> Result<()> {
    let mut out = format!("# m={} n={}\nrow,col,value\n", r.rows(), r.cols());
    for &(i, j, v) in r.entries() {
        writeln!(out, "{i},{j},{v}").expect("writing to a String");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// One comma-separated feature vector per line; `#` lines are comments.
pub fn load_features(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let row = s
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        out.push(row);
    }
    Ok(out)
}
