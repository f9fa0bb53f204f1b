//! Time-series CSV and binary snapshot files.
//!
//! CSV: `#`-prefixed header lines (code version, single-line JSON config
//! echo), then a column line and one row per record. `H2_inls` is present
//! only for integrable parameters.
//!
//! Snapshot: one line of JSON metadata terminated by `\n`, then `n` pairs
//! of little-endian `f64` `(re, im)` in grid order.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use ginls_core::dynamics::ModelParams;
use ginls_core::spectral::{FieldState, Grid};
use ginls_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{LabError, LabResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const SNAPSHOT_FORMAT: &str = "ginls-snapshot/1";

pub fn columns(with_inls: bool) -> Vec<&'static str> {
    let mut c = vec!["t", "E1", "E2", "H1", "H2"];
    if with_inls {
        c.push("H2_inls");
    }
    c.extend(["mass", "linf", "seam_gap", "dx2norm"]);
    c
}

fn fmt(v: f64) -> String {
    // shortest round-trip representation
    format!("{v:e}")
}

/// Streams rows so an aborted run still leaves a valid, truncated file.
pub struct TimeSeriesWriter {
    out: BufWriter<File>,
    with_inls: bool,
    path: std::path::PathBuf,
}

impl TimeSeriesWriter {
    pub fn create(path: &Path, config_echo: &str, with_inls: bool) -> LabResult<Self> {
        let file = File::create(path).map_err(|e| LabError::io(path, e))?;
        let mut w = TimeSeriesWriter {
            out: BufWriter::new(file),
            with_inls,
            path: path.to_path_buf(),
        };
        w.line(&format!("# ginls {VERSION}"))?;
        w.line(&format!("# config {config_echo}"))?;
        w.line(&columns(with_inls).join(","))?;
        Ok(w)
    }

    fn line(&mut self, s: &str) -> LabResult<()> {
        writeln!(self.out, "{s}").map_err(|e| LabError::io(&self.path, e))
    }

    pub fn write(&mut self, r: &DiagnosticsRecord) -> LabResult<()> {
        let mut v = vec![r.t, r.e1, r.e2, r.h1, r.h2];
        if self.with_inls {
            v.push(r.h2_inls.unwrap_or(f64::NAN));
        }
        v.extend([r.mass, r.linf, r.seam_gap, r.dx2norm]);
        let row: Vec<String> = v.into_iter().map(fmt).collect();
        self.line(&row.join(","))
    }

    pub fn finish(mut self) -> LabResult<()> {
        self.out.flush().map_err(|e| LabError::io(&self.path, e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_time_series(path: &Path) -> LabResult<TimeSeries> {
    let file = File::open(path).map_err(|e| LabError::io(path, e))?;
    let mut header = Vec::new();
    let mut columns = Vec::new();
    let mut rows = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| LabError::io(path, e))?;
        if let Some(h) = line.strip_prefix('#') {
            header.push(h.trim().to_string());
        } else if columns.is_empty() {
            columns = line.split(',').map(str::to_string).collect();
        } else if !line.is_empty() {
            let row = line
                .split(',')
                .map(|v| v.parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| {
                    LabError::Numerical(format!("{}: bad row `{line}`: {e}", path.display()))
                })?;
            if row.len() != columns.len() {
                return Err(LabError::Numerical(format!(
                    "{}: row width mismatch",
                    path.display()
                )));
            }
            rows.push(row);
        }
    }
    Ok(TimeSeries {
        header,
        columns,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format: String,
    pub endianness: String,
    pub n: usize,
    pub length: f64,
    pub rho: f64,
    pub t: f64,
    pub params: ModelParams,
}

pub fn write_snapshot(path: &Path, f: &FieldState, p: &ModelParams) -> LabResult<()> {
    let header = SnapshotHeader {
        format: SNAPSHOT_FORMAT.into(),
        endianness: "little".into(),
        n: f.grid().n(),
        length: f.grid().length(),
        rho: f.rho(),
        t: f.time(),
        params: *p,
    };
    let file = File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| LabError::io(path, e);
    writeln!(
        w,
        "{}",
        serde_json::to_string(&header).expect("header serialises")
    )
    .map_err(io)?;
    for z in f.values() {
        w.write_all(&z.re.to_le_bytes()).map_err(io)?;
        w.write_all(&z.im.to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_snapshot(path: &Path) -> LabResult<(SnapshotHeader, FieldState)> {
    let file = File::open(path).map_err(|e| LabError::io(path, e))?;
    let mut r = BufReader::new(file);
    let mut line = String::new();
    r.read_line(&mut line).map_err(|e| LabError::io(path, e))?;
    let bad = |m: String| LabError::Numerical(format!("{}: {m}", path.display()));
    let header: SnapshotHeader =
        serde_json::from_str(line.trim_end()).map_err(|e| bad(e.to_string()))?;
    if header.format != SNAPSHOT_FORMAT || header.endianness != "little" {
        return Err(bad(format!(
            "unsupported format {} / {}",
            header.format, header.endianness
        )));
    }
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| LabError::io(path, e))?;
    if bytes.len() != 16 * header.n {
        return Err(bad(format!(
            "expected {} payload bytes, found {}",
            16 * header.n,
            bytes.len()
        )));
    }
    let word = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let values = bytes
        .chunks_exact(16)
        .map(|c| Complex64::new(word(&c[..8]), word(&c[8..])))
        .collect();
    let grid = Grid::new(header.n, header.length)?;
    let f = FieldState::new(grid, values, header.rho, header.t)?;
    Ok((header, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(32, 3.7).unwrap();
        let f = FieldState::from_fn(g, 1.3, |x| Complex64::new(x.sin() / 3.0, (x * 0.7).exp()))
            .unwrap()
            .with_time(0.125);
        let p = ModelParams::new(0.3, -0.2, 2.0, 1.3)
            .unwrap()
            .with_moll_level(Some(4));
        let path = dir.path().join("s.snap");
        write_snapshot(&path, &f, &p).unwrap();
        let (h, back) = read_snapshot(&path).unwrap();
        assert_eq!(h.params, p);
        assert_eq!(back, f);
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        let rec = DiagnosticsRecord {
            t: 0.1,
            e1: 1.0 / 3.0,
            e2: 2.0,
            h1: 1e-300,
            h2: -4.0,
            h2_inls: None,
            mass: 0.0,
            linf: 1.0,
            seam_gap: 1e-17,
            dx2norm: 5.0,
        };
        let mut w = TimeSeriesWriter::create(&path, "{}", false).unwrap();
        w.write(&rec).unwrap();
        w.finish().unwrap();
        let ts = read_time_series(&path).unwrap();
        assert_eq!(ts.columns, columns(false));
        assert_eq!(ts.rows[0][1], 1.0 / 3.0);
        assert_eq!(ts.column("H1").unwrap(), vec![1e-300]);
        assert!(ts.column("H2_inls").is_none());
        assert!(ts.header[1].starts_with("config"));
    }
}
