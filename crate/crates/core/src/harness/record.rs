//! Result records and the newline-delimited record store.
//!
//! A store file starts with one header line
//! `{"schema":"nodalshell-records","version":1}` followed by one JSON record per line.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodal::NodalReport;
use crate::topology::TopologyReport;

use super::config::ExperimentConfig;

pub const SCHEMA_NAME: &str = "nodalshell-records";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub build_s: f64,
    pub voxelize_s: f64,
    pub solve_s: f64,
    pub analyse_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    /// Configuration text that reproduces this record with `h`.
    pub config: String,
    /// Swept index value, if the record belongs to a sequence.
    pub index: Option<f64>,
    pub h: f64,
    pub epsilon: Option<f64>,
    pub nodes: usize,
    pub severed: usize,
    pub under_resolved: bool,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub gaps: Vec<f64>,
    /// `lambda_3 - lambda_2` exceeds the solver's resolution.
    pub simple: Option<bool>,
    pub nodal: Option<NodalReport>,
    /// Nodal domain count of each computed eigenfunction.
    pub nodal_counts: Vec<usize>,
    /// Counts that survive the residual-based error band of each eigenvector.
    pub certified_counts: Vec<usize>,
    /// Every converged pair satisfies the Courant bound on its certified count.
    pub courant_ok: bool,
    pub interface: Option<bool>,
    pub topology: Option<TopologyReport>,
    pub timings: Timings,
    pub error: Option<String>,
}

impl ResultRecord {
    pub fn failed(config: &ExperimentConfig, index: Option<f64>, h: f64, err: &Error) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config: config.to_text(),
            index,
            h,
            epsilon: None,
            nodes: 0,
            severed: 0,
            under_resolved: false,
            eigenvalues: vec![],
            residuals: vec![],
            converged: false,
            iterations: 0,
            gaps: vec![],
            simple: None,
            nodal: None,
            nodal_counts: vec![],
            certified_counts: vec![],
            courant_ok: true,
            interface: None,
            topology: None,
            timings: Timings::default(),
            error: Some(err.to_string()),
        }
    }

    pub fn lambda(&self, j: usize) -> Option<f64> {
        self.eigenvalues.get(j.checked_sub(1)?).copied()
    }

    pub fn verdict(&self) -> bool {
        self.nodal.as_ref().is_some_and(|r| r.verdict)
    }

    pub fn snapshot(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(&self.config)
    }

    /// Equality ignoring wall-clock timings.
    pub fn same_result(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.timings = other.timings.clone();
        a == *other
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Format(format!("record: {m}")));
        if self.schema_version != SCHEMA_VERSION {
            return bad("schema version mismatch");
        }
        self.snapshot()?;
        if !(self.h > 0.0) {
            return bad("nonpositive h");
        }
        if self.error.is_none() {
            if self.eigenvalues.len() != self.residuals.len() {
                return bad("eigenvalue and residual counts differ");
            }
            if self.eigenvalues.windows(2).any(|w| w[0] > w[1]) {
                return bad("eigenvalues not ascending");
            }
            if self.gaps.len() + 1 != self.eigenvalues.len().max(1) {
                return bad("gap count does not match eigenvalues");
            }
            if self.nodes == 0 {
                return bad("no nodes");
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
    version: u32,
}

/// Append-only record file with a single writer.
pub struct RecordStore {
    path: PathBuf,
    file: File,
}

impl RecordStore {
    /// Opens `path` for appending, writing the header if the file is new or empty.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        if path.exists() && std::fs::metadata(&path)?.len() > 0 {
            read_header(&mut BufReader::new(File::open(&path)?))?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        if file.metadata()?.len() == 0 {
            let header = Header { schema: SCHEMA_NAME.into(), version: SCHEMA_VERSION };
            writeln!(file, "{}", serde_json::to_string(&header)?)?;
        }
        Ok(Self { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &ResultRecord) -> Result<()> {
        record.validate()?;
        writeln!(self.file, "{}", serde_json::to_string(record)?)?;
        self.file.flush()?;
        Ok(())
    }
}

fn read_header(r: &mut impl BufRead) -> Result<()> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let header: Header = serde_json::from_str(first.trim()).map_err(|_| Error::Format("missing store header".into()))?;
    if header.schema != SCHEMA_NAME || header.version != SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported store {} v{}", header.schema, header.version)));
    }
    Ok(())
}

/// Reads and validates every record of a store file.
pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r)?;
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ResultRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Parse { line: i + 2, message: e.to_string() })?;
        rec.validate().map_err(|e| Error::Parse { line: i + 2, message: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(h: f64) -> ResultRecord {
        let cfg = ExperimentConfig::default();
        let mut r = ResultRecord::failed(&cfg, Some(2.0), h, &Error::EmptyGrid);
        r.error = None;
        r.nodes = 10;
        r.eigenvalues = vec![1.0, 2.0 + 1e-17, 1.0 / 3.0 + 2.0];
        r.residuals = vec![0.0; 3];
        r.gaps = vec![r.eigenvalues[1] - 1.0, r.eigenvalues[2] - r.eigenvalues[1]];
        r
    }

    #[test]
    fn store_round_trip_and_append() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.ndjson");
        let a = record(0.1);
        let b = record(1.0 / 30.0);
        RecordStore::open(&path).unwrap().append(&a).unwrap();
        RecordStore::open(&path).unwrap().append(&b).unwrap();
        let back = load_records(&path).unwrap();
        assert_eq!(back, vec![a, b]);
    }

    #[test]
    fn rejects_foreign_files_and_bad_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.ndjson");
        std::fs::write(&path, "{\"schema\":\"other\",\"version\":1}\n").unwrap();
        assert!(load_records(&path).is_err());
        assert!(RecordStore::open(&path).is_err());

        let mut bad = record(0.1);
        bad.eigenvalues.reverse();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn same_result_ignores_timings() {
        let a = record(0.1);
        let mut b = a.clone();
        b.timings.solve_s = 9.0;
        assert!(a.same_result(&b));
        b.eigenvalues[0] = f64::from_bits(1.0f64.to_bits() + 1);
        assert!(!a.same_result(&b));
    }
}
