//! CSV sweep records.

use anyhow::Result;
use serde::Serialize;
use std::fs::File;
use std::path::Path;

/// Schema tag written in every row.
pub const SCHEMA: &str = "sweep-v1";

/// One CSV row.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepRecord {
    /// Schema tag.
    pub schema: &'static str,
    /// Experiment name.
    pub experiment: String,
    /// Emitter count.
    pub n: usize,
    /// `k₁D·d / π`.
    pub kd_over_pi: f64,
    /// Hilbert-space sector.
    pub sector: String,
    /// State label.
    pub label: String,
    /// `Re λ` (empty for rate-only rows).
    pub re: Option<f64>,
    /// `Im λ`.
    pub im: f64,
    /// Decay rate `−2 Im λ`.
    pub decay: f64,
    /// Solver mode.
    pub solver: String,
    /// Eigenpair residual (empty when not formed).
    pub residual: Option<f64>,
    /// Wall time of the solve in seconds.
    pub wall_time_s: Option<f64>,
    /// Seed.
    pub seed: u64,
    /// Disorder sample index.
    pub sample: Option<usize>,
    /// Free-form annotation.
    pub note: String,
}

impl SweepRecord {
    /// Row for an eigenvalue; the decay column is derived from `Im λ`.
    pub fn new(experiment: &str, n: usize, kd: f64, sector: &str, label: &str, re: Option<f64>, im: f64) -> Self {
        SweepRecord {
            schema: SCHEMA,
            experiment: experiment.to_string(),
            n,
            kd_over_pi: kd / std::f64::consts::PI,
            sector: sector.to_string(),
            label: label.to_string(),
            re,
            im,
            decay: -2.0 * im,
            solver: String::new(),
            residual: None,
            wall_time_s: None,
            seed: 0,
            sample: None,
            note: String::new(),
        }
    }

    /// Rate-only row (`Im λ = −rate/2`).
    pub fn rate(experiment: &str, n: usize, kd: f64, sector: &str, label: &str, rate: f64) -> Self {
        Self::new(experiment, n, kd, sector, label, None, -0.5 * rate)
    }

    /// Sets solver, residual and timing.
    pub fn solved(mut self, solver: &str, residual: Option<f64>, wall_time_s: Option<f64>) -> Self {
        self.solver = solver.to_string();
        self.residual = residual;
        self.wall_time_s = wall_time_s;
        self
    }

    /// Sets seed and sample index.
    pub fn seeded(mut self, seed: u64, sample: Option<usize>) -> Self {
        self.seed = seed;
        self.sample = sample;
        self
    }

    /// Sets the note.
    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Serialising CSV writer (header row, RFC-4180 quoting).
pub struct RecordWriter {
    inner: csv::Writer<File>,
}

impl RecordWriter {
    /// Creates or truncates `path`.
    pub fn create(path: &Path) -> Result<Self> {
        Ok(RecordWriter { inner: csv::WriterBuilder::new().has_headers(true).from_path(path)? })
    }

    /// Appends one row.
    pub fn write(&mut self, record: &SweepRecord) -> Result<()> {
        self.inner.serialize(record)?;
        Ok(())
    }

    /// Appends rows in order.
    pub fn write_all<'a>(&mut self, records: impl IntoIterator<Item = &'a SweepRecord>) -> Result<()> {
        for r in records {
            self.write(r)?;
        }
        Ok(())
    }

    /// Flushes to disk.
    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Writes `rows` to `path` with a header.
pub fn write_records(path: &Path, rows: &[SweepRecord]) -> Result<()> {
    let mut w = RecordWriter::create(path)?;
    w.write_all(rows)?;
    w.finish()
}

/// Writes any serialisable table with a header.
pub fn write_table<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
