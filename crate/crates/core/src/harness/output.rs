//! CSV rendering and JSON run manifests.
//!
//! CSV files carry a header row and use Rust's shortest round-trip float
//! formatting, so output is locale-free and byte-stable. Each experiment
//! written to disk gets a `<stem>.manifest.json` beside it holding the
//! flat parameter set, the seed, and a content hash of those parameters.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::{CoverageReport, ScalingRow, TableCell, TrialOutcome};
use crate::fisher::CurvePoint;

pub fn table1_csv(cells: &[TableCell]) -> String {
    let mut out = String::from("ntot,stages,trials,hits,coverage,ci_low,ci_high\n");
    for c in cells {
        let r = &c.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.total_per_stage, r.stages, r.trials, r.hits, r.coverage, r.ci_low, r.ci_high
        )
        .unwrap();
    }
    out
}

pub fn table2_csv(cells: &[TableCell]) -> String {
    let mut out = String::from("noise,stages,ntot,trials,hits,coverage,ci_low,ci_high\n");
    for c in cells {
        let r = &c.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.noise.rate(),
            r.stages,
            c.total_per_stage,
            r.trials,
            r.hits,
            r.coverage,
            r.ci_low,
            r.ci_high
        )
        .unwrap();
    }
    out
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("l,epsilon,Ntot,n,mean_cost\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.stages, r.epsilon, r.total_per_stage, r.channel_uses, r.mean_cost
        )
        .unwrap();
    }
    out
}

pub fn fisher_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("k,m,H_per_use,Fx_avg_per_use,Fy_avg_per_use\n");
    for p in curve {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.stage, p.uses, p.sld_per_use, p.fisher_x_per_use, p.fisher_y_per_use
        )
        .unwrap();
    }
    out
}

pub fn trials_csv(outcomes: &[TrialOutcome]) -> String {
    let mut out = String::from("trial,theta,estimate,arc_lower,arc_width,hit\n");
    for (i, o) in outcomes.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i,
            o.theta,
            o.estimate,
            o.final_arc.lower(),
            o.final_arc.width(),
            o.hit as u8
        )
        .unwrap();
    }
    out
}

pub fn report_summary(r: &CoverageReport) -> String {
    format!(
        "hits {}/{} coverage {} (95% CI [{}, {}]) half-arc {}",
        r.hits, r.trials, r.coverage, r.ci_low, r.ci_high, r.half_arc_length
    )
}

/// Flat record of an experiment's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    fields: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::from(command));
        fields.insert("seed".into(), Value::from(seed));
        Manifest { fields }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    /// Git-style hash: SHA-256 over `blob <len>\0<canonical JSON>`.
    /// Keys serialize in sorted order, so the hash only depends on values.
    pub fn content_hash(&self) -> String {
        let body = serde_json::to_string(&self.fields).expect("map serializes");
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", body.len()).as_bytes());
        h.update(body.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn to_json(&self) -> Value {
        let mut all = self.fields.clone();
        all.insert("content_hash".into(), Value::from(self.content_hash()));
        Value::Object(all)
    }
}

/// `results.csv` → `results.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    csv.with_file_name(format!("{stem}.manifest.json"))
}

/// Writes the CSV and its manifest; returns the manifest path.
pub fn write_results(csv_path: &Path, csv: &str, manifest: &Manifest) -> io::Result<PathBuf> {
    fs::write(csv_path, csv)?;
    let path = manifest_path(csv_path);
    let json = serde_json::to_string_pretty(&manifest.to_json()).map_err(io::Error::other)?;
    fs::write(&path, json + "\n")?;
    Ok(path)
}
