//! Output tables and atomic file writes.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::resilience::ResilienceReport;
use crate::simulation::Trajectory;

pub const TRAJECTORY_HEADER: [&str; 9] = [
    "run_id",
    "year",
    "indicator",
    "target_kind",
    "t",
    "phase",
    "NE",
    "NE_std",
    "replicates",
];

pub const REPORT_HEADER: [&str; 9] = [
    "year",
    "indicator",
    "target_kind",
    "R",
    "LONE_DS",
    "LONE_RS",
    "Resilience",
    "NE0",
    "run_id",
];

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// A finished scenario: the trajectory and its per-step spread.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub run_id: String,
    pub year: i32,
    pub indicator: String,
    pub target_kind: String,
    pub trajectory: Trajectory,
    /// Sample std per step; empty for single-run scenarios.
    pub std: Vec<f64>,
    pub replicates: usize,
    pub report: ResilienceReport,
}

pub fn trajectory_csv(out: &ScenarioOutcome) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_HEADER)?;
    for (i, s) in out.trajectory.steps.iter().enumerate() {
        let std = out.std.get(i).map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            out.run_id.clone(),
            out.year.to_string(),
            out.indicator.clone(),
            out.target_kind.clone(),
            s.t.to_string(),
            s.phase.name().to_string(),
            s.ne.to_string(),
            std,
            out.replicates.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn reports_csv<'a>(
    outcomes: impl IntoIterator<Item = &'a ScenarioOutcome>,
) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_HEADER)?;
    for o in outcomes {
        let r = &o.report;
        w.write_record([
            o.year.to_string(),
            o.indicator.clone(),
            o.target_kind.clone(),
            r.r.to_string(),
            r.lone_ds.to_string(),
            r.lone_rs.to_string(),
            r.resilience.to_string(),
            r.ne0.to_string(),
            o.run_id.clone(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    run_id: &'a str,
    indicator: &'a str,
    target_kind: &'a str,
    replicates: usize,
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "LONE_DS")]
    lone_ds: f64,
    #[serde(rename = "LONE_RS")]
    lone_rs: f64,
    #[serde(rename = "Resilience")]
    resilience: f64,
    #[serde(rename = "NE0")]
    ne0: f64,
    complete: bool,
    markers: crate::simulation::Markers,
}

#[derive(Serialize)]
struct FailureEntry<'a> {
    scenario: usize,
    year: i32,
    message: &'a str,
}

#[derive(Serialize)]
struct Summary<'a> {
    years: BTreeMap<String, Vec<SummaryEntry<'a>>>,
    failures: Vec<FailureEntry<'a>>,
}

/// Scenario failure kept for the summary and the exit code.
#[derive(Debug, Clone)]
pub struct ScenarioFailure {
    pub scenario: usize,
    pub year: i32,
    pub message: String,
}

pub fn summary_json(
    outcomes: &[ScenarioOutcome],
    failures: &[ScenarioFailure],
) -> serde_json::Result<Vec<u8>> {
    let mut years: BTreeMap<String, Vec<SummaryEntry>> = BTreeMap::new();
    for o in outcomes {
        years.entry(o.year.to_string()).or_default().push(SummaryEntry {
            run_id: &o.run_id,
            indicator: &o.indicator,
            target_kind: &o.target_kind,
            replicates: o.replicates,
            r: o.report.r,
            lone_ds: o.report.lone_ds,
            lone_rs: o.report.lone_rs,
            resilience: o.report.resilience,
            ne0: o.report.ne0,
            complete: o.report.complete,
            markers: o.trajectory.markers,
        });
    }
    let summary = Summary {
        years,
        failures: failures
            .iter()
            .map(|f| FailureEntry {
                scenario: f.scenario,
                year: f.year,
                message: &f.message,
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&summary)?;
    bytes.push(b'\n');
    Ok(bytes)
}
