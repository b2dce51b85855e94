use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{create_dir, write_file, write_json, IoError, RunConfig};
use crate::flow::{Event, Sample, Snapshot, StopReason, Trajectory};
use crate::geometry::Vec2;
use crate::monitors::convergence_report;
use crate::singularity::{blowup_record, Classification};

pub const EVENTS_SCHEMA: u32 = 1;

/// Contents of `events.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    pub schema: u32,
    pub stop: StopReason,
    pub t_final: f64,
    pub steps: usize,
    pub events: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub length: f64,
    pub area: Option<f64>,
}

/// Extremes of the monitor columns over the recorded samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Minima {
    pub theta_min: Option<f64>,
    pub ratio_min: Option<f64>,
    pub gage_residual: Option<f64>,
    pub bonnesen_gap: Option<f64>,
    pub max_theta_defect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupSummary {
    pub t_hat: Option<f64>,
    pub classification: Classification,
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub forcing: String,
    pub closed: bool,
    pub vertices: usize,
    pub steps: usize,
    pub t_final: f64,
    pub stop: StopReason,
    pub initial: Measures,
    #[serde(rename = "final")]
    pub last: Measures,
    /// Relative changes, `final/initial − 1`.
    pub area_drift: Option<f64>,
    pub length_drift: f64,
    pub conserved_drift: Option<f64>,
    pub r_hat: Option<f64>,
    pub implied_beta: Option<f64>,
    pub convex_from: Option<f64>,
    pub minima: Minima,
    pub events: Vec<String>,
    pub blowup: Option<BlowupSummary>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn extreme(samples: &[&Sample], f: impl Fn(&Sample) -> f64, max: bool) -> Option<f64> {
    let vals = samples.iter().map(|s| f(s)).filter(|x| x.is_finite());
    let r = if max { vals.fold(f64::NEG_INFINITY, f64::max) } else { vals.fold(f64::INFINITY, f64::min) };
    finite(r)
}

fn summarize(cfg: &RunConfig, traj: &Trajectory, blowup: Option<BlowupSummary>) -> Summary {
    let full: Vec<&Sample> = traj.full_samples().collect();
    let (first, last) = (full[0], full[full.len() - 1]);
    let area = |s: &Sample| if traj.closed { finite(s.area) } else { None };
    let rel = |a: f64, b: f64| b / a - 1.0;
    let report = traj.closed.then(|| convergence_report(traj));
    Summary {
        scenario: cfg.scenario.label(),
        forcing: traj.forcing.name().to_string(),
        closed: traj.closed,
        vertices: traj.n,
        steps: traj.final_state.steps,
        t_final: traj.final_state.t,
        stop: traj.stop,
        initial: Measures { length: first.length, area: area(first) },
        last: Measures { length: last.length, area: area(last) },
        area_drift: area(first).zip(area(last)).map(|(a, b)| rel(a, b)),
        length_drift: rel(first.length, last.length),
        conserved_drift: traj
            .forcing
            .conserved_gamma()
            .and_then(|_| finite(rel(first.conserved_interp, last.conserved_interp))),
        r_hat: report.as_ref().map(|r| r.r_hat),
        implied_beta: report.as_ref().and_then(|r| r.implied_beta),
        convex_from: report.as_ref().and_then(|r| r.convex_from),
        minima: Minima {
            theta_min: extreme(&full, |s| s.theta_min, false),
            ratio_min: extreme(&full, |s| s.ratio_min, false),
            gage_residual: extreme(&full, |s| s.gage_residual, false),
            bonnesen_gap: extreme(&full, |s| s.bonnesen_gap, false),
            max_theta_defect: extreme(&full, |s| s.theta_defect, true),
        },
        events: traj.events.iter().map(|e| e.kind.name().to_string()).collect(),
        blowup,
    }
}

#[derive(Serialize, Deserialize)]
struct IndexRow {
    index: usize,
    step: usize,
    t: f64,
    file: String,
}

#[derive(Serialize, Deserialize)]
struct SnapRow {
    x: f64,
    y: f64,
    kappa: f64,
}

fn csv_bytes<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| IoError::format(path, e))?;
    }
    w.into_inner().map_err(|e| IoError::format(path, e.error()))
}

fn write_snapshots(dir: &Path, traj: &Trajectory) -> Result<(), IoError> {
    if dir.exists() {
        std::fs::remove_dir_all(dir).map_err(|e| IoError::file(dir, e))?;
    }
    create_dir(dir)?;
    let mut index = Vec::with_capacity(traj.snapshots.len());
    let open = traj.final_state.curve.as_open();
    for (i, s) in traj.snapshots.iter().enumerate() {
        let file = format!("{i:06}.csv");
        let path = dir.join(&file);
        let rows = s.vertices.iter().zip(&s.kappa).map(|(p, &kappa)| SnapRow { x: p.x, y: p.y, kappa });
        write_file(&path, &csv_bytes(&path, rows)?)?;
        if let Some(c) = open {
            write_json(&path.with_extension("json"), &c.meta())?;
        }
        index.push(IndexRow { index: i, step: s.step, t: s.t, file });
    }
    let path = dir.join("index.csv");
    write_file(&path, &csv_bytes(&path, index)?)
}

/// Reads back `snapshots/` of a run directory.
pub fn read_snapshots(run_dir: &Path) -> Result<Vec<Snapshot>, IoError> {
    let dir = run_dir.join("snapshots");
    let path = dir.join("index.csv");
    let mut rd = csv::Reader::from_path(&path).map_err(|e| IoError::format(&path, e))?;
    let mut out = Vec::new();
    for row in rd.deserialize::<IndexRow>() {
        let row = row.map_err(|e| IoError::format(&path, e))?;
        let p = dir.join(&row.file);
        let mut r = csv::Reader::from_path(&p).map_err(|e| IoError::format(&p, e))?;
        let mut vertices = Vec::new();
        let mut kappa = Vec::new();
        for v in r.deserialize::<SnapRow>() {
            let v = v.map_err(|e| IoError::format(&p, e))?;
            vertices.push(Vec2::new(v.x, v.y));
            kappa.push(v.kappa);
        }
        out.push(Snapshot { step: row.step, t: row.t, vertices, kappa });
    }
    Ok(out)
}

/// Writes `series.csv`, `snapshots/`, `events.json`, `summary.json` and,
/// after a blow-up, `blowup.json` into `dir`.
pub fn write_artifacts(dir: &Path, cfg: &RunConfig, traj: &Trajectory) -> Result<Summary, IoError> {
    create_dir(dir)?;
    let series = dir.join("series.csv");
    write_file(&series, &csv_bytes(&series, &traj.samples)?)?;
    write_snapshots(&dir.join("snapshots"), traj)?;
    let log = EventLog {
        schema: EVENTS_SCHEMA,
        stop: traj.stop,
        t_final: traj.final_state.t,
        steps: traj.final_state.steps,
        events: traj.events.clone(),
    };
    write_json(&dir.join("events.json"), &log)?;

    let stale = dir.join("blowup.json");
    let blowup = if traj.stop == StopReason::BlowUp {
        let summary = match blowup_record(traj) {
            Ok(rec) => {
                write_json(&stale, &rec)?;
                BlowupSummary { t_hat: Some(rec.t_hat), classification: rec.classification }
            }
            Err(e) => {
                write_json(
                    &stale,
                    &serde_json::json!({ "error": e.to_string(), "classification": Classification::Inconclusive }),
                )?;
                BlowupSummary { t_hat: None, classification: Classification::Inconclusive }
            }
        };
        Some(summary)
    } else {
        if stale.exists() {
            std::fs::remove_file(&stale).map_err(|e| IoError::file(&stale, e))?;
        }
        None
    };

    let summary = summarize(cfg, traj, blowup);
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}
