use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use super::config::{compact_table, parse_value};
use super::{
    create_dir, load_curve, parse_config, read_json, read_snapshots, write_artifacts, write_file, write_json, IoError,
    RunConfig, Summary,
};
use crate::flow::run;
use crate::geometry::Curve;
use crate::monitors::{certify, CertificateReport};
use crate::scenarios::{catalog, default_for, ScenarioSpec};
use crate::singularity::{parabolic_rescale, BlowupRecord, RescaleFrame, SingularityError};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub summary: Summary,
}

/// Runs a configuration and writes its artifacts to `cfg.out_dir`.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome, IoError> {
    let traj = run(cfg.initial.clone(), &cfg.forcing, &cfg.step)?;
    let summary = write_artifacts(&cfg.out_dir, cfg, &traj)?;
    Ok(RunOutcome { out_dir: cfg.out_dir.clone(), summary })
}

/// Certificate report of a curve CSV (with optional open-curve sidecar).
pub fn cmd_certify(path: &Path, gamma: f64) -> Result<CertificateReport, IoError> {
    let curve = load_curve(path)?;
    Ok(certify(&curve, gamma)?)
}

#[derive(Serialize)]
struct FrameMeta<'a> {
    k: u32,
    t_hat: f64,
    lambda: f64,
    t_k: f64,
    p_k: usize,
    point: [f64; 2],
    alpha_k: f64,
    t_cap: f64,
    selected_curvature: f64,
    selection_ratio: f64,
    snapshots: Vec<IndexRow<'a>>,
}

#[derive(Serialize)]
struct IndexRow<'a> {
    index: usize,
    tau: f64,
    file: &'a str,
}

#[derive(Serialize)]
struct Row {
    x: f64,
    y: f64,
    kappa: f64,
}

/// Parabolic rescaling of a blown-up run directory; writes `rescale_k{k}/`.
pub fn cmd_rescale(run_dir: &Path, k: u32) -> Result<RescaleFrame, IoError> {
    let bpath = run_dir.join("blowup.json");
    if !bpath.exists() {
        return Err(SingularityError::NoBlowup.into());
    }
    let rec: BlowupRecord =
        read_json(&bpath).map_err(|_| IoError::format(&bpath, "no blow-up time was estimated for this run"))?;
    let snaps = read_snapshots(run_dir)?;
    let frame = parabolic_rescale(&snaps, rec.t_hat, k)?;

    let dir = run_dir.join(format!("rescale_k{k}"));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).map_err(|e| IoError::file(&dir, e))?;
    }
    create_dir(&dir)?;
    let names: Vec<String> = (0..frame.snapshots.len()).map(|i| format!("{i:06}.csv")).collect();
    for (s, name) in frame.snapshots.iter().zip(&names) {
        let path = dir.join(name);
        let mut w = csv::Writer::from_writer(Vec::new());
        for (p, &kappa) in s.vertices.iter().zip(&s.kappa) {
            w.serialize(Row { x: p.x, y: p.y, kappa }).map_err(|e| IoError::format(&path, e))?;
        }
        let bytes = w.into_inner().map_err(|e| IoError::format(&path, e.error()))?;
        write_file(&path, &bytes)?;
    }
    let meta = FrameMeta {
        k,
        t_hat: rec.t_hat,
        lambda: frame.lambda,
        t_k: frame.t_k,
        p_k: frame.p_k,
        point: [frame.point.x, frame.point.y],
        alpha_k: frame.alpha_k,
        t_cap: frame.t_cap,
        selected_curvature: frame.selected_curvature(),
        selection_ratio: frame.selection_ratio(),
        snapshots: frame
            .snapshots
            .iter()
            .zip(&names)
            .enumerate()
            .map(|(index, (s, file))| IndexRow { index, tau: s.tau, file })
            .collect(),
    };
    write_json(&dir.join("frame.json"), &meta)?;
    Ok(frame)
}

/// One line per catalogue entry: name, description, default parameters.
pub fn cmd_scenario_list() -> String {
    let mut out = String::new();
    for e in catalog() {
        let params = serde_json::to_string(&e.default).unwrap_or_default();
        out.push_str(&format!("{:<14} {:<52} {params}\n", e.name, e.description));
    }
    out
}

/// Builds a catalogue scenario with `key=value` overrides.
pub fn cmd_scenario_emit(name: &str, overrides: &[(String, String)]) -> Result<(ScenarioSpec, Curve), IoError> {
    let base = default_for(name).ok_or_else(|| {
        let names: Vec<_> = catalog().iter().map(|e| e.name).collect();
        IoError::Config(format!("unknown scenario `{name}`, expected one of {}", names.join(", ")))
    })?;
    let mut t = Table::try_from(&base).map_err(|e| IoError::Config(e.to_string()))?;
    for (k, v) in overrides {
        t.insert(k.clone(), parse_value(v));
    }
    let spec: ScenarioSpec = t.try_into().map_err(|e| IoError::Config(format!("scenario {name}: {e}")))?;
    let curve = spec.build()?;
    Ok((spec, curve))
}

/// Splits `key=v1,v2,...`.
pub fn parse_set(s: &str) -> Result<(String, Vec<String>), IoError> {
    let (k, v) = s.split_once('=').ok_or_else(|| IoError::Config(format!("expected key=v1,v2,..., got `{s}`")))?;
    let vals: Vec<String> = v.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
    if k.trim().is_empty() || vals.is_empty() {
        return Err(IoError::Config(format!("expected key=v1,v2,..., got `{s}`")));
    }
    Ok((k.trim().to_string(), vals))
}

fn set_dotted(doc: &mut Table, key: &str, value: Value) -> Result<(), IoError> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut t = doc;
    for part in &parts[..parts.len() - 1] {
        let slot = t.entry(part.to_string()).or_insert_with(|| Value::Table(Table::new()));
        if let Value::String(s) = slot {
            *slot = Value::Table(compact_table(s).map_err(IoError::Config)?);
        }
        t = match slot {
            Value::Table(inner) => inner,
            _ => return Err(IoError::Config(format!("`{part}` in `{key}` is not a table"))),
        };
    }
    t.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRun {
    pub index: usize,
    pub dir: PathBuf,
    pub values: BTreeMap<String, String>,
    pub summary: Option<Summary>,
    pub error: Option<String>,
}

/// Contents of `sweep.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub parameters: Vec<String>,
    pub runs: Vec<SweepRun>,
}

/// Runs the Cartesian product of `sets` over a base config in parallel, one
/// output directory `run_NNN` per point, and writes `sweep.json` into `out`.
pub fn cmd_sweep(
    base_text: &str,
    base_dir: &Path,
    sets: &[(String, Vec<String>)],
    out: &Path,
) -> Result<SweepReport, IoError> {
    let doc: Table = base_text.parse().map_err(|e: toml::de::Error| IoError::Config(e.to_string()))?;
    let mut combos: Vec<Vec<(String, String)>> = vec![vec![]];
    for (key, vals) in sets {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                vals.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    create_dir(out)?;
    let out = if out.is_absolute() {
        out.to_path_buf()
    } else {
        std::env::current_dir().map_err(|e| IoError::file(out, e))?.join(out)
    };
    let runs: Vec<SweepRun> = combos
        .par_iter()
        .enumerate()
        .map(|(index, combo)| {
            let dir = out.join(format!("run_{index:03}"));
            let values: BTreeMap<String, String> = combo.iter().cloned().collect();
            let attempt = || -> Result<Summary, IoError> {
                let mut d = doc.clone();
                for (k, v) in combo {
                    set_dotted(&mut d, k, parse_value(v))?;
                }
                set_dotted(&mut d, "output.dir", Value::String(dir.display().to_string()))?;
                let text = toml::to_string(&d).map_err(|e| IoError::Config(e.to_string()))?;
                let cfg = parse_config(&text, base_dir)?;
                Ok(cmd_run(&cfg)?.summary)
            };
            match attempt() {
                Ok(s) => SweepRun { index, dir: dir.clone(), values, summary: Some(s), error: None },
                Err(e) => SweepRun { index, dir: dir.clone(), values, summary: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let report = SweepReport { schema: 1, parameters: sets.iter().map(|s| s.0.clone()).collect(), runs };
    write_json(&out.join("sweep.json"), &report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys_expand_compact_sections() {
        let mut d: Table = "scenario = \"circle\"\nforcing = \"apcsf\"\n".parse().unwrap();
        set_dotted(&mut d, "scenario.n", parse_value("64")).unwrap();
        set_dotted(&mut d, "stepping.cfl", parse_value("2.5")).unwrap();
        let s = &d["scenario"];
        assert_eq!(s["kind"].as_str(), Some("circle"));
        assert_eq!(s["n"].as_integer(), Some(64));
        assert_eq!(d["stepping"]["cfl"].as_float(), Some(2.5));
    }

    #[test]
    fn set_syntax() {
        assert_eq!(parse_set("stepping.cfl=1,2").unwrap(), ("stepping.cfl".into(), vec!["1".into(), "2".into()]));
        assert!(parse_set("nokey").is_err());
        assert!(parse_set("a=").is_err());
    }

    #[test]
    fn emit_with_overrides() {
        let (spec, c) = cmd_scenario_emit("ellipse", &[("a".into(), "3".into()), ("n".into(), "64".into())]).unwrap();
        assert_eq!(spec, ScenarioSpec::Ellipse { a: 3.0, b: 1.0, n: 64 });
        assert_eq!(crate::geometry::Polyline::len(&c), 64);
        assert!(cmd_scenario_emit("blob", &[]).is_err());
        assert!(cmd_scenario_emit("circle", &[("radus".into(), "2".into())]).is_err());
    }
}
