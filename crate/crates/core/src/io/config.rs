use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::{Table, Value};

use super::{load_curve, IoError};
use crate::flow::{MonitorToggles, Scheme, StepConfig};
use crate::forcing::{ForcingSpec, RateTable};
use crate::geometry::{resample_uniform, Curve, Polyline};
use crate::scenarios::ScenarioSpec;

/// Overrides `[output] dir` when set.
pub const OUT_DIR_ENV: &str = "CURVEFLOW_OUT_DIR";

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioSource {
    Builtin(ScenarioSpec),
    File(PathBuf),
}

impl ScenarioSource {
    pub fn label(&self) -> String {
        match self {
            ScenarioSource::Builtin(s) => s.name().to_string(),
            ScenarioSource::File(p) => p.display().to_string(),
        }
    }
}

/// A validated run: initial curve, resolved forcing, stepping and output.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: ScenarioSource,
    pub initial: Curve,
    pub forcing: ForcingSpec,
    pub step: StepConfig,
    pub out_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    scenario: Value,
    forcing: Value,
    #[serde(default)]
    stepping: Stepping,
    #[serde(default)]
    output: Output,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileScenario {
    file: PathBuf,
    n: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Forcing {
    kind: String,
    delta: Option<f64>,
    discrete_exact: Option<bool>,
    times: Option<Vec<f64>>,
    values: Option<Vec<f64>>,
    h: Option<f64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Stepping {
    scheme: Option<Scheme>,
    cfl: Option<f64>,
    dt: Option<f64>,
    resample_every: Option<usize>,
    n: Option<usize>,
    t_max: Option<f64>,
    converge_tol: Option<f64>,
    blowup_budget: Option<f64>,
    continue_after_crossing: Option<bool>,
    max_steps: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct Output {
    dir: Option<PathBuf>,
    every: Option<usize>,
    dense_kappa: Option<f64>,
    snapshot_every: Option<usize>,
    dense_snapshot_growth: Option<f64>,
    monitors: Option<MonitorToggles>,
}

/// Line of the first `key = ...` in the document, 1-based.
fn line_of(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
}

/// Appends the line of the backticked key an error message names.
fn with_line(text: &str, section: &str, msg: String) -> IoError {
    let key = msg.split('`').nth(1).unwrap_or("");
    match line_of(text, key) {
        Some(line) if !key.is_empty() => IoError::Config(format!("[{section}] line {line}: {msg}")),
        _ => IoError::Config(format!("[{section}]: {msg}")),
    }
}

/// `name(k=v, ...)` into a table with `kind = name`.
pub(crate) fn compact_table(s: &str) -> Result<Table, String> {
    let mut t = Table::new();
    let (name, args) = match s.split_once('(') {
        Some((n, rest)) => {
            let inner = rest.strip_suffix(')').ok_or(format!("unclosed parenthesis in `{s}`"))?;
            (n, inner)
        }
        None => (s, ""),
    };
    t.insert("kind".into(), Value::String(name.trim().to_string()));
    for arg in args.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        let (k, v) = arg.split_once('=').ok_or(format!("expected key=value, got `{arg}`"))?;
        t.insert(k.trim().to_string(), parse_value(v.trim()));
    }
    Ok(t)
}

/// A TOML scalar, falling back to a bare string.
pub(crate) fn parse_value(s: &str) -> Value {
    format!("v = {s}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(s.to_string()))
}

fn as_table(v: Value, section: &str) -> Result<Table, IoError> {
    match v {
        Value::String(s) => compact_table(&s).map_err(|m| IoError::Config(format!("[{section}]: {m}"))),
        Value::Table(t) => Ok(t),
        other => Err(IoError::Config(format!("[{section}] must be a table or a string, got {}", other.type_str()))),
    }
}

fn scenario(text: &str, v: Value, base: &Path) -> Result<(ScenarioSource, Curve), IoError> {
    let t = as_table(v, "scenario")?;
    if t.contains_key("file") {
        let f: FileScenario = t.try_into().map_err(|e| with_line(text, "scenario", e.to_string()))?;
        let path = if f.file.is_absolute() { f.file } else { base.join(f.file) };
        if !path.exists() {
            return Err(IoError::Config(format!("[scenario] file {} does not exist", path.display())));
        }
        let mut curve = load_curve(&path)?;
        if let Some(n) = f.n {
            curve = match curve {
                Curve::Closed(c) => resample_uniform(&c, n)?.into(),
                Curve::Open(c) => resample_uniform(&c, n)?.into(),
            };
        }
        return Ok((ScenarioSource::File(path), curve));
    }
    let spec: ScenarioSpec = t.try_into().map_err(|e| with_line(text, "scenario", e.to_string()))?;
    let curve = spec.build()?;
    Ok((ScenarioSource::Builtin(spec), curve))
}

fn forcing(text: &str, v: Value, initial: &Curve) -> Result<ForcingSpec, IoError> {
    let t = as_table(v, "forcing")?;
    let f: Forcing = t.try_into().map_err(|e| with_line(text, "forcing", e.to_string()))?;
    let allowed: &[&str] = match f.kind.as_str() {
        "csf" | "lpcf" => &[],
        "apcsf" => &["discrete_exact"],
        "interp" => &["delta"],
        "area_rate" | "length_rate" => &["times", "values"],
        "const" => &["h"],
        other => return Err(IoError::Config(format!(
            "[forcing] unknown kind `{other}`, expected one of csf, apcsf, lpcf, interp, area_rate, length_rate, const"
        ))),
    };
    let present = [
        ("delta", f.delta.is_some()),
        ("discrete_exact", f.discrete_exact.is_some()),
        ("times", f.times.is_some()),
        ("values", f.values.is_some()),
        ("h", f.h.is_some()),
    ];
    for (key, set) in present {
        if set && !allowed.contains(&key) {
            return Err(IoError::Config(format!("[forcing] key `{key}` does not apply to kind `{}`", f.kind)));
        }
    }
    let need = |key: &str| IoError::Config(format!("[forcing] kind `{}` requires key `{key}`", f.kind));
    let closed = || {
        initial.as_closed().ok_or_else(|| IoError::Config(format!("[forcing] kind `{}` needs a closed curve", f.kind)))
    };
    let table = || -> Result<RateTable, IoError> {
        Ok(RateTable::new(f.times.clone().ok_or(need("times"))?, f.values.clone().ok_or(need("values"))?)?)
    };
    let spec = match f.kind.as_str() {
        "csf" => ForcingSpec::Csf,
        "apcsf" => ForcingSpec::AreaPreserving { discrete_exact: f.discrete_exact.unwrap_or(false) },
        "lpcf" => ForcingSpec::LengthPreserving,
        "interp" => ForcingSpec::interpolated_for(f.delta.ok_or(need("delta"))?, closed()?)?,
        "area_rate" => ForcingSpec::area_rate_for(table()?, closed()?)?,
        "length_rate" => ForcingSpec::length_rate_for(table()?, closed()?)?,
        _ => ForcingSpec::Constant { h: f.h.ok_or(need("h"))? },
    };
    if spec.needs_closed() && !initial.is_closed() {
        return Err(IoError::Config(format!("[forcing] kind `{}` needs a closed curve", f.kind)));
    }
    Ok(spec)
}

/// Parses and validates a run configuration. Relative paths resolve
/// against `base`.
///
/// ```toml
/// [scenario]
/// kind = "ellipse"      # or: file = "curve.csv"
/// a = 2.0
///
/// [forcing]
/// kind = "interp(delta=1.1)"
///
/// [stepping]
/// scheme = "semi_implicit"
/// t_max = 3.0
///
/// [output]
/// dir = "out/ellipse"
/// every = 50
/// ```
pub fn parse_config(text: &str, base: &Path) -> Result<RunConfig, IoError> {
    let raw: Raw = toml::from_str(text).map_err(|e| IoError::Config(e.to_string().trim_end().to_string()))?;
    let (scenario, initial) = scenario(text, raw.scenario, base)?;
    let forcing = forcing(text, raw.forcing, &initial)?;

    let s = raw.stepping;
    let mut step = StepConfig::new(s.scheme.unwrap_or(Scheme::SemiImplicit));
    step.cfl = s.cfl.unwrap_or(step.cfl);
    step.dt = s.dt;
    step.n = s.n;
    step.resample_every = s.resample_every.unwrap_or(step.resample_every);
    step.stop.t_max = s.t_max.unwrap_or(step.stop.t_max);
    step.stop.converge_tol = s.converge_tol;
    step.stop.blowup_budget = s.blowup_budget.unwrap_or(step.stop.blowup_budget);
    step.stop.continue_after_crossing = s.continue_after_crossing.unwrap_or(false);
    step.stop.max_steps = s.max_steps.unwrap_or(step.stop.max_steps);
    let o = raw.output;
    let r = &mut step.record;
    r.every = o.every.unwrap_or(r.every);
    r.dense_kappa = o.dense_kappa.unwrap_or(r.dense_kappa);
    r.snapshot_every = o.snapshot_every.unwrap_or(r.snapshot_every);
    r.dense_snapshot_growth = o.dense_snapshot_growth.unwrap_or(r.dense_snapshot_growth);
    r.monitors = o.monitors.unwrap_or_default();
    step.validate().map_err(|m| IoError::Config(format!("[stepping]: {m}")))?;
    if initial.len() < 3 {
        return Err(IoError::Config("initial curve has too few vertices".into()));
    }

    let dir = o.dir.unwrap_or_else(|| PathBuf::from("out"));
    let out_dir = if dir.is_absolute() { dir } else { base.join(dir) };
    Ok(RunConfig { scenario, initial, forcing, step, out_dir })
}

/// Reads a config file; relative paths resolve against its directory.
pub fn load_config(path: &Path) -> Result<RunConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_config(&text, path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, IoError> {
        parse_config(text, Path::new("."))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse("scenario = \"circle\"\nforcing = \"apcsf\"\n").unwrap();
        assert_eq!(c.scenario, ScenarioSource::Builtin(ScenarioSpec::Circle { radius: 1.0, n: 256 }));
        assert_eq!(c.forcing, ForcingSpec::area_preserving());
        assert_eq!(c.step, StepConfig::default());
        assert_eq!(c.out_dir, Path::new(".").join("out"));
    }

    #[test]
    fn sectioned_config() {
        let c = parse(
            "[scenario]\nkind = \"ellipse\"\na = 3.0\nn = 128\n[forcing]\nkind = \"interp\"\ndelta = 1.1\n\
             [stepping]\nscheme = \"heun\"\nt_max = 0.5\n[output]\nevery = 7\n[output.monitors]\nratio = false\n",
        )
        .unwrap();
        assert_eq!(c.initial.len(), 128);
        assert!(matches!(c.forcing, ForcingSpec::Interpolated { delta, .. } if delta == 1.1));
        assert_eq!(c.step.scheme, Scheme::Heun);
        assert_eq!(c.step.cfl, 0.4);
        assert_eq!(c.step.record.every, 7);
        assert!(!c.step.record.monitors.ratio && c.step.record.monitors.theta);
    }

    #[test]
    fn interp_on_circle_rejected() {
        let e = parse("scenario = \"circle\"\nforcing = \"interp(delta=1.1)\"\n").unwrap_err();
        assert!(e.to_string().contains("deficit"), "{e}");
    }

    #[test]
    fn unknown_keys_are_named() {
        let e = parse("scenario = \"circle\"\nforcing = \"apcsf\"\nfourcing = 1\n").unwrap_err().to_string();
        assert!(e.contains("fourcing") && e.contains("line 3"), "{e}");
        let e = parse("forcing = \"csf\"\n[scenario]\nkind = \"circle\"\nradus = 2.0\n").unwrap_err().to_string();
        assert!(e.contains("radus") && e.contains("line 4"), "{e}");
        let e = parse("scenario = \"circle\"\n[forcing]\nkind = \"apcsf\"\ndelta = 2.0\n").unwrap_err().to_string();
        assert!(e.contains("delta"), "{e}");
        let e = parse("scenario = \"circle\"\n").unwrap_err().to_string();
        assert!(e.contains("forcing"), "{e}");
        let e = parse("scenario = \"circle\"\nforcing = \"apcsf\"\n[stepping]\nt_max = \"soon\"\n")
            .unwrap_err()
            .to_string();
        assert!(e.contains("t_max") || e.contains("line 4"), "{e}");
    }

    #[test]
    fn open_curves_reject_area_forcing() {
        assert!(parse("scenario = \"grim_reaper\"\nforcing = \"apcsf\"\n").is_err());
        assert!(parse("scenario = \"grim_reaper\"\nforcing = \"const(h=0.5)\"\n").is_ok());
    }

    #[test]
    fn missing_file_rejected() {
        let e = parse("[scenario]\nfile = \"nope.csv\"\n[forcing]\nkind = \"csf\"\n").unwrap_err();
        assert!(e.to_string().contains("does not exist"), "{e}");
    }
}
