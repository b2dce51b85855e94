use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curveflow::geometry::Polyline;
use curveflow::io::{self, IoError};

#[derive(Parser)]
#[command(name = "curveflow", version, about = "Curvature flows with a global forcing term")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a TOML configuration and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory (overrides the config and CURVEFLOW_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the certificate report of a curve CSV as JSON.
    Certify {
        curve: PathBuf,
        /// Weight of the conserved interpolant (1−γ)A + γL²/4π.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
    },
    /// Parabolic rescaling of a run directory that ended in a blow-up.
    Rescale {
        run_dir: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        k: u32,
    },
    /// Built-in initial curves.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
    /// Run a config over the Cartesian product of parameter lists.
    Sweep {
        config: PathBuf,
        /// `section.key=v1,v2,...`; repeatable.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    List,
    /// Write a scenario as CSV (stdout unless --out is given).
    Emit {
        name: String,
        /// `key=value` parameter override; repeatable.
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_out() -> Option<PathBuf> {
    std::env::var_os(io::OUT_DIR_ENV).map(PathBuf::from)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                IoError::Config(_) => ExitCode::from(2),
                IoError::Monitor(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, IoError> {
    match cli.cmd {
        Cmd::Run { config, out } => {
            let mut cfg = io::load_config(&config)?;
            if let Some(dir) = out.or_else(env_out) {
                cfg.out_dir = dir;
            }
            let r = io::cmd_run(&cfg)?;
            let s = &r.summary;
            println!(
                "{}: {} steps, t = {}, stop {:?}, events [{}] -> {}",
                s.scenario,
                s.steps,
                s.t_final,
                s.stop,
                s.events.join(", "),
                r.out_dir.display()
            );
        }
        Cmd::Certify { curve, gamma } => {
            let rep = io::cmd_certify(&curve, gamma)?;
            println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
        }
        Cmd::Rescale { run_dir, k } => {
            let f = io::cmd_rescale(&run_dir, k)?;
            println!(
                "k = {k}: lambda {} at t_k = {}, {} snapshots -> {}",
                f.lambda,
                f.t_k,
                f.snapshots.len(),
                run_dir.join(format!("rescale_k{k}")).display()
            );
        }
        Cmd::Scenario { cmd: ScenarioCmd::List } => print!("{}", io::cmd_scenario_list()),
        Cmd::Scenario { cmd: ScenarioCmd::Emit { name, sets, out } } => {
            let overrides = sets
                .iter()
                .map(|s| {
                    s.split_once('=')
                        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                        .ok_or_else(|| IoError::Config(format!("expected key=value, got `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (_, curve) = io::cmd_scenario_emit(&name, &overrides)?;
            match out {
                Some(path) => io::save_curve(&path, &curve, None)?,
                None => {
                    let stdout = std::io::stdout();
                    io::write_curve_csv(stdout.lock(), curve.vertices(), None)
                        .map_err(|m| IoError::format(&PathBuf::from("<stdout>"), m))?;
                    if let Some(c) = curve.as_open() {
                        eprintln!(
                            "open curve: alpha {} axis ({}, {}); use --out to keep the sidecar",
                            c.alpha(),
                            c.axis().x,
                            c.axis().y
                        );
                    }
                }
            }
        }
        Cmd::Sweep { config, sets, out } => {
            let text =
                std::fs::read_to_string(&config).map_err(|e| IoError::File { path: config.clone(), source: e })?;
            let sets = sets.iter().map(|s| io::parse_set(s)).collect::<Result<Vec<_>, _>>()?;
            let out = out.or_else(env_out).unwrap_or_else(|| PathBuf::from("sweep"));
            let base = config.parent().map(PathBuf::from).unwrap_or_default();
            let rep = io::cmd_sweep(&text, &base, &sets, &out)?;
            let failed = rep.runs.iter().filter(|r| r.error.is_some()).count();
            println!("{} runs ({failed} failed) -> {}", rep.runs.len(), out.join("sweep.json").display());
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
