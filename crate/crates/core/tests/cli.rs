use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use curveflow::geometry::Vec2;
use curveflow::io::{read_curve_csv, read_snapshots, write_curve_csv, EventLog, Summary};
use serde_json::Value;

fn curveflow(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveflow"))
        .args(args)
        .current_dir(cwd)
        .env_remove("CURVEFLOW_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write_points(path: &Path, v: &[Vec2]) {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, v, None).unwrap();
    std::fs::write(path, buf).unwrap();
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn certify_circle() {
    let dir = tempfile::tempdir().unwrap();
    let v: Vec<Vec2> = (0..200).map(|i| Vec2::from_angle(2.0 * PI * i as f64 / 200.0) * 3.0).collect();
    write_points(&dir.path().join("c.csv"), &v);
    let o = curveflow(&["certify", "c.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((r["ratio"]["min_value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["convex"], Value::Bool(true));
    assert_eq!(r["violates_theta_condition"], Value::Bool(false));
}

#[test]
fn certify_flags_the_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let o = curveflow(&["scenario", "emit", "cexample", "--set", "n=512", "--out", "cx.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = curveflow(&["certify", "cx.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["violates_theta_condition"], Value::Bool(true));
    assert!(r["theta_min"].as_f64().unwrap() < -PI);
}

#[test]
fn figure_eight_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let v: Vec<Vec2> = (0..100)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 100.0;
            Vec2::new(t.sin(), t.sin() * t.cos())
        })
        .collect();
    write_points(&dir.path().join("eight.csv"), &v);
    let o = curveflow(&["certify", "eight.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("not simple") && err.contains("edges"), "{err}");
}

#[test]
fn bad_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "scenario = \"circle\"\nforcing = \"apcsf\"\nstepping = { cfl = -1.0 }\n",
    )
    .unwrap();
    let o = curveflow(&["run", "run.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    std::fs::write(dir.path().join("typo.toml"), "scenario = \"circel\"\nforcing = \"apcsf\"\n").unwrap();
    let o = curveflow(&["run", "typo.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("circel"), "{}", stderr(&o));
}

#[test]
fn apcsf_ellipse_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "[scenario]\nkind = \"ellipse\"\nn = 128\n[forcing]\nkind = \"apcsf\"\n[stepping]\nt_max = 1.0\n[output]\nsnapshot_every = 50\n",
    )
    .unwrap();
    let o = curveflow(&["run", "run.toml", "--out", "res"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("res");
    let s: Summary = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(s.area_drift.unwrap().abs() <= 1e-3);
    assert!(s.length_drift < 0.0);
    let series = std::fs::read_to_string(out.join("series.csv")).unwrap();
    assert!(series.starts_with("step,t,length,area,h,"));
    assert!(out.join("events.json").exists() && !out.join("blowup.json").exists());

    // Snapshots read back bit for bit.
    let snaps = read_snapshots(&out).unwrap();
    assert!(snaps.len() >= 2);
    let first = std::fs::read(out.join("snapshots/000000.csv")).unwrap();
    let pts = read_curve_csv(first.as_slice()).unwrap();
    assert_eq!(pts, snaps[0].vertices);
    let mut again = Vec::new();
    write_curve_csv(&mut again, &snaps[0].vertices, Some(&snaps[0].kappa)).unwrap();
    assert_eq!(again, first);
}

#[test]
fn counterexample_run_logs_the_crossing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cx.toml"),
        "scenario = \"cexample(n=1024)\"\nforcing = \"apcsf\"\n[output.monitors]\nratio = false\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_curveflow"))
        .args(["run", "cx.toml"])
        .current_dir(dir.path())
        .env("CURVEFLOW_OUT_DIR", dir.path().join("env_out"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let log: EventLog =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("env_out/events.json")).unwrap()).unwrap();
    assert!(log.events.iter().any(|e| e.kind.name() == "self_intersection"));
    assert_eq!(serde_json::to_value(log.stop).unwrap(), "self_intersection");
}

#[test]
fn blowup_then_rescale() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("csf.toml"),
        "scenario = \"circle(n=128)\"\nforcing = \"csf\"\n[stepping]\nscheme = \"explicit\"\nt_max = 0.6\n",
    )
    .unwrap();
    let o = curveflow(&["run", "csf.toml", "--out", "blow"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let b: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("blow/blowup.json")).unwrap()).unwrap();
    assert!((b["t_hat"].as_f64().unwrap() - 0.5).abs() < 5e-3);
    assert_eq!(b["classification"]["type"], "type_i");

    let o = curveflow(&["rescale", "blow", "-k", "10"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let f: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("blow/rescale_k10/frame.json")).unwrap())
            .unwrap();
    assert!((f["selected_curvature"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    // A run that never blew up has nothing to rescale.
    std::fs::write(
        dir.path().join("calm.toml"),
        "scenario = \"circle(n=64)\"\nforcing = \"apcsf\"\n[stepping]\nt_max = 0.01\n",
    )
    .unwrap();
    assert!(curveflow(&["run", "calm.toml", "--out", "calm"], dir.path()).status.success());
    let o = curveflow(&["rescale", "calm"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn scenario_list_and_emit() {
    let dir = tempfile::tempdir().unwrap();
    let o = curveflow(&["scenario", "list"], dir.path());
    let list = stdout(&o);
    for name in ["circle", "ellipse", "wavy", "cexample", "grim_reaper", "vee"] {
        assert!(list.contains(name), "{list}");
    }
    let o = curveflow(&["scenario", "emit", "grim_reaper", "--set", "n=64", "--out", "g.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("g.json").exists());
    let o = curveflow(&["certify", "g.csv"], dir.path());
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["closed"], Value::Bool(false));
    assert_eq!(r["ratio"]["truncated"], Value::Bool(true));
}

#[test]
fn sweep_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("base.toml"),
        "scenario = \"ellipse(n=64)\"\nforcing = \"apcsf\"\n[stepping]\nt_max = 0.05\n",
    )
    .unwrap();
    let o = curveflow(
        &["sweep", "base.toml", "--set", "stepping.cfl=1,2", "--set", "scenario.a=1.5,2.5", "--out", "sw"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rep: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sw/sweep.json")).unwrap()).unwrap();
    let runs = rep["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 4);
    assert!(runs.iter().all(|r| r["error"].is_null()));
    assert!(dir.path().join("sw/run_003/summary.json").exists());

    let o = curveflow(&["sweep", "base.toml", "--set", "forcing.delta=1.1", "--out", "bad"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
