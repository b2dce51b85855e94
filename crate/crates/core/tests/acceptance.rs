//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`. The process exits non-zero when a criterion
//! outside `EXPECTED_FAILURES` fails, or when one inside it starts passing
//! (so the list has to be kept honest).

use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use curveflow::flow::{run, MonitorToggles, StepConfig, Trajectory};
use curveflow::forcing::ForcingSpec;
use curveflow::geometry::{ClosedCurve, Polyline, Vec2};
use curveflow::io::{cmd_run, cmd_sweep, parse_config, parse_set};
use curveflow::monitors::{
    bonnesen_gap, chord_arc_min, chord_psi_min, convergence_report, gage_residual, theta_extremes, RatioKind,
};
use curveflow::oracles::{brute_force_ratio, exact_circle_csf, fd_identity_check, Identity};
use curveflow::scenarios::{
    catalog, make_cexample, make_circle, make_ellipse, make_grim_reaper, make_horseshoe, make_open_vee, make_square,
    make_superellipse, make_wavy,
};
use curveflow::singularity::{blowup_record, grim_reaper_deviation, parabolic_rescale, Classification};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXPECTED_FAILURES: [usize; 2] = [4, 5];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn quiet() -> MonitorToggles {
    MonitorToggles { theta: false, ratio: false, isoperimetric: false }
}

fn max_dev(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Largest drop `w[0] − w[1]` over consecutive values.
fn worst_drop(xs: &[f64]) -> f64 {
    xs.windows(2).fold(0.0f64, |m, w| m.max(w[0] - w[1]))
}

fn stationary_circle() -> Outcome {
    let c = make_circle(1.0, 256).unwrap();
    let specs = [
        ForcingSpec::area_preserving(),
        ForcingSpec::LengthPreserving,
        ForcingSpec::interpolated_for(1.0, &c).unwrap(),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in specs {
        let mut cfg = StepConfig::semi_implicit().t_max(1.0).every(20);
        cfg.record.snapshot_every = 20;
        cfg.record.monitors = quiet();
        let tr = run(c.clone(), &spec, &cfg).unwrap();
        let drift = tr
            .snapshots
            .iter()
            .flat_map(|s| s.vertices.iter().zip(c.vertices()).map(|(a, b)| a.dist(*b)))
            .fold(0.0f64, f64::max);
        let kd = max_dev(tr.samples.iter().flat_map(|s| [s.kappa_max - 1.0, s.kappa_min - 1.0]));
        let hd = max_dev(tr.samples.iter().map(|s| s.h - 1.0));
        let ok = drift <= 1e-3 && kd <= 2e-3 && hd <= 2e-3 && tr.final_state.t >= 1.0 - 1e-12;
        pass &= ok;
        parts.push(format!("{} drift {drift:.1e} |κ−1| {kd:.1e} |h−1| {hd:.1e}", spec.name()));
    }
    outcome(pass, parts.join("; "))
}

fn csf_circle() -> &'static Trajectory {
    static TRAJ: OnceLock<Trajectory> = OnceLock::new();
    TRAJ.get_or_init(|| {
        let mut cfg = StepConfig::explicit().t_max(0.6).every(200);
        cfg.record.monitors = quiet();
        run(make_circle(1.0, 512).unwrap(), &ForcingSpec::Csf, &cfg).unwrap()
    })
}

fn exact_csf_circle() -> Outcome {
    let tr = csf_circle();
    let n = tr.n as f64;
    let mut worst = 0.0f64;
    for s in tr.samples.iter().filter(|s| s.t <= 0.45) {
        let r = s.length / (2.0 * n * (PI / n).sin());
        worst = worst.max((r / exact_circle_csf(1.0, s.t).unwrap() - 1.0).abs());
    }
    let fired = tr.has_event("blow_up");
    let Ok(rec) = blowup_record(tr) else {
        return outcome(false, format!("R err {worst:.1e}, blow-up fired {fired}, no T estimate"));
    };
    let c0 = match rec.classification {
        Classification::TypeI { c0 } => c0,
        _ => f64::NAN,
    };
    let floor = rec.samples.iter().map(|s| s.scaled).fold(f64::INFINITY, f64::min);
    let pass = worst <= 1e-3
        && fired
        && (rec.t_hat / 0.5 - 1.0).abs() <= 0.01
        && (c0 * 2f64.sqrt() - 1.0).abs() <= 0.05
        && floor >= 0.5;
    outcome(
        pass,
        format!(
            "R err {worst:.1e}, T̂ {:.5}, C0 {c0:.5}, tail min {floor:.4} over {} samples",
            rec.t_hat,
            rec.samples.len()
        ),
    )
}

fn conservation() -> Outcome {
    let e = make_ellipse(2.0, 1.0, 512).unwrap();
    let specs = [
        ForcingSpec::area_preserving(),
        ForcingSpec::LengthPreserving,
        ForcingSpec::interpolated_for(1.1, &e).unwrap(),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in specs {
        let gamma = spec.conserved_gamma().unwrap();
        let mut cfg = StepConfig::semi_implicit().t_max(3.0).every(100);
        cfg.record.monitors = quiet();
        let tr = run(e.clone(), &spec, &cfg).unwrap();
        let f: Vec<_> = tr.full_samples().collect();
        let a: Vec<f64> = f.iter().map(|s| s.area).collect();
        let l: Vec<f64> = f.iter().map(|s| s.length).collect();
        let q: Vec<f64> = f.iter().map(|s| s.conserved_interp).collect();
        let drift = max_dev(q.iter().map(|x| x / q[0] - 1.0));
        let neg_a: Vec<f64> = a.iter().map(|x| -x).collect();
        let neg_l: Vec<f64> = l.iter().map(|x| -x).collect();
        // Monotonicity by γ-range: A up, L down on [0,1]; both up above 1; both down below 0.
        let (a_bad, l_bad) = if gamma > 1.0 {
            (worst_drop(&a), worst_drop(&l))
        } else if gamma < 0.0 {
            (worst_drop(&neg_a), worst_drop(&neg_l))
        } else {
            (worst_drop(&a), worst_drop(&neg_l))
        };
        let ok = drift <= 1e-3 && a_bad <= 1e-6 && l_bad <= 1e-6 && tr.final_state.t >= 3.0 - 1e-12;
        pass &= ok;
        parts.push(format!("{} γ {gamma:.3} drift {drift:.1e} A-viol {a_bad:.1e} L-viol {l_bad:.1e}", spec.name()));
    }
    outcome(pass, parts.join("; "))
}

fn fd_identities() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in [ForcingSpec::area_preserving(), ForcingSpec::LengthPreserving, ForcingSpec::Csf] {
        let mut d = Vec::new();
        for (n, dt) in [(256usize, 1e-4), (512, 5e-5)] {
            let mut cfg = StepConfig::heun().t_max(0.05);
            cfg.dt = Some(dt);
            cfg.record.every = 10;
            cfg.record.snapshot_every = 10;
            cfg.record.monitors = quiet();
            let tr = run(make_ellipse(2.0, 1.0, n).unwrap(), &spec, &cfg).unwrap();
            let a = fd_identity_check(&tr, Identity::Area).unwrap().max_defect;
            let l = fd_identity_check(&tr, Identity::Length).unwrap().max_defect;
            d.push((a, l));
        }
        let ((a0, l0), (a1, l1)) = (d[0], d[1]);
        let ok = a0 <= 1e-3 && l0 <= 1e-3 && a0 / a1 >= 3.0 && l0 / l1 >= 3.0;
        pass &= ok;
        parts.push(format!("{} area {a0:.1e} (×{:.1}) length {l0:.1e} (×{:.1})", spec.name(), a0 / a1, l0 / l1));
    }
    outcome(pass, parts.join("; "))
}

fn convergence() -> Outcome {
    let mut cfg = StepConfig::semi_implicit().t_max(10.0).every(50);
    cfg.record.monitors.theta = false;
    cfg.record.monitors.ratio = false;
    let tr = run(make_ellipse(2.0, 1.0, 256).unwrap(), &ForcingSpec::area_preserving(), &cfg).unwrap();
    let rep = convergence_report(&tr);
    let last = rep.rows.last().unwrap();
    let kdev = last.kappa_dev * rep.r_hat;
    let beta = rep.implied_beta.unwrap_or(f64::NAN);
    let onset = tr.first_event("convexity_onset").map(|e| e.t);
    let persists = !tr.has_event("convexity_lost");
    let pass = kdev <= 1e-2
        && (rep.r_hat - 2f64.sqrt()).abs() <= 1e-2
        && beta > 0.4
        && beta < 1.05
        && rep.deficit_fit.is_some()
        && last.pinching <= 1e-2
        && onset.is_some()
        && persists;
    outcome(
        pass,
        format!(
            "max|κR̂−1| {kdev:.1e}, R̂ {:.5}, β {beta:.3}, pinching {:.1e}, convex from {onset:?}, persists {persists}",
            rep.r_hat, last.pinching
        ),
    )
}

fn wavy_run() -> &'static Trajectory {
    static TRAJ: OnceLock<Trajectory> = OnceLock::new();
    TRAJ.get_or_init(|| {
        let cfg = StepConfig::semi_implicit().t_max(1.0).every(20);
        run(make_wavy(0.3, 3, 512).unwrap(), &ForcingSpec::area_preserving(), &cfg).unwrap()
    })
}

fn theta_principle() -> Outcome {
    let f: Vec<_> = wavy_run().full_samples().collect();
    let worst =
        f.windows(2).filter(|w| w[0].theta_min < 0.0).fold(0.0f64, |m, w| m.max(w[0].theta_min - w[1].theta_min));
    let identity = f.iter().map(|s| s.theta_defect).fold(0.0f64, f64::max);
    outcome(
        worst <= 1e-3 && identity <= 1e-12,
        format!(
            "θ_min {:.4} → {:.4}, worst drop {worst:.1e}, identity defect {identity:.1e}",
            f[0].theta_min,
            f[f.len() - 1].theta_min
        ),
    )
}

fn distance_comparison() -> Outcome {
    let tr = wavy_run();
    let f: Vec<_> = tr.full_samples().collect();
    let r0 = f[0].ratio_min;
    let lowest = f.iter().map(|s| s.ratio_min).fold(f64::INFINITY, f64::min);
    let crossed = tr.has_event("self_intersection");
    outcome(
        f[0].theta_min >= -PI && lowest >= 0.5 * r0 && !crossed,
        format!("θ_min(0) {:.4}, min d/ψ {r0:.4} → lowest {lowest:.4}, self-intersection {crossed}", f[0].theta_min),
    )
}

fn counterexample() -> Outcome {
    let mut cfg = StepConfig::semi_implicit().t_max(3.0).every(200);
    cfg.record.monitors.ratio = false;
    let bad = make_cexample(0.01, 1.0, 1024).unwrap();
    let good = make_horseshoe(1.2 * PI, 1.0, 1024).unwrap();
    let (tb, tg) = (theta_extremes(&bad).theta_min, theta_extremes(&good).theta_min);
    let rb = run(bad, &ForcingSpec::area_preserving(), &cfg).unwrap();
    let rg = run(good, &ForcingSpec::area_preserving(), &cfg).unwrap();
    let hit = rb.first_event("self_intersection").map(|e| e.t);
    let clean = !rg.has_event("self_intersection") && rg.final_state.t >= 3.0 - 1e-12;
    outcome(
        tb < -PI && hit.is_some() && tg >= -PI && clean,
        format!(
            "narrow neck θ_min {:.3}π crosses at {hit:?}; wide θ_min {:.3}π clean to t=3 {clean}",
            tb / PI,
            tg / PI
        ),
    )
}

fn open_curves() -> Outcome {
    let line = make_open_vee(0.0, 256, 5.0).unwrap();
    let tr = run(line.clone(), &ForcingSpec::Csf, &StepConfig::explicit().t_max(0.5)).unwrap();
    let still = line.vertices().iter().zip(tr.final_state.vertices()).map(|(a, b)| a.dist(*b)).fold(0.0f64, f64::max);

    let cfg = StepConfig::semi_implicit().t_max(0.3).every(50);
    let tr = run(make_grim_reaper(1.5, 512).unwrap(), &ForcingSpec::Csf, &cfg).unwrap();
    let dev = grim_reaper_deviation(tr.final_state.curve.as_open().unwrap()).unwrap_or(f64::INFINITY);

    let ratios: Vec<f64> =
        [1.4, 1.5, 1.55].iter().map(|&s| chord_arc_min(&make_grim_reaper(s, 512).unwrap()).min_value).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);

    let alpha = PI / 2.0;
    let cfg = StepConfig::semi_implicit().t_max(1.0).every(20);
    let tr = run(make_open_vee(alpha, 512, 5.0).unwrap(), &ForcingSpec::Csf, &cfg).unwrap();
    let f: Vec<_> = tr.full_samples().collect();
    let drop = f
        .windows(2)
        .filter(|w| w[0].theta_min < 0.0f64.min(alpha))
        .fold(0.0f64, |m, w| m.max(w[0].theta_min - w[1].theta_min));

    outcome(
        still <= 1e-12 && dev <= 1e-2 && decreasing && drop <= 1e-9,
        format!("line drift {still:.1e}; reaper deviation {dev:.1e}; d/l {ratios:.4?}; vee θ drop {drop:.1e}"),
    )
}

fn random_convex(rng: &mut ChaCha8Rng, i: usize) -> (ClosedCurve, bool) {
    let n = 1024;
    let (c, circle) = match i % 5 {
        0 => (make_circle(rng.gen_range(0.3..3.0), n).unwrap(), true),
        1 | 2 => {
            let b = rng.gen_range(0.3..2.0);
            (make_ellipse(b * rng.gen_range(1.2..3.0), b, n).unwrap(), false)
        }
        _ => {
            let b = rng.gen_range(0.3..2.0);
            (make_superellipse(b * rng.gen_range(1.0..2.5), b, rng.gen_range(2.5..6.0), n).unwrap(), false)
        }
    };
    let angle = rng.gen_range(0.0..2.0 * PI);
    let shift = Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let v = c.vertices().iter().map(|p| p.rotate(angle) + shift).collect();
    (ClosedCurve::new(v).unwrap(), circle)
}

fn static_inequalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut gage_min, mut bonn_min) = (f64::INFINITY, f64::INFINITY);
    let (mut circle_max, mut other_min) = (0.0f64, f64::INFINITY);
    for i in 0..50 {
        let (c, circle) = random_convex(&mut rng, i);
        let g = gage_residual(&c).unwrap();
        let b = bonnesen_gap(&c).unwrap();
        gage_min = gage_min.min(g);
        bonn_min = bonn_min.min(b);
        if circle {
            circle_max = circle_max.max(g.abs());
        } else {
            other_min = other_min.min(g);
        }
    }
    let sq = make_square(1.0, 256).unwrap();
    let l = curveflow::geometry::length(&sq);
    let a = curveflow::geometry::enclosed_area(&sq).unwrap();
    let iso = l * l / a - 4.0 * PI;
    let gap = bonnesen_gap(&sq).unwrap();
    let pass = gage_min >= -1e-6
        && bonn_min >= -1e-6
        && circle_max <= 1e-4
        && other_min > 1e-4
        && (iso - 3.434).abs() <= 1e-3
        && (gap - 3.010).abs() <= 1e-3;
    outcome(
        pass,
        format!(
            "gage min {gage_min:.1e} (circles ≤ {circle_max:.1e}, others ≥ {other_min:.2e}), Bonnesen min {bonn_min:.1e}, square {iso:.4} / {gap:.4}"
        ),
    )
}

fn rescaling() -> Outcome {
    let tr = csf_circle();
    let Ok(rec) = blowup_record(tr) else {
        return outcome(false, "no blow-up record".into());
    };
    let frame = match parabolic_rescale(&tr.snapshots, rec.t_hat, 10) {
        Ok(f) => f,
        Err(e) => return outcome(false, e.to_string()),
    };
    let sel = frame.selected_curvature();
    let sup = frame
        .snapshots
        .iter()
        .filter(|s| s.tau <= 0.0)
        .flat_map(|s| s.kappa.iter())
        .fold(0.0f64, |m, k| m.max(k.abs()));
    let ratio = frame.selection_ratio();
    let at_zero = frame.snapshots.iter().find(|s| s.tau == 0.0).unwrap();
    let m = at_zero.vertices.len() as f64;
    let centre = at_zero.vertices.iter().fold(Vec2::ZERO, |c, p| c + *p) * (1.0 / m);
    let radius_dev = max_dev(at_zero.vertices.iter().map(|p| p.dist(centre) - 1.0));
    let through_origin = centre.norm() - 1.0;
    outcome(
        (sel - 1.0).abs() <= 1e-6
            && sup <= 1.0 + 1e-3
            && ratio <= 1.0 + 1e-6
            && radius_dev <= 1e-3
            && through_origin.abs() <= 1e-3,
        format!(
            "selected κ {sel:.9}, sup|κ| (τ≤0) {sup:.6}, selection ratio {ratio:.6}, unit circle dev {radius_dev:.1e}"
        ),
    )
}

fn files_under(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let (fa, fb) = (files_under(a), files_under(b));
    if fa != fb {
        return Err(format!("file lists differ under {} and {}", a.display(), b.display()));
    }
    for f in &fa {
        if std::fs::read(a.join(f)).unwrap() != std::fs::read(b.join(f)).unwrap() {
            return Err(format!("{} differs", f.display()));
        }
    }
    Ok(fa.len())
}

fn oracle_and_determinism() -> Outcome {
    let mut worst = 0.0f64;
    for e in catalog() {
        let c = e.default.with_n(128).build().unwrap();
        let pts: Vec<[f64; 2]> = c.vertices().iter().map(|p| [p.x, p.y]).collect();
        let (fast, slow) = match (c.as_closed(), c.as_open()) {
            (Some(cc), _) => (chord_psi_min(cc).min_value, brute_force_ratio(&pts, RatioKind::DOverPsi).min_value),
            (_, Some(oc)) => (chord_arc_min(oc).min_value, brute_force_ratio(&pts, RatioKind::DOverL).min_value),
            _ => unreachable!(),
        };
        worst = worst.max((fast - slow).abs());
    }

    let tmp = tempfile::tempdir().unwrap();
    let configs = [
        "[scenario]\nkind = \"wavy\"\nn = 128\n[forcing]\nkind = \"apcsf\"\n[stepping]\nt_max = 0.05\n[output]\nsnapshot_every = 20\n",
        "[scenario]\nkind = \"circle\"\nn = 64\n[forcing]\nkind = \"csf\"\n[stepping]\nscheme = \"explicit\"\nt_max = 0.6\n",
    ];
    let mut files = 0;
    let mut problems = Vec::new();
    for (i, text) in configs.iter().enumerate() {
        for rep in 0..2 {
            let mut cfg = parse_config(text, tmp.path()).unwrap();
            cfg.out_dir = tmp.path().join(format!("cfg{i}_{rep}"));
            cmd_run(&cfg).unwrap();
        }
        match same_tree(&tmp.path().join(format!("cfg{i}_0")), &tmp.path().join(format!("cfg{i}_1"))) {
            Ok(k) => files += k,
            Err(e) => problems.push(e),
        }
    }
    let sets = [parse_set("stepping.cfl=0.5,1.0").unwrap(), parse_set("scenario.n=64,96").unwrap()];
    for rep in 0..2 {
        cmd_sweep(configs[0], tmp.path(), &sets, &tmp.path().join(format!("sweep{rep}"))).unwrap();
    }
    // sweep.json records absolute run directories, which differ by construction.
    let (s0, s1) = (tmp.path().join("sweep0"), tmp.path().join("sweep1"));
    for k in 0..4 {
        let run = format!("run_{k:03}");
        match same_tree(&s0.join(&run), &s1.join(&run)) {
            Ok(n) => files += n,
            Err(e) => problems.push(e),
        }
    }
    outcome(
        worst <= 1e-12 && problems.is_empty(),
        format!(
            "max |fast − brute| {worst:.1e} over {} scenarios; {files} artifact files identical {problems:?}",
            catalog().len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("stationary circle", stationary_circle),
        ("exact CSF circle", exact_csf_circle),
        ("conservation and monotonicity", conservation),
        ("finite-difference identities", fd_identities),
        ("convergence to a circle", convergence),
        ("θ maximum principle", theta_principle),
        ("distance comparison", distance_comparison),
        ("sharpness counterexample", counterexample),
        ("open curves", open_curves),
        ("static inequalities", static_inequalities),
        ("rescaling bookkeeping", rescaling),
        ("oracle equality and determinism", oracle_and_determinism),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let t0 = Instant::now();
                    let o = f();
                    (o, t0.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (outcome(false, "panicked".into()), 0.0))).collect()
    });
    let mut unexpected = Vec::new();
    for (i, ((name, _), (o, secs))) in criteria.iter().zip(&results).enumerate() {
        let id = i + 1;
        println!("{} C{id} {name} ({secs:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass == EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    let passed = results.iter().filter(|r| r.0.pass).count();
    println!("{passed}/12 criteria pass; expected failures {EXPECTED_FAILURES:?}");
    if !unexpected.is_empty() {
        eprintln!("criteria with an unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
