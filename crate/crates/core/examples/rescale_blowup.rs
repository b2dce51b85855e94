//! Zoom into the shrinking circle near its extinction time.

use curveflow::flow::{run, MonitorToggles, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::scenarios::make_circle;
use curveflow::singularity::{blowup_record, parabolic_rescale};

fn main() {
    let mut cfg = StepConfig::explicit().t_max(0.6).every(100);
    cfg.record.monitors = MonitorToggles { theta: false, ratio: false, isoperimetric: false };
    let tr = run(make_circle(1.0, 256).unwrap(), &ForcingSpec::Csf, &cfg).expect("run");
    let rec = blowup_record(&tr).expect("circle blows up");
    println!("T estimate {:.5}, {:?}", rec.t_hat, rec.classification);
    for k in [5, 10, 100] {
        let f = parabolic_rescale(&tr.snapshots, rec.t_hat, k).expect("rescale");
        let sup =
            f.snapshots.iter().filter(|s| s.tau <= 0.0).flat_map(|s| &s.kappa).fold(0.0f64, |m, x| m.max(x.abs()));
        println!(
            "k {k:>3}: lambda {:.4}, t_k {:.4}, kappa at selected point {:.6}, sup|kappa| before it {sup:.6}, {} frames",
            f.lambda,
            f.t_k,
            f.selected_curvature(),
            f.snapshots.len()
        );
    }
}
