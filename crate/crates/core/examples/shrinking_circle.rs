//! Curve shortening of the unit circle against R(t) = sqrt(1 - 2t), and the
//! blow-up record at the end.

use std::f64::consts::PI;

use curveflow::flow::{run, MonitorToggles, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::oracles::exact_circle_csf;
use curveflow::scenarios::make_circle;
use curveflow::singularity::blowup_record;

fn main() {
    let n = 256;
    let mut cfg = StepConfig::explicit().t_max(0.6).every(100);
    cfg.record.monitors = MonitorToggles { theta: false, ratio: false, isoperimetric: false };
    let tr = run(make_circle(1.0, n).unwrap(), &ForcingSpec::Csf, &cfg).expect("run");

    // Circumradius of a regular N-gon from its perimeter.
    let radius = |len: f64| len / (2.0 * n as f64 * (PI / n as f64).sin());
    for t in [0.0, 0.1, 0.2, 0.3, 0.4, 0.45] {
        let s = tr.samples.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs())).unwrap();
        let exact = exact_circle_csf(1.0, s.t).unwrap();
        println!(
            "t {:.4}  R {:.6}  exact {:.6}  rel err {:.1e}",
            s.t,
            radius(s.length),
            exact,
            radius(s.length) / exact - 1.0
        );
    }
    println!("stopped: {:?} at t = {:.5}", tr.stop, tr.final_state.t);
    match blowup_record(&tr) {
        Ok(rec) => println!("T estimate {:.5}, {:?}, tail slope {:.2e}", rec.t_hat, rec.classification, rec.tail_slope),
        Err(e) => println!("no blow-up record: {e}"),
    }
}
