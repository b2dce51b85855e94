//! Two thick arcs. The narrow-necked one starts with theta_min below -pi and
//! pinches into itself; the wide one does not.

use std::f64::consts::PI;

use curveflow::flow::{run, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::geometry::ClosedCurve;
use curveflow::monitors::theta_extremes;
use curveflow::scenarios::{make_cexample, make_horseshoe};

fn report(name: &str, c: ClosedCurve, t_max: f64) {
    let theta = theta_extremes(&c).theta_min;
    let mut cfg = StepConfig::semi_implicit().t_max(t_max).every(200);
    cfg.record.monitors.ratio = false;
    let tr = run(c, &ForcingSpec::area_preserving(), &cfg).expect("run");
    println!("{name}: theta_min(0) = {:.3} pi, stop {:?} at t = {:.4}", theta / PI, tr.stop, tr.final_state.t);
    if let Some(e) = tr.first_event("self_intersection") {
        println!("  {}", serde_json::to_string(e).unwrap());
    }
}

fn main() {
    report("narrow neck", make_cexample(0.01, 1.0, 1024).unwrap(), 3.0);
    report("wide gap", make_horseshoe(1.2 * PI, 1.0, 512).unwrap(), 1.0);
}
