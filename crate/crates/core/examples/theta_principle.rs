//! On a star-shaped curve the most negative local total curvature climbs
//! back up to 0, and the chord ratio never degrades.

use curveflow::flow::{run, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::scenarios::make_wavy;

fn main() {
    let c = make_wavy(0.3, 3, 256).unwrap();
    let tr = run(c, &ForcingSpec::area_preserving(), &StepConfig::semi_implicit().t_max(0.5).every(20)).expect("run");
    println!("{:>7} {:>10} {:>10} {:>10}", "t", "theta_min", "theta_sup", "min d/psi");
    for s in tr.full_samples().step_by(4) {
        println!("{:>7.4} {:>10.5} {:>10.5} {:>10.5}", s.t, s.theta_min, s.theta_sup, s.ratio_min);
    }
    for e in &tr.events {
        println!("event {} at t = {:.4}", e.kind.name(), e.t);
    }
}
