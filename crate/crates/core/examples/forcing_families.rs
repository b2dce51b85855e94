//! One ellipse under each closed-curve forcing: what moves and what stays put.

use curveflow::flow::{run, MonitorToggles, StepConfig};
use curveflow::forcing::{ForcingSpec, RateTable};
use curveflow::scenarios::make_ellipse;

fn main() {
    let e = make_ellipse(2.0, 1.0, 256).unwrap();
    let shrink = RateTable::new(vec![0.0, 0.5, 1.0], vec![-1.0, -1.0, 0.0]).unwrap();
    let specs = [
        ForcingSpec::Csf,
        ForcingSpec::area_preserving(),
        ForcingSpec::LengthPreserving,
        ForcingSpec::interpolated_for(1.1, &e).unwrap(),
        ForcingSpec::area_rate_for(shrink.clone(), &e).unwrap(),
        ForcingSpec::length_rate_for(shrink, &e).unwrap(),
    ];
    println!("{:<12} {:>9} {:>9} {:>9} {:>9} {:>9}", "forcing", "A(0)", "A(1)", "L(0)", "L(1)", "h(1)");
    for spec in specs {
        let mut cfg = StepConfig::semi_implicit().t_max(1.0).every(50);
        cfg.record.monitors = MonitorToggles { theta: false, ratio: false, isoperimetric: false };
        let tr = run(e.clone(), &spec, &cfg).expect("run");
        let (a, b) = (&tr.samples[0], tr.samples.last().unwrap());
        println!(
            "{:<12} {:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            spec.name(),
            a.area,
            b.area,
            a.length,
            b.length,
            b.h
        );
    }
}
