//! A circle is a fixed point of every area- or length-preserving flow.

use curveflow::flow::{run, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::geometry::Polyline;
use curveflow::scenarios::make_circle;

fn main() {
    let c = make_circle(1.0, 256).expect("circle");
    for spec in
        [ForcingSpec::area_preserving(), ForcingSpec::LengthPreserving, ForcingSpec::interpolated_for(1.0, &c).unwrap()]
    {
        let tr = run(c.clone(), &spec, &StepConfig::semi_implicit().t_max(1.0)).expect("run");
        let drift = c.vertices().iter().zip(tr.final_state.vertices()).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max);
        let last = tr.samples.last().unwrap();
        println!(
            "{:<6} steps {:>4}  max vertex drift {drift:.2e}  kappa in [{:.6}, {:.6}]  h {:.6}",
            spec.name(),
            tr.final_state.steps,
            last.kappa_min,
            last.kappa_max,
            last.h
        );
    }
}
