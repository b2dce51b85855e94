//! The truncated grim reaper translates without changing shape, and its
//! chord-arc minimum falls as the truncation approaches the asymptotes.

use curveflow::flow::{run, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::monitors::chord_arc_min;
use curveflow::scenarios::make_grim_reaper;
use curveflow::singularity::grim_reaper_deviation;

fn main() {
    let g = make_grim_reaper(1.5, 512).unwrap();
    let tr = run(g, &ForcingSpec::Csf, &StepConfig::semi_implicit().t_max(0.3).every(50)).expect("run");
    let tip = |v: &[curveflow::geometry::Vec2]| v.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let first = &tr.snapshots[0];
    let last = tr.final_state.vertices();
    println!("tip moved {:.4} in t = 0.3 (unit speed)", tip(&first.vertices) - tip(last));
    match grim_reaper_deviation(tr.final_state.curve.as_open().unwrap()) {
        Ok(d) => println!("distance to the nearest translate: {d:.2e}"),
        Err(e) => println!("not comparable: {e}"),
    }
    for sigma in [1.4, 1.5, 1.55] {
        let r = chord_arc_min(&make_grim_reaper(sigma, 512).unwrap());
        println!("sigma_max {sigma}: min d/l {:.4} at {:?}", r.min_value, r.argmin);
    }
}
