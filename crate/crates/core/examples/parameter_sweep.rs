//! A small sweep over CFL number and resolution written to a temp directory.

use curveflow::io::{cmd_sweep, parse_set};

const BASE: &str = r#"
scenario = "ellipse(a=1.5, n=64)"
forcing = "apcsf"

[stepping]
t_max = 0.5

[output.monitors]
ratio = false
"#;

fn main() {
    let out = std::env::temp_dir().join("curveflow-sweep-example");
    let sets = [parse_set("stepping.cfl=1,4").unwrap(), parse_set("scenario.n=64,128").unwrap()];
    let rep = cmd_sweep(BASE, &std::env::current_dir().unwrap(), &sets, &out).expect("sweep");
    for r in &rep.runs {
        match (&r.summary, &r.error) {
            (Some(s), _) => println!(
                "{:?}: {} steps, area drift {:.1e}, length {:.5} -> {:.5}",
                r.values,
                s.steps,
                s.area_drift.unwrap_or(f64::NAN),
                s.initial.length,
                s.last.length
            ),
            (None, Some(e)) => println!("{:?}: {e}", r.values),
            _ => unreachable!(),
        }
    }
    println!("report: {}", out.join("sweep.json").display());
}
