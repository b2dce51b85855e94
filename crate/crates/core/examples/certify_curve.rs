//! Certificate reports for a few catalogue curves.

use curveflow::monitors::certify;
use curveflow::scenarios::catalog;

fn main() {
    for e in catalog() {
        let c = e.default.with_n(128).build().unwrap();
        match certify(&c, 0.0) {
            Ok(r) => println!(
                "{:<12} ratio {:.4}  theta_min {:>8.4}  deficit {:>10}  gage {:>10}  bonnesen {:>10}",
                e.name,
                r.ratio.min_value,
                r.theta_min,
                fmt(r.deficit),
                fmt(r.gage_residual),
                fmt(r.bonnesen_gap)
            ),
            Err(err) => println!("{:<12} {err}", e.name),
        }
    }
}

fn fmt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.3e}"))
}
