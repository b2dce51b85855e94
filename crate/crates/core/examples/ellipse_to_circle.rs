//! Area-preserving flow rounds an ellipse off into the circle of the same area.

use curveflow::flow::{run, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::monitors::convergence_report;
use curveflow::scenarios::make_ellipse;

fn main() {
    let mut cfg = StepConfig::semi_implicit().t_max(8.0).every(50);
    cfg.record.monitors.theta = false;
    cfg.record.monitors.ratio = false;
    let tr = run(make_ellipse(2.0, 1.0, 256).unwrap(), &ForcingSpec::area_preserving(), &cfg).expect("run");
    let rep = convergence_report(&tr);

    println!("{:>6} {:>12} {:>12} {:>12}", "t", "|k - 1/R|", "pinching", "deficit");
    let stride = (rep.rows.len() / 12).max(1);
    for r in rep.rows.iter().step_by(stride) {
        println!("{:>6.2} {:>12.3e} {:>12.3e} {:>12.3e}", r.t, r.kappa_dev, r.pinching, r.deficit);
    }
    println!("R_hat {:.6} (sqrt 2 = {:.6})", rep.r_hat, 2f64.sqrt());
    println!("convex from t = {:?}", rep.convex_from);
    if let (Some(fit), Some(beta)) = (&rep.deficit_fit, rep.implied_beta) {
        println!("deficit decays like exp(-{:.3} t) over [{:.2}, {:.2}], beta {beta:.3}", fit.rate, fit.t0, fit.t1);
    }
}
