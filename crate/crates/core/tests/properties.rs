use std::f64::consts::PI;

use approx::assert_relative_eq;
use curveflow::flow::{run, MonitorToggles, StepConfig};
use curveflow::forcing::ForcingSpec;
use curveflow::geometry::{enclosed_area, frame, is_simple, ClosedCurve, Polyline, Vec2};
use curveflow::io::{read_curve_csv, write_curve_csv};
use curveflow::monitors::{chord_psi_min, conserved_interpolant, psi, theta_extremes, RatioKind};
use curveflow::oracles::{brute_force_ratio, brute_force_theta, menger_energy, perimeter, shoelace};
use proptest::prelude::*;

/// `r(φ) = 1 + Σ a_k cos(kφ + p_k)` sampled at `n` equal angles.
fn star(n: usize, modes: &[(f64, f64)]) -> ClosedCurve {
    let v = (0..n)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / n as f64;
            let r = 1.0 + modes.iter().enumerate().map(|(k, (a, p))| a * ((k + 2) as f64 * phi + p).cos()).sum::<f64>();
            Vec2::from_angle(phi) * r
        })
        .collect();
    ClosedCurve::new(v).unwrap()
}

fn star_strategy() -> impl Strategy<Value = ClosedCurve> {
    (24usize..80, prop::collection::vec((0.0f64..0.08, 0.0f64..2.0 * PI), 1..4)).prop_map(|(n, m)| star(n, &m))
}

fn raw(c: &ClosedCurve) -> Vec<[f64; 2]> {
    c.vertices().iter().map(|p| [p.x, p.y]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_is_symmetric(total in 0.1f64..100.0, frac in 0.0f64..=1.0) {
        let l = frac * total;
        let a = psi(l, total).unwrap();
        let b = psi(total - l, total).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * total);
        prop_assert!(a >= 0.0 && a <= total / PI + 1e-12);
    }

    #[test]
    fn psi_ratio_matches_brute_force(c in star_strategy()) {
        let fast = chord_psi_min(&c);
        let slow = brute_force_ratio(&raw(&c), RatioKind::DOverPsi);
        prop_assert!((fast.min_value - slow.min_value).abs() <= 1e-12);
        prop_assert!(fast.min_value <= 1.0);
    }

    #[test]
    fn theta_matches_brute_force_and_identity(c in star_strategy()) {
        let t = theta_extremes(&c);
        let (lo, hi) = brute_force_theta(&raw(&c), true);
        prop_assert!((t.theta_min - lo).abs() <= 1e-12);
        prop_assert!((t.theta_sup - hi).abs() <= 1e-12);
        prop_assert!(t.identity_defect.unwrap() <= 1e-12);
    }

    #[test]
    fn frame_agrees_with_raw_formulas(c in star_strategy()) {
        let f = frame(&c).unwrap();
        let pts = raw(&c);
        prop_assert!((f.length - perimeter(&pts, true)).abs() <= 1e-12 * f.length);
        prop_assert!((enclosed_area(&c).unwrap() - shoelace(&pts)).abs() <= 1e-12);
        prop_assert!((f.total_turning() - 2.0 * PI).abs() <= 1e-10);
        // Turning-angle and Menger curvature agree to second order.
        prop_assert!((f.energy() / menger_energy(&pts) - 1.0).abs() < 0.05);
    }

    #[test]
    fn similarity_covariance(c in star_strategy(), k in 0.2f64..5.0, angle in 0.0f64..2.0 * PI, dx in -3.0f64..3.0) {
        let moved: Vec<Vec2> = c.vertices().iter().map(|p| p.rotate(angle) * k + Vec2::new(dx, -dx)).collect();
        let m = ClosedCurve::new(moved).unwrap();
        let (f0, f1) = (frame(&c).unwrap(), frame(&m).unwrap());
        prop_assert!((f1.length - k * f0.length).abs() <= 1e-10 * f1.length);
        for (a, b) in f0.kappa.iter().zip(&f1.kappa) {
            prop_assert!((b * k - a).abs() <= 1e-9 * (1.0 + a.abs()));
        }
        prop_assert!((chord_psi_min(&c).min_value - chord_psi_min(&m).min_value).abs() <= 1e-9);
        prop_assert!((theta_extremes(&c).theta_min - theta_extremes(&m).theta_min).abs() <= 1e-9);
    }

    #[test]
    fn stars_are_simple(c in star_strategy()) {
        prop_assert!(is_simple(&c).is_simple());
    }

    #[test]
    fn csv_round_trip_is_exact(xs in prop::collection::vec((any::<f64>(), any::<f64>()), 3..40)) {
        let v: Vec<Vec2> = xs.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|&(x, y)| Vec2::new(x, y)).collect();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &v, None).unwrap();
        let back = read_curve_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), v.len());
        for (a, b) in v.iter().zip(&back) {
            prop_assert_eq!(a.x.to_bits(), b.x.to_bits());
            prop_assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn preserving_flows_conserve_their_quantity(c in star_strategy(), which in 0usize..3) {
        let c = ClosedCurve::new(curveflow::geometry::resample_points(c.vertices(), true, 64).unwrap()).unwrap();
        let spec = match which {
            0 => ForcingSpec::area_preserving(),
            1 => ForcingSpec::LengthPreserving,
            _ => match ForcingSpec::interpolated_for(1.02, &c) {
                Ok(s) => s,
                Err(_) => ForcingSpec::area_preserving(),
            },
        };
        let gamma = spec.conserved_gamma().unwrap();
        let mut cfg = StepConfig::semi_implicit().t_max(0.05).every(5);
        cfg.record.monitors = MonitorToggles { theta: false, ratio: false, isoperimetric: false };
        let tr = run(c, &spec, &cfg).unwrap();
        let q: Vec<f64> = tr.samples.iter().map(|s| conserved_interpolant(gamma, s.area, s.length)).collect();
        for x in &q {
            prop_assert!((x / q[0] - 1.0).abs() <= 1e-6, "{} drifted to {x} from {}", spec.name(), q[0]);
        }
    }

    #[test]
    fn runs_are_deterministic(c in star_strategy()) {
        let cfg = StepConfig::semi_implicit().t_max(0.02).every(3);
        let a = run(c.clone(), &ForcingSpec::area_preserving(), &cfg).unwrap();
        let b = run(c, &ForcingSpec::area_preserving(), &cfg).unwrap();
        prop_assert_eq!(format!("{:?}", a.samples), format!("{:?}", b.samples));
        prop_assert_eq!(a.final_state.vertices(), b.final_state.vertices());
    }
}

#[test]
fn circle_ratio_is_one() {
    let c = star(97, &[]);
    assert_relative_eq!(chord_psi_min(&c).min_value, 1.0, max_relative = 1e-12);
}
