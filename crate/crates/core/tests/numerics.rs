mod common;

use canon_symmetry_core::canonical::{first_integral_test, HamiltonianSystem, IntegralCandidate};
use canon_symmetry_core::numverify::{drift_report, integrate_hamilton, Method, Stepper};
use canon_symmetry_core::symcore::ZeroTestConfig;
use common::space;

fn sys(n: usize, h: &str) -> HamiltonianSystem {
    HamiltonianSystem::parse(space(n), h).unwrap()
}

fn cand(s: &HamiltonianSystem, w: &str) -> IntegralCandidate {
    IntegralCandidate::new(s.space().parse(w).unwrap()).unwrap()
}

fn energy_drift(method: Method, h: f64) -> f64 {
    let osc = sys(1, "(p1^2 + x1^2)/2");
    let traj = integrate_hamilton(&osc, &[1.0, 0.0], 0.0, 10.0, h, method).unwrap();
    drift_report(&cand(&osc, "(p1^2 + x1^2)/2"), &traj, false).unwrap().max_abs_deviation
}

#[test]
fn verlet_energy_drift_is_second_order() {
    let drifts: Vec<f64> = [4e-3, 2e-3, 1e-3].iter().map(|h| energy_drift(Method::Verlet, *h)).collect();
    for pair in drifts.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((3.0..=5.0).contains(&ratio), "drifts {drifts:?}, ratio {ratio}");
    }
}

#[test]
fn midpoint_conserves_quadratic_energy_and_converges_in_state() {
    // the midpoint rule preserves quadratic invariants exactly, so its
    // order shows in the state error instead
    assert!(energy_drift(Method::ImplicitMidpoint, 4e-3) < 1e-11);
    let osc = sys(1, "(p1^2 + x1^2)/2");
    let errors: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|h| {
            let traj = integrate_hamilton(&osc, &[1.0, 0.0], 0.0, 10.0, *h, Method::ImplicitMidpoint).unwrap();
            let (t, z) = traj.last();
            (z[0] - t.cos()).abs().max((z[1] + t.sin()).abs())
        })
        .collect();
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((3.0..=5.0).contains(&ratio), "errors {errors:?}, ratio {ratio}");
    }
}

#[test]
fn verlet_is_time_symmetric() {
    let cases = [
        (sys(1, "(p1^2 + x1^2)/2"), vec![1.0, 0.3]),
        (sys(2, "(p1^2 + p2^2)/2 + (x1^2 + x2^2)/2 + x1^2*x2"), vec![0.4, -0.2, 0.1, 0.5]),
        (sys(1, "p1^2 + x1^4/4 - x1^2/2"), vec![0.5, 0.0]),
    ];
    for (s, q0) in cases {
        let stepper = Stepper::new(&s, Method::Verlet).unwrap();
        let h = 1e-3;
        let mut z = q0.clone();
        for k in 0..2000 {
            stepper.step(k as f64 * h, &mut z, h).unwrap();
        }
        for k in (0..2000).rev() {
            stepper.step((k + 1) as f64 * h, &mut z, -h).unwrap();
        }
        let err = z.iter().zip(&q0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "returned with error {err}");
    }
}

/// Proved integrals drift by less than 1e-6; candidates whose residual stays
/// away from zero drift by more than 1e-3.
#[test]
fn drift_agrees_with_verdicts() {
    let cfg = ZeroTestConfig::default();
    let cases: &[(usize, &str, &[f64], &[&str], &[&str])] = &[
        (1, "p1^2/2", &[0.0, 1.0], &["p1", "p1^2/2", "x1 - t*p1"], &["x1", "x1*p1"]),
        (1, "p1^2/2 + x1", &[0.0, 1.0], &["p1^2/2 + x1", "p1 + t"], &["p1", "x1"]),
        (1, "(p1^2 + x1^2)/2", &[1.0, 0.0], &["(p1^2 + x1^2)/2"], &["p1^2"]),
        (2, "(p1^2 + p2^2)/2 + (x1^2 + x2^2)/2", &[1.0, 0.0, 0.0, 0.7], &["x1*p2 - x2*p1"], &["x1*p1 + x2*p2"]),
        // not separable: implicit midpoint
        (1, "(1 + x1^2)*p1^2/2", &[0.5, 0.5], &["(1 + x1^2)*p1^2/2"], &["p1"]),
    ];
    for (n, h, q0, integrals, others) in cases {
        let s = sys(*n, h);
        let method = Method::preferred_for(&s);
        let traj = integrate_hamilton(&s, q0, 0.0, 10.0, 1e-3, method).unwrap();
        for w in *integrals {
            let c = cand(&s, w);
            assert!(first_integral_test(&c, &s, &cfg).unwrap().verdict.is_proved(), "{w}");
            let drift = drift_report(&c, &traj, false).unwrap().max_abs_deviation;
            assert!(drift < 1e-6, "{w} under {h} ({method}): drift {drift}");
        }
        for w in *others {
            let c = cand(&s, w);
            assert!(!first_integral_test(&c, &s, &cfg).unwrap().passed(), "{w}");
            let drift = drift_report(&c, &traj, false).unwrap().max_abs_deviation;
            assert!(drift > 1e-3, "{w} under {h}: drift {drift}");
        }
    }
}

#[test]
fn free_particle_trajectory_is_linear() {
    let s = sys(2, "(p1^2 + p2^2)/2");
    let traj = integrate_hamilton(&s, &[0.0, 1.0, 2.0, -0.5], 0.0, 5.0, 1e-2, Method::ImplicitMidpoint).unwrap();
    for (t, z) in traj.times.iter().zip(&traj.states) {
        assert!((z[0] - 2.0 * t).abs() < 1e-10 && (z[1] - (1.0 - 0.5 * t)).abs() < 1e-10);
    }
}
