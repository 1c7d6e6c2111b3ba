use fishsmoker::mechanics::{belt_length, belt_velocity, driven_speed, required_torque};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn speed_times_diameter_is_conserved(d1 in 0.005f64..0.5, n1 in 0.1f64..3000.0, d2 in 0.005f64..0.5) {
        let n2 = driven_speed(d1, n1, d2).unwrap();
        prop_assert!(rel_close(d1 * n1, d2 * n2, 1e-12));
    }

    #[test]
    fn both_pulleys_share_belt_velocity(d1 in 0.005f64..0.5, n1 in 0.1f64..3000.0, d2 in 0.005f64..0.5) {
        let n2 = driven_speed(d1, n1, d2).unwrap();
        let v1 = belt_velocity(d1, n1).unwrap();
        let v2 = belt_velocity(d2, n2).unwrap();
        prop_assert!(rel_close(v1, v2, 1e-12));
    }

    #[test]
    fn torque_times_angular_speed_is_power(p in 0.0f64..5000.0, n in 0.1f64..5000.0) {
        let t = required_torque(p, n).unwrap();
        let omega = 2.0 * std::f64::consts::PI * n / 60.0;
        prop_assert!(rel_close(t * omega, p, 1e-12) || p == 0.0 && t == 0.0);
    }

    #[test]
    fn belt_length_symmetric_and_increasing(d1 in 0.005f64..0.3, d2 in 0.005f64..0.3, d in 0.31f64..2.0, extra in 1e-3f64..1.0) {
        let l = belt_length(d1, d2, d).unwrap();
        prop_assert_eq!(l, belt_length(d2, d1, d).unwrap());
        prop_assert!(belt_length(d1, d2, d + extra).unwrap() > l);
    }
}

#[test]
fn f32_instantiation_agrees_with_f64() {
    let v32 = belt_velocity(0.06_f32, 25.0).unwrap();
    let v64 = belt_velocity(0.06_f64, 25.0).unwrap();
    assert!((v32 as f64 - v64).abs() < 1e-6);
    let l32 = belt_length(0.06_f32, 0.03, 0.10).unwrap();
    assert!((l32 as f64 - 0.3436).abs() < 5e-4);
}
