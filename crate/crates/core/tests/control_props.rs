use fishsmoker::control::{fan_hysteresis, pid_step, relay_modulate, Action, PidConfig, PidGains, PidState, RelayWindow};
use proptest::prelude::*;

fn arb_cfg() -> impl Strategy<Value = PidConfig<f64>> {
    (0.0f64..150.0, -5.0f64..0.0, 0.1f64..5.0, 0.05f64..3.0, any::<bool>()).prop_map(|(sp, lo, span, windup, rev)| {
        let mut c = PidConfig::new(sp);
        c.output_min = lo;
        c.output_max = lo + span;
        c.windup_limit = windup;
        c.action = if rev { Action::Reverse } else { Action::Direct };
        c
    })
}

fn arb_gains() -> impl Strategy<Value = PidGains<f64>> {
    (0.0f64..20.0, 0.0f64..5.0, 0.0f64..50.0).prop_map(|(kp, ki, kd)| PidGains::new(kp, ki, kd))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn pid_output_clamped_and_integral_bounded(
        cfg in arb_cfg(),
        gains in arb_gains(),
        seq in prop::collection::vec((-100.0f64..300.0, 0.01f64..5.0), 1..40),
    ) {
        let mut st = PidState::reset();
        for (m, dt) in seq {
            let (next, u) = pid_step(&st, &gains, &cfg, m, dt).unwrap();
            prop_assert!(u >= cfg.output_min && u <= cfg.output_max, "u={u}");
            prop_assert!(next.integral.abs() <= cfg.windup_limit, "I={}", next.integral);
            st = next;
        }
    }
}

proptest! {
    #[test]
    fn pure_p_is_clamped_proportional(kp in 0.0f64..20.0, sp in 0.0f64..120.0, seq in prop::collection::vec(0.0f64..150.0, 1..30)) {
        let cfg = PidConfig::new(sp);
        let gains = PidGains::new(kp, 0.0, 0.0);
        let mut st = PidState::reset();
        for m in seq {
            let (next, u) = pid_step(&st, &gains, &cfg, m, 1.0).unwrap();
            prop_assert_eq!(u, (kp * (sp - m)).clamp(0.0, 1.0));
            st = next;
        }
    }

    #[test]
    fn pid_is_deterministic(gains in arb_gains(), cfg in arb_cfg(), seq in prop::collection::vec(-50.0f64..200.0, 1..30)) {
        let run = || {
            let mut st = PidState::reset();
            let mut out = Vec::new();
            for &m in &seq {
                let (n, u) = pid_step(&st, &gains, &cfg, m, 1.0).unwrap();
                st = n;
                out.push(u.to_bits());
            }
            (out, st)
        };
        prop_assert_eq!(run(), run());
    }

    #[test]
    fn relay_average_matches_grid_duty(k in 0usize..=50, windows in 1usize..6) {
        // dt = 0.1, window 5 s: 50 ticks per window
        let w = RelayWindow::new(5.0);
        let duty = k as f64 / 50.0;
        let n = 50 * windows;
        let on = (0..n).filter(|&i| relay_modulate(duty, &w, i as f64 * 0.1)).count();
        prop_assert_eq!(on, k * windows);
    }

    #[test]
    fn relay_average_within_one_tick(duty in 0.0f64..=1.0, windows in 1usize..6) {
        let w = RelayWindow::new(10.0);
        let dt = 0.1;
        let n = 100 * windows;
        let on = (0..n).filter(|&i| relay_modulate(duty, &w, i as f64 * dt)).count();
        let frac = on as f64 / n as f64;
        prop_assert!((frac - duty).abs() <= dt / 10.0 + 1e-12, "frac={frac} duty={duty}");
    }

    #[test]
    fn fan_hysteresis_has_a_deadband(sp in 30.0f64..90.0, h in 0.1f64..3.0, x in 0.0f64..1.0) {
        // inside [sp - h, sp] the previous state is kept
        let m = sp - x * h;
        prop_assert!(fan_hysteresis(m, sp, h, true));
        prop_assert!(!fan_hysteresis(m, sp, h, false));
        prop_assert!(fan_hysteresis(sp + 0.01, sp, h, false));
        prop_assert!(!fan_hysteresis(sp - h - 0.01, sp, h, true));
    }
}

/// First-order plant `C dT/dt = u*P - G (T - Ta)`, integrated by explicit
/// Euler at 0.1 s, heater duty held for each 1 s control period.
#[test]
fn integral_action_removes_steady_state_error() {
    let (c, p, g, ta) = (400.0, 600.0, 5.0, 28.0);
    let cfg = PidConfig::new(85.0);
    let gains = PidGains::new(0.1, 0.02, 0.0);
    let mut st = PidState::reset();
    let mut t: f64 = 84.0;
    for _ in 0..1200 {
        let (n, u) = pid_step(&st, &gains, &cfg, t, 1.0).unwrap();
        st = n;
        for _ in 0..10 {
            t += 0.1 * (u * p - g * (t - ta)) / c;
        }
    }
    assert!((85.0 - t).abs() < 0.1, "T={t}");
}

#[test]
fn pid_generic_over_f32() {
    let cfg = PidConfig::<f32>::new(85.0);
    let gains = PidGains::<f32>::new(0.5, 0.0, 0.0);
    let (_, u) = pid_step(&PidState::reset(), &gains, &cfg, 84.0, 1.0).unwrap();
    assert_eq!(u, 0.5);
}
