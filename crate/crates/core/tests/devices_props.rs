use fishsmoker::devices::{
    apply_actuators, sensor_sample, tray_update, ActuatorBank, CombustionLatch, SensorModel, SensorReading, TrayActuator,
    TrayCommand,
};
use fishsmoker::plant::default_plant_config;
use fishsmoker::FishPreset;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn readings_are_whole_counts(temp in -60.0f64..130.0, sigma in prop_oneof![Just(0.0), 0.0f64..2.0], seed in any::<u64>()) {
        let model = SensorModel { noise_sigma: sigma, ..SensorModel::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sensor_sample(temp, &model, 0.0, &SensorReading::none(), &mut rng);
        let counts = r.value / model.resolution;
        prop_assert_eq!(counts, counts.round());
        prop_assert_eq!(r.valid, r.value >= -55.0 && r.value <= 125.0);
    }

    #[test]
    fn readings_change_at_most_once_per_conversion(
        temps in prop::collection::vec(0.0f64..120.0, 20..200),
        dt in prop_oneof![Just(0.1), Just(0.25), 0.05f64..1.0],
    ) {
        let model = SensorModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut last = SensorReading::none();
        let mut prev_sample: Option<f64> = None;
        for (i, &temp) in temps.iter().enumerate() {
            let t = i as f64 * dt;
            let r = sensor_sample(temp, &model, t, &last, &mut rng);
            if r.sample_time != last.sample_time {
                if let Some(p) = prev_sample {
                    prop_assert!(r.sample_time - p >= model.conversion_period - 1e-9);
                }
                prev_sample = Some(r.sample_time);
            } else {
                prop_assert_eq!(r.value.to_bits(), last.value.to_bits());
            }
            last = r;
        }
    }

    #[test]
    fn tray_moves_monotonically_and_on_time(dt in 0.01f64..1.0, start in 0.0f64..=1.0, lower in any::<bool>()) {
        let mut a = TrayActuator { position: start, ..TrayActuator::default() };
        let cmd = if lower { TrayCommand::Lower } else { TrayCommand::Raise };
        let target = if lower { 1.0 } else { 0.0 };
        let expected = (target - start).abs() * a.traverse_time();
        let mut t = 0.0;
        while a.position != target {
            let next = tray_update(&a, cmd, dt);
            if lower {
                prop_assert!(next.position >= a.position);
            } else {
                prop_assert!(next.position <= a.position);
            }
            a = next;
            t += dt;
            prop_assert!(t < expected + 2.0 * dt, "took {t} for {expected}");
        }
        prop_assert!(t >= expected - dt - 1e-9);
        prop_assert!(!a.moving);
    }

    #[test]
    fn apply_actuators_is_a_pure_function(
        heater in any::<bool>(),
        igniter in any::<bool>(),
        fans in any::<[bool; 4]>(),
        smoke in any::<bool>(),
        lit in any::<bool>(),
    ) {
        let cfg = default_plant_config(FishPreset::ScadLarge);
        let bank = ActuatorBank { heater, igniter, boiler_fans: fans, smoke_fan: smoke, tray_command: TrayCommand::Hold };
        let a = apply_actuators(&bank, lit, &cfg).unwrap();
        prop_assert_eq!(&a, &apply_actuators(&bank, lit, &cfg).unwrap());
        prop_assert_eq!(a["heater"], heater);
        prop_assert_eq!(a["igniter"], lit);
        prop_assert_eq!(a["boiler_fans"], fans.iter().any(|&f| f));
        prop_assert_eq!(a["smoke_fan"], smoke);
    }
}

#[test]
fn reference_traverse_is_about_four_seconds() {
    let a = TrayActuator::default();
    assert!((a.belt_speed - 0.0785).abs() < 5e-4);
    assert!((a.traverse_time() - 3.82).abs() < 0.01);
}

#[test]
fn latch_burns_once() {
    let mut l = CombustionLatch::new(100.0);
    assert!(!l.is_lit(0.0));
    l.update(true, 10.0);
    l.update(false, 11.0);
    assert!(l.is_lit(10.0) && l.is_lit(109.9));
    assert!(!l.is_lit(110.0));
    l.update(true, 200.0);
    assert!(!l.is_lit(200.0));
}
