//! Runs every preset and prints the figures the calibration constants are
//! fitted against: total duration, boil time, peak cook reading and the
//! cook/smoke regulation metrics.
//!
//! Optional arguments override the fish thermal load, in preset order:
//! `cargo run --example calibrate -- 1000 0 2700 0`

use fishsmoker::{run_scenario, FishPreset, Phase, ScenarioConfig};

fn main() {
    let loads: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let presets = [FishPreset::ScadLarge, FishPreset::ScadMedium, FishPreset::Milkfish, FishPreset::Tilapia];
    for (i, p) in presets.iter().enumerate() {
        let mut cfg = ScenarioConfig::preset(*p);
        if let Some(&l) = loads.get(i) {
            cfg.plant.fish_thermal_load = l;
        }
        let out = match run_scenario(&cfg) {
            Ok(o) => o,
            Err(e) => {
                println!("{:<12} error: {e}", p.name());
                continue;
            }
        };
        let s = &out.summary;
        let cook = s.cook.as_ref();
        let smoke = s.smoke.as_ref();
        println!(
            "{:<12} total={:.2}min boil={:.0}s peak={:.4} init={:.4} end={} cook[settle={:?} band={:.3} ovs={:.3}] smoke[settle={:?} band={:.3} ovs={:.3}]",
            p.name(),
            s.total_duration / 60.0,
            s.phase_duration(Phase::BoilWater),
            s.peak_cook_reading,
            s.initial_cook_reading,
            s.terminal_phase.name(),
            cook.and_then(|r| r.settling_time),
            cook.map_or(f64::NAN, |r| r.time_in_band_fraction),
            cook.map_or(f64::NAN, |r| r.overshoot),
            smoke.and_then(|r| r.settling_time),
            smoke.map_or(f64::NAN, |r| r.time_in_band_fraction),
            smoke.map_or(f64::NAN, |r| r.overshoot),
        );
    }
}
