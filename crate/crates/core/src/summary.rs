//! Run statistics computed from telemetry.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::sequencer::{FaultCause, Phase};
use crate::telemetry::TelemetryRecord;

/// Half-width of the regulation band, °C.
pub const REGULATION_BAND: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseStats {
    pub phase: Phase,
    pub duration: f64,
    pub cook_min: f64,
    pub cook_max: f64,
    pub smoke_min: f64,
    pub smoke_max: f64,
}

/// Quality of one regulated phase against its setpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regulation {
    pub setpoint: f64,
    /// max(reading - setpoint) over the phase, floored at 0.
    pub overshoot: f64,
    /// Time from phase start after which the reading never leaves the band.
    pub settling_time: Option<f64>,
    /// In-band share of samples from the first band entry to phase end.
    pub time_in_band_fraction: f64,
    /// ∫|setpoint - reading| dt over the phase.
    pub iae: f64,
    pub samples: usize,
}

/// Regulation statistics for a reading series sampled every `dt` seconds.
pub fn regulation(readings: &[f64], setpoint: f64, dt: f64) -> Option<Regulation> {
    if readings.is_empty() {
        return None;
    }
    let in_band = |r: f64| (r - setpoint).abs() <= REGULATION_BAND;
    let overshoot = readings
        .iter()
        .map(|r| r - setpoint)
        .fold(0.0_f64, f64::max);
    let settling_time = match readings.iter().rposition(|&r| !in_band(r)) {
        None => Some(0.0),
        Some(i) if i + 1 < readings.len() => Some((i + 1) as f64 * dt),
        Some(_) => None,
    };
    let time_in_band_fraction = match readings.iter().position(|&r| in_band(r)) {
        Some(first) => {
            let tail = &readings[first..];
            tail.iter().filter(|&&r| in_band(r)).count() as f64 / tail.len() as f64
        }
        None => 0.0,
    };
    let iae = readings.iter().map(|r| (setpoint - r).abs() * dt).sum();
    Some(Regulation {
        setpoint,
        overshoot,
        settling_time,
        time_in_band_fraction,
        iae,
        samples: readings.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub preset: String,
    pub phases: Vec<PhaseStats>,
    pub cook: Option<Regulation>,
    pub smoke: Option<Regulation>,
    pub initial_cook_reading: f64,
    pub peak_cook_reading: f64,
    pub total_duration: f64,
    pub terminal_phase: Phase,
    pub fault_cause: Option<FaultCause>,
}

impl RunSummary {
    pub fn phase_duration(&self, phase: Phase) -> f64 {
        self.phases
            .iter()
            .filter(|p| p.phase == phase)
            .map(|p| p.duration)
            .sum()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Run summary: {}", self.preset);
        let _ = writeln!(
            out,
            "  {:<10} {:>9} {:>9} {:>9} {:>9} {:>9}",
            "phase", "time [s]", "cook min", "cook max", "smk min", "smk max"
        );
        for p in &self.phases {
            let _ = writeln!(
                out,
                "  {:<10} {:>9.0} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
                p.phase.name(),
                p.duration,
                p.cook_min,
                p.cook_max,
                p.smoke_min,
                p.smoke_max
            );
        }
        for (label, reg) in [("Cook", &self.cook), ("Smoke", &self.smoke)] {
            if let Some(r) = reg {
                let settle = r
                    .settling_time
                    .map_or_else(|| "not settled".to_string(), |s| format!("{s:.0} s"));
                let _ = writeln!(
                    out,
                    "  {label} regulation at {:.1} °C: overshoot {:.2} °C, settling {settle}, in band {:.1} %, IAE {:.1} °C·s",
                    r.setpoint,
                    r.overshoot,
                    100.0 * r.time_in_band_fraction,
                    r.iae
                );
            }
        }
        let _ = writeln!(
            out,
            "  Cook probe: initial {:.2} °C, peak {:.2} °C",
            self.initial_cook_reading, self.peak_cook_reading
        );
        let _ = writeln!(
            out,
            "  Total: {:.0} s ({:.1} min), ended in {}{}",
            self.total_duration,
            self.total_duration / 60.0,
            self.terminal_phase,
            self.fault_cause.map(|c| format!(" ({c})")).unwrap_or_default()
        );
        out
    }

    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "preset={}", self.preset);
        let _ = writeln!(out, "terminal_phase={}", self.terminal_phase);
        if let Some(c) = self.fault_cause {
            let _ = writeln!(out, "fault_cause={c}");
        }
        let _ = writeln!(out, "total_duration_s={:.3}", self.total_duration);
        let _ = writeln!(out, "initial_cook_reading_c={:.4}", self.initial_cook_reading);
        let _ = writeln!(out, "peak_cook_reading_c={:.4}", self.peak_cook_reading);
        for p in &self.phases {
            let key = p.phase.name().to_lowercase();
            let _ = writeln!(out, "{key}.duration_s={:.3}", p.duration);
            let _ = writeln!(out, "{key}.cook_min_c={:.4}", p.cook_min);
            let _ = writeln!(out, "{key}.cook_max_c={:.4}", p.cook_max);
            let _ = writeln!(out, "{key}.smoke_min_c={:.4}", p.smoke_min);
            let _ = writeln!(out, "{key}.smoke_max_c={:.4}", p.smoke_max);
        }
        for (key, reg) in [("cook", &self.cook), ("smoke", &self.smoke)] {
            if let Some(r) = reg {
                let _ = writeln!(out, "{key}.setpoint_c={:.4}", r.setpoint);
                let _ = writeln!(out, "{key}.overshoot_c={:.4}", r.overshoot);
                match r.settling_time {
                    Some(s) => {
                        let _ = writeln!(out, "{key}.settling_time_s={s:.3}");
                    }
                    None => {
                        let _ = writeln!(out, "{key}.settling_time_s=none");
                    }
                }
                let _ = writeln!(out, "{key}.time_in_band_fraction={:.6}", r.time_in_band_fraction);
                let _ = writeln!(out, "{key}.iae={:.4}", r.iae);
            }
        }
        out
    }
}

pub fn summarize(telemetry: &[TelemetryRecord], config: &ScenarioConfig) -> Result<RunSummary> {
    let first = telemetry
        .first()
        .ok_or_else(|| Error::invalid("telemetry is empty"))?;
    let dt = config.steps.control_dt;

    let mut phases: Vec<PhaseStats> = Vec::new();
    for r in telemetry {
        match phases.last_mut() {
            Some(p) if p.phase == r.phase => {
                p.duration += dt;
                p.cook_min = p.cook_min.min(r.cook_reading);
                p.cook_max = p.cook_max.max(r.cook_reading);
                p.smoke_min = p.smoke_min.min(r.smoke_reading);
                p.smoke_max = p.smoke_max.max(r.smoke_reading);
            }
            _ => phases.push(PhaseStats {
                phase: r.phase,
                duration: dt,
                cook_min: r.cook_reading,
                cook_max: r.cook_reading,
                smoke_min: r.smoke_reading,
                smoke_max: r.smoke_reading,
            }),
        }
    }

    let series = |phase: Phase, pick: fn(&TelemetryRecord) -> f64| -> Vec<f64> {
        telemetry.iter().filter(|r| r.phase == phase).map(pick).collect()
    };
    let cook = regulation(&series(Phase::Cook, |r| r.cook_reading), config.plan.cook_setpoint, dt);
    let smoke = regulation(&series(Phase::Smoke, |r| r.smoke_reading), config.plan.smoke_setpoint, dt);

    let peak_cook_reading = telemetry
        .iter()
        .map(|r| r.cook_reading)
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);

    let last = telemetry.last().expect("non-empty");
    let terminal_phase = match last.phase {
        Phase::Dry if phases.last().is_some_and(|p| p.duration >= config.plan.dry - 1e-9) => Phase::Done,
        other => other,
    };

    Ok(RunSummary {
        preset: config.preset_name.clone(),
        total_duration: phases.iter().map(|p| p.duration).sum(),
        phases,
        cook,
        smoke,
        initial_cook_reading: first.cook_reading,
        peak_cook_reading,
        terminal_phase,
        fault_cause: None,
    })
}
