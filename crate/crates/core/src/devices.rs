//! Sensor, tray-lift and actuator models.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plant::{ActuatorMap, PlantConfig, BOILER_FANS, COMBUSTION, HEATER, SMOKE_FAN};

/// Quantizing digital temperature probe (12-bit, 0.0625 °C per count).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorModel {
    #[serde(default = "SensorModel::default_resolution")]
    pub resolution: f64,
    #[serde(default = "SensorModel::default_conversion_period")]
    pub conversion_period: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default = "SensorModel::default_range")]
    pub range: [f64; 2],
}

impl SensorModel {
    fn default_resolution() -> f64 {
        0.0625
    }
    fn default_conversion_period() -> f64 {
        0.75
    }
    fn default_range() -> [f64; 2] {
        [-55.0, 125.0]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0) || !self.resolution.is_finite() {
            return Err(Error::invalid("sensor resolution must be > 0"));
        }
        if !(self.conversion_period > 0.0) || !self.conversion_period.is_finite() {
            return Err(Error::invalid("sensor conversion period must be > 0"));
        }
        if !(self.noise_sigma >= 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::invalid("sensor noise sigma must be >= 0"));
        }
        if !(self.range[0] < self.range[1]) {
            return Err(Error::invalid("sensor range must be increasing"));
        }
        Ok(())
    }
}

impl Default for SensorModel {
    fn default() -> Self {
        Self {
            resolution: Self::default_resolution(),
            conversion_period: Self::default_conversion_period(),
            noise_sigma: 0.0,
            range: Self::default_range(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorReading {
    pub value: f64,
    pub sample_time: f64,
    pub valid: bool,
}

impl SensorReading {
    /// Placeholder before the first conversion; always resampled.
    pub fn none() -> Self {
        Self {
            value: f64::NAN,
            sample_time: f64::NEG_INFINITY,
            valid: false,
        }
    }
}

/// Samples the probe at time `t`.
///
/// Within one conversion period of the previous sample the previous reading
/// is held. Otherwise the (optionally noisy) temperature is rounded to the
/// nearest count; values outside the probe range come back with
/// `valid = false`.
pub fn sensor_sample<R: Rng + ?Sized>(
    true_temp: f64,
    model: &SensorModel,
    t: f64,
    last: &SensorReading,
    rng: &mut R,
) -> SensorReading {
    // tolerate decimal clock drift when the period divides the control step
    if t - last.sample_time < model.conversion_period - 1e-9 {
        return *last;
    }
    let noisy = if model.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, model.noise_sigma).expect("sigma validated >= 0");
        true_temp + normal.sample(rng)
    } else {
        true_temp
    };
    if !noisy.is_finite() {
        return SensorReading {
            value: f64::NAN,
            sample_time: t,
            valid: false,
        };
    }
    let value = (noisy / model.resolution).round() * model.resolution;
    let valid = value >= model.range[0] && value <= model.range[1];
    SensorReading {
        value,
        sample_time: t,
        valid,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrayCommand {
    Raise,
    Lower,
    #[default]
    Hold,
}

/// Stepper-driven tray lift, modeled kinematically at constant belt speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrayActuator {
    pub steps_per_rev: u32,
    /// m
    pub driver_pulley_diameter: f64,
    /// m/s
    pub belt_speed: f64,
    /// m
    pub travel: f64,
    /// 0 = raised, 1 = lowered.
    #[serde(default)]
    pub position: f64,
    #[serde(default)]
    pub moving: bool,
}

impl Default for TrayActuator {
    fn default() -> Self {
        Self {
            steps_per_rev: 200,
            driver_pulley_diameter: 0.03,
            // 6 cm pulley at 25 rpm
            belt_speed: std::f64::consts::PI * 0.06 * 25.0 / 60.0,
            travel: 0.30,
            position: 0.0,
            moving: false,
        }
    }
}

impl TrayActuator {
    pub fn validate(&self) -> Result<()> {
        if !(self.belt_speed > 0.0) || !self.belt_speed.is_finite() {
            return Err(Error::invalid("tray belt speed must be > 0"));
        }
        if !(self.travel > 0.0) || !self.travel.is_finite() {
            return Err(Error::invalid("tray travel must be > 0"));
        }
        if !(self.driver_pulley_diameter > 0.0) {
            return Err(Error::invalid("tray driver pulley diameter must be > 0"));
        }
        if !(0.0..=1.0).contains(&self.position) {
            return Err(Error::invalid("tray position must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Seconds for a full raise or lower.
    pub fn traverse_time(&self) -> f64 {
        self.travel / self.belt_speed
    }

    /// Motor full steps from the raised position, for telemetry.
    pub fn steps(&self) -> u64 {
        let revs = self.position * self.travel / (std::f64::consts::PI * self.driver_pulley_diameter);
        (revs * f64::from(self.steps_per_rev)).round() as u64
    }
}

pub fn tray_update(actuator: &TrayActuator, command: TrayCommand, dt: f64) -> TrayActuator {
    let mut next = *actuator;
    let rate = actuator.belt_speed / actuator.travel;
    let target = match command {
        TrayCommand::Hold => {
            next.moving = false;
            return next;
        }
        TrayCommand::Lower => 1.0,
        TrayCommand::Raise => 0.0,
    };
    let delta = target - actuator.position;
    let max_move = rate * dt;
    if delta.abs() <= max_move {
        next.position = target;
        next.moving = false;
    } else {
        next.position = actuator.position + max_move.copysign(delta);
        next.moving = true;
    }
    next
}

/// Commanded actuator states for one control tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ActuatorBank {
    pub heater: bool,
    pub igniter: bool,
    pub boiler_fans: [bool; 4],
    pub smoke_fan: bool,
    pub tray_command: TrayCommand,
}

impl ActuatorBank {
    pub fn all_off() -> Self {
        Self::default()
    }

    pub fn any_boiler_fan(&self) -> bool {
        self.boiler_fans.iter().any(|&f| f)
    }
}

/// One igniter pulse lights the sawdust, which then burns for a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombustionLatch {
    pub burn_duration: f64,
    pub lit_at: Option<f64>,
}

impl CombustionLatch {
    pub fn new(burn_duration: f64) -> Self {
        Self {
            burn_duration,
            lit_at: None,
        }
    }

    /// Records the igniter state at time `t`. Only the first pulse counts:
    /// there is a single sawdust charge per run.
    pub fn update(&mut self, igniter_on: bool, t: f64) {
        if igniter_on && self.lit_at.is_none() {
            self.lit_at = Some(t);
        }
    }

    pub fn is_lit(&self, t: f64) -> bool {
        self.lit_at
            .is_some_and(|t0| t >= t0 && t - t0 < self.burn_duration)
    }
}

/// Translates the actuator bank into the plant's actuator map.
///
/// `boiler_fans` is the ganged channel; `boiler_fan_1`..`boiler_fan_4` may be
/// declared instead to drive the fans individually.
pub fn apply_actuators(
    bank: &ActuatorBank,
    combustion_lit: bool,
    config: &PlantConfig<f64>,
) -> Result<ActuatorMap> {
    let mut map = ActuatorMap::new();
    for id in config.actuators() {
        let on = match id.as_str() {
            HEATER => bank.heater,
            COMBUSTION => combustion_lit,
            BOILER_FANS => bank.any_boiler_fan(),
            SMOKE_FAN => bank.smoke_fan,
            other => match other.strip_prefix("boiler_fan_").and_then(|n| n.parse::<usize>().ok()) {
                Some(n @ 1..=4) => bank.boiler_fans[n - 1],
                _ => {
                    return Err(Error::config(
                        "plant",
                        format!("actuator `{other}` is not provided by the machine"),
                    ))
                }
            },
        };
        map.insert(id, on);
    }
    Ok(map)
}
