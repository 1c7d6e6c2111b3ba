//! Scenario configuration: JSON schema, shipped presets, dotted-path
//! overrides and validation.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::control::{PidGains, RelayWindow};
use crate::devices::{apply_actuators, ActuatorBank, SensorModel, TrayActuator};
use crate::error::{Error, Result, Violation};
use crate::mechanics::{reference_design, BeltDrive, LoadSpec};
use crate::plant::{default_plant_config, FishPreset, PlantConfig, BOILER_WATER, SMOKE_FIREBOX};
use crate::sequencer::PhasePlan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepConfig {
    /// Plant integration step, s.
    pub plant_dt: f64,
    /// Controller and telemetry period, s.
    pub control_dt: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            plant_dt: 0.1,
            control_dt: 1.0,
        }
    }
}

impl StepConfig {
    /// Plant steps per control tick, when `control_dt` is an integer multiple
    /// of `plant_dt`.
    pub fn substeps(&self) -> Option<u32> {
        if !(self.plant_dt > 0.0) || !(self.control_dt > 0.0) {
            return None;
        }
        let ratio = self.control_dt / self.plant_dt;
        let n = ratio.round();
        ((ratio - n).abs() < 1e-9 * ratio.max(1.0) && (1.0..1e7).contains(&n)).then_some(n as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseGains {
    pub cook: PidGains<f64>,
    pub smoke: PidGains<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FanControlMode {
    #[default]
    Hysteresis,
    Pid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    /// Time-proportioning window for relay-driven outputs, s.
    pub relay_window: f64,
    pub windup_limit: f64,
    /// Smoke fan deadband below the smoke setpoint, °C.
    pub fan_hysteresis: f64,
    #[serde(default)]
    pub fan_control: FanControlMode,
    /// Tuner objective weight on the worst overshoot (per °C).
    pub overshoot_weight: f64,
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self {
            relay_window: RelayWindow::<f64>::default().window_length,
            windup_limit: 1.0,
            fan_hysteresis: 1.0,
            fan_control: FanControlMode::Hysteresis,
            overshoot_weight: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub sensor: SensorModel,
    /// Plant node read by the cook-side probe.
    pub cook_sensor_node: String,
    /// Plant node read by the smoke-side probe.
    pub smoke_sensor_node: String,
    pub tray: TrayActuator,
    /// How long one sawdust charge burns once lit, s.
    pub burn_duration: f64,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self {
            sensor: SensorModel::default(),
            cook_sensor_node: BOILER_WATER.to_string(),
            smoke_sensor_node: SMOKE_FIREBOX.to_string(),
            tray: TrayActuator::default(),
            burn_duration: 2400.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanicsConfig {
    pub load: LoadSpec<f64>,
    pub drive: BeltDrive<f64>,
}

impl Default for MechanicsConfig {
    fn default() -> Self {
        let (load, drive) = reference_design();
        Self { load, drive }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub preset_name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub steps: StepConfig,
    pub plant: PlantConfig<f64>,
    #[serde(default)]
    pub plan: PhasePlan,
    pub gains: PhaseGains,
    #[serde(default)]
    pub control: ControlConfig,
    #[serde(default)]
    pub devices: DeviceConfig,
    #[serde(default)]
    pub mechanics: MechanicsConfig,
}

/// Controller gains and loop settings found by the calibration run in
/// `examples/calibrate.rs`.
pub mod calibrated {
    use crate::control::PidGains;

    pub const COOK_GAINS: PidGains<f64> = PidGains { kp: 0.1, ki: 0.024, kd: 0.0 };
    pub const SMOKE_GAINS: PidGains<f64> = PidGains { kp: 0.5, ki: 0.005, kd: 0.0 };
    /// Heater relay window for the presets, s.
    pub const RELAY_WINDOW: f64 = 5.0;
    /// Boil timeout for the presets, s.
    pub const PRESET_BOIL_MAX: f64 = 900.0;
}

impl ScenarioConfig {
    /// Shipped, calibrated configuration for a fish preset.
    pub fn preset(preset: FishPreset) -> Self {
        Self {
            preset_name: preset.name().to_string(),
            seed: 0,
            steps: StepConfig::default(),
            plant: default_plant_config(preset),
            plan: PhasePlan {
                boil_max: calibrated::PRESET_BOIL_MAX,
                ..PhasePlan::default()
            },
            gains: PhaseGains {
                cook: calibrated::COOK_GAINS,
                smoke: calibrated::SMOKE_GAINS,
            },
            control: ControlConfig {
                relay_window: calibrated::RELAY_WINDOW,
                ..ControlConfig::default()
            },
            devices: DeviceConfig::default(),
            mechanics: MechanicsConfig::default(),
        }
    }

    /// The machine's default scenario (large scad batch).
    pub fn default_scenario() -> Self {
        Self::preset(FishPreset::ScadLarge)
    }

    pub fn from_preset_name(name: &str) -> Result<Self> {
        Ok(Self::preset(name.parse()?))
    }

    /// Parses JSON, applies `key=value` overrides, and validates.
    pub fn from_json_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let cfg: ScenarioConfig = parse_json(text)?;
        let cfg = cfg.with_overrides(overrides)?;
        cfg.ensure_valid()?;
        Ok(cfg)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario config serializes")
    }

    /// Applies dotted-path overrides (`plan.cook_setpoint=80`,
    /// `plant.nodes.1.heat_capacity=500`). Unknown paths are errors.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        let mut value = serde_json::to_value(self).expect("scenario config serializes");
        for item in overrides {
            let (path, raw) = item
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("override `{item}` is not of the form key=value")))?;
            set_path(&mut value, path.trim(), parse_override_value(raw.trim()))?;
        }
        serde_json::from_value(value).map_err(|e| Error::config("--set", e.to_string()))
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.preset_name.is_empty() {
            out.push(Violation::new("preset_name", "must not be empty"));
        }
        let s = &self.steps;
        if !(s.plant_dt > 0.0 && s.plant_dt <= 1.0) {
            out.push(Violation::new("steps.plant_dt", "must lie in (0, 1] s"));
        }
        if !(s.control_dt > 0.0) {
            out.push(Violation::new("steps.control_dt", "must be > 0"));
        } else if s.substeps().is_none() {
            out.push(Violation::new("steps.control_dt", "must be an integer multiple of steps.plant_dt"));
        }
        out.extend(self.plant.validate("plant"));
        if let Err(e) = apply_actuators(&ActuatorBank::all_off(), false, &self.plant) {
            out.push(Violation::new("plant", e.to_string()));
        }
        out.extend(self.plan.validate("plan"));
        for (phase, g) in [("cook", &self.gains.cook), ("smoke", &self.gains.smoke)] {
            if let Err(e) = g.validate() {
                out.push(Violation::new(format!("gains.{phase}"), e.to_string()));
            }
        }
        if !self.gains.cook.is_active() {
            out.push(Violation::new("gains.cook", "at least one gain must be > 0"));
        }
        let c = &self.control;
        if !(c.relay_window > 0.0) || !c.relay_window.is_finite() {
            out.push(Violation::new("control.relay_window", "must be > 0"));
        }
        if !(c.windup_limit > 0.0) {
            out.push(Violation::new("control.windup_limit", "must be > 0"));
        }
        if !(c.fan_hysteresis > 0.0) {
            out.push(Violation::new("control.fan_hysteresis", "must be > 0"));
        }
        if !(c.overshoot_weight >= 0.0) {
            out.push(Violation::new("control.overshoot_weight", "must be >= 0"));
        }
        let d = &self.devices;
        if let Err(e) = d.sensor.validate() {
            out.push(Violation::new("devices.sensor", e.to_string()));
        }
        if let Err(e) = d.tray.validate() {
            out.push(Violation::new("devices.tray", e.to_string()));
        }
        for (field, node) in [("cook_sensor_node", &d.cook_sensor_node), ("smoke_sensor_node", &d.smoke_sensor_node)] {
            if self.plant.node_index(node).is_none() {
                out.push(Violation::new(format!("devices.{field}"), format!("unknown node `{node}`")));
            }
        }
        if !(d.burn_duration > 0.0) {
            out.push(Violation::new("devices.burn_duration", "must be > 0"));
        }
        if let Err(e) = self.mechanics.load.validate() {
            out.push(Violation::new("mechanics.load", e.to_string()));
        }
        if let Err(e) = self.mechanics.drive.validate() {
            out.push(Violation::new("mechanics.drive", e.to_string()));
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::config(v.path, v.message)),
        }
    }
}

/// JSON parse with a line/column diagnostic on failure.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config {
        path: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

fn parse_override_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn set_path(root: &mut Value, path: &str, new: Value) -> Result<()> {
    let unknown = || Error::config(path, "unknown configuration path");
    let normalized = path.replace('[', ".").replace(']', "");
    let mut cur = root;
    let parts: Vec<&str> = normalized.split('.').filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(unknown());
    }
    for part in &parts {
        cur = match cur {
            Value::Object(map) => map.get_mut(*part).ok_or_else(unknown)?,
            Value::Array(items) => {
                let i: usize = part.parse().map_err(|_| unknown())?;
                items.get_mut(i).ok_or_else(unknown)?
            }
            _ => return Err(unknown()),
        };
    }
    *cur = new;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_roundtrip() {
        for p in FishPreset::ALL {
            let cfg = ScenarioConfig::preset(p);
            assert!(cfg.validate().is_empty(), "{p}: {:?}", cfg.validate());
            let back = ScenarioConfig::from_json_with_overrides(&cfg.to_json_pretty(), &[]).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn overrides_apply_and_reject_unknown_paths() {
        let cfg = ScenarioConfig::default_scenario();
        let o = cfg.with_overrides(&["plan.overtemp_limit=90".into()]).unwrap();
        assert_eq!(o.plan.overtemp_limit, 90.0);
        let o = cfg.with_overrides(&["plant.nodes[1].heat_capacity=123".into()]).unwrap();
        assert_eq!(o.plant.nodes[1].heat_capacity, 123.0);
        let o = cfg.with_overrides(&["control.fan_control=pid".into()]).unwrap();
        assert_eq!(o.control.fan_control, FanControlMode::Pid);
        assert!(cfg.with_overrides(&["plan.cook_time=1".into()]).is_err());
        assert!(cfg.with_overrides(&["plan".into()]).is_err());
        assert!(cfg.with_overrides(&["plant.nodes.9.heat_capacity=1".into()]).is_err());
    }

    #[test]
    fn validation_messages() {
        let mut cfg = ScenarioConfig::default_scenario();
        cfg.plan.cook_setpoint = 95.0;
        let v = cfg.validate();
        assert!(v.iter().any(|v| v.path == "plan.cook_setpoint" && v.message.contains("[75, 90]")));
        let mut cfg = ScenarioConfig::default_scenario();
        cfg.steps.control_dt = 0.25;
        cfg.steps.plant_dt = 0.1;
        assert!(cfg.validate().iter().any(|v| v.path == "steps.control_dt"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_json::<ScenarioConfig>("{\n  \"preset_name\": \"x\",\n  oops\n}").unwrap_err();
        match err {
            Error::Config { path, .. } => assert!(path.starts_with("line 3"), "{path}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn substeps() {
        assert_eq!(StepConfig::default().substeps(), Some(10));
        assert_eq!(StepConfig { plant_dt: 0.1, control_dt: 0.25 }.substeps(), None);
    }
}
