//! Process state machine: lower tray, boil, cook, raise tray, ignite, smoke,
//! dry. Faults latch and force the safe output set (heater and igniter off,
//! every fan on).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::devices::{ActuatorBank, SensorReading, TrayCommand};
use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Phase {
    Idle,
    LowerTray,
    BoilWater,
    Cook,
    RaiseTray,
    Ignite,
    Smoke,
    Dry,
    Done,
    Fault,
}

impl Phase {
    /// Nominal order, excluding `Fault`.
    pub const ORDER: [Phase; 9] = [
        Phase::Idle,
        Phase::LowerTray,
        Phase::BoilWater,
        Phase::Cook,
        Phase::RaiseTray,
        Phase::Ignite,
        Phase::Smoke,
        Phase::Dry,
        Phase::Done,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Idle => "Idle",
            Phase::LowerTray => "LowerTray",
            Phase::BoilWater => "BoilWater",
            Phase::Cook => "Cook",
            Phase::RaiseTray => "RaiseTray",
            Phase::Ignite => "Ignite",
            Phase::Smoke => "Smoke",
            Phase::Dry => "Dry",
            Phase::Done => "Done",
            Phase::Fault => "Fault",
        }
    }

    pub fn from_name(name: &str) -> Option<Phase> {
        Phase::ORDER
            .into_iter()
            .chain([Phase::Fault])
            .find(|p| p.name() == name)
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, Phase::Done | Phase::Fault)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaultCause {
    SensorInvalid,
    SensorStuck,
    Overtemp,
    PlantDiverged,
}

impl fmt::Display for FaultCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Events that move the machine between phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trigger {
    Start,
    TrayLowered,
    BoilTargetReached,
    BoilTimeout,
    PhaseTimerElapsed,
    TrayRaised,
    IgniterPulseDone,
    Fault(FaultCause),
}

/// The transition table. `None` means the trigger has no effect in `phase`.
pub fn transition(phase: Phase, trigger: Trigger) -> Option<Phase> {
    use Phase::*;
    match (phase, trigger) {
        (Done | Fault, _) => None,
        (_, Trigger::Fault(_)) => Some(Fault),
        (Idle, Trigger::Start) => Some(LowerTray),
        (LowerTray, Trigger::TrayLowered) => Some(BoilWater),
        (BoilWater, Trigger::BoilTargetReached | Trigger::BoilTimeout) => Some(Cook),
        (Cook, Trigger::PhaseTimerElapsed) => Some(RaiseTray),
        (RaiseTray, Trigger::TrayRaised) => Some(Ignite),
        (Ignite, Trigger::IgniterPulseDone) => Some(Smoke),
        (Smoke, Trigger::PhaseTimerElapsed) => Some(Dry),
        (Dry, Trigger::PhaseTimerElapsed) => Some(Done),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
#[serde(deny_unknown_fields)]
pub struct PhasePlan {
    /// s
    pub boil_max: f64,
    pub cook: f64,
    pub smoke: f64,
    pub dry: f64,
    /// °C
    pub boil_target: f64,
    pub cook_setpoint: f64,
    pub smoke_setpoint: f64,
    pub cook_band: [f64; 2],
    pub smoke_band: [f64; 2],
    pub overtemp_limit: f64,
    /// Igniter on-time, s.
    pub igniter_pulse: f64,
    /// A reading frozen this long while the heater is driven hard is a fault, s.
    pub stuck_timeout: f64,
    pub stuck_duty_threshold: f64,
}

impl Default for PhasePlan {
    fn default() -> Self {
        Self {
            boil_max: 300.0,
            cook: 1200.0,
            smoke: 900.0,
            dry: 1200.0,
            boil_target: 98.0,
            cook_setpoint: 85.0,
            smoke_setpoint: 65.0,
            cook_band: [75.0, 90.0],
            smoke_band: [60.0, 70.0],
            overtemp_limit: 110.0,
            igniter_pulse: 5.0,
            stuck_timeout: 60.0,
            stuck_duty_threshold: 0.5,
        }
    }
}

impl PhasePlan {
    pub fn validate(&self, prefix: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        let path = |f: &str| if prefix.is_empty() { f.to_string() } else { format!("{prefix}.{f}") };
        for (name, v) in [
            ("boil_max", self.boil_max),
            ("cook", self.cook),
            ("smoke", self.smoke),
            ("dry", self.dry),
            ("igniter_pulse", self.igniter_pulse),
            ("stuck_timeout", self.stuck_timeout),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                out.push(Violation::new(path(name), format!("duration must be > 0 s, got {v}")));
            }
        }
        let in_band = |v: f64, b: [f64; 2]| v.is_finite() && b[0] <= v && v <= b[1];
        if !(self.cook_band[0] < self.cook_band[1]) {
            out.push(Violation::new(path("cook_band"), "band must be increasing"));
        }
        if !(self.smoke_band[0] < self.smoke_band[1]) {
            out.push(Violation::new(path("smoke_band"), "band must be increasing"));
        }
        if !in_band(self.cook_setpoint, self.cook_band) {
            out.push(Violation::new(
                path("cook_setpoint"),
                format!(
                    "{} °C lies outside the cooking band [{}, {}] °C",
                    self.cook_setpoint, self.cook_band[0], self.cook_band[1]
                ),
            ));
        }
        if !in_band(self.smoke_setpoint, self.smoke_band) {
            out.push(Violation::new(
                path("smoke_setpoint"),
                format!(
                    "{} °C lies outside the smoking band [{}, {}] °C",
                    self.smoke_setpoint, self.smoke_band[0], self.smoke_band[1]
                ),
            ));
        }
        if !self.boil_target.is_finite() {
            out.push(Violation::new(path("boil_target"), "must be finite"));
        }
        if !(self.overtemp_limit > self.cook_setpoint && self.overtemp_limit > self.smoke_setpoint) {
            out.push(Violation::new(
                path("overtemp_limit"),
                "must exceed both the cook and smoke setpoints",
            ));
        }
        if !(0.0..=1.0).contains(&self.stuck_duty_threshold) {
            out.push(Violation::new(path("stuck_duty_threshold"), "must lie in [0, 1]"));
        }
        out
    }
}

/// Upper bound on the run length: boil timeout plus the fixed phases.
pub fn plan_total_duration(plan: &PhasePlan) -> f64 {
    plan.boil_max + plan.cook + plan.smoke + plan.dry
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencerState {
    pub phase: Phase,
    pub phase_elapsed: f64,
    pub total_elapsed: f64,
    pub fault_cause: Option<FaultCause>,
    pub tray_target: TrayCommand,
    last_cook_value: Option<f64>,
    unchanged_for: f64,
}

pub fn sequencer_start(plan: &PhasePlan) -> Result<SequencerState> {
    if let Some(v) = plan.validate("plan").into_iter().next() {
        return Err(Error::config(v.path, v.message));
    }
    Ok(SequencerState {
        phase: Phase::Idle,
        phase_elapsed: 0.0,
        total_elapsed: 0.0,
        fault_cause: None,
        tray_target: TrayCommand::Hold,
        last_cook_value: None,
        unchanged_for: 0.0,
    })
}

/// What the sequencer observes each control tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequencerInputs {
    pub start: bool,
    pub cook: SensorReading,
    pub smoke: SensorReading,
    /// 0 = raised, 1 = lowered.
    pub tray_position: f64,
    /// Heater duty applied over the previous tick.
    pub heater_duty: f64,
    pub plant_diverged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HeaterControl {
    Off,
    Full,
    Regulate { setpoint: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FanControl {
    Off,
    On,
    Regulate { setpoint: f64 },
}

/// Which loops the engine should run this tick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlSelection {
    pub heater: HeaterControl,
    pub smoke_fan: FanControl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequencerOutput {
    pub state: SequencerState,
    /// Heater here is an enable: the engine turns it on only through the
    /// selected loop.
    pub bank: ActuatorBank,
    pub control: ControlSelection,
    /// Set when this tick changed the phase.
    pub transition: Option<(Phase, Phase, Trigger)>,
}

fn detect_fault(state: &mut SequencerState, inputs: &SequencerInputs, plan: &PhasePlan, dt: f64) -> Option<FaultCause> {
    if inputs.plant_diverged {
        return Some(FaultCause::PlantDiverged);
    }
    if state.phase == Phase::Idle {
        return None;
    }
    if !inputs.cook.valid || !inputs.smoke.valid {
        return Some(FaultCause::SensorInvalid);
    }
    if inputs.cook.value > plan.overtemp_limit || inputs.smoke.value > plan.overtemp_limit {
        return Some(FaultCause::Overtemp);
    }
    if inputs.heater_duty > plan.stuck_duty_threshold && state.last_cook_value == Some(inputs.cook.value) {
        state.unchanged_for += dt;
    } else {
        state.unchanged_for = 0.0;
    }
    state.last_cook_value = Some(inputs.cook.value);
    (state.unchanged_for > plan.stuck_timeout).then_some(FaultCause::SensorStuck)
}

fn phase_trigger(state: &SequencerState, inputs: &SequencerInputs, plan: &PhasePlan) -> Option<Trigger> {
    let elapsed = state.phase_elapsed;
    match state.phase {
        Phase::Idle => inputs.start.then_some(Trigger::Start),
        Phase::LowerTray => (inputs.tray_position >= 1.0).then_some(Trigger::TrayLowered),
        Phase::BoilWater => {
            if inputs.cook.value >= plan.boil_target {
                Some(Trigger::BoilTargetReached)
            } else if elapsed >= plan.boil_max {
                Some(Trigger::BoilTimeout)
            } else {
                None
            }
        }
        Phase::Cook => (elapsed >= plan.cook).then_some(Trigger::PhaseTimerElapsed),
        Phase::RaiseTray => (inputs.tray_position <= 0.0).then_some(Trigger::TrayRaised),
        Phase::Ignite => (elapsed >= plan.igniter_pulse).then_some(Trigger::IgniterPulseDone),
        Phase::Smoke => (elapsed >= plan.smoke).then_some(Trigger::PhaseTimerElapsed),
        Phase::Dry => (elapsed >= plan.dry).then_some(Trigger::PhaseTimerElapsed),
        Phase::Done | Phase::Fault => None,
    }
}

/// Output set for a phase.
pub fn phase_outputs(phase: Phase, plan: &PhasePlan) -> (ActuatorBank, ControlSelection, TrayCommand) {
    let off = ControlSelection {
        heater: HeaterControl::Off,
        smoke_fan: FanControl::Off,
    };
    let mut bank = ActuatorBank::all_off();
    let (control, tray) = match phase {
        Phase::Idle | Phase::Done => (off, TrayCommand::Hold),
        Phase::LowerTray => (off, TrayCommand::Lower),
        Phase::BoilWater => {
            bank.heater = true;
            (ControlSelection { heater: HeaterControl::Full, ..off }, TrayCommand::Hold)
        }
        Phase::Cook => {
            bank.heater = true;
            (
                ControlSelection {
                    heater: HeaterControl::Regulate { setpoint: plan.cook_setpoint },
                    ..off
                },
                TrayCommand::Hold,
            )
        }
        Phase::RaiseTray => (off, TrayCommand::Raise),
        Phase::Ignite => {
            bank.igniter = true;
            (off, TrayCommand::Hold)
        }
        Phase::Smoke => (
            ControlSelection {
                smoke_fan: FanControl::Regulate { setpoint: plan.smoke_setpoint },
                ..off
            },
            TrayCommand::Hold,
        ),
        Phase::Dry | Phase::Fault => {
            bank.boiler_fans = [true; 4];
            bank.smoke_fan = true;
            (ControlSelection { smoke_fan: FanControl::On, ..off }, TrayCommand::Hold)
        }
    };
    bank.tray_command = tray;
    (bank, control, tray)
}

/// Advances the sequencer by one control tick of `dt` seconds.
///
/// Timers count time already spent in the phase, so a phase with duration
/// `d` occupies exactly `d / dt` ticks.
pub fn sequencer_step(state: &SequencerState, inputs: &SequencerInputs, plan: &PhasePlan, dt: f64) -> SequencerOutput {
    let mut next = state.clone();
    let mut transition_taken = None;

    if !state.phase.is_terminal() {
        let trigger = detect_fault(&mut next, inputs, plan, dt)
            .map(Trigger::Fault)
            .or_else(|| phase_trigger(&next, inputs, plan));
        if let Some(trigger) = trigger {
            if let Some(to) = transition(state.phase, trigger) {
                if let Trigger::Fault(cause) = trigger {
                    next.fault_cause = Some(cause);
                }
                next.phase = to;
                next.phase_elapsed = 0.0;
                transition_taken = Some((state.phase, to, trigger));
            }
        }
    }

    let (bank, control, tray) = phase_outputs(next.phase, plan);
    next.tray_target = tray;
    if !next.phase.is_terminal() {
        next.phase_elapsed += dt;
        next.total_elapsed += dt;
    }
    SequencerOutput {
        state: next,
        bank,
        control,
        transition: transition_taken,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reading(v: f64) -> SensorReading {
        SensorReading { value: v, sample_time: 0.0, valid: true }
    }

    fn inputs(cook: f64, tray: f64) -> SequencerInputs {
        SequencerInputs {
            start: true,
            cook: reading(cook),
            smoke: reading(30.0),
            tray_position: tray,
            heater_duty: 0.0,
            plant_diverged: false,
        }
    }

    fn in_phase(phase: Phase) -> SequencerState {
        let mut s = sequencer_start(&PhasePlan::default()).unwrap();
        s.phase = phase;
        s
    }

    #[test]
    fn start_validates_plan() {
        let plan = PhasePlan::default();
        let s = sequencer_start(&plan).unwrap();
        assert_eq!(s.phase, Phase::Idle);
        let bad = PhasePlan { cook_setpoint: 95.0, ..plan };
        let err = sequencer_start(&bad).unwrap_err();
        assert!(matches!(err, Error::Config { ref path, .. } if path == "plan.cook_setpoint"));
        let bad = PhasePlan { smoke: 0.0, ..plan };
        assert!(sequencer_start(&bad).is_err());
    }

    #[test]
    fn idle_start_lowers_tray() {
        let plan = PhasePlan::default();
        let out = sequencer_step(&in_phase(Phase::Idle), &inputs(30.0, 0.0), &plan, 1.0);
        assert_eq!(out.state.phase, Phase::LowerTray);
        assert_eq!(out.state.tray_target, TrayCommand::Lower);
        let mut idle_in = inputs(30.0, 0.0);
        idle_in.start = false;
        let out = sequencer_step(&in_phase(Phase::Idle), &idle_in, &plan, 1.0);
        assert_eq!(out.state.phase, Phase::Idle);
    }

    #[test]
    fn boil_to_cook_on_target() {
        let plan = PhasePlan::default();
        let out = sequencer_step(&in_phase(Phase::BoilWater), &inputs(98.3125, 1.0), &plan, 1.0);
        assert_eq!(out.state.phase, Phase::Cook);
        assert_eq!(out.control.heater, HeaterControl::Regulate { setpoint: 85.0 });
        assert!(out.bank.heater);
    }

    #[test]
    fn overtemp_faults_with_safe_outputs() {
        let plan = PhasePlan::default();
        let out = sequencer_step(&in_phase(Phase::Cook), &inputs(111.0, 1.0), &plan, 1.0);
        assert_eq!(out.state.phase, Phase::Fault);
        assert_eq!(out.state.fault_cause, Some(FaultCause::Overtemp));
        assert!(!out.bank.heater && !out.bank.igniter);
        assert!(out.bank.smoke_fan && out.bank.boiler_fans.iter().all(|&f| f));
        // latched
        let again = sequencer_step(&out.state, &inputs(30.0, 1.0), &plan, 1.0);
        assert_eq!(again.state.phase, Phase::Fault);
    }

    #[test]
    fn stuck_sensor_detected() {
        let plan = PhasePlan::default();
        let mut s = in_phase(Phase::BoilWater);
        let mut i = inputs(50.0, 1.0);
        i.heater_duty = 1.0;
        let mut faulted_at = None;
        for k in 0..100 {
            let out = sequencer_step(&s, &i, &plan, 1.0);
            s = out.state;
            if s.phase == Phase::Fault {
                faulted_at = Some(k);
                break;
            }
        }
        assert_eq!(s.fault_cause, Some(FaultCause::SensorStuck));
        assert_eq!(faulted_at, Some(61));
    }

    #[test]
    fn totals() {
        let plan = PhasePlan::default();
        assert_eq!(plan_total_duration(&plan), 3600.0);
        let doubled = PhasePlan {
            boil_max: 600.0,
            cook: 2400.0,
            smoke: 1800.0,
            dry: 2400.0,
            ..plan
        };
        assert_eq!(plan_total_duration(&doubled), 7200.0);
        assert_eq!(plan_total_duration(&PhasePlan { boil_max: 180.0, ..plan }), 3480.0);
    }
}
