//! Fixed-step orchestration of sensors, sequencer, controllers, actuators
//! and plant.
//!
//! Each control tick runs, in order: sample sensors, step the sequencer,
//! run the selected loops, then integrate the plant over the tick in
//! `plant_dt` sub-steps with the relay outputs evaluated at every sub-step.
//! The telemetry row is stamped with the time at the end of the tick.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{FanControlMode, ScenarioConfig};
use crate::control::{fan_hysteresis, pid_step, relay_modulate, Action, PidConfig, PidState, RelayWindow};
use crate::devices::{apply_actuators, sensor_sample, tray_update, CombustionLatch, SensorReading, TrayActuator};
use crate::error::Result;
use crate::plant::{PlantState, ThermalNetwork};
use crate::sequencer::{
    sequencer_start, sequencer_step, FanControl, FaultCause, HeaterControl, Phase, SequencerInputs, SequencerState,
    Trigger,
};
use crate::telemetry::TelemetryRecord;

pub use crate::summary::{summarize, RunSummary};

/// A phase change observed during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseEvent {
    /// Start of the tick on which the change happened, s.
    pub time: f64,
    pub from: Phase,
    pub to: Phase,
    pub trigger: Trigger,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub telemetry: Vec<TelemetryRecord>,
    pub summary: RunSummary,
    pub events: Vec<PhaseEvent>,
}

/// Stepping engine for one scenario. Single-owner; run independent
/// instances in parallel if needed.
pub struct Engine<'a> {
    cfg: &'a ScenarioConfig,
    net: ThermalNetwork<f64>,
    plant: PlantState<f64>,
    seq: SequencerState,
    pid: PidState<f64>,
    pid_phase: Option<Phase>,
    fan_pid: PidState<f64>,
    fan_on: bool,
    tray: TrayActuator,
    latch: CombustionLatch,
    cook_node: usize,
    smoke_node: usize,
    cook_reading: SensorReading,
    smoke_reading: SensorReading,
    rng: ChaCha8Rng,
    tick: u64,
    substeps: u32,
    last_duty: f64,
    events: Vec<PhaseEvent>,
    finished: bool,
}

impl<'a> Engine<'a> {
    pub fn new(cfg: &'a ScenarioConfig) -> Result<Self> {
        cfg.ensure_valid()?;
        let net = cfg.plant.compile()?;
        let substeps = cfg.steps.substeps().expect("validated");
        let node = |n: &str| cfg.plant.node_index(n).expect("validated");
        Ok(Self {
            cfg,
            plant: cfg.plant.initial_state(),
            net,
            seq: sequencer_start(&cfg.plan)?,
            pid: PidState::reset(),
            pid_phase: None,
            fan_pid: PidState::reset(),
            fan_on: false,
            tray: cfg.devices.tray,
            latch: CombustionLatch::new(cfg.devices.burn_duration),
            cook_node: node(&cfg.devices.cook_sensor_node),
            smoke_node: node(&cfg.devices.smoke_sensor_node),
            cook_reading: SensorReading::none(),
            smoke_reading: SensorReading::none(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            tick: 0,
            substeps,
            last_duty: 0.0,
            events: Vec::new(),
            finished: false,
        })
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn phase(&self) -> Phase {
        self.seq.phase
    }

    pub fn sequencer(&self) -> &SequencerState {
        &self.seq
    }

    pub fn plant_state(&self) -> &PlantState<f64> {
        &self.plant
    }

    pub fn events(&self) -> &[PhaseEvent] {
        &self.events
    }

    fn pid_config(&self, setpoint: f64, action: Action) -> PidConfig<f64> {
        PidConfig {
            setpoint,
            output_min: 0.0,
            output_max: 1.0,
            sample_time: self.cfg.steps.control_dt,
            windup_limit: self.cfg.control.windup_limit,
            action,
        }
    }

    /// Advances one control tick. Returns `None` once the run has ended.
    pub fn tick(&mut self) -> Option<TelemetryRecord> {
        if self.finished {
            return None;
        }
        let cfg = self.cfg;
        let dt = cfg.steps.control_dt;
        let t0 = self.tick as f64 * dt;

        // sense
        let sensor = &cfg.devices.sensor;
        self.cook_reading = sensor_sample(
            self.plant.temperatures[self.cook_node],
            sensor,
            t0,
            &self.cook_reading,
            &mut self.rng,
        );
        self.smoke_reading = sensor_sample(
            self.plant.temperatures[self.smoke_node],
            sensor,
            t0,
            &self.smoke_reading,
            &mut self.rng,
        );

        // sequence
        let inputs = SequencerInputs {
            start: true,
            cook: self.cook_reading,
            smoke: self.smoke_reading,
            tray_position: self.tray.position,
            heater_duty: self.last_duty,
            plant_diverged: false,
        };
        let mut out = sequencer_step(&self.seq, &inputs, &cfg.plan, dt);
        if let Some((from, to, trigger)) = out.transition {
            self.events.push(PhaseEvent { time: t0, from, to, trigger });
        }
        if out.state.phase == Phase::Done {
            self.seq = out.state;
            self.finished = true;
            return None;
        }

        // control
        let heater_duty = match out.control.heater {
            HeaterControl::Off => 0.0,
            HeaterControl::Full => 1.0,
            HeaterControl::Regulate { setpoint } => {
                if self.pid_phase != Some(out.state.phase) {
                    self.pid = PidState::reset();
                    self.pid_phase = Some(out.state.phase);
                }
                let pcfg = self.pid_config(setpoint, Action::Direct);
                match pid_step(&self.pid, &cfg.gains.cook, &pcfg, self.cook_reading.value, dt) {
                    Ok((s, u)) => {
                        self.pid = s;
                        u
                    }
                    Err(_) => {
                        out = self.force_fault(&inputs, FaultCause::SensorInvalid, t0);
                        0.0
                    }
                }
            }
        };
        let heater_duty = if out.bank.heater { heater_duty } else { 0.0 };

        let fan_duty = match out.control.smoke_fan {
            FanControl::Off => {
                self.fan_on = false;
                0.0
            }
            FanControl::On => {
                self.fan_on = true;
                1.0
            }
            FanControl::Regulate { setpoint } => match cfg.control.fan_control {
                FanControlMode::Hysteresis => {
                    self.fan_on = fan_hysteresis(
                        self.smoke_reading.value,
                        setpoint,
                        cfg.control.fan_hysteresis,
                        self.fan_on,
                    );
                    if self.fan_on {
                        1.0
                    } else {
                        0.0
                    }
                }
                FanControlMode::Pid => {
                    let pcfg = self.pid_config(setpoint, Action::Reverse);
                    match pid_step(&self.fan_pid, &cfg.gains.smoke, &pcfg, self.smoke_reading.value, dt) {
                        Ok((s, u)) => {
                            self.fan_pid = s;
                            u
                        }
                        Err(_) => {
                            out = self.force_fault(&inputs, FaultCause::SensorInvalid, t0);
                            1.0
                        }
                    }
                }
            },
        };

        // actuate + integrate
        let window = RelayWindow::new(cfg.control.relay_window);
        let plant_dt = cfg.steps.plant_dt;
        let mut bank = out.bank;
        let mut first_bank = None;
        let mut diverged = false;
        for i in 0..self.substeps {
            let t = t0 + f64::from(i) * plant_dt;
            bank.heater = out.bank.heater && relay_modulate(heater_duty, &window, t);
            bank.smoke_fan = out.bank.smoke_fan || relay_modulate(fan_duty, &window, t);
            first_bank.get_or_insert(bank);
            self.latch.update(bank.igniter, t);
            self.tray = tray_update(&self.tray, bank.tray_command, plant_dt);
            let map = apply_actuators(&bank, self.latch.is_lit(t), &cfg.plant)
                .expect("actuator ids checked by config validation");
            let on = self.net.resolve_inputs(&map).expect("map covers the plant's actuators");
            match self.net.step(&self.plant, &on, plant_dt) {
                Ok(next) => self.plant = next,
                Err(_) => {
                    diverged = true;
                    break;
                }
            }
        }
        if diverged {
            out = self.force_fault(&inputs, FaultCause::PlantDiverged, t0);
        }
        self.last_duty = heater_duty;
        self.seq = out.state.clone();
        self.tick += 1;
        if self.seq.phase == Phase::Fault {
            self.finished = true;
        }

        let shown = first_bank.unwrap_or(out.bank);
        Some(TelemetryRecord {
            t: self.tick as f64 * dt,
            phase: out.state.phase,
            temperatures: self.plant.temperatures.clone(),
            cook_reading: self.cook_reading.value,
            smoke_reading: self.smoke_reading.value,
            heater_duty,
            heater_on: shown.heater,
            igniter: shown.igniter,
            boiler_fans: shown.any_boiler_fan(),
            smoke_fan: shown.smoke_fan,
            tray_position: self.tray.position,
        })
    }

    fn force_fault(&mut self, inputs: &SequencerInputs, cause: FaultCause, t0: f64) -> crate::sequencer::SequencerOutput {
        let mut state = self.seq.clone();
        let from = state.phase;
        state.phase = Phase::Fault;
        state.fault_cause = Some(cause);
        state.phase_elapsed = 0.0;
        self.events.push(PhaseEvent {
            time: t0,
            from,
            to: Phase::Fault,
            trigger: Trigger::Fault(cause),
        });
        // stepping from Fault yields the safe output set
        let mut out = sequencer_step(&state, inputs, &self.cfg.plan, 0.0);
        out.transition = None;
        out
    }
}

/// Runs a scenario to Done or Fault.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput> {
    let mut engine = Engine::new(cfg)?;
    let mut telemetry = Vec::with_capacity(4096);
    while let Some(rec) = engine.tick() {
        telemetry.push(rec);
    }
    let mut summary = summarize(&telemetry, cfg)?;
    summary.terminal_phase = engine.phase();
    summary.fault_cause = engine.sequencer().fault_cause;
    Ok(RunOutput {
        telemetry,
        summary,
        events: engine.events,
    })
}

/// Runs the scenario twice and compares the serialized telemetry bytes.
pub fn verify_determinism(cfg: &ScenarioConfig) -> bool {
    let a = run_scenario(cfg).map(|r| crate::telemetry::to_csv(&r.telemetry, &cfg.plant));
    let b = run_scenario(cfg).map(|r| crate::telemetry::to_csv(&r.telemetry, &cfg.plant));
    match (a, b) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}
