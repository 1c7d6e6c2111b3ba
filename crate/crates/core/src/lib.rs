//! Simulator and controller library for an automated fish smoking machine.
//!
//! The machine lowers a fish tray into a boiling bowl, cooks at a regulated
//! temperature, raises the tray, ignites sawdust in a smoking chamber,
//! regulates the smoke temperature with an exhaust fan, and finishes with a
//! fan-driven drying phase. This crate models each part in software:
//!
//! - [`mechanics`]: belt and pulley sizing for the tray lift
//! - [`control`]: PID with anti-windup, relay time-proportioning, fan
//!   hysteresis and a Nelder-Mead gain tuner
//! - [`plant`]: four-node lumped thermal network integrated with RK4, plus an
//!   exact steady-state solver
//! - [`devices`]: quantizing temperature probe, tray lift, actuator bank
//! - [`sequencer`]: the process state machine and its safety interlocks
//! - [`engine`]: the deterministic fixed-step run loop, telemetry and
//!   summaries
//!
//! The numeric core (`mechanics`, `control`, `plant`) is generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix it to `f64`, which is
//! what the engine runs on.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod control;
pub mod devices;
pub mod engine;
pub mod error;
pub mod mechanics;
pub mod plant;
pub mod scalar;
pub mod sequencer;
pub mod summary;
pub mod telemetry;

pub use config::ScenarioConfig;
pub use engine::{run_scenario, verify_determinism, Engine, RunOutput};
pub use error::{Error, Result, Violation};
pub use plant::FishPreset;
pub use scalar::Scalar;
pub use sequencer::{Phase, PhasePlan};
pub use summary::RunSummary;
pub use telemetry::TelemetryRecord;

pub type Real = f64;

pub type LoadSpec = mechanics::LoadSpec<Real>;
pub type PulleySpec = mechanics::PulleySpec<Real>;
pub type BeltDrive = mechanics::BeltDrive<Real>;
pub type DesignReport = mechanics::DesignReport<Real>;

pub type PidGains = control::PidGains<Real>;
pub type PidConfig = control::PidConfig<Real>;
pub type PidState = control::PidState<Real>;
pub type RelayWindow = control::RelayWindow<Real>;

pub type PlantConfig = plant::PlantConfig<Real>;
pub type PlantState = plant::PlantState<Real>;
pub type ThermalNode = plant::ThermalNode<Real>;
pub type Conductance = plant::Conductance<Real>;
pub type HeatSource = plant::HeatSource<Real>;
pub type ThermalNetwork = plant::ThermalNetwork<Real>;
