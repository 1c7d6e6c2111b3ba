//! Heater and fan control: PID, relay time-proportioning, fan hysteresis and
//! a derivative-free gain tuner.

mod fan;
mod pid;
mod relay;
pub mod tune;

pub use fan::fan_hysteresis;
pub use pid::{pid_step, Action, PidConfig, PidGains, PidState};
pub use relay::{relay_modulate, RelayWindow};
pub use tune::{evaluate_gains, tune_gains, TunePhase, TuneResult};
