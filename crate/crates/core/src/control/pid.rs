//! Positional discrete PID with derivative on measurement and
//! conditional-integration anti-windup.
//!
//! The integral accumulator is kept in output units (`ki` is folded in on
//! each update), so gains can change between calls without a bump.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
#[serde(deny_unknown_fields)]
pub struct PidGains<S> {
    pub kp: S,
    pub ki: S,
    pub kd: S,
}

impl<S: Scalar> PidGains<S> {
    pub fn new(kp: S, ki: S, kd: S) -> Self {
        Self { kp, ki, kd }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !v.is_finite() || v < S::zero() {
                return Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn is_active(&self) -> bool {
        self.kp > S::zero() || self.ki > S::zero() || self.kd > S::zero()
    }
}

/// Sign convention of the loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// More output raises the measurement (heater).
    #[default]
    Direct,
    /// More output lowers the measurement (exhaust fan).
    Reverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct PidConfig<S> {
    pub setpoint: S,
    pub output_min: S,
    pub output_max: S,
    pub sample_time: S,
    pub windup_limit: S,
    #[serde(default)]
    pub action: Action,
}

impl<S: Scalar> PidConfig<S> {
    pub fn new(setpoint: S) -> Self {
        Self {
            setpoint,
            output_min: S::zero(),
            output_max: S::one(),
            sample_time: S::one(),
            windup_limit: S::one(),
            action: Action::Direct,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.setpoint.is_finite() {
            return Err(Error::invalid("setpoint must be finite"));
        }
        if !(self.output_min < self.output_max) {
            return Err(Error::invalid("output_min must be < output_max"));
        }
        if !(self.sample_time > S::zero()) {
            return Err(Error::invalid("sample_time must be > 0"));
        }
        if !(self.windup_limit > S::zero()) {
            return Err(Error::invalid("windup_limit must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PidState<S> {
    pub integral: S,
    pub prev_measurement: S,
    pub last_output: S,
    pub initialized: bool,
}

impl<S: Scalar> PidState<S> {
    pub fn reset() -> Self {
        Self {
            integral: S::zero(),
            prev_measurement: S::zero(),
            last_output: S::zero(),
            initialized: false,
        }
    }
}

/// One controller update. Returns the new state and the clamped output.
///
/// A non-finite measurement or `dt <= 0` is reported as
/// [`Error::ControllerFault`]; the caller decides how to escalate.
pub fn pid_step<S: Scalar>(
    state: &PidState<S>,
    gains: &PidGains<S>,
    cfg: &PidConfig<S>,
    measurement: S,
    dt: S,
) -> Result<(PidState<S>, S)> {
    if !measurement.is_finite() {
        return Err(Error::ControllerFault(format!(
            "non-finite measurement {measurement}"
        )));
    }
    if !(dt > S::zero()) || !dt.is_finite() {
        return Err(Error::ControllerFault(format!("invalid time step {dt}")));
    }

    let sign = match cfg.action {
        Action::Direct => S::one(),
        Action::Reverse => -S::one(),
    };
    let error = sign * (cfg.setpoint - measurement);
    // d(error)/dt with the setpoint held fixed
    let d_meas = if state.initialized {
        -sign * (measurement - state.prev_measurement) / dt
    } else {
        S::zero()
    };

    let p_term = gains.kp * error;
    let d_term = gains.kd * d_meas;
    let increment = gains.ki * error * dt;

    let candidate = state.integral + increment;
    let unclamped = p_term + candidate + d_term;
    let accept = if unclamped > cfg.output_max {
        increment < S::zero()
    } else if unclamped < cfg.output_min {
        increment > S::zero()
    } else {
        true
    };
    let integral = if accept { candidate } else { state.integral };
    let integral = integral.max(-cfg.windup_limit).min(cfg.windup_limit);

    let output = (p_term + integral + d_term)
        .max(cfg.output_min)
        .min(cfg.output_max);

    Ok((
        PidState {
            integral,
            prev_measurement: measurement,
            last_output: output,
            initialized: true,
        },
        output,
    ))
}
