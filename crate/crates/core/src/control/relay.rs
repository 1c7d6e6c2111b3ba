use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Time-proportioning window for an on/off actuator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
pub struct RelayWindow<S> {
    pub window_length: S,
    #[serde(default)]
    pub window_start: S,
}

impl<S: Scalar> Default for RelayWindow<S> {
    fn default() -> Self {
        Self {
            window_length: S::lit(10.0),
            window_start: S::zero(),
        }
    }
}

impl<S: Scalar> RelayWindow<S> {
    pub fn new(window_length: S) -> Self {
        Self {
            window_length,
            window_start: S::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.window_length > S::zero()) || !self.window_length.is_finite() {
            return Err(Error::invalid("relay window length must be > 0"));
        }
        Ok(())
    }
}

/// On/off state of the relay at time `t` for a commanded `duty` in [0, 1].
///
/// The relay is on for the first `duty * window_length` seconds of each
/// window. Window boundaries within a relative 1e-9 are snapped so that
/// `t = k * dt` with a decimal `dt` lands on the right side.
pub fn relay_modulate<S: Scalar>(duty: S, window: &RelayWindow<S>, t: S) -> bool {
    let duty = if duty.is_nan() { S::zero() } else { duty.max(S::zero()).min(S::one()) };
    if duty <= S::zero() {
        return false;
    }
    if duty >= S::one() {
        return true;
    }
    let len = window.window_length;
    let eps = len * S::lit(1e-9);
    let mut phase = (t - window.window_start) % len;
    if phase < S::zero() {
        phase = phase + len;
    }
    if len - phase <= eps {
        phase = S::zero();
    }
    phase + eps < duty * len
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let w = RelayWindow::new(10.0);
        for k in 0..200 {
            let t = k as f64 * 0.1;
            assert!(!relay_modulate(0.0, &w, t));
            assert!(relay_modulate(1.0, &w, t));
        }
    }

    #[test]
    fn quarter_duty() {
        let w = RelayWindow::new(10.0);
        assert!(relay_modulate(0.25, &w, 1.0));
        assert!(!relay_modulate(0.25, &w, 3.0));
        assert!(relay_modulate(0.25, &w, 11.0));
        assert!(!relay_modulate(0.25, &w, 2.5));
        assert!(relay_modulate(0.25, &w, 2.4));
    }

    #[test]
    fn window_start_offset() {
        let w = RelayWindow { window_length: 10.0, window_start: 4.0 };
        assert!(relay_modulate(0.3, &w, 4.0));
        assert!(!relay_modulate(0.3, &w, 7.5));
    }
}
