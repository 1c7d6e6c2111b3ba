//! Belt and pulley design calculator for the tray lift.
//!
//! All quantities are SI: meters, newtons, watts, rpm for shaft speed.
//! [`design_report`] chains the individual relations into one report and
//! renders it either as aligned text or as `key=value` lines.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
#[serde(deny_unknown_fields)]
pub struct LoadSpec<S> {
    /// kg
    pub mass: S,
    /// m/s²
    #[serde(default = "default_gravity")]
    pub gravity: S,
    pub pulley_count: u32,
}

fn default_gravity<S: Scalar>() -> S {
    S::lit(STANDARD_GRAVITY)
}

impl<S: Scalar> LoadSpec<S> {
    pub fn new(mass: S, pulley_count: u32) -> Self {
        Self {
            mass,
            gravity: default_gravity(),
            pulley_count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > S::zero()) || !self.mass.is_finite() {
            return Err(Error::invalid(format!("mass must be > 0, got {}", self.mass)));
        }
        if !(self.gravity > S::zero()) || !self.gravity.is_finite() {
            return Err(Error::invalid(format!(
                "gravity must be > 0, got {}",
                self.gravity
            )));
        }
        if self.pulley_count == 0 {
            return Err(Error::invalid("pulley_count must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
#[serde(deny_unknown_fields)]
pub struct PulleySpec<S> {
    /// m
    pub diameter: S,
    /// rpm; for the driven pulley this is an output and may be left at zero.
    #[serde(default)]
    pub speed: S,
    /// Carried for reference only; ratios are computed from diameters.
    #[serde(default)]
    pub teeth: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar + Serialize + serde::de::DeserializeOwned")]
#[serde(deny_unknown_fields)]
pub struct BeltDrive<S> {
    pub driver: PulleySpec<S>,
    pub driven: PulleySpec<S>,
    /// Center distance between the two shafts, m.
    pub center_distance: S,
    /// Effective belt tension, N.
    pub tension: S,
}

impl<S: Scalar> BeltDrive<S> {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("driver", &self.driver), ("driven", &self.driven)] {
            if !(p.diameter > S::zero()) || !p.diameter.is_finite() {
                return Err(Error::invalid(format!(
                    "{name} diameter must be > 0, got {}",
                    p.diameter
                )));
            }
        }
        if !(self.driver.speed >= S::zero()) || !self.driver.speed.is_finite() {
            return Err(Error::invalid("driver speed must be >= 0"));
        }
        let half_sum = (self.driver.diameter + self.driven.diameter) / S::lit(2.0);
        if !(self.center_distance > half_sum) {
            return Err(Error::invalid(format!(
                "center distance {} must exceed the sum of pulley radii {}",
                self.center_distance, half_sum
            )));
        }
        if !(self.tension >= S::zero()) || !self.tension.is_finite() {
            return Err(Error::invalid("tension must be >= 0"));
        }
        Ok(())
    }
}

/// Returns `(weight, effort)` in newtons for a lift over `pulley_count`
/// pulleys.
pub fn lifting_forces<S: Scalar>(load: &LoadSpec<S>) -> Result<(S, S)> {
    load.validate()?;
    let weight = load.mass * load.gravity;
    let effort = weight / S::from_u32(load.pulley_count).unwrap_or_else(S::one);
    Ok((weight, effort))
}

/// Speed of the second pulley on a shared belt, from `d1 * n1 = d2 * n2`.
pub fn driven_speed<S: Scalar>(d1: S, n1: S, d2: S) -> Result<S> {
    if !(d1 > S::zero()) || !(d2 > S::zero()) {
        return Err(Error::invalid("pulley diameters must be > 0"));
    }
    if !(n1 >= S::zero()) {
        return Err(Error::invalid("driver speed must be >= 0"));
    }
    Ok(d1 * n1 / d2)
}

/// Belt surface speed in m/s for a pulley of diameter `d` turning at `n` rpm.
pub fn belt_velocity<S: Scalar>(d: S, n: S) -> Result<S> {
    if !(d > S::zero()) {
        return Err(Error::invalid("pulley diameter must be > 0"));
    }
    if !(n >= S::zero()) {
        return Err(Error::invalid("speed must be >= 0"));
    }
    Ok(S::PI() * d * n / S::lit(60.0))
}

/// Power carried by a belt at the given tension and surface speed.
pub fn belt_power<S: Scalar>(tension: S, velocity: S) -> Result<S> {
    if !(tension >= S::zero()) {
        return Err(Error::invalid("tension must be >= 0"));
    }
    if !(velocity >= S::zero()) {
        return Err(Error::invalid("velocity must be >= 0"));
    }
    Ok(tension * velocity)
}

/// Tension needed to carry `power` at `velocity`.
pub fn belt_tension<S: Scalar>(power: S, velocity: S) -> Result<S> {
    if !(velocity > S::zero()) {
        return Err(Error::Domain(format!(
            "belt tension undefined at velocity {velocity}"
        )));
    }
    if !(power >= S::zero()) {
        return Err(Error::invalid("power must be >= 0"));
    }
    Ok(power / velocity)
}

/// Open belt length over two pulleys with center distance `center`.
///
/// The offset term is `(d1 - d2)^2 / (4 * center)`; without the divisor the
/// 6 cm / 3 cm / 10 cm drive would come out near 34.2 cm instead of 34.4 cm.
pub fn belt_length<S: Scalar>(d1: S, d2: S, center: S) -> Result<S> {
    if !(d1 > S::zero()) || !(d2 > S::zero()) {
        return Err(Error::invalid("pulley diameters must be > 0"));
    }
    if !(center > S::zero()) {
        return Err(Error::invalid("center distance must be > 0"));
    }
    let two = S::lit(2.0);
    let diff = d1 - d2;
    Ok(S::PI() * (d1 + d2) / two + two * center + diff * diff / (S::lit(4.0) * center))
}

/// Shaft torque in N·m delivering `power` watts at `n` rpm.
pub fn required_torque<S: Scalar>(power: S, n: S) -> Result<S> {
    if !(n > S::zero()) {
        return Err(Error::invalid("shaft speed must be > 0 rpm"));
    }
    if !(power >= S::zero()) {
        return Err(Error::invalid("power must be >= 0"));
    }
    let omega = S::lit(2.0) * S::PI() * n / S::lit(60.0);
    Ok(power / omega)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport<S> {
    pub weight_n: S,
    pub effort_n: S,
    pub driver_speed_rpm: S,
    pub driven_speed_rpm: S,
    pub belt_velocity_mps: S,
    pub transmitted_power_w: S,
    pub tension_n: S,
    pub belt_length_m: S,
    pub center_distance_m: S,
    pub torque_driver_nm: S,
    pub torque_driven_nm: S,
    pub driver_teeth: u32,
    pub driven_teeth: u32,
    pub notes: Vec<String>,
}

pub fn design_report<S: Scalar>(load: &LoadSpec<S>, drive: &BeltDrive<S>) -> Result<DesignReport<S>> {
    load.validate()?;
    drive.validate()?;
    let (weight, effort) = lifting_forces(load)?;
    let d1 = drive.driver.diameter;
    let d2 = drive.driven.diameter;
    let n1 = drive.driver.speed;
    let n2 = driven_speed(d1, n1, d2)?;
    let v = belt_velocity(d1, n1)?;
    let power = belt_power(drive.tension, v)?;
    let length = belt_length(d1, d2, drive.center_distance)?;
    let (t1, t2) = if n1 > S::zero() {
        (required_torque(power, n1)?, required_torque(power, n2)?)
    } else {
        (S::zero(), S::zero())
    };

    let mut notes = vec![
        "belt length uses the (d1-d2)^2/(4D) offset term".to_string(),
        "speed ratio taken from pulley diameters; tooth counts are informational".to_string(),
    ];
    if load.pulley_count == 1 {
        notes.push(format!(
            "single fixed pulley: effort equals load weight ({:.2} N); the transmitted power is {:.3} W",
            weight.to_f64_lossy(),
            power.to_f64_lossy()
        ));
    }

    Ok(DesignReport {
        weight_n: weight,
        effort_n: effort,
        driver_speed_rpm: n1,
        driven_speed_rpm: n2,
        belt_velocity_mps: v,
        transmitted_power_w: power,
        tension_n: drive.tension,
        belt_length_m: length,
        center_distance_m: drive.center_distance,
        torque_driver_nm: t1,
        torque_driven_nm: t2,
        driver_teeth: drive.driver.teeth,
        driven_teeth: drive.driven.teeth,
        notes,
    })
}

/// Rounds to three significant figures for display.
fn sig3(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = 2 - v.abs().log10().floor() as i32;
    if digits > 0 {
        format!("{:.*}", digits as usize, v)
    } else {
        let scale = 10f64.powi(-digits);
        format!("{}", (v / scale).round() * scale)
    }
}

impl<S: Scalar> DesignReport<S> {
    pub fn to_text(&self) -> String {
        let f = |v: S| sig3(v.to_f64_lossy());
        let rows = [
            ("Load weight", f(self.weight_n), "N"),
            ("Effort force", f(self.effort_n), "N"),
            ("Driver pulley speed", f(self.driver_speed_rpm), "rpm"),
            ("Driven pulley speed", f(self.driven_speed_rpm), "rpm"),
            ("Belt velocity", f(self.belt_velocity_mps), "m/s"),
            ("Belt tension", f(self.tension_n), "N"),
            ("Transmitted power", f(self.transmitted_power_w), "W"),
            ("Center distance", f(self.center_distance_m * S::lit(100.0)), "cm"),
            ("Belt length", f(self.belt_length_m * S::lit(100.0)), "cm"),
            ("Torque (driver)", f(self.torque_driver_nm), "N·m"),
            ("Torque (driven)", f(self.torque_driven_nm), "N·m"),
        ];
        let mut out = String::from("Belt drive design report\n");
        for (label, value, unit) in rows {
            let _ = writeln!(out, "  {label:<22}{value:>10} {unit}");
        }
        let _ = writeln!(
            out,
            "  {:<22}{:>10}",
            "Teeth (driver/driven)",
            format!("{}/{}", self.driver_teeth, self.driven_teeth)
        );
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        out
    }

    pub fn to_key_values(&self) -> String {
        let pairs = [
            ("weight_N", self.weight_n),
            ("effort_N", self.effort_n),
            ("driver_speed_rpm", self.driver_speed_rpm),
            ("driven_speed_rpm", self.driven_speed_rpm),
            ("belt_velocity_mps", self.belt_velocity_mps),
            ("transmitted_power_W", self.transmitted_power_w),
            ("tension_N", self.tension_n),
            ("belt_length_m", self.belt_length_m),
            ("center_distance_m", self.center_distance_m),
            ("torque_driver_Nm", self.torque_driver_nm),
            ("torque_driven_Nm", self.torque_driven_nm),
        ];
        let mut out = String::new();
        for (k, v) in pairs {
            let _ = writeln!(out, "{k}={:.6}", v.to_f64_lossy());
        }
        out
    }
}

/// Tray-lift geometry of the reference machine: 5 kg on one fixed pulley,
/// 6 cm driver at 25 rpm, 3 cm driven pulley, 10 cm centers, 6.5 N tension.
pub fn reference_design<S: Scalar>() -> (LoadSpec<S>, BeltDrive<S>) {
    let load = LoadSpec::new(S::lit(5.0), 1);
    let drive = BeltDrive {
        driver: PulleySpec {
            diameter: S::lit(0.06),
            speed: S::lit(25.0),
            teeth: 11,
        },
        driven: PulleySpec {
            diameter: S::lit(0.03),
            speed: S::zero(),
            teeth: 18,
        },
        center_distance: S::lit(0.10),
        tension: S::lit(6.5),
    };
    (load, drive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lifting_forces_single_and_double() {
        let (w, s) = lifting_forces(&LoadSpec::new(5.0_f64, 1)).unwrap();
        assert_relative_eq!(w, 49.05, epsilon = 1e-12);
        assert_relative_eq!(s, 49.05, epsilon = 1e-12);
        let (_, s2) = lifting_forces(&LoadSpec::new(5.0_f64, 2)).unwrap();
        assert_relative_eq!(s2, 24.525, epsilon = 1e-12);
        let (w, s) = lifting_forces(&LoadSpec::new(0.001_f64, 1)).unwrap();
        assert_eq!(w, s);
    }

    #[test]
    fn lifting_forces_rejects_bad_load() {
        assert!(lifting_forces(&LoadSpec::new(0.0_f64, 1)).is_err());
        assert!(lifting_forces(&LoadSpec::new(-1.0_f64, 1)).is_err());
        assert!(lifting_forces(&LoadSpec::new(1.0_f64, 0)).is_err());
    }

    #[test]
    fn driven_speed_examples() {
        assert_relative_eq!(driven_speed(0.06, 25.0, 0.03).unwrap(), 50.0, epsilon = 1e-12);
        assert_relative_eq!(driven_speed(0.03, 50.0, 0.06).unwrap(), 25.0, epsilon = 1e-12);
        assert_eq!(driven_speed(0.05, 17.0, 0.05).unwrap(), 17.0);
        assert!(driven_speed(0.06, 25.0, 0.0).is_err());
    }

    #[test]
    fn belt_velocity_examples() {
        let v = belt_velocity(0.06_f64, 25.0).unwrap();
        assert!((v - 0.0785).abs() < 5e-5);
        assert_eq!(belt_velocity(0.2, 0.0).unwrap(), 0.0);
        assert_relative_eq!(belt_velocity(0.03, 50.0).unwrap(), v, max_relative = 1e-12);
    }

    #[test]
    fn power_and_tension() {
        let p: f64 = belt_power(6.5, 0.0785).unwrap();
        assert!((p - 0.510).abs() < 5e-4);
        let v = belt_velocity(0.06_f64, 25.0).unwrap();
        let p = belt_power(6.5, v).unwrap();
        assert!((p - 0.5105).abs() < 1e-4);
        assert_eq!(belt_power(0.0, 0.3).unwrap(), 0.0);
        assert_relative_eq!(belt_tension(p, v).unwrap(), 6.5, max_relative = 1e-12);
        assert!(matches!(belt_tension(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn belt_length_examples() {
        let l = belt_length(0.06_f64, 0.03, 0.10).unwrap();
        assert!((l - 0.3436).abs() < 1e-4, "{l}");
        assert_relative_eq!(belt_length(0.03, 0.06, 0.10).unwrap(), l, max_relative = 1e-15);
        let d = 0.04;
        assert_relative_eq!(
            belt_length(d, d, 0.2).unwrap(),
            std::f64::consts::PI * d + 0.4,
            max_relative = 1e-15
        );
        assert!(belt_length(0.06, 0.03, 0.0).is_err());
    }

    #[test]
    fn torque_examples() {
        let t25 = required_torque(0.51_f64, 25.0).unwrap();
        let t50 = required_torque(0.51_f64, 50.0).unwrap();
        assert!((t25 - 0.195).abs() < 5e-3);
        assert!((t50 - 0.097).abs() < 5e-3);
        assert_eq!(required_torque(0.0, 30.0).unwrap(), 0.0);
        assert!(required_torque(1.0, 0.0).is_err());
    }

    #[test]
    fn reference_report() {
        let (load, drive) = reference_design::<f64>();
        let r = design_report(&load, &drive).unwrap();
        assert_relative_eq!(r.weight_n, 49.05, epsilon = 1e-12);
        assert_eq!(r.driven_speed_rpm, 50.0);
        assert!((r.belt_length_m - 0.3436).abs() < 5e-4);
        assert!(r.to_text().contains("34.4"));
        assert!(r.to_key_values().contains("driven_speed_rpm=50.000000"));
    }

    #[test]
    fn report_linear_in_power() {
        let (load, mut drive) = reference_design::<f64>();
        let a = design_report(&load, &drive).unwrap();
        drive.tension *= 2.0;
        let b = design_report(&load, &drive).unwrap();
        assert_relative_eq!(b.torque_driver_nm, 2.0 * a.torque_driver_nm, max_relative = 1e-12);
        assert_relative_eq!(b.torque_driven_nm, 2.0 * a.torque_driven_nm, max_relative = 1e-12);
    }

    #[test]
    fn unity_geometry_keeps_belt_speed() {
        let (load, mut drive) = reference_design::<f64>();
        drive.driven.diameter = drive.driver.diameter;
        let r = design_report(&load, &drive).unwrap();
        assert_eq!(r.driven_speed_rpm, r.driver_speed_rpm);
        assert_relative_eq!(
            belt_velocity(drive.driven.diameter, r.driven_speed_rpm).unwrap(),
            r.belt_velocity_mps,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_overlapping_pulleys() {
        let (load, mut drive) = reference_design::<f64>();
        drive.center_distance = 0.04;
        assert!(design_report(&load, &drive).is_err());
    }

    #[test]
    fn works_in_f32() {
        let (load, drive) = reference_design::<f32>();
        let r = design_report(&load, &drive).unwrap();
        assert!((r.driven_speed_rpm - 50.0).abs() < 1e-4);
    }

    #[test]
    fn sig3_formatting() {
        assert_eq!(sig3(34.36), "34.4");
        assert_eq!(sig3(0.0785), "0.0785");
        assert_eq!(sig3(49.05), "49.0");
        assert_eq!(sig3(0.195), "0.195");
    }
}
