//! Telemetry rows and their CSV form.
//!
//! Columns: `t_s,phase,T_<node>...,R_cook,R_smoke,heater_duty,heater_on,
//! igniter,boiler_fans,smoke_fan,tray_pos`, LF line endings, temperatures
//! with four decimals.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plant::PlantConfig;
use crate::sequencer::Phase;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelemetryRecord {
    /// End of the control tick, s.
    pub t: f64,
    pub phase: Phase,
    /// Node temperatures in plant node order, °C.
    pub temperatures: Vec<f64>,
    pub cook_reading: f64,
    pub smoke_reading: f64,
    pub heater_duty: f64,
    pub heater_on: bool,
    pub igniter: bool,
    pub boiler_fans: bool,
    pub smoke_fan: bool,
    pub tray_position: f64,
}

pub fn csv_header(plant: &PlantConfig<f64>) -> String {
    let mut h = String::from("t_s,phase");
    for n in &plant.nodes {
        let _ = write!(h, ",T_{}", n.name);
    }
    h.push_str(",R_cook,R_smoke,heater_duty,heater_on,igniter,boiler_fans,smoke_fan,tray_pos");
    h
}

fn flag(b: bool) -> u8 {
    u8::from(b)
}

pub fn to_csv(records: &[TelemetryRecord], plant: &PlantConfig<f64>) -> String {
    let mut out = String::with_capacity(records.len() * 120);
    out.push_str(&csv_header(plant));
    out.push('\n');
    for r in records {
        let _ = write!(out, "{:.3},{}", r.t, r.phase);
        for t in &r.temperatures {
            let _ = write!(out, ",{t:.4}");
        }
        let _ = writeln!(
            out,
            ",{:.4},{:.4},{:.4},{},{},{},{},{:.4}",
            r.cook_reading,
            r.smoke_reading,
            r.heater_duty,
            flag(r.heater_on),
            flag(r.igniter),
            flag(r.boiler_fans),
            flag(r.smoke_fan),
            r.tray_position
        );
    }
    out
}

/// Parses telemetry written by [`to_csv`]. Node columns are taken from the
/// header.
pub fn from_csv(text: &str) -> Result<Vec<TelemetryRecord>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Telemetry("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let nodes = cols.iter().filter(|c| c.starts_with("T_")).count();
    let expected = 2 + nodes + 8;
    if cols.len() != expected || cols[0] != "t_s" || cols[1] != "phase" {
        return Err(Error::Telemetry(format!("unexpected header `{header}`")));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let bad = |what: &str| Error::Telemetry(format!("line {}: {what}", i + 1));
        if f.len() != expected {
            return Err(bad("wrong number of fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number `{s}`")));
        let bit = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad(&format!("bad flag `{s}`"))),
        };
        let phase = Phase::from_name(f[1]).ok_or_else(|| bad(&format!("unknown phase `{}`", f[1])))?;
        let temperatures = f[2..2 + nodes].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
        let k = 2 + nodes;
        out.push(TelemetryRecord {
            t: num(f[0])?,
            phase,
            temperatures,
            cook_reading: num(f[k])?,
            smoke_reading: num(f[k + 1])?,
            heater_duty: num(f[k + 2])?,
            heater_on: bit(f[k + 3])?,
            igniter: bit(f[k + 4])?,
            boiler_fans: bit(f[k + 5])?,
            smoke_fan: bit(f[k + 6])?,
            tray_position: num(f[k + 7])?,
        });
    }
    Ok(out)
}
