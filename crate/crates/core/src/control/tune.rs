//! Gain tuning by Nelder-Mead search over `(kp, ki, kd) >= 0`.
//!
//! Each evaluation simulates the scenario up to the end of the tuned phase
//! and scores `IAE + overshoot_weight * overshoot` on that phase's probe.
//! Runs that fault before the phase completes score `+inf`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::{FanControlMode, ScenarioConfig};
use crate::control::PidGains;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::sequencer::Phase;
use crate::summary::regulation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TunePhase {
    Cook,
    Smoke,
}

impl TunePhase {
    fn phase(self) -> Phase {
        match self {
            TunePhase::Cook => Phase::Cook,
            TunePhase::Smoke => Phase::Smoke,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TunePhase::Cook => "cook",
            TunePhase::Smoke => "smoke",
        }
    }
}

impl fmt::Display for TunePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TunePhase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cook" => Ok(TunePhase::Cook),
            "smoke" => Ok(TunePhase::Smoke),
            other => Err(Error::invalid(format!("unknown tuning phase `{other}` (expected cook or smoke)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneResult {
    pub phase: TunePhase,
    pub gains: PidGains<f64>,
    pub objective: f64,
    pub initial_gains: PidGains<f64>,
    pub initial_objective: f64,
    pub evaluations: usize,
}

impl TuneResult {
    /// Config fragment that can be merged into a scenario file.
    pub fn config_fragment(&self) -> serde_json::Value {
        let mut gains = serde_json::Map::new();
        gains.insert(
            self.phase.name().to_string(),
            serde_json::to_value(self.gains).expect("gains serialize"),
        );
        let mut root = serde_json::Map::new();
        root.insert("gains".into(), gains.into());
        if self.phase == TunePhase::Smoke {
            root.insert("control".into(), serde_json::json!({ "fan_control": "pid" }));
        }
        root.into()
    }

    pub fn to_text(&self) -> String {
        format!(
            "Tuned {} gains after {} evaluations\n  initial: kp={:.6} ki={:.6} kd={:.6} objective={:.4}\n  best:    kp={:.6} ki={:.6} kd={:.6} objective={:.4}\n",
            self.phase,
            self.evaluations,
            self.initial_gains.kp,
            self.initial_gains.ki,
            self.initial_gains.kd,
            self.initial_objective,
            self.gains.kp,
            self.gains.ki,
            self.gains.kd,
            self.objective
        )
    }
}

fn scenario_with(base: &ScenarioConfig, phase: TunePhase, gains: PidGains<f64>) -> ScenarioConfig {
    let mut cfg = base.clone();
    match phase {
        TunePhase::Cook => cfg.gains.cook = gains,
        TunePhase::Smoke => {
            cfg.gains.smoke = gains;
            cfg.control.fan_control = FanControlMode::Pid;
        }
    }
    cfg
}

/// Objective for one gain set; `+inf` if the run cannot complete the phase.
pub fn evaluate_gains(base: &ScenarioConfig, phase: TunePhase, gains: PidGains<f64>) -> f64 {
    if gains.validate().is_err() {
        return f64::INFINITY;
    }
    let cfg = scenario_with(base, phase, gains);
    let Ok(mut engine) = Engine::new(&cfg) else {
        return f64::INFINITY;
    };
    let target = phase.phase();
    let mut readings = Vec::new();
    let mut completed = false;
    while let Some(rec) = engine.tick() {
        if rec.phase == target {
            readings.push(match phase {
                TunePhase::Cook => rec.cook_reading,
                TunePhase::Smoke => rec.smoke_reading,
            });
        } else if !readings.is_empty() {
            completed = rec.phase != Phase::Fault;
            break;
        }
        if rec.phase == Phase::Fault {
            break;
        }
    }
    let setpoint = match phase {
        TunePhase::Cook => cfg.plan.cook_setpoint,
        TunePhase::Smoke => cfg.plan.smoke_setpoint,
    };
    match (completed, regulation(&readings, setpoint, cfg.steps.control_dt)) {
        (true, Some(r)) => r.iae + cfg.control.overshoot_weight * r.overshoot,
        _ => f64::INFINITY,
    }
}

pub fn tune_gains(scenario: &ScenarioConfig, phase: TunePhase, initial: PidGains<f64>, budget: usize) -> Result<TuneResult> {
    if budget < 1 {
        return Err(Error::invalid("tuning budget must be at least 1 evaluation"));
    }
    scenario.ensure_valid()?;
    initial.validate()?;

    let x0 = [initial.kp, initial.ki, initial.kd];
    let steps = [
        (0.25 * initial.kp).max(0.02),
        (0.25 * initial.ki).max(0.0005),
        (0.25 * initial.kd).max(0.1),
    ];
    let objective = |x: &[f64; 3]| evaluate_gains(scenario, phase, PidGains::new(x[0], x[1], x[2]));
    let search = nelder_mead(objective, x0, steps, budget);

    Ok(TuneResult {
        phase,
        gains: PidGains::new(search.best[0], search.best[1], search.best[2]),
        objective: search.best_value,
        initial_gains: initial,
        initial_objective: search.first_value,
        evaluations: search.evaluations,
    })
}

struct Search {
    best: [f64; 3],
    best_value: f64,
    first_value: f64,
    evaluations: usize,
}

fn project(mut x: [f64; 3]) -> [f64; 3] {
    for v in &mut x {
        if !(*v > 0.0) {
            *v = 0.0;
        }
    }
    x
}

/// Bounded-budget Nelder-Mead on the non-negative orthant. Points are
/// projected onto `x >= 0` before evaluation. The starting point is always
/// the first evaluation.
fn nelder_mead<F>(f: F, x0: [f64; 3], steps: [f64; 3], budget: usize) -> Search
where
    F: Fn(&[f64; 3]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut evaluations = 0usize;
    let eval = |x: [f64; 3], evaluations: &mut usize| -> Option<([f64; 3], f64)> {
        if *evaluations >= budget {
            return None;
        }
        *evaluations += 1;
        let x = project(x);
        Some((x, f(&x)))
    };

    let x0 = project(x0);
    let first = eval(x0, &mut evaluations).expect("budget >= 1");
    let first_value = first.1;
    let mut simplex = vec![first];
    for i in 0..3 {
        let mut x = x0;
        x[i] += steps[i];
        match eval(x, &mut evaluations) {
            Some(p) => simplex.push(p),
            None => break,
        }
    }

    let by_value = |a: &([f64; 3], f64), b: &([f64; 3], f64)| a.1.total_cmp(&b.1);
    if simplex.len() == 4 {
        'outer: loop {
            simplex.sort_by(by_value);
            let worst = simplex[3];
            let mut centroid = [0.0; 3];
            for p in &simplex[..3] {
                for k in 0..3 {
                    centroid[k] += p.0[k] / 3.0;
                }
            }
            let along = |t: f64| {
                let mut x = [0.0; 3];
                for k in 0..3 {
                    x[k] = centroid[k] + t * (worst.0[k] - centroid[k]);
                }
                x
            };

            let Some(reflected) = eval(along(-ALPHA), &mut evaluations) else { break };
            if reflected.1 < simplex[0].1 {
                let Some(expanded) = eval(along(-GAMMA), &mut evaluations) else {
                    simplex[3] = reflected;
                    break;
                };
                simplex[3] = if expanded.1 < reflected.1 { expanded } else { reflected };
                continue;
            }
            if reflected.1 < simplex[2].1 {
                simplex[3] = reflected;
                continue;
            }
            let contracted = if reflected.1 < worst.1 {
                eval(along(-RHO), &mut evaluations)
            } else {
                eval(along(RHO), &mut evaluations)
            };
            let Some(contracted) = contracted else { break };
            if contracted.1 < worst.1.min(reflected.1) {
                simplex[3] = contracted;
                continue;
            }
            let best = simplex[0].0;
            for p in simplex.iter_mut().skip(1) {
                let mut x = [0.0; 3];
                for k in 0..3 {
                    x[k] = best[k] + SIGMA * (p.0[k] - best[k]);
                }
                match eval(x, &mut evaluations) {
                    Some(q) => *p = q,
                    None => break 'outer,
                }
            }
        }
    }

    simplex.sort_by(by_value);
    // ties keep the starting point, which sits first among equals
    let best = simplex
        .iter()
        .copied()
        .find(|p| p.1 == simplex[0].1 && p.0 == x0)
        .unwrap_or(simplex[0]);
    Search {
        best: best.0,
        best_value: best.1,
        first_value,
        evaluations,
    }
}
