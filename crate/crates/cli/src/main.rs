use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fishsmoker::control::{tune_gains, TunePhase};
use fishsmoker::mechanics::design_report;
use fishsmoker::summary::summarize;
use fishsmoker::telemetry::{from_csv, to_csv};
use fishsmoker::{run_scenario, Phase, ScenarioConfig};

const EXIT_OK: u8 = 0;
const EXIT_CONFIG: u8 = 1;
const EXIT_FAULT: u8 = 2;

/// Fish smoking machine simulator.
#[derive(Parser, Debug)]
#[command(name = "fishsmoker", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a full process run; writes telemetry CSV and prints a summary.
    Run {
        #[command(flatten)]
        source: Source,
        /// Telemetry output path.
        #[arg(long, default_value = "run.csv")]
        out: PathBuf,
    },
    /// Print the belt and pulley design report.
    Mechanics {
        #[command(flatten)]
        source: Source,
    },
    /// Tune PID gains for one phase with a bounded Nelder-Mead search.
    Tune {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_phase)]
        phase: TunePhase,
        /// Maximum number of simulated runs.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Recompute the run summary from an existing telemetry CSV.
    Summarize {
        #[command(flatten)]
        source: Source,
        /// Telemetry CSV written by `run`.
        #[arg(default_value = "run.csv")]
        telemetry: PathBuf,
    },
    /// Check a configuration and list every violation.
    Validate {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Scenario config (JSON).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in preset: scad_large, scad_medium, milkfish, tilapia.
    #[arg(long)]
    preset: Option<String>,
    /// Dotted-path override, e.g. plan.cook_setpoint=80. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn parse_phase(s: &str) -> Result<TunePhase, String> {
    s.parse().map_err(|e: fishsmoker::Error| e.to_string())
}

impl Source {
    /// Parsed config with overrides applied, not yet validated.
    fn load_unchecked(&self) -> anyhow::Result<ScenarioConfig> {
        let base = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                fishsmoker::config::parse_json(&text).with_context(|| format!("{}", path.display()))?
            }
            (None, Some(name)) => ScenarioConfig::from_preset_name(name)?,
            (None, None) => ScenarioConfig::default_scenario(),
        };
        Ok(base.with_overrides(&self.overrides)?)
    }

    fn load(&self) -> anyhow::Result<ScenarioConfig> {
        let cfg = self.load_unchecked()?;
        cfg.ensure_valid()?;
        Ok(cfg)
    }
}

fn cmd_run(source: &Source, out: &Path) -> anyhow::Result<u8> {
    let cfg = source.load()?;
    let result = run_scenario(&cfg)?;
    fs::write(out, to_csv(&result.telemetry, &cfg.plant)).with_context(|| format!("cannot write {}", out.display()))?;
    print!("{}", result.summary.to_text());
    Ok(if result.summary.terminal_phase == Phase::Fault { EXIT_FAULT } else { EXIT_OK })
}

fn cmd_mechanics(source: &Source) -> anyhow::Result<u8> {
    let m = source.load_unchecked()?.mechanics;
    let report = design_report(&m.load, &m.drive)?;
    print!("{}", report.to_text());
    println!();
    print!("{}", report.to_key_values());
    Ok(EXIT_OK)
}

fn fragment_path(source: &Source, cfg: &ScenarioConfig, phase: TunePhase) -> PathBuf {
    let name = |stem: &str| format!("{stem}.tuned-{phase}.json");
    match &source.config {
        Some(path) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
            path.with_file_name(name(stem))
        }
        None => PathBuf::from(name(&cfg.preset_name)),
    }
}

fn cmd_tune(source: &Source, phase: TunePhase, budget: usize) -> anyhow::Result<u8> {
    if budget < 1 {
        bail!("--budget must be at least 1");
    }
    let cfg = source.load()?;
    let initial = match phase {
        TunePhase::Cook => cfg.gains.cook,
        TunePhase::Smoke => cfg.gains.smoke,
    };
    let result = tune_gains(&cfg, phase, initial, budget)?;
    print!("{}", result.to_text());
    let path = fragment_path(source, &cfg, phase);
    let body = serde_json::to_string_pretty(&result.config_fragment())? + "\n";
    fs::write(&path, body).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_summarize(source: &Source, telemetry: &Path) -> anyhow::Result<u8> {
    let cfg = source.load()?;
    let text = fs::read_to_string(telemetry).with_context(|| format!("cannot read {}", telemetry.display()))?;
    let records = from_csv(&text)?;
    let summary = summarize(&records, &cfg)?;
    print!("{}", summary.to_text());
    Ok(if summary.terminal_phase == Phase::Fault { EXIT_FAULT } else { EXIT_OK })
}

fn cmd_validate(source: &Source) -> anyhow::Result<u8> {
    let cfg = source.load_unchecked()?;
    let violations = cfg.validate();
    if violations.is_empty() {
        println!("ok");
        return Ok(EXIT_OK);
    }
    for v in &violations {
        println!("{v}");
    }
    println!("{} violation(s)", violations.len());
    Ok(EXIT_CONFIG)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    let outcome = match &cli.command {
        Command::Run { source, out } => cmd_run(source, out),
        Command::Mechanics { source } => cmd_mechanics(source),
        Command::Tune { source, phase, budget } => cmd_tune(source, *phase, *budget),
        Command::Summarize { source, telemetry } => cmd_summarize(source, telemetry),
        Command::Validate { source } => cmd_validate(source),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
