use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use amzi::scenario::{
    run_scenario, run_selftest, Overrides, RunReport, ScenarioConfig, ScenarioKind, SweepParameter, SweepSpec,
};
use amzi::{Error, Result};

const ANGLE_HELP: &str = "Angles take an explicit unit: 90deg, 1.571rad, 0.5pi or pi/2.";

/// Spin-orbit vector modes in an asymmetric Mach-Zehnder interferometer.
///
/// The polarizer angle gamma is measured from vertical, anticlockwise as
/// seen from the source looking along the beam. Images show the transverse
/// plane with +y up and +x to the right.
#[derive(Parser)]
#[command(name = "amzi", version, after_help = ANGLE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a single frame.
    Render(ScenarioArgs),
    /// Render one frame per value of a parameter sweep.
    Sweep(ScenarioArgs),
    /// Tabulate two-photon coincidence and bunching probabilities against delta.
    Hom(ScenarioArgs),
    /// Run the built-in invariant checks.
    Selftest {
        /// Also write selftest.json into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// balanced-vector, lg-input, dual-input, custom or biphoton-sweep.
    #[arg(long)]
    scenario: Option<String>,
    /// TOML file with the same keys as the long flags (underscored).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Internal interferometer phase.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Analyzing polarizer angle, or "none".
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Samples per grid axis.
    #[arg(long)]
    grid_size: Option<usize>,
    /// Grid half width in units of the waist length.
    #[arg(long)]
    half_extent: Option<f64>,
    #[arg(long)]
    waist: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output formats: pgm, png, csv, json (repeat or comma-separate).
    #[arg(long = "format")]
    formats: Vec<String>,
    /// param:start:stop:steps with param one of gamma, beta, alpha, delta.
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// Write polarization ellipses for every n-th pixel.
    #[arg(long)]
    ellipses: Option<usize>,
}

impl ScenarioArgs {
    fn build(&self, forced: Option<ScenarioKind>) -> Result<ScenarioConfig> {
        let flag_kind = self.scenario.as_deref().map(str::parse).transpose()?;
        if let (Some(f), Some(k)) = (forced, flag_kind) {
            if f != k {
                return Err(Error::Config(format!("this subcommand always runs {f}, not {k}")));
            }
        }
        let kind = forced.or(flag_kind);
        let mut config = match &self.config {
            Some(path) => ScenarioConfig::from_toml_with(&std::fs::read_to_string(path)?, kind)?,
            None => ScenarioConfig::preset(kind.unwrap_or(ScenarioKind::BalancedVector)),
        };
        let overrides = Overrides {
            theta: self.theta.clone(),
            phi: self.phi.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            delta: self.delta.clone(),
            gamma: self.gamma.clone(),
            grid_size: self.grid_size,
            half_extent: self.half_extent,
            waist: self.waist,
            sweep: self.sweep.clone(),
            out: self.out.clone(),
            formats: (!self.formats.is_empty()).then(|| self.formats.clone()),
            ellipse_stride: self.ellipses,
        };
        overrides.apply(&mut config)?;
        Ok(config)
    }
}

fn print_metrics(report: &RunReport) {
    for frame in &report.frames {
        let label = match frame.parameter {
            Some(v) => format!("frame {:3} ({v:.6})", frame.index),
            None => format!("frame {:3}", frame.index),
        };
        let metrics: Vec<String> = frame.metrics.iter().map(|(k, v)| format!("{k}={v:.6e}")).collect();
        println!("{label}: {}", metrics.join(" "));
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Render(args) => {
            let mut config = args.build(None)?;
            config.sweep = None;
            if config.scenario == ScenarioKind::BiphotonSweep {
                return Err(Error::Config("use `amzi hom` for the biphoton sweep".into()));
            }
            print_metrics(&run_scenario(&config)?);
        }
        Command::Sweep(args) => {
            let config = args.build(None)?;
            if config.sweep.is_none() {
                return Err(Error::Config("sweep needs --sweep param:start:stop:steps".into()));
            }
            print_metrics(&run_scenario(&config)?);
        }
        Command::Hom(args) => {
            let mut config = args.build(Some(ScenarioKind::BiphotonSweep))?;
            if config.sweep.is_none() {
                config.sweep = Some(SweepSpec::new(SweepParameter::Delta, 0.0, std::f64::consts::PI, 65)?);
            }
            let report = run_scenario(&config)?;
            println!("{:>12} {:>14} {:>14}", "delta_rad", "coincidence", "bunching");
            for f in &report.frames {
                println!(
                    "{:>12.6} {:>14.6e} {:>14.6e}",
                    f.delta, f.metrics["coincidence"], f.metrics["bunching"]
                );
            }
        }
        Command::Selftest { out } => {
            let checks = run_selftest()?;
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status} {:<32} {:.3e} (tol {:.0e})", c.name, c.value, c.tolerance);
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                let mut text = serde_json::to_string_pretty(&checks)?;
                text.push('\n');
                std::fs::write(dir.join("selftest.json"), text)?;
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
