//! Scenario execution: field frames, profiles, metrics and report files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::biphoton::{bunching_probability, coincidence_probability, output_state};
use crate::error::{invalid_parameter, Result};
use crate::field::{superpose, FieldGrid, GridSpec, JonesVector, Waist};
use crate::interferometer::{propagate, Port, PortPair};
use crate::modes::{product_amplitudes, PoincareAngles, SpinOrbitAmplitudes};
use crate::polarization::{analyze, ellipse_map};

use super::config::{OutputFormat, ScenarioConfig, ScenarioKind, SweepParameter, SweepSpec};
use super::fit::{azimuths, fit_harmonic, modulation_depth, rotation_angles};
use super::output::{grid_to_image, quantize, write_csv, GrayImage};

pub const SCHEMA_VERSION: u32 = 1;

/// Azimuthal samples of the profile at `r = w0`.
pub const PROFILE_SAMPLES: usize = 720;

pub const PROFILE_HEADER: [&str; 3] = ["phi_rad", "r_over_w0", "power"];

/// Interferometer outputs for one set of parameters, with an optional
/// analyzing polarizer at both output ports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSetup {
    pub angles: PoincareAngles,
    pub delta: f64,
    pub gamma: Option<f64>,
    pub waist: Waist,
    pub outputs: PortPair,
}

impl FrameSetup {
    pub fn new(kind: ScenarioKind, angles: PoincareAngles, delta: f64, gamma: Option<f64>, waist: Waist) -> Result<Self> {
        let amps = product_amplitudes(&angles, 1.0)?;
        let inputs = match kind {
            ScenarioKind::DualInput => PortPair::new(amps, amps),
            ScenarioKind::BiphotonSweep => {
                return Err(invalid_parameter("the biphoton sweep has no classical field frames"))
            }
            _ => PortPair::new(amps, SpinOrbitAmplitudes::zero()),
        };
        Ok(Self {
            angles,
            delta,
            gamma,
            waist,
            outputs: propagate(&inputs, delta),
        })
    }

    pub fn amplitudes(&self, port: Port) -> Result<&SpinOrbitAmplitudes> {
        match port {
            Port::C => Ok(&self.outputs.first),
            Port::D => Ok(&self.outputs.second),
            other => Err(invalid_parameter(format!("{other} is not an output port"))),
        }
    }

    pub fn field(&self, port: Port, r: f64, phi_az: f64) -> Result<JonesVector> {
        let v = superpose(self.amplitudes(port)?, r, phi_az, self.waist);
        Ok(match self.gamma {
            Some(g) => analyze(&v, g),
            None => v,
        })
    }

    pub fn power(&self, port: Port, r: f64, phi_az: f64) -> Result<f64> {
        Ok(self.field(port, r, phi_az)?.power())
    }

    pub fn grid(&self, port: Port, spec: GridSpec) -> Result<FieldGrid> {
        let amps = *self.amplitudes(port)?;
        let gamma = self.gamma;
        Ok(FieldGrid::from_polar_fn(spec, |r, phi| {
            let v = superpose(&amps, r, phi, spec.waist);
            gamma.map_or(v, |g| analyze(&v, g))
        }))
    }

    /// Power at `r = w0` on [`PROFILE_SAMPLES`] equally spaced azimuths.
    pub fn azimuthal_profile(&self, port: Port) -> Result<(Vec<f64>, Vec<f64>)> {
        let phis = azimuths(PROFILE_SAMPLES);
        let w0 = self.waist.get();
        let powers = phis.iter().map(|&p| self.power(port, w0, p)).collect::<Result<_>>()?;
        Ok((phis, powers))
    }
}

/// Scalar metrics of one rendered frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub index: usize,
    pub parameter: Option<f64>,
    pub angles: PoincareAngles,
    pub delta: f64,
    pub gamma: Option<f64>,
    pub files: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scenario: ScenarioKind,
    pub grid: GridSpec,
    pub sweep: Option<SweepSpec>,
    pub frames: Vec<FrameReport>,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiphotonRow {
    pub delta: f64,
    pub coincidence: f64,
    pub bunching: f64,
}

/// Coincidence and bunching probabilities for a product-state photon pair,
/// one photon per input port, at each internal phase.
pub fn run_biphoton_sweep(amps: &SpinOrbitAmplitudes, deltas: &[f64]) -> Result<Vec<BiphotonRow>> {
    if deltas.is_empty() {
        return Err(invalid_parameter("the phase grid is empty"));
    }
    deltas
        .iter()
        .map(|&delta| {
            let state = output_state(amps, delta)?;
            Ok(BiphotonRow {
                delta,
                coincidence: coincidence_probability(&state)?,
                bunching: bunching_probability(&state)?,
            })
        })
        .collect()
}

/// Parameters of every frame: `(sweep value, angles, δ, Γ)`.
pub fn frame_parameters(config: &ScenarioConfig) -> Vec<(Option<f64>, PoincareAngles, f64, Option<f64>)> {
    let base = (None, config.angles, config.delta, config.gamma);
    let Some(sweep) = &config.sweep else {
        return vec![base];
    };
    sweep
        .values()
        .into_iter()
        .map(|v| {
            let (_, mut angles, mut delta, mut gamma) = base;
            match sweep.parameter {
                SweepParameter::Gamma => gamma = Some(v),
                SweepParameter::Beta => angles.beta = v,
                SweepParameter::Alpha => angles.alpha = v,
                SweepParameter::Delta => delta = v,
            }
            (Some(v), angles, delta, gamma)
        })
        .collect()
}

fn wants(config: &ScenarioConfig, f: OutputFormat) -> bool {
    config.formats.contains(&f)
}

fn frame_image(grid: &FieldGrid) -> (GrayImage, f64) {
    let n = grid.spec.samples_per_axis;
    let power = grid.power_map();
    let p_max = power.iter().copied().fold(0.0, f64::max);
    let pixels = grid_to_image(&quantize(&power, p_max), n);
    (GrayImage { width: n, height: n, pixels }, p_max)
}

fn file_name(index: usize, suffix: &str) -> String {
    format!("frame_{index:03}_{suffix}")
}

fn render_frame(
    config: &ScenarioConfig,
    index: usize,
    parameter: Option<f64>,
    setup: &FrameSetup,
    dir: &Path,
) -> Result<FrameReport> {
    let mut files = Vec::new();
    let mut metrics = BTreeMap::new();
    for (port, tag) in [(Port::C, "c"), (Port::D, "d")] {
        let grid = setup.grid(port, config.grid)?;
        let (image, p_max) = frame_image(&grid);
        metrics.insert(format!("power_port_{tag}"), grid.total_power());
        metrics.insert(format!("p_max_port_{tag}"), p_max);
        if wants(config, OutputFormat::Pgm) {
            let name = file_name(index, &format!("{tag}.pgm"));
            image.write_pgm(&dir.join(&name))?;
            files.push(name);
        }
        if wants(config, OutputFormat::Png) {
            let name = file_name(index, &format!("{tag}.png"));
            image.write_png(&dir.join(&name))?;
            files.push(name);
        }
        if port == Port::C {
            if let Some(stride) = config.ellipse_stride {
                let map = ellipse_map(&grid);
                let n = config.grid.samples_per_axis;
                let mut rows = Vec::new();
                for iy in (0..n).step_by(stride) {
                    for ix in (0..n).step_by(stride) {
                        let e = map.get(ix, iy);
                        rows.push(vec![
                            config.grid.coord(ix),
                            config.grid.coord(iy),
                            e.orientation,
                            e.ellipticity,
                            e.intensity,
                        ]);
                    }
                }
                let name = file_name(index, "ellipses.csv");
                write_csv(
                    &dir.join(&name),
                    &["x", "y", "orientation_rad", "ellipticity", "intensity"],
                    &rows,
                )?;
                files.push(name);
            }
        }
    }

    let (phis, profile) = setup.azimuthal_profile(Port::C)?;
    metrics.insert("modulation_depth".into(), modulation_depth(&profile));
    if let Some(fit) = fit_harmonic(&phis, &profile) {
        metrics.insert("fit_c0".into(), fit.c0);
        metrics.insert("fit_c1".into(), fit.c1);
        metrics.insert("fit_chi".into(), fit.chi);
        metrics.insert("fit_residual".into(), fit.residual);
    }
    if wants(config, OutputFormat::Csv) {
        let w0 = setup.waist.get();
        let mut rows: Vec<Vec<f64>> = phis.iter().zip(&profile).map(|(&p, &v)| vec![p, 1.0, v]).collect();
        // radial cut along Φ = 0 out to the grid edge
        let n_r = config.grid.samples_per_axis / 2;
        for k in 0..=n_r {
            let r = config.grid.half_extent * k as f64 / n_r as f64;
            rows.push(vec![0.0, r / w0, setup.power(Port::C, r, 0.0)?]);
        }
        let name = file_name(index, "profile.csv");
        write_csv(&dir.join(&name), &PROFILE_HEADER, &rows)?;
        files.push(name);
    }

    Ok(FrameReport {
        index,
        parameter,
        angles: setup.angles,
        delta: setup.delta,
        gamma: setup.gamma,
        files,
        metrics,
    })
}

fn write_report(config: &ScenarioConfig, report: &RunReport, dir: &Path) -> Result<()> {
    if wants(config, OutputFormat::Json) {
        let mut text = serde_json::to_string_pretty(report)?;
        text.push('\n');
        std::fs::write(dir.join("report.json"), text)?;
    }
    Ok(())
}

fn run_biphoton_scenario(config: &ScenarioConfig, dir: &Path) -> Result<RunReport> {
    let amps = product_amplitudes(&config.angles, 1.0)?;
    let deltas = match &config.sweep {
        Some(s) => s.values(),
        None => vec![config.delta],
    };
    let rows = run_biphoton_sweep(&amps, &deltas)?;
    if wants(config, OutputFormat::Csv) {
        let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.delta, r.coincidence, r.bunching]).collect();
        write_csv(&dir.join("biphoton.csv"), &["delta_rad", "coincidence", "bunching"], &table)?;
    }
    let frames = rows
        .iter()
        .enumerate()
        .map(|(index, r)| FrameReport {
            index,
            parameter: config.sweep.map(|_| r.delta),
            angles: config.angles,
            delta: r.delta,
            gamma: None,
            files: Vec::new(),
            metrics: BTreeMap::from([
                ("coincidence".to_string(), r.coincidence),
                ("bunching".to_string(), r.bunching),
            ]),
        })
        .collect();
    let mut metrics = BTreeMap::new();
    metrics.insert("frame_count".into(), rows.len() as f64);
    metrics.insert("min_coincidence".into(), rows.iter().map(|r| r.coincidence).fold(f64::INFINITY, f64::min));
    metrics.insert("max_coincidence".into(), rows.iter().map(|r| r.coincidence).fold(0.0, f64::max));
    metrics.insert(
        "max_probability_defect".into(),
        rows.iter().map(|r| (r.coincidence + r.bunching - 1.0).abs()).fold(0.0, f64::max),
    );
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        scenario: config.scenario,
        grid: config.grid,
        sweep: config.sweep,
        frames,
        metrics,
    })
}

/// Runs a scenario, writing its artifacts into `config.output_dir`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    config.validate()?;
    let dir: PathBuf = config.output_dir.clone();
    std::fs::create_dir_all(&dir)?;

    let report = if config.scenario == ScenarioKind::BiphotonSweep {
        run_biphoton_scenario(config, &dir)?
    } else {
        let mut frames = Vec::new();
        for (index, (parameter, angles, delta, gamma)) in frame_parameters(config).into_iter().enumerate() {
            let setup = FrameSetup::new(config.scenario, angles, delta, gamma, config.grid.waist)?;
            frames.push(render_frame(config, index, parameter, &setup, &dir)?);
        }
        let chis: Vec<f64> = frames
            .iter()
            .map(|f| f.metrics.get("fit_chi").copied().unwrap_or(0.0))
            .collect();
        for (frame, rot) in frames.iter_mut().zip(rotation_angles(&chis)) {
            frame.metrics.insert("rotation_rad".into(), rot);
        }
        let mut metrics = if frames.len() == 1 {
            frames[0].metrics.clone()
        } else {
            BTreeMap::new()
        };
        metrics.insert("frame_count".into(), frames.len() as f64);
        RunReport {
            schema_version: SCHEMA_VERSION,
            scenario: config.scenario,
            grid: config.grid,
            sweep: config.sweep,
            frames,
            metrics,
        }
    };
    write_report(config, &report, &dir)?;
    Ok(report)
}
