//! Scenario configuration: named presets, a TOML key-value file and
//! command-line overrides.
//!
//! Every angle is a string with an explicit unit: `90deg`, `1.5708rad`,
//! `0.5pi`, `pi/2`, `-3pi/4`. Bare numbers are rejected so that degrees and
//! radians cannot be confused.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::modes::PoincareAngles;

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Parses an angle with a mandatory unit into radians.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || config_error(format!("cannot parse angle {text:?}; use e.g. 90deg, 1.2rad, 0.5pi or pi/2"));
    let value = if let Some(num) = t.strip_suffix("deg") {
        num.trim().parse::<f64>().map_err(|_| bad())?.to_radians()
    } else if let Some(num) = t.strip_suffix("rad") {
        num.trim().parse::<f64>().map_err(|_| bad())?
    } else if let Some((coef, rest)) = t.split_once("pi") {
        let coef = match coef.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        let denom = match rest.trim() {
            "" => 1.0,
            r => r.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
        };
        if denom == 0.0 {
            return Err(bad());
        }
        coef * PI / denom
    } else {
        return Err(bad());
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// Single input, `θ = π/2`, `φ = π`, `α = π/2`: the balanced vector mode.
    BalancedVector,
    /// Single input, `θ = π/2`, `φ = −π/2`: a Laguerre-Gaussian spatial mode.
    LgInput,
    /// The same product mode injected at both input ports.
    DualInput,
    Custom,
    /// Two-photon coincidence and bunching probabilities against `δ`.
    BiphotonSweep,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::BalancedVector,
        ScenarioKind::LgInput,
        ScenarioKind::DualInput,
        ScenarioKind::Custom,
        ScenarioKind::BiphotonSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BalancedVector => "balanced-vector",
            ScenarioKind::LgInput => "lg-input",
            ScenarioKind::DualInput => "dual-input",
            ScenarioKind::Custom => "custom",
            ScenarioKind::BiphotonSweep => "biphoton-sweep",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                config_error(format!("unknown scenario {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Gamma,
    Beta,
    Alpha,
    Delta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Gamma => "gamma",
            SweepParameter::Beta => "beta",
            SweepParameter::Alpha => "alpha",
            SweepParameter::Delta => "delta",
        }
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gamma" => Ok(SweepParameter::Gamma),
            "beta" => Ok(SweepParameter::Beta),
            "alpha" => Ok(SweepParameter::Alpha),
            "delta" => Ok(SweepParameter::Delta),
            other => Err(config_error(format!(
                "unknown sweep parameter {other:?}; expected gamma, beta, alpha or delta"
            ))),
        }
    }
}

/// Linear sweep of one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(config_error(format!("a sweep needs at least 2 steps, got {steps}")));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(config_error("sweep endpoints must be finite"));
        }
        Ok(Self { parameter, start, stop, steps })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// `param:start:stop:steps`, e.g. `beta:0deg:360deg:16`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [param, start, stop, steps] = parts.as_slice() else {
            return Err(config_error(format!("sweep {s:?} is not of the form param:start:stop:steps")));
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| config_error(format!("sweep step count {steps:?} is not an integer")))?;
        SweepSpec::new(param.parse()?, parse_angle(start)?, parse_angle(stop)?, steps)
    }
}

/// Output artifact kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Pgm,
    Png,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pgm" => Ok(OutputFormat::Pgm),
            "png" => Ok(OutputFormat::Png),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(config_error(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub angles: PoincareAngles,
    pub delta: f64,
    /// Analyzing polarizer in front of the camera, if any.
    pub gamma: Option<f64>,
    pub grid: GridSpec,
    pub sweep: Option<SweepSpec>,
    pub output_dir: PathBuf,
    pub formats: Vec<OutputFormat>,
    /// Write ellipse data for every `n`-th pixel along each axis.
    pub ellipse_stride: Option<usize>,
}

impl ScenarioConfig {
    pub const DEFAULT_FORMATS: [OutputFormat; 3] = [OutputFormat::Pgm, OutputFormat::Csv, OutputFormat::Json];

    pub fn preset(scenario: ScenarioKind) -> Self {
        let (angles, sweep) = match scenario {
            ScenarioKind::BalancedVector | ScenarioKind::DualInput => {
                (PoincareAngles::new(FRAC_PI_2, PI, FRAC_PI_2, 0.0), None)
            }
            ScenarioKind::LgInput => (PoincareAngles::new(FRAC_PI_2, -FRAC_PI_2, 0.0, 0.0), None),
            ScenarioKind::Custom => (PoincareAngles::new(0.0, 0.0, 0.0, 0.0), None),
            ScenarioKind::BiphotonSweep => (
                PoincareAngles::new(0.0, 0.0, 0.0, 0.0),
                Some(SweepSpec {
                    parameter: SweepParameter::Delta,
                    start: 0.0,
                    stop: PI,
                    steps: 65,
                }),
            ),
        };
        ScenarioConfig {
            scenario,
            angles,
            delta: FRAC_PI_2,
            gamma: None,
            grid: GridSpec::default(),
            sweep,
            output_dir: PathBuf::from("out"),
            formats: Self::DEFAULT_FORMATS.to_vec(),
            ellipse_stride: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.angles.validate()?;
        if !self.delta.is_finite() {
            return Err(config_error("delta must be finite"));
        }
        if let Some(g) = self.gamma {
            if !g.is_finite() {
                return Err(config_error("gamma must be finite"));
            }
        }
        if let Some(sw) = &self.sweep {
            if sw.steps < 2 {
                return Err(config_error(format!("a sweep needs at least 2 steps, got {}", sw.steps)));
            }
            if self.scenario == ScenarioKind::BiphotonSweep && sw.parameter != SweepParameter::Delta {
                return Err(config_error("the biphoton sweep only varies delta"));
            }
        }
        if self.ellipse_stride == Some(0) {
            return Err(config_error("ellipse stride must be at least 1"));
        }
        if self.formats.is_empty() {
            return Err(config_error("no output format selected"));
        }
        Ok(())
    }

    /// Reads a TOML file on top of its scenario preset.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with(text, None)
    }

    /// Like [`ScenarioConfig::from_toml`], with `scenario` taking precedence
    /// over the file's own `scenario` key.
    pub fn from_toml_with(text: &str, scenario: Option<ScenarioKind>) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        let scenario = match (scenario, &file.scenario) {
            (Some(kind), _) => kind,
            (None, Some(name)) => name.parse()?,
            (None, None) => ScenarioKind::Custom,
        };
        let mut config = Self::preset(scenario);
        file.overrides.apply(&mut config)?;
        Ok(config)
    }
}

/// Optional settings layered over a preset, as they appear in a config file
/// or on the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub theta: Option<String>,
    pub phi: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub delta: Option<String>,
    pub gamma: Option<String>,
    pub grid_size: Option<usize>,
    pub half_extent: Option<f64>,
    pub waist: Option<f64>,
    pub sweep: Option<String>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub ellipse_stride: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        let angle = |s: &Option<String>| s.as_deref().map(parse_angle).transpose();
        if let Some(v) = angle(&self.theta)? {
            config.angles.theta = v;
        }
        if let Some(v) = angle(&self.phi)? {
            config.angles.phi = v;
        }
        if let Some(v) = angle(&self.alpha)? {
            config.angles.alpha = v;
        }
        if let Some(v) = angle(&self.beta)? {
            config.angles.beta = v;
        }
        if let Some(v) = angle(&self.delta)? {
            config.delta = v;
        }
        if let Some(g) = &self.gamma {
            config.gamma = match g.trim() {
                "none" => None,
                text => Some(parse_angle(text)?),
            };
        }
        if self.grid_size.is_some() || self.half_extent.is_some() || self.waist.is_some() {
            config.grid = GridSpec::new(
                self.half_extent.unwrap_or(config.grid.half_extent),
                self.grid_size.unwrap_or(config.grid.samples_per_axis),
                self.waist.unwrap_or(config.grid.waist.get()),
            )?;
        }
        if let Some(s) = &self.sweep {
            config.sweep = Some(s.parse()?);
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(formats) = &self.formats {
            let mut parsed = formats
                .iter()
                .flat_map(|f| f.split(','))
                .map(str::parse)
                .collect::<Result<Vec<OutputFormat>>>()?;
            parsed.sort();
            parsed.dedup();
            config.formats = parsed;
        }
        if let Some(n) = self.ellipse_stride {
            config.ellipse_stride = Some(n);
        }
        config.validate()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    scenario: Option<String>,
    #[serde(flatten)]
    overrides: Overrides,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angles_need_units() {
        assert!((parse_angle("90deg").unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((parse_angle(" 45 deg ").unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(parse_angle("1.25rad").unwrap(), 1.25);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -FRAC_PI_2);
        assert_eq!(parse_angle("0.5pi").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        for bad in ["1.0", "", "deg", "pi/0", "pi/x", "90 degrees", "nanrad", "pi2"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sweep_parsing() {
        let s: SweepSpec = "beta:0deg:360deg:16".parse().unwrap();
        assert_eq!(s.parameter, SweepParameter::Beta);
        let v = s.values();
        assert_eq!(v.len(), 16);
        assert_eq!(v[0], 0.0);
        assert!((v[15] - 2.0 * PI).abs() < 1e-15);
        assert!("beta:0deg:1deg:1".parse::<SweepSpec>().is_err());
        assert!("theta:0deg:1deg:4".parse::<SweepSpec>().is_err());
        assert!("beta:0deg:1deg".parse::<SweepSpec>().is_err());
        assert!("beta:0:1deg:3".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn presets() {
        let b = ScenarioConfig::preset(ScenarioKind::BalancedVector);
        assert_eq!((b.angles.theta, b.angles.phi, b.angles.alpha), (FRAC_PI_2, PI, FRAC_PI_2));
        let lg = ScenarioConfig::preset(ScenarioKind::LgInput);
        assert_eq!((lg.angles.theta, lg.angles.phi), (FRAC_PI_2, -FRAC_PI_2));
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
            ScenarioConfig::preset(k).validate().unwrap();
        }
        assert!("balanced".parse::<ScenarioKind>().is_err());
    }

    #[test]
    fn toml_file_overrides_preset() {
        let c = ScenarioConfig::from_toml(
            r#"
            scenario = "balanced-vector"
            gamma = "45deg"
            beta = "pi"
            grid_size = 64
            sweep = "beta:0deg:360deg:4"
            formats = ["pgm", "json"]
            "#,
        )
        .unwrap();
        assert_eq!(c.scenario, ScenarioKind::BalancedVector);
        assert_eq!(c.gamma, Some(FRAC_PI_4));
        assert_eq!(c.angles.beta, PI);
        assert_eq!(c.angles.alpha, FRAC_PI_2);
        assert_eq!(c.grid.samples_per_axis, 64);
        assert_eq!(c.formats, vec![OutputFormat::Pgm, OutputFormat::Json]);
        assert!(ScenarioConfig::from_toml("scenario = \"nope\"").is_err());
        assert!(ScenarioConfig::from_toml("colour = \"red\"").is_err());
        assert!(ScenarioConfig::from_toml("beta = 3.0").is_err());
        assert!(ScenarioConfig::from_toml("grid_size = 4").is_err());
    }

    #[test]
    fn biphoton_sweep_only_over_delta() {
        let mut c = ScenarioConfig::preset(ScenarioKind::BiphotonSweep);
        let o = Overrides {
            sweep: Some("gamma:0deg:90deg:3".into()),
            ..Default::default()
        };
        assert!(o.apply(&mut c).is_err());
    }
}
