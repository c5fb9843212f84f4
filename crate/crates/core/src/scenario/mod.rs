//! Scenario orchestration behind the `amzi` command-line tool.

pub mod config;
pub mod fit;
pub mod output;
pub mod run;
pub mod selftest;

pub use config::{parse_angle, OutputFormat, Overrides, ScenarioConfig, ScenarioKind, SweepParameter, SweepSpec};
pub use run::{run_biphoton_sweep, run_scenario, BiphotonRow, FrameReport, FrameSetup, RunReport};
pub use selftest::{run_selftest, SelfTestCheck};
