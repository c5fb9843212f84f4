//! Spin-orbit vector modes and two-photon interference in an asymmetric
//! Mach-Zehnder interferometer with a Dove prism in one arm.

pub mod biphoton;
pub mod error;
pub mod field;
pub mod interferometer;
pub mod modes;
pub mod polarization;
pub mod scenario;

pub use error::{Error, Result};
pub use field::{FieldGrid, GridSpec, JonesVector, Waist};
pub use interferometer::{propagate, transfer_matrix, Port, PortPair, TransferMatrix};
pub use modes::{product_amplitudes, BasisMode, PhaseSign, PoincareAngles, SpinOrbitAmplitudes};
pub use polarization::{PolarizationEllipse, PolarizerSetting};
