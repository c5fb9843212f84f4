//! Spin-orbit product states on the orbital and polarization Poincaré spheres.
//!
//! A product input is a first-order Hermite-Gaussian superposition
//! `cos(θ/2) HG01 + sin(θ/2) e^{iφ} HG10` carried by the polarization
//! `cos(α/2) ŷ + sin(α/2) e^{iβ} x̂`. Expanding the product gives four
//! amplitudes over the vector basis modes `E_jk`, where `j` is the parity of
//! the spatial factor and `k` the parity of the polarization factor under
//! inversion of the x axis.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_parameter, Result};

/// Orbital `(theta, phi)` and spin `(alpha, beta)` Poincaré-sphere angles, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareAngles {
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PoincareAngles {
    pub fn new(theta: f64, phi: f64, alpha: f64, beta: f64) -> Self {
        Self {
            theta,
            phi,
            alpha,
            beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("theta", self.theta),
            ("phi", self.phi),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return Err(invalid_parameter(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Maps `theta`, `alpha` into `[0, π]` and `phi`, `beta` into `[-π, π)`.
    ///
    /// The result describes the same physical state: its amplitudes agree
    /// with the original ones up to a single unit-modulus factor.
    pub fn canonicalize(&self) -> Self {
        let (theta, phi) = canonical_polar(self.theta, self.phi);
        let (alpha, beta) = canonical_polar(self.alpha, self.beta);
        Self {
            theta,
            phi,
            alpha,
            beta,
        }
    }
}

// A polar angle t outside [0, π] is folded back; the fold flips the relative
// sign between the two superposed components, which is absorbed as +π on the
// azimuthal phase. The overall sign change is a global phase.
fn canonical_polar(polar: f64, azimuth: f64) -> (f64, f64) {
    let mut t = polar.rem_euclid(TAU);
    let mut a = azimuth;
    if t > PI {
        t = TAU - t;
        a += PI;
    }
    (t, wrap_angle(a))
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Parity of a basis mode's spatial (`j`) or polarization (`k`) factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn index(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// One of the four spin-orbit basis modes `E_jk`.
///
/// | mode | spatial | polarization |
/// |------|---------|--------------|
/// | `E00` | `G sinΦ` | `ŷ` |
/// | `E11` | `G cosΦ` | `x̂` |
/// | `E10` | `G cosΦ` | `ŷ` |
/// | `E01` | `G sinΦ` | `x̂` |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisMode {
    E00,
    E11,
    E10,
    E01,
}

impl BasisMode {
    pub const ALL: [BasisMode; 4] = [BasisMode::E00, BasisMode::E11, BasisMode::E10, BasisMode::E01];

    pub fn from_indices(j: u8, k: u8) -> Result<Self> {
        match (j, k) {
            (0, 0) => Ok(BasisMode::E00),
            (1, 1) => Ok(BasisMode::E11),
            (1, 0) => Ok(BasisMode::E10),
            (0, 1) => Ok(BasisMode::E01),
            _ => Err(invalid_parameter(format!("basis index ({j},{k}) out of range"))),
        }
    }

    /// Orbital parity index `j`.
    pub fn j(self) -> u8 {
        self.orbital().index()
    }

    /// Spin parity index `k`.
    pub fn k(self) -> u8 {
        self.spin().index()
    }

    pub fn orbital(self) -> Parity {
        match self {
            BasisMode::E00 | BasisMode::E01 => Parity::Even,
            BasisMode::E11 | BasisMode::E10 => Parity::Odd,
        }
    }

    pub fn spin(self) -> Parity {
        match self {
            BasisMode::E00 | BasisMode::E10 => Parity::Even,
            BasisMode::E11 | BasisMode::E01 => Parity::Odd,
        }
    }

    /// Reflection phase `(-1)^(j+k)`.
    pub fn parity_sign(self) -> i32 {
        parity_sign(self)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.j(), self.k())
    }
}

/// Reflection phase `(-1)^(j+k)` picked up by `E_jk` at every mirror.
pub fn parity_sign(mode: BasisMode) -> i32 {
    if (mode.j() + mode.k()) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Selects one of the two Hong-Ou-Mandel settings of the internal phase.
///
/// `Plus` is `δ = +π/2`, which produces the vector mode `Ψ₋`; `Minus` is
/// `δ = −π/2`, producing `Ψ₊`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    /// `+1.0` for `Plus`, `-1.0` for `Minus`.
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }

    pub fn delta(self) -> f64 {
        self.value() * PI / 2.0
    }

    pub fn flip(self) -> Self {
        match self {
            PhaseSign::Plus => PhaseSign::Minus,
            PhaseSign::Minus => PhaseSign::Plus,
        }
    }
}

/// Complex amplitudes over the four basis modes.
///
/// Amplitudes built by [`product_amplitudes`] carry the field scale `E`, so
/// `sqrt(Σ|e_jk|²)` equals that scale (see [`SpinOrbitAmplitudes::amplitude`]).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinOrbitAmplitudes {
    pub e00: Complex64,
    pub e11: Complex64,
    pub e10: Complex64,
    pub e01: Complex64,
}

impl SpinOrbitAmplitudes {
    pub fn new(e00: Complex64, e11: Complex64, e10: Complex64, e01: Complex64) -> Self {
        Self { e00, e11, e10, e01 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_fn(mut f: impl FnMut(BasisMode) -> Complex64) -> Self {
        let mut out = Self::zero();
        for mode in BasisMode::ALL {
            *out.get_mut(mode) = f(mode);
        }
        out
    }

    pub fn get(&self, mode: BasisMode) -> Complex64 {
        self.as_array()[mode.slot()]
    }

    pub fn get_mut(&mut self, mode: BasisMode) -> &mut Complex64 {
        match mode {
            BasisMode::E00 => &mut self.e00,
            BasisMode::E11 => &mut self.e11,
            BasisMode::E10 => &mut self.e10,
            BasisMode::E01 => &mut self.e01,
        }
    }

    /// Coefficients in `E00, E11, E10, E01` order.
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.e00, self.e11, self.e10, self.e01]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisMode, Complex64)> + '_ {
        BasisMode::ALL.into_iter().map(move |m| (m, self.get(m)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|c| c.norm_sqr()).fold(0.0, |a, b| a + b)
    }

    /// Overall field scale, `sqrt(Σ|e_jk|²)`.
    pub fn amplitude(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_fn(|m| self.get(m) * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|m| self.get(m) + other.get(m))
    }

    /// `e00·e11 − e10·e01`; zero exactly when the amplitudes factor into a
    /// spin state times an orbital state.
    pub fn separability_witness(&self) -> Complex64 {
        self.e00 * self.e11 - self.e10 * self.e01
    }

    /// Largest componentwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .map(|(m, c)| (c - other.get(m)).norm())
            .fold(0.0, f64::max)
    }

    /// True when `other = u · self` for a single unit-modulus `u`, to `tol`
    /// per component.
    pub fn equal_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        let overlap: Complex64 = self
            .iter()
            .map(|(m, c)| c.conj() * other.get(m))
            .sum();
        let mag = overlap.norm();
        if mag == 0.0 {
            return self.amplitude() <= tol && other.amplitude() <= tol;
        }
        let u = overlap / mag;
        self.scale(u).max_abs_diff(other) <= tol
    }
}

/// Amplitudes of the product state with the given angles and field scale.
pub fn product_amplitudes(angles: &PoincareAngles, amplitude: f64) -> Result<SpinOrbitAmplitudes> {
    angles.validate()?;
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(invalid_parameter(format!(
            "amplitude must be finite and non-negative, got {amplitude}"
        )));
    }
    let (s_t, c_t) = (angles.theta / 2.0).sin_cos();
    let (s_a, c_a) = (angles.alpha / 2.0).sin_cos();
    let orbital_phase = Complex64::from_polar(1.0, angles.phi);
    let spin_phase = Complex64::from_polar(1.0, angles.beta);
    Ok(SpinOrbitAmplitudes {
        e00: Complex64::from(amplitude * c_t * c_a),
        e11: orbital_phase * spin_phase * (amplitude * s_t * s_a),
        e10: orbital_phase * (amplitude * s_t * c_a),
        e01: spin_phase * (amplitude * c_t * s_a),
    })
}
