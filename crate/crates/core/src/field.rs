//! Transverse field distributions of the basis modes and the vector modes `Ψ∓`.
//!
//! Lengths are in the same units as the beam waist `w0` (1 by default).
//! The azimuth `Φ` is measured from `x̂` toward `ŷ`.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_parameter, Result};
use crate::interferometer::psi_coefficients;
use crate::modes::{product_amplitudes, BasisMode, Parity, PhaseSign, PoincareAngles, SpinOrbitAmplitudes};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Beam waist `w0 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Waist(f64);

impl Waist {
    pub const DEFAULT: Waist = Waist(1.0);

    pub fn new(w0: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 > 0.0) {
            return Err(invalid_parameter(format!("beam waist must be positive, got {w0}")));
        }
        Ok(Waist(w0))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Waist {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Radial profile `G(r) = sqrt(8/π) (r/w0²) exp(-(r/w0)²)`.
///
/// Normalized so that `∫∫ G² sin²Φ r dr dΦ = 1` over the full plane.
pub fn gaussian_profile(r: f64, w0: Waist) -> f64 {
    let w = w0.get();
    (8.0 / PI).sqrt() * (r / (w * w)) * (-(r / w).powi(2)).exp()
}

/// [`gaussian_profile`] with the waist given as a bare number.
pub fn gaussian_profile_checked(r: f64, w0: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid_parameter(format!("radius must be non-negative, got {r}")));
    }
    Ok(gaussian_profile(r, Waist::new(w0)?))
}

/// Complex `(ex, ey)` field components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    pub fn new(ex: Complex64, ey: Complex64) -> Self {
        Self { ex, ey }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_finite(&self) -> bool {
        self.ex.is_finite() && self.ey.is_finite()
    }

    pub fn power(&self) -> f64 {
        power_density(self)
    }

    pub fn max_abs_diff(&self, other: &JonesVector) -> f64 {
        (self.ex - other.ex).norm().max((self.ey - other.ey).norm())
    }
}

impl Add for JonesVector {
    type Output = JonesVector;

    fn add(self, rhs: JonesVector) -> JonesVector {
        JonesVector::new(self.ex + rhs.ex, self.ey + rhs.ey)
    }
}

impl Mul<Complex64> for JonesVector {
    type Output = JonesVector;

    fn mul(self, s: Complex64) -> JonesVector {
        JonesVector::new(self.ex * s, self.ey * s)
    }
}

impl Mul<f64> for JonesVector {
    type Output = JonesVector;

    fn mul(self, s: f64) -> JonesVector {
        JonesVector::new(self.ex * s, self.ey * s)
    }
}

/// Cycle-averaged power density `|ex|² + |ey|²`.
pub fn power_density(field: &JonesVector) -> f64 {
    field.ex.norm_sqr() + field.ey.norm_sqr()
}

/// Basis mode `E_jk(r, Φ)`: `G sinΦ` (j = 0) or `G cosΦ` (j = 1) on `ŷ` (k = 0) or `x̂` (k = 1).
pub fn basis_field(mode: BasisMode, r: f64, phi_az: f64, w0: Waist) -> JonesVector {
    let g = gaussian_profile(r, w0);
    let spatial = match mode.orbital() {
        Parity::Even => g * phi_az.sin(),
        Parity::Odd => g * phi_az.cos(),
    };
    match mode.spin() {
        Parity::Even => JonesVector::new(Complex64::from(0.0), spatial.into()),
        Parity::Odd => JonesVector::new(spatial.into(), Complex64::from(0.0)),
    }
}

/// `Σ_jk e_jk E_jk(r, Φ)` for arbitrary amplitudes.
pub fn superpose(amps: &SpinOrbitAmplitudes, r: f64, phi_az: f64, w0: Waist) -> JonesVector {
    let g = gaussian_profile(r, w0);
    let (s, c) = phi_az.sin_cos();
    JonesVector::new(
        (amps.e11 * c + amps.e01 * s) * g,
        (amps.e00 * s + amps.e10 * c) * g,
    )
}

/// `Ψ∓ = (e00 E00 + e11 E11) ∓ i (e10 E10 + e01 E01)` from the basis sum.
pub fn psi_from_basis(amps: &SpinOrbitAmplitudes, sign: PhaseSign, r: f64, phi_az: f64, w0: Waist) -> JonesVector {
    superpose(&psi_coefficients(amps, sign), r, phi_az, w0)
}

/// The symbols `A₊`, `A₋`, `B` as functions of `θ` and `Φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ABSymbols {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
}

impl ABSymbols {
    pub fn new(theta: f64, phi_az: f64) -> Self {
        let (s_t, c_t) = (theta / 2.0).sin_cos();
        let (s_p, c_p) = phi_az.sin_cos();
        let orbital_odd = s_t * s_t * c_p * c_p;
        let orbital_even = c_t * c_t * s_p * s_p;
        ABSymbols {
            a_plus: orbital_odd + orbital_even,
            a_minus: orbital_odd - orbital_even,
            b: 0.5 * theta.sin() * (2.0 * phi_az).sin(),
        }
    }

    /// `A₊ + s·B·sinφ`, the squared modulus of the orbital factor `ψ` with
    /// the matching sign (clamped at zero against rounding).
    pub fn radicand(&self, s: f64, phi: f64) -> f64 {
        (self.a_plus + s * self.b * phi.sin()).max(0.0)
    }
}

/// Orbital factor `ψ∓ / (E G) = cos(θ/2) sinΦ ∓ i sin(θ/2) cosΦ e^{iφ}`.
fn orbital_factor(angles: &PoincareAngles, s: f64, phi_az: f64) -> Complex64 {
    let (s_t, c_t) = (angles.theta / 2.0).sin_cos();
    let (s_p, c_p) = phi_az.sin_cos();
    Complex64::from(c_t * s_p) - I * s * s_t * c_p * Complex64::from_polar(1.0, angles.phi)
}

/// Below this value of `|ψ₊||ψ₋| / A₊` the relative-phase formula is
/// ill-conditioned and the `x̂` phase is read off `ψ±` directly.
const NODE_TOLERANCE: f64 = 1e-4;

/// `Ψ∓` in the closed form parameterized by the Poincaré angles.
///
/// The `ŷ` amplitude is `cos(α/2) sqrt(A₊ ± B sinφ)` and the `x̂` amplitude
/// `sin(α/2) sqrt(A₊ ∓ B sinφ)` with relative phase
/// `β ∓ atan2(B cosφ, A₋)` and prefactor `±i`, all times `E G(r)` and the
/// common phase `arg ψ∓ = atan2(M∓, R∓)` (taken as 0 where `ψ∓ = 0`).
///
/// Near the nodal lines of `ψ∓` both `A₋` and `B cosφ` vanish; there the
/// relative phase is computed as `arg ψ± − arg ψ∓ + π`.
pub fn psi_parameterized(
    angles: &PoincareAngles,
    sign: PhaseSign,
    r: f64,
    phi_az: f64,
    w0: Waist,
    amplitude: f64,
) -> JonesVector {
    let s = sign.value();
    let ab = ABSymbols::new(angles.theta, phi_az);
    let scale = amplitude * gaussian_profile(r, w0);
    let (s_a, c_a) = (angles.alpha / 2.0).sin_cos();

    let psi = orbital_factor(angles, s, phi_az);
    let common = psi.im.atan2(psi.re);
    let ey_mag = c_a * ab.radicand(s, angles.phi).sqrt();
    let ex_mag = s_a * ab.radicand(-s, angles.phi).sqrt();

    let b_cos = ab.b * angles.phi.cos();
    let relative = if ab.a_minus.hypot(b_cos) > NODE_TOLERANCE * ab.a_plus {
        -s * b_cos.atan2(ab.a_minus)
    } else {
        let other = orbital_factor(angles, -s, phi_az);
        other.im.atan2(other.re) - common + PI
    };

    let ey = Complex64::from(ey_mag);
    let ex = I * s * ex_mag * Complex64::from_polar(1.0, angles.beta + relative);
    JonesVector::new(ex, ey) * Complex64::from_polar(scale, common)
}

/// Power at either output port for a single input with `δ = ±π/2`:
/// `½ E² G² (A₊ ± B sinφ cosα)`.
pub fn single_input_power(
    angles: &PoincareAngles,
    sign: PhaseSign,
    r: f64,
    phi_az: f64,
    w0: Waist,
    amplitude: f64,
) -> f64 {
    let g = gaussian_profile(r, w0);
    let ab = ABSymbols::new(angles.theta, phi_az);
    0.5 * amplitude * amplitude * g * g * (ab.a_plus + sign.value() * ab.b * angles.phi.sin() * angles.alpha.cos())
}

/// Square sampling grid centred on the beam axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_extent: f64,
    pub samples_per_axis: usize,
    pub waist: Waist,
}

impl GridSpec {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(half_extent: f64, samples_per_axis: usize, waist: f64) -> Result<Self> {
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(invalid_parameter(format!("half extent must be positive, got {half_extent}")));
        }
        if samples_per_axis < Self::MIN_SAMPLES {
            return Err(invalid_parameter(format!(
                "need at least {} samples per axis, got {samples_per_axis}",
                Self::MIN_SAMPLES
            )));
        }
        Ok(Self {
            half_extent,
            samples_per_axis,
            waist: Waist::new(waist)?,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / (self.samples_per_axis - 1) as f64
    }

    /// Coordinate of sample `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    pub fn len(&self) -> usize {
        self.samples_per_axis * self.samples_per_axis
    }

    pub fn is_empty(&self) -> bool {
        self.samples_per_axis == 0
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            half_extent: 4.0,
            samples_per_axis: 256,
            waist: Waist::default(),
        }
    }
}

/// Polar coordinates `(r, Φ)` of a point.
pub fn polar(x: f64, y: f64) -> (f64, f64) {
    (x.hypot(y), y.atan2(x))
}

/// Field sampled on a [`GridSpec`]; `values[iy * n + ix]` sits at
/// `(coord(ix), coord(iy))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub values: Vec<JonesVector>,
}

impl FieldGrid {
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(f64, f64) -> JonesVector) -> Self {
        let n = spec.samples_per_axis;
        let mut values = Vec::with_capacity(spec.len());
        for iy in 0..n {
            let y = spec.coord(iy);
            for ix in 0..n {
                values.push(f(spec.coord(ix), y));
            }
        }
        FieldGrid { spec, values }
    }

    /// Samples `f(r, Φ)` at every grid point.
    pub fn from_polar_fn(spec: GridSpec, mut f: impl FnMut(f64, f64) -> JonesVector) -> Self {
        Self::from_fn(spec, |x, y| {
            let (r, phi) = polar(x, y);
            f(r, phi)
        })
    }

    pub fn get(&self, ix: usize, iy: usize) -> JonesVector {
        self.values[iy * self.spec.samples_per_axis + ix]
    }

    pub fn map(&self, f: impl Fn(&JonesVector) -> JonesVector) -> Self {
        FieldGrid {
            spec: self.spec,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn power_map(&self) -> Vec<f64> {
        self.values.iter().map(power_density).collect()
    }

    /// Midpoint-rule quadrature of the power density over the grid.
    pub fn total_power(&self) -> f64 {
        let h = self.spec.spacing();
        self.values.iter().map(power_density).fold(0.0, |a, b| a + b) * h * h
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(JonesVector::is_finite)
    }
}

/// Samples `Ψ∓` for a product input on a grid.
pub fn psi_grid(angles: &PoincareAngles, sign: PhaseSign, amplitude: f64, spec: GridSpec) -> Result<FieldGrid> {
    let amps = product_amplitudes(angles, amplitude)?;
    Ok(FieldGrid::from_polar_fn(spec, |r, phi| {
        psi_from_basis(&amps, sign, r, phi, spec.waist)
    }))
}
