//! Linear polarizers, retarders and polarization-ellipse maps.
//!
//! The polarizer angle `Γ` is measured from vertical (`ŷ`), anticlockwise
//! as seen from the source looking along the beam. In the right-handed
//! `(x, y, z)` frame used throughout, `x̂` then points to that observer's
//! left, so the transmission axis is `sinΓ x̂ + cosΓ ŷ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::field::{gaussian_profile, FieldGrid, GridSpec, JonesVector, Waist};
use crate::modes::PhaseSign;

/// Transmission-axis angle of a linear polarizer, kept in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PolarizerSetting {
    gamma: f64,
}

impl PolarizerSetting {
    pub fn new(gamma: f64) -> Self {
        let mut g = gamma.rem_euclid(PI);
        if g >= PI {
            g = 0.0;
        }
        Self { gamma: g }
    }

    pub fn from_degrees(deg: f64) -> Self {
        Self::new(deg.to_radians())
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }

    pub fn matrix(self) -> [[f64; 2]; 2] {
        polarizer_matrix(self.gamma)
    }

    pub fn apply(self, v: &JonesVector) -> JonesVector {
        analyze(v, self.gamma)
    }
}

/// `[[sin²Γ, sinΓcosΓ], [sinΓcosΓ, cos²Γ]]` acting on `(ex, ey)ᵀ`.
pub fn polarizer_matrix(gamma: f64) -> [[f64; 2]; 2] {
    let (s, c) = gamma.sin_cos();
    [[s * s, s * c], [s * c, c * c]]
}

/// Polarizer at `Γ` applied to a single Jones vector.
pub fn analyze(v: &JonesVector, gamma: f64) -> JonesVector {
    let m = polarizer_matrix(gamma);
    JonesVector::new(
        v.ex * m[0][0] + v.ey * m[0][1],
        v.ex * m[1][0] + v.ey * m[1][1],
    )
}

/// Retarder adding phase `β` to the `x̂` component.
pub fn retard(v: &JonesVector, beta: f64) -> JonesVector {
    JonesVector::new(v.ex * Complex64::from_polar(1.0, beta), v.ey)
}

pub fn apply_polarizer(field: &FieldGrid, gamma: f64) -> FieldGrid {
    field.map(|v| analyze(v, gamma))
}

pub fn apply_retarder(field: &FieldGrid, beta: f64) -> FieldGrid {
    field.map(|v| retard(v, beta))
}

/// Power behind a polarizer at `Γ` at one output port of the balanced
/// scenario (`θ = π/2`, `φ = π`, `α = π/2`, single input, `δ = ±π/2`):
///
/// `(E² G²/8) (1 ∓ sin 2Γ sin(β ± 2Φ))`.
///
/// The factor `1/8` collects the `½` from the beam splitter, the `½` from
/// the unit-norm vector mode and the `½` lost in the polarizer on average.
pub fn polarized_power(gamma: f64, beta: f64, sign: PhaseSign, r: f64, phi_az: f64, w0: Waist, amplitude: f64) -> f64 {
    let s = sign.value();
    let g = gaussian_profile(r, w0);
    amplitude * amplitude * g * g / 8.0 * (1.0 - s * (2.0 * gamma).sin() * (beta + s * 2.0 * phi_az).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesParameters {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesParameters {
    /// `S1 = |ex|² − |ey|²`, `S2 + i S3 = 2 ex* ey`.
    pub fn from_jones(v: &JonesVector) -> Self {
        let cross = v.ex.conj() * v.ey * 2.0;
        Self {
            s0: v.ex.norm_sqr() + v.ey.norm_sqr(),
            s1: v.ex.norm_sqr() - v.ey.norm_sqr(),
            s2: cross.re,
            s3: cross.im,
        }
    }

    pub fn degree_of_polarization(&self) -> f64 {
        if self.s0 == 0.0 {
            return 0.0;
        }
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt() / self.s0
    }
}

/// Polarization ellipse of one pixel.
///
/// `orientation` is the major-axis angle in `[0, π)` measured from `x̂`
/// toward `ŷ` (vertical is `π/2`); `ellipticity` is the signed ratio of
/// minor to major axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarizationEllipse {
    pub orientation: f64,
    pub ellipticity: f64,
    pub intensity: f64,
}

pub fn ellipse(v: &JonesVector) -> PolarizationEllipse {
    let st = StokesParameters::from_jones(v);
    if st.s0 == 0.0 {
        return PolarizationEllipse::default();
    }
    let mut orientation = (0.5 * st.s2.atan2(st.s1)).rem_euclid(PI);
    if orientation >= PI {
        orientation = 0.0;
    }
    let chi = 0.5 * (st.s3 / st.s0).clamp(-1.0, 1.0).asin();
    PolarizationEllipse {
        orientation,
        ellipticity: chi.tan(),
        intensity: st.s0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipseMap {
    pub spec: GridSpec,
    pub values: Vec<PolarizationEllipse>,
}

impl EllipseMap {
    pub fn get(&self, ix: usize, iy: usize) -> PolarizationEllipse {
        self.values[iy * self.spec.samples_per_axis + ix]
    }
}

pub fn ellipse_map(field: &FieldGrid) -> EllipseMap {
    EllipseMap {
        spec: field.spec,
        values: field.values.iter().map(ellipse).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{superpose, JonesVector};
    use crate::interferometer::{propagate, single_input_output, Port, PortPair};
    use crate::modes::{product_amplitudes, PoincareAngles, SpinOrbitAmplitudes};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    const W: Waist = Waist::DEFAULT;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn balanced(beta: f64) -> PoincareAngles {
        PoincareAngles::new(FRAC_PI_2, PI, FRAC_PI_2, beta)
    }

    fn port_c(angles: &PoincareAngles, sign: PhaseSign) -> SpinOrbitAmplitudes {
        let amps = product_amplitudes(angles, 1.0).unwrap();
        propagate(&PortPair::new(amps, SpinOrbitAmplitudes::zero()), sign.delta()).first
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(polarizer_matrix(0.0), [[0.0, 0.0], [0.0, 1.0]]);
        let m = polarizer_matrix(FRAC_PI_4);
        for row in m {
            for x in row {
                assert!((x - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matrix_is_a_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let m = polarizer_matrix(rng.gen_range(-10.0..10.0));
            assert_eq!(m[0][1], m[1][0]);
            assert!((m[0][0] + m[1][1] - 1.0).abs() < 1e-15);
            for i in 0..2 {
                for j in 0..2 {
                    let sq = m[i][0] * m[0][j] + m[i][1] * m[1][j];
                    assert!((sq - m[i][j]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn setting_is_canonical() {
        assert!((PolarizerSetting::new(PI + 0.3).gamma() - 0.3).abs() < 1e-15);
        assert!((PolarizerSetting::new(-0.3).gamma() - (PI - 0.3)).abs() < 1e-15);
        assert_eq!(PolarizerSetting::new(PI).gamma(), 0.0);
        assert!((PolarizerSetting::from_degrees(135.0).gamma() - 3.0 * FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn malus_law() {
        let spec = GridSpec::new(2.0, 16, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let chi: f64 = rng.gen_range(-PI..PI);
            let gamma: f64 = rng.gen_range(-PI..PI);
            let phase = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
            let grid = FieldGrid::from_fn(spec, |x, y| {
                JonesVector::new(c(chi.sin(), 0.0), c(chi.cos(), 0.0)) * (phase * (1.0 + x * x + y))
            });
            let out = apply_polarizer(&grid, gamma);
            let expect = (gamma - chi).cos().powi(2);
            for (a, b) in out.values.iter().zip(&grid.values) {
                if b.power() > 0.0 {
                    assert!((a.power() / b.power() - expect).abs() < 1e-12);
                }
                assert!(a.power() <= b.power() * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn crossed_polarizer_blocks_vertical() {
        let spec = GridSpec::new(1.0, 16, 1.0).unwrap();
        let grid = FieldGrid::from_fn(spec, |x, y| JonesVector::new(c(0.0, 0.0), c(x, y)));
        let out = apply_polarizer(&grid, FRAC_PI_2);
        assert!(out.values.iter().all(|v| v.power() < 1e-30));
    }

    #[test]
    fn retarder_identities() {
        let spec = GridSpec::new(1.0, 16, 1.0).unwrap();
        let grid = FieldGrid::from_fn(spec, |x, y| JonesVector::new(c(x, y), c(y, -x)));
        assert_eq!(apply_retarder(&grid, 0.0), grid);
        let full = apply_retarder(&grid, 2.0 * PI);
        for (a, b) in full.values.iter().zip(&grid.values) {
            assert!(a.max_abs_diff(b) < 1e-15 * (1.0 + b.power().sqrt()));
        }
        let v = retard(&JonesVector::new(c(1.0, 0.0), c(1.0, 0.0)), FRAC_PI_2);
        assert!((v.ex - c(0.0, 1.0)).norm() < 1e-15);
    }

    // Oracle: expand |sinΓ ex + cosΓ ey|² with the fields taken straight from propagate.
    #[test]
    fn formula_matches_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = GridSpec::new(3.0, 33, 1.0).unwrap();
        for _ in 0..20 {
            let gamma = rng.gen_range(0.0..PI);
            let beta = rng.gen_range(0.0..2.0 * PI);
            for sign in [PhaseSign::Plus, PhaseSign::Minus] {
                // β carried by the input state
                let out = port_c(&balanced(beta), sign);
                let grid = FieldGrid::from_polar_fn(spec, |r, phi| superpose(&out, r, phi, W));
                let analyzed = apply_polarizer(&grid, gamma);
                // β applied by a retarder after the interferometer
                let out0 = port_c(&balanced(0.0), sign);
                let grid0 = FieldGrid::from_polar_fn(spec, |r, phi| superpose(&out0, r, phi, W));
                let retarded = apply_polarizer(&apply_retarder(&grid0, beta), gamma);
                for iy in 0..spec.samples_per_axis {
                    for ix in 0..spec.samples_per_axis {
                        let (r, phi) = crate::field::polar(spec.coord(ix), spec.coord(iy));
                        let p = polarized_power(gamma, beta, sign, r, phi, W, 1.0);
                        assert!((analyzed.get(ix, iy).power() - p).abs() < 1e-10);
                        assert!((retarded.get(ix, iy).power() - p).abs() < 1e-10);
                        let e = (analyzed.get(ix, iy).ex * gamma.sin() + analyzed.get(ix, iy).ey * gamma.cos()).norm_sqr();
                        assert!((e - p).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn unpolarized_donut_and_lobes() {
        let g = gaussian_profile(1.0, W);
        for k in 0..72 {
            let phi = k as f64 * PI / 36.0;
            for sign in [PhaseSign::Plus, PhaseSign::Minus] {
                for gamma in [0.0, FRAC_PI_2] {
                    let p = polarized_power(gamma, 0.7, sign, 1.0, phi, W, 1.0);
                    assert!((p - g * g / 8.0).abs() < 1e-15);
                }
            }
            // Γ = 45°, β = π: 2 sin²(π/4 + Φ); Γ = 135°: 2 cos²(π/4 + Φ)
            let p45 = polarized_power(FRAC_PI_4, PI, PhaseSign::Plus, 1.0, phi, W, 1.0);
            let p135 = polarized_power(3.0 * FRAC_PI_4, PI, PhaseSign::Plus, 1.0, phi, W, 1.0);
            assert!((p45 - g * g / 4.0 * (FRAC_PI_4 + phi).sin().powi(2)).abs() < 1e-15);
            assert!((p135 - g * g / 4.0 * (FRAC_PI_4 + phi).cos().powi(2)).abs() < 1e-15);
        }
    }

    #[test]
    fn beta_rotation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let beta = rng.gen_range(0.0..2.0 * PI);
            let phi = rng.gen_range(-PI..PI);
            let r = rng.gen_range(0.0..3.0);
            let a = polarized_power(FRAC_PI_4, beta, PhaseSign::Plus, r, phi, W, 1.0);
            let b = polarized_power(FRAC_PI_4, 0.0, PhaseSign::Plus, r, phi + beta / 2.0, W, 1.0);
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn ellipse_examples() {
        let e = ellipse(&JonesVector::new(c(0.0, 0.0), c(1.0, 0.0)));
        assert!((e.orientation - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(e.ellipticity, 0.0);
        assert_eq!(e.intensity, 1.0);
        let e = ellipse(&JonesVector::new(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)));
        assert!((e.ellipticity.abs() - 1.0).abs() < 1e-12);
        assert_eq!(ellipse(&JonesVector::zero()), PolarizationEllipse::default());
        let e = ellipse(&JonesVector::new(c(1.0, 0.0), c(1.0, 0.0)));
        assert!((e.orientation - FRAC_PI_4).abs() < 1e-15);
        let e = ellipse(&JonesVector::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!(e.orientation, 0.0);
    }

    // Balanced output: |ex| = |ey| everywhere, so the Stokes vector stays on
    // the S1 = 0 great circle and its azimuth there winds by ∓2Φ.
    #[test]
    fn balanced_stokes_winds_on_great_circle() {
        let beta = PI;
        let spec = GridSpec::new(3.0, 64, 1.0).unwrap();
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            let s = sign.value();
            let out = port_c(&balanced(beta), sign);
            let grid = FieldGrid::from_polar_fn(spec, |r, phi| superpose(&out, r, phi, W));
            let map = ellipse_map(&grid);
            for iy in 0..spec.samples_per_axis {
                for ix in 0..spec.samples_per_axis {
                    let v = grid.get(ix, iy);
                    let st = StokesParameters::from_jones(&v);
                    if st.s0 < 1e-12 {
                        continue;
                    }
                    let (_, phi) = crate::field::polar(spec.coord(ix), spec.coord(iy));
                    assert!(st.s1.abs() / st.s0 < 1e-12);
                    assert!((st.degree_of_polarization() - 1.0).abs() < 1e-12);
                    // S2 + i S3 ∝ −i s e^{−i(β + 2sΦ)}
                    let want = (c(0.0, -s) * Complex64::from_polar(1.0, -(beta + s * 2.0 * phi))).arg();
                    let got = st.s3.atan2(st.s2);
                    let d = crate::modes::wrap_angle(got - want);
                    assert!(d.abs() < 1e-10, "{sign:?} phi={phi} d={d}");
                    assert!((map.get(ix, iy).intensity - st.s0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn single_input_ports_agree_with_formula() {
        let angles = balanced(0.4);
        let pair = single_input_output(Port::A, &angles, 1.0, PhaseSign::Plus).unwrap();
        for k in 0..12 {
            let phi = k as f64 * 0.5;
            for out in [&pair.first, &pair.second] {
                let v = analyze(&superpose(out, 1.0, phi, W), 0.3);
                let p = polarized_power(0.3, 0.4, PhaseSign::Plus, 1.0, phi, W, 1.0);
                assert!((v.power() - p).abs() < 1e-14);
            }
        }
    }
}
