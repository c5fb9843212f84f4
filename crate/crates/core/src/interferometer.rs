//! Four-port asymmetric Mach-Zehnder interferometer.
//!
//! The extra mirror in one arm makes every reflection multiply a basis mode
//! by its parity `(-1)^(j+k)`, so the two parity classes see different 2×2
//! transfer matrices. Each class maps the input amplitude pair `(a, b)` to
//! the output pair `(c, d)` independently.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_parameter, Result};
use crate::modes::{product_amplitudes, BasisMode, PhaseSign, PoincareAngles, SpinOrbitAmplitudes};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Global phase dropped by the printed dual- and single-input closed forms:
/// `propagate(..)` equals `OMITTED_GLOBAL_PHASE` times those forms on both ports.
pub const OMITTED_GLOBAL_PHASE: Complex64 = I;

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Mat2([
            [m[0][0].into(), m[0][1].into()],
            [m[1][0].into(), m[1][1].into()],
        ])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Mat2([[a, zero], [zero, b]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParityClass {
    /// `j + k` even
    Even,
    /// `j + k` odd
    Odd,
}

impl ParityClass {
    pub fn of(mode: BasisMode) -> Self {
        if mode.parity_sign() == 1 {
            ParityClass::Even
        } else {
            ParityClass::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: Mat2,
    pub parity_class: ParityClass,
}

impl TransferMatrix {
    /// Matrix for one parity class at internal phase `delta`.
    pub fn for_class(parity_class: ParityClass, delta: f64) -> Self {
        let (s, c) = (delta / 2.0).sin_cos();
        let m = match parity_class {
            ParityClass::Even => Mat2::from_real([[s, c], [c, -s]]).scale(I),
            ParityClass::Odd => Mat2::from_real([[c, s], [s, -c]]),
        };
        TransferMatrix { m, parity_class }
    }

    pub fn apply(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let [c, d] = self.m.apply([a, b]);
        (c, d)
    }
}

/// Transfer matrix `U_jk(δ)` acting on `(e_jk^a, e_jk^b)`.
pub fn transfer_matrix(mode: BasisMode, delta: f64) -> TransferMatrix {
    TransferMatrix::for_class(ParityClass::of(mode), delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Port {
    A,
    B,
    C,
    D,
}

impl Port {
    pub fn is_input(self) -> bool {
        matches!(self, Port::A | Port::B)
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Port::A => "a",
            Port::B => "b",
            Port::C => "c",
            Port::D => "d",
        };
        f.write_str(s)
    }
}

/// Amplitudes at two ports: `(a, b)` on the input side or `(c, d)` on the output side.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PortPair {
    pub first: SpinOrbitAmplitudes,
    pub second: SpinOrbitAmplitudes,
}

impl PortPair {
    pub fn new(first: SpinOrbitAmplitudes, second: SpinOrbitAmplitudes) -> Self {
        Self { first, second }
    }

    pub fn total_power(&self) -> f64 {
        self.first.norm_sqr() + self.second.norm_sqr()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.first.scale(s), self.second.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.first.add(&other.first), self.second.add(&other.second))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.first
            .max_abs_diff(&other.first)
            .max(self.second.max_abs_diff(&other.second))
    }
}

/// Sends input amplitudes through the interferometer at internal phase `delta`.
pub fn propagate(inputs: &PortPair, delta: f64) -> PortPair {
    let mut out = PortPair::default();
    for mode in BasisMode::ALL {
        let (c, d) = transfer_matrix(mode, delta).apply(inputs.first.get(mode), inputs.second.get(mode));
        *out.first.get_mut(mode) = c;
        *out.second.get_mut(mode) = d;
    }
    out
}

/// Coefficients of the vector mode `Ψ∓`: `(e00, e11, ∓i e10, ∓i e01)`.
///
/// `PhaseSign::Plus` selects `Ψ₋`, the mode produced at `δ = +π/2`.
pub fn psi_coefficients(amps: &SpinOrbitAmplitudes, sign: PhaseSign) -> SpinOrbitAmplitudes {
    let odd = I * -sign.value();
    SpinOrbitAmplitudes::new(amps.e00, amps.e11, amps.e10 * odd, amps.e01 * odd)
}

/// Outputs for identical coherent inputs of scale `amplitude` at both ports:
/// port c carries `E(cos δ/2 + sin δ/2) Ψ₋`, port d `E(cos δ/2 − sin δ/2) Ψ₊`.
pub fn classical_dual_output(angles: &PoincareAngles, amplitude: f64, delta: f64) -> Result<PortPair> {
    let amps = product_amplitudes(angles, amplitude)?;
    let (s, c) = (delta / 2.0).sin_cos();
    Ok(PortPair::new(
        psi_coefficients(&amps, PhaseSign::Plus).scale((c + s).into()),
        psi_coefficients(&amps, PhaseSign::Minus).scale((c - s).into()),
    ))
}

/// Outputs for a single input at `port` (a or b) with `δ = ±π/2`.
///
/// Both outputs carry `Ψ∓ / √2`; port a gives `(±, +)` and port b `(+, ∓)`
/// on `(c, d)`.
pub fn single_input_output(
    port: Port,
    angles: &PoincareAngles,
    amplitude: f64,
    sign: PhaseSign,
) -> Result<PortPair> {
    let amps = product_amplitudes(angles, amplitude)?;
    let psi = psi_coefficients(&amps, sign).scale(FRAC_1_SQRT_2.into());
    let s = Complex64::from(sign.value());
    match port {
        Port::A => Ok(PortPair::new(psi.scale(s), psi)),
        Port::B => Ok(PortPair::new(psi, psi.scale(-s))),
        other => Err(invalid_parameter(format!("{other} is not an input port"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Beam splitter, mirror parities, phase shifter, beam splitter, multiplied out.
    fn four_element_product(pi: f64, delta: f64) -> Mat2 {
        let bs = Mat2([[c(1.0, 0.0), c(0.0, pi)], [c(0.0, pi), c(1.0, 0.0)]]).scale(FRAC_1_SQRT_2.into());
        let mirrors = Mat2::diag((pi * pi).into(), (pi * pi * pi).into());
        let shifter = Mat2::diag(Complex64::from_polar(1.0, delta / 2.0), Complex64::from_polar(1.0, -delta / 2.0));
        bs * mirrors * shifter * bs
    }

    #[test]
    fn closed_form_matches_element_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let delta = rng.gen_range(-10.0..10.0);
            for mode in BasisMode::ALL {
                let oracle = four_element_product(mode.parity_sign() as f64, delta);
                let u = transfer_matrix(mode, delta).m;
                assert!(u.max_abs_diff(&oracle) < 1e-14, "{mode} {delta}");
            }
        }
    }

    #[test]
    fn even_quarter_wave_is_balanced_splitter() {
        let u = transfer_matrix(BasisMode::E00, PI / 2.0).m;
        let want = Mat2::from_real([[1.0, 1.0], [1.0, -1.0]]).scale(c(0.0, FRAC_1_SQRT_2));
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn even_zero_phase_swaps_ports() {
        let u = transfer_matrix(BasisMode::E11, 0.0).m;
        assert_eq!(u, Mat2([[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]));
    }

    #[test]
    fn odd_half_wave_swaps_ports() {
        let u = transfer_matrix(BasisMode::E10, PI).m;
        let want = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
        assert!(u.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn unitary_and_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let delta = rng.gen_range(-2.0 * PI..2.0 * PI);
            for class in [ParityClass::Even, ParityClass::Odd] {
                let u = TransferMatrix::for_class(class, delta).m;
                assert!((u.adjoint() * u).max_abs_diff(&Mat2::identity()) < 1e-12);
                let sq = u * u;
                let want = match class {
                    ParityClass::Even => Mat2::identity().scale((-1.0).into()),
                    ParityClass::Odd => Mat2::identity(),
                };
                assert!(sq.max_abs_diff(&want) < 1e-12);
            }
        }
    }

    #[test]
    fn zero_inputs_stay_zero() {
        let out = propagate(&PortPair::default(), 0.37);
        assert_eq!(out.total_power(), 0.0);
    }

    #[test]
    fn single_e00_at_quarter_wave() {
        let mut a = SpinOrbitAmplitudes::zero();
        a.e00 = c(1.0, 0.0);
        let out = propagate(&PortPair::new(a, SpinOrbitAmplitudes::zero()), PI / 2.0);
        assert!((out.first.e00 - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.second.e00 - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    fn random_amps(rng: &mut impl Rng) -> SpinOrbitAmplitudes {
        SpinOrbitAmplitudes::from_fn(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn propagate_matches_direct_matrix_vector_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let input = PortPair::new(random_amps(&mut rng), random_amps(&mut rng));
            let delta = rng.gen_range(-7.0..7.0);
            let out = propagate(&input, delta);
            assert!((out.total_power() - input.total_power()).abs() < 1e-12);
            for mode in BasisMode::ALL {
                let u = four_element_product(mode.parity_sign() as f64, delta);
                let [c_, d_] = u.apply([input.first.get(mode), input.second.get(mode)]);
                assert!((c_ - out.first.get(mode)).norm() < 1e-13);
                assert!((d_ - out.second.get(mode)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn dual_input_closed_form_matches_propagation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let angles = PoincareAngles::new(
                rng.gen_range(0.0..PI),
                rng.gen_range(-PI..PI),
                rng.gen_range(0.0..PI),
                rng.gen_range(-PI..PI),
            );
            let e = rng.gen_range(0.1..3.0);
            let delta = rng.gen_range(-PI..PI);
            let amps = product_amplitudes(&angles, e).unwrap();
            let via_matrix = propagate(&PortPair::new(amps, amps), delta);
            let closed = classical_dual_output(&angles, e, delta).unwrap();
            assert!(via_matrix.max_abs_diff(&closed.scale(OMITTED_GLOBAL_PHASE)) < 1e-13);
        }
    }

    #[test]
    fn dual_input_extremes() {
        let angles = PoincareAngles::new(1.0, 0.3, 2.0, -1.2);
        let e = 1.5;
        let plus = classical_dual_output(&angles, e, PI / 2.0).unwrap();
        assert!((plus.first.norm_sqr() - 2.0 * e * e).abs() < 1e-12);
        assert!(plus.second.norm_sqr() < 1e-20 * e * e);
        let minus = classical_dual_output(&angles, e, -PI / 2.0).unwrap();
        assert!(minus.first.norm_sqr() < 1e-20 * e * e);
        assert!((minus.second.norm_sqr() - 2.0 * e * e).abs() < 1e-12);
        let zero = classical_dual_output(&angles, e, 0.0).unwrap();
        assert!((zero.first.norm_sqr() - e * e).abs() < 1e-12);
        assert!((zero.second.norm_sqr() - e * e).abs() < 1e-12);
    }

    #[test]
    fn single_input_signs() {
        let angles = PoincareAngles::new(0.9, 2.1, 1.3, 0.4);
        let amps = product_amplitudes(&angles, 1.0).unwrap();
        let psi_minus = psi_coefficients(&amps, PhaseSign::Plus).scale(FRAC_1_SQRT_2.into());

        let a = single_input_output(Port::A, &angles, 1.0, PhaseSign::Plus).unwrap();
        assert!(a.first.max_abs_diff(&psi_minus) < 1e-15);
        assert!(a.second.max_abs_diff(&psi_minus) < 1e-15);

        let b = single_input_output(Port::B, &angles, 1.0, PhaseSign::Plus).unwrap();
        assert!(b.first.max_abs_diff(&psi_minus) < 1e-15);
        assert!(b.second.max_abs_diff(&psi_minus.scale((-1.0).into())) < 1e-15);

        assert!(single_input_output(Port::C, &angles, 1.0, PhaseSign::Plus).is_err());
    }

    #[test]
    fn single_inputs_match_propagation_and_superpose_to_dual() {
        let angles = PoincareAngles::new(2.2, -0.8, 0.6, 1.9);
        let e = 0.7;
        let amps = product_amplitudes(&angles, e).unwrap();
        let zero = SpinOrbitAmplitudes::zero();
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            let a = single_input_output(Port::A, &angles, e, sign).unwrap();
            let b = single_input_output(Port::B, &angles, e, sign).unwrap();
            let via_a = propagate(&PortPair::new(amps, zero), sign.delta());
            let via_b = propagate(&PortPair::new(zero, amps), sign.delta());
            assert!(via_a.max_abs_diff(&a.scale(OMITTED_GLOBAL_PHASE)) < 1e-14);
            assert!(via_b.max_abs_diff(&b.scale(OMITTED_GLOBAL_PHASE)) < 1e-14);
            assert!((a.first.norm_sqr() - e * e / 2.0).abs() < 1e-14);
            assert!((a.second.norm_sqr() - e * e / 2.0).abs() < 1e-14);
            let dual = classical_dual_output(&angles, e, sign.delta()).unwrap();
            assert!(a.add(&b).max_abs_diff(&dual) < 1e-14);
        }
    }

    #[test]
    fn outputs_are_nonseparable() {
        let angles = PoincareAngles::new(PI / 2.0, PI, PI / 2.0, 0.3);
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            let out = single_input_output(Port::A, &angles, 1.0, sign).unwrap();
            assert!(out.first.separability_witness().norm() > 0.1);
            assert!(out.second.separability_witness().norm() > 0.1);
        }
    }
}
