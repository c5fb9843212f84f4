//! Fast invariant suite behind `amzi selftest`.
//!
//! Every check draws from a fixed-seed generator so that repeated runs
//! report identical numbers.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::biphoton::{coincidence_probability, output_state};
use crate::error::Result;
use crate::field::{psi_from_basis, psi_grid, psi_parameterized, GridSpec, Waist};
use crate::interferometer::{classical_dual_output, propagate, Mat2, ParityClass, PortPair, TransferMatrix};
use crate::modes::{product_amplitudes, PhaseSign, PoincareAngles, SpinOrbitAmplitudes};
use crate::polarization::polarized_power;

use super::config::ScenarioKind;
use super::fit::{azimuths, modulation_depth};
use super::run::FrameSetup;

pub const SEED: u64 = 0x5eed_a3b1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfTestCheck {
    pub name: String,
    /// Worst deviation observed.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SelfTestCheck {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_owned(),
            value,
            tolerance,
            passed: value.is_finite() && value < tolerance,
        }
    }
}

fn random_angles(rng: &mut ChaCha8Rng) -> PoincareAngles {
    PoincareAngles::new(
        rng.gen_range(0.0..PI),
        rng.gen_range(-PI..PI),
        rng.gen_range(0.0..PI),
        rng.gen_range(-PI..PI),
    )
}

fn unitarity(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let delta = rng.gen_range(-2.0 * PI..2.0 * PI);
        for class in [ParityClass::Even, ParityClass::Odd] {
            let u = TransferMatrix::for_class(class, delta).m;
            worst = worst.max((u.adjoint() * u).max_abs_diff(&Mat2::identity()));
        }
    }
    worst
}

fn conservation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = product_amplitudes(&random_angles(rng), rng.gen_range(0.1..2.0))?;
        let b = product_amplitudes(&random_angles(rng), rng.gen_range(0.1..2.0))?;
        let inputs = PortPair::new(a, b);
        let out = propagate(&inputs, rng.gen_range(-PI..PI));
        worst = worst.max((out.total_power() - inputs.total_power()).abs());
    }
    Ok(worst)
}

fn hom(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let amps = product_amplitudes(&random_angles(rng), 1.0)?;
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            worst = worst.max(coincidence_probability(&output_state(&amps, sign.delta())?)?);
        }
    }
    Ok(worst)
}

fn coincidence_law() -> Result<f64> {
    let amps = SpinOrbitAmplitudes::new(1.0.into(), 0.0.into(), 0.0.into(), 0.0.into());
    let mut worst = 0.0f64;
    for k in 0..16 {
        let delta = k as f64 * PI / 8.0;
        let p = coincidence_probability(&output_state(&amps, delta)?)?;
        worst = worst.max((p - delta.cos().powi(2)).abs());
    }
    Ok(worst)
}

fn dual_derivation(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let angles = random_angles(rng);
        let amps = product_amplitudes(&angles, 1.0)?;
        for _ in 0..20 {
            let (r, phi) = (rng.gen_range(0.0..3.0), rng.gen_range(-PI..PI));
            for sign in [PhaseSign::Plus, PhaseSign::Minus] {
                let a = psi_from_basis(&amps, sign, r, phi, Waist::DEFAULT);
                let b = psi_parameterized(&angles, sign, r, phi, Waist::DEFAULT, 1.0);
                worst = worst.max(a.max_abs_diff(&b));
            }
        }
    }
    Ok(worst)
}

fn dark_port() -> Result<f64> {
    let angles = PoincareAngles::new(FRAC_PI_2, PI, FRAC_PI_2, 0.3);
    let out = classical_dual_output(&angles, 1.0, FRAC_PI_2)?;
    Ok(out.second.norm_sqr() + (out.first.norm_sqr() - 2.0).abs())
}

fn donut() -> Result<f64> {
    let setup = FrameSetup::new(
        ScenarioKind::BalancedVector,
        PoincareAngles::new(FRAC_PI_2, PI, FRAC_PI_2, 0.0),
        FRAC_PI_2,
        None,
        Waist::DEFAULT,
    )?;
    let (_, profile) = setup.azimuthal_profile(crate::interferometer::Port::C)?;
    Ok(modulation_depth(&profile))
}

fn rotation_equivariance(rng: &mut ChaCha8Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let beta = rng.gen_range(0.0..2.0 * PI);
        for phi in azimuths(16) {
            let a = polarized_power(FRAC_PI_4, beta, PhaseSign::Plus, 1.0, phi, Waist::DEFAULT, 1.0);
            let b = polarized_power(FRAC_PI_4, 0.0, PhaseSign::Plus, 1.0, phi + beta / 2.0, Waist::DEFAULT, 1.0);
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

fn normalization(rng: &mut ChaCha8Rng) -> Result<f64> {
    let spec = GridSpec::new(4.0, 128, 1.0)?;
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let grid = psi_grid(&random_angles(rng), PhaseSign::Plus, 1.0, spec)?;
        worst = worst.max((grid.total_power() - 1.0).abs());
    }
    Ok(worst)
}

pub fn run_selftest() -> Result<Vec<SelfTestCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    Ok(vec![
        SelfTestCheck::new("transfer matrix unitarity", unitarity(&mut rng), 1e-12),
        SelfTestCheck::new("power conservation", conservation(&mut rng)?, 1e-12),
        SelfTestCheck::new("HOM coincidence suppression", hom(&mut rng)?, 1e-12),
        SelfTestCheck::new("single-mode coincidence law", coincidence_law()?, 1e-12),
        SelfTestCheck::new("basis sum vs closed form", dual_derivation(&mut rng)?, 1e-10),
        SelfTestCheck::new("dual-input dark port", dark_port()?, 1e-12),
        SelfTestCheck::new("balanced donut uniformity", donut()?, 1e-10),
        SelfTestCheck::new("beta rotation equivariance", rotation_equivariance(&mut rng), 1e-10),
        SelfTestCheck::new("grid normalization", normalization(&mut rng)?, 1e-4),
    ])
}
