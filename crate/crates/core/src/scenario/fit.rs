//! Azimuthal profile analysis.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::modes::wrap_angle;

/// Least-squares fit `y ≈ c0 + c1 sin(2Φ + χ)` with `c1 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicFit {
    pub c0: f64,
    pub c1: f64,
    pub chi: f64,
    /// Largest absolute residual relative to the largest `|y|`.
    pub residual: f64,
}

impl HarmonicFit {
    pub fn eval(&self, phi: f64) -> f64 {
        self.c0 + self.c1 * (2.0 * phi + self.chi).sin()
    }
}

fn solve3(m: [[f64; 3]; 3], v: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = v[row];
        }
        *o = det(mc) / d;
    }
    Some(out)
}

pub fn fit_harmonic(phis: &[f64], ys: &[f64]) -> Option<HarmonicFit> {
    if phis.len() != ys.len() || phis.len() < 3 {
        return None;
    }
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (&phi, &y) in phis.iter().zip(ys) {
        let row = [1.0, (2.0 * phi).sin(), (2.0 * phi).cos()];
        for i in 0..3 {
            aty[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let [c0, a, b] = solve3(ata, aty)?;
    let mut fit = HarmonicFit {
        c0,
        c1: a.hypot(b),
        chi: b.atan2(a),
        residual: 0.0,
    };
    fit.residual = shape_residual(phis, ys, |phi| fit.eval(phi));
    Some(fit)
}

fn shape_residual(phis: &[f64], ys: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    phis.iter()
        .zip(ys)
        .map(|(&phi, &y)| (y - f(phi)).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Best scale `k` for `y ≈ k f(Φ)` and the resulting relative residual.
pub fn fit_shape(phis: &[f64], ys: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (num, den) = phis
        .iter()
        .zip(ys)
        .fold((0.0, 0.0), |(n, d), (&phi, &y)| (n + y * f(phi), d + f(phi) * f(phi)));
    let k = if den > 0.0 { num / den } else { 0.0 };
    (k, shape_residual(phis, ys, |phi| k * f(phi)))
}

/// `(max − min) / (max + min)`, zero for an all-zero profile.
pub fn modulation_depth(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if values.is_empty() || hi + lo <= 0.0 {
        return 0.0;
    }
    (hi - lo) / (hi + lo)
}

/// Pattern rotation of each frame relative to the first, from the fitted
/// phases `χ`.
///
/// A lobe at `2Φ + χ = const` moves to smaller `Φ` as `χ` grows, which is
/// anticlockwise as seen from the source; rotations are reported positive
/// in that sense. Consecutive steps are unwrapped assuming `|Δχ| < π`.
pub fn rotation_angles(chis: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(chis.len());
    let mut acc = 0.0;
    for (i, &chi) in chis.iter().enumerate() {
        if i > 0 {
            acc += wrap_angle(chi - chis[i - 1]);
        }
        out.push(acc / 2.0);
    }
    out
}

/// `n` equally spaced azimuths over a full turn, starting at 0.
pub fn azimuths(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}
