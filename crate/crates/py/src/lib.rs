//! Python bindings for the `amzi` core library.
//!
//! Angles are plain radians here. The phase sign is passed as `+1` or `-1`.

use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use amzi::biphoton::{bunching_probability, coincidence_probability, output_state};
use amzi::field::{gaussian_profile, psi_from_basis, psi_parameterized, superpose, Waist};
use amzi::interferometer::{propagate as propagate_pair, PortPair};
use amzi::modes::{product_amplitudes, BasisMode, PhaseSign, PoincareAngles, SpinOrbitAmplitudes};
use amzi::polarization::{analyze, ellipse as ellipse_of, polarizer_matrix as polarizer, retard};
use amzi::scenario::{run_biphoton_sweep, run_scenario as run, run_selftest, ScenarioConfig, ScenarioKind};
use amzi::{transfer_matrix as transfer, JonesVector};

fn to_py(err: amzi::Error) -> PyErr {
    match err {
        amzi::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn phase_sign(sign: i32) -> PyResult<PhaseSign> {
    match sign {
        1 => Ok(PhaseSign::Plus),
        -1 => Ok(PhaseSign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be +1 or -1, got {sign}"))),
    }
}

fn waist(w0: f64) -> PyResult<Waist> {
    Waist::new(w0).map_err(to_py)
}

fn mode(j: u8, k: u8) -> PyResult<BasisMode> {
    BasisMode::from_indices(j, k).map_err(to_py)
}

type Pair = (Complex64, Complex64);

fn pair(v: JonesVector) -> Pair {
    (v.ex, v.ey)
}

/// Poincaré-sphere angles `(theta, phi, alpha, beta)` in radians.
#[pyclass(name = "PoincareAngles", module = "amzi_py", from_py_object)]
#[derive(Clone, Copy)]
pub struct PyPoincareAngles(PoincareAngles);

#[pymethods]
impl PyPoincareAngles {
    #[new]
    #[pyo3(signature = (theta=0.0, phi=0.0, alpha=0.0, beta=0.0))]
    fn new(theta: f64, phi: f64, alpha: f64, beta: f64) -> PyResult<Self> {
        let a = PoincareAngles::new(theta, phi, alpha, beta);
        a.validate().map_err(to_py)?;
        Ok(Self(a))
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    fn canonicalize(&self) -> Self {
        Self(self.0.canonicalize())
    }

    #[pyo3(signature = (amplitude=1.0))]
    fn amplitudes(&self, amplitude: f64) -> PyResult<PyAmplitudes> {
        product_amplitudes(&self.0, amplitude).map(PyAmplitudes).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let a = self.0;
        format!("PoincareAngles(theta={}, phi={}, alpha={}, beta={})", a.theta, a.phi, a.alpha, a.beta)
    }
}

/// Complex weights of the four spin-orbit modes, ordered `(e00, e11, e10, e01)`.
#[pyclass(name = "Amplitudes", module = "amzi_py", from_py_object)]
#[derive(Clone, Copy)]
pub struct PyAmplitudes(SpinOrbitAmplitudes);

#[pymethods]
impl PyAmplitudes {
    #[new]
    fn new(e00: Complex64, e11: Complex64, e10: Complex64, e01: Complex64) -> Self {
        Self(SpinOrbitAmplitudes::new(e00, e11, e10, e01))
    }

    #[staticmethod]
    fn zero() -> Self {
        Self(SpinOrbitAmplitudes::zero())
    }

    /// Weight of the basis mode with orbital index `j` and spin index `k`.
    fn get(&self, j: u8, k: u8) -> PyResult<Complex64> {
        Ok(self.0.get(mode(j, k)?))
    }

    fn as_tuple(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        let [a, b, c, d] = self.0.as_array();
        (a, b, c, d)
    }

    fn norm_sqr(&self) -> f64 {
        self.0.norm_sqr()
    }

    fn separability_witness(&self) -> Complex64 {
        self.0.separability_witness()
    }

    /// Jones vector `(ex, ey)` of the superposed beam at `(r, phi)`.
    #[pyo3(signature = (r, phi, w0=1.0))]
    fn field(&self, r: f64, phi: f64, w0: f64) -> PyResult<Pair> {
        Ok(pair(superpose(&self.0, r, phi, waist(w0)?)))
    }

    fn __repr__(&self) -> String {
        let [a, b, c, d] = self.0.as_array();
        format!("Amplitudes(e00={a}, e11={b}, e10={c}, e01={d})")
    }
}

#[pyfunction]
#[pyo3(signature = (angles, amplitude=1.0))]
fn product_state(angles: PyPoincareAngles, amplitude: f64) -> PyResult<PyAmplitudes> {
    angles.amplitudes(amplitude)
}

/// 2×2 transfer matrix of basis mode `(j, k)` at internal phase `delta`.
#[pyfunction]
fn transfer_matrix(j: u8, k: u8, delta: f64) -> PyResult<[[Complex64; 2]; 2]> {
    Ok(transfer(mode(j, k)?, delta).m.0)
}

/// Output amplitudes `(c, d)` for inputs `(a, b)`.
#[pyfunction]
fn propagate(a: PyAmplitudes, b: PyAmplitudes, delta: f64) -> (PyAmplitudes, PyAmplitudes) {
    let out = propagate_pair(&PortPair::new(a.0, b.0), delta);
    (PyAmplitudes(out.first), PyAmplitudes(out.second))
}

/// Vector mode `ψ±` from the basis-mode sum.
#[pyfunction]
#[pyo3(signature = (amps, sign, r, phi, w0=1.0))]
fn psi(amps: PyAmplitudes, sign: i32, r: f64, phi: f64, w0: f64) -> PyResult<Pair> {
    Ok(pair(psi_from_basis(&amps.0, phase_sign(sign)?, r, phi, waist(w0)?)))
}

/// Vector mode `ψ±` from its closed form in the Poincaré angles.
#[pyfunction]
#[pyo3(signature = (angles, sign, r, phi, w0=1.0, amplitude=1.0))]
fn psi_closed_form(angles: PyPoincareAngles, sign: i32, r: f64, phi: f64, w0: f64, amplitude: f64) -> PyResult<Pair> {
    Ok(pair(psi_parameterized(&angles.0, phase_sign(sign)?, r, phi, waist(w0)?, amplitude)))
}

#[pyfunction]
#[pyo3(signature = (r, w0=1.0))]
fn gaussian(r: f64, w0: f64) -> PyResult<f64> {
    Ok(gaussian_profile(r, waist(w0)?))
}

#[pyfunction]
fn polarizer_matrix(gamma: f64) -> [[f64; 2]; 2] {
    polarizer(gamma)
}

/// Field behind a retarder `beta` and a polarizer at `gamma`.
#[pyfunction]
fn analyze_field(ex: Complex64, ey: Complex64, gamma: f64, beta: f64) -> Pair {
    pair(analyze(&retard(&JonesVector::new(ex, ey), beta), gamma))
}

#[pyfunction]
#[pyo3(signature = (gamma, beta, sign, r, phi, w0=1.0, amplitude=1.0))]
fn polarized_power(gamma: f64, beta: f64, sign: i32, r: f64, phi: f64, w0: f64, amplitude: f64) -> PyResult<f64> {
    Ok(amzi::polarization::polarized_power(gamma, beta, phase_sign(sign)?, r, phi, waist(w0)?, amplitude))
}

/// `(orientation, ellipticity, intensity)` of a Jones vector.
#[pyfunction]
fn ellipse(ex: Complex64, ey: Complex64) -> (f64, f64, f64) {
    let e = ellipse_of(&JonesVector::new(ex, ey));
    (e.orientation, e.ellipticity, e.intensity)
}

/// `(coincidence, bunching)` for one photon in each input port.
#[pyfunction]
fn biphoton_probabilities(amps: PyAmplitudes, delta: f64) -> PyResult<(f64, f64)> {
    let state = output_state(&amps.0, delta).map_err(to_py)?;
    Ok((
        coincidence_probability(&state).map_err(to_py)?,
        bunching_probability(&state).map_err(to_py)?,
    ))
}

/// Rows `(delta, coincidence, bunching)` over a phase grid.
#[pyfunction]
fn biphoton_sweep(amps: PyAmplitudes, deltas: Vec<f64>) -> PyResult<Vec<(f64, f64, f64)>> {
    let rows = run_biphoton_sweep(&amps.0, &deltas).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.delta, r.coincidence, r.bunching)).collect())
}

/// Runs a scenario and returns the report as JSON text.
///
/// `config` holds the same TOML keys as a scenario file; `out` overrides
/// the output directory.
#[pyfunction]
#[pyo3(signature = (scenario, out, config=""))]
fn run_scenario(py: Python<'_>, scenario: &str, out: PathBuf, config: &str) -> PyResult<String> {
    let kind: ScenarioKind = scenario.parse().map_err(to_py)?;
    let mut cfg = ScenarioConfig::from_toml_with(config, Some(kind)).map_err(to_py)?;
    cfg.output_dir = out;
    let report = py.detach(|| run(&cfg)).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Invariant checks as `(name, value, tolerance, passed)`.
#[pyfunction]
fn selftest() -> PyResult<Vec<(String, f64, f64, bool)>> {
    let checks = run_selftest().map_err(to_py)?;
    Ok(checks.into_iter().map(|c| (c.name, c.value, c.tolerance, c.passed)).collect())
}

#[pymodule]
pub fn amzi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoincareAngles>()?;
    m.add_class::<PyAmplitudes>()?;
    m.add_function(wrap_pyfunction!(product_state, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(psi_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(polarizer_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_field, m)?)?;
    m.add_function(wrap_pyfunction!(polarized_power, m)?)?;
    m.add_function(wrap_pyfunction!(ellipse, m)?)?;
    m.add_function(wrap_pyfunction!(biphoton_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(biphoton_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_accepts_only_unit_values() {
        assert_eq!(phase_sign(1).unwrap(), PhaseSign::Plus);
        assert_eq!(phase_sign(-1).unwrap(), PhaseSign::Minus);
        assert!(phase_sign(0).is_err());
    }

    #[test]
    fn bad_waist_is_rejected() {
        assert!(waist(0.0).is_err());
        assert!(waist(1.5).is_ok());
    }
}
