use std::ffi::CString;

use amzi_py::amzi_py;
use pyo3::prelude::*;

const SCRIPT: &str = r#"
import math, json, tempfile
import amzi_py as amzi

angles = amzi.PoincareAngles(math.pi / 2, math.pi, math.pi / 2, 0.0)
amps = angles.amplitudes()
assert abs(amps.norm_sqr() - 1.0) < 1e-12

c, d = amzi.propagate(amps, amps, math.pi / 2)
assert d.norm_sqr() < 1e-24
assert abs(c.norm_sqr() - 2.0) < 1e-12

p, q = amzi.biphoton_probabilities(amps, math.pi / 2)
assert p < 1e-12 and abs(q - 1.0) < 1e-12

a = amzi.psi(amps, 1, 0.7, 0.3)
b = amzi.psi_closed_form(angles, 1, 0.7, 0.3)
assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) < 1e-12

try:
    amzi.psi(amps, 0, 1.0, 0.0)
    raise AssertionError("sign 0 accepted")
except ValueError:
    pass

with tempfile.TemporaryDirectory() as out:
    report = json.loads(amzi.run_scenario("lg-input", out, 'grid_size = 16\nformats = ["json"]\n'))
    assert report["scenario"] == "lg-input"

assert all(c[3] for c in amzi.selftest())
"#;

#[test]
fn module_works_from_python() {
    pyo3::append_to_inittab!(amzi_py);
    Python::initialize();
    Python::attach(|py| {
        let code = CString::new(SCRIPT).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            e.print(py);
            panic!("python script failed");
        }
    });
}
