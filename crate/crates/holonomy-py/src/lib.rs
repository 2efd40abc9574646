//! Python bindings for the holonomy crate.
//!
//! Exposes the two loop solvers as classes plus the preparation,
//! two-qubit and sweep operations as functions. Matrices come back as
//! nested lists of Python complex numbers; reports as dicts.

use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use holonomy::models::{
    AbelianParams, NonAbelianParams, RampProfile, RampShape, TwoQubitDriveParams,
};
use holonomy::numerics::{CMatrix, CVector};
use holonomy::{abelian, experiments, nonabelian, oracle, verify};

fn py_err(e: holonomy::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mat_to_py(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn vec_to_py(v: &CVector) -> Vec<C64> {
    v.iter().copied().collect()
}

fn parse_shape(shape: &str) -> PyResult<RampShape> {
    match shape {
        "linear" => Ok(RampShape::Linear),
        "smoothstep" => Ok(RampShape::Smoothstep),
        other => Err(PyValueError::new_err(format!(
            "unknown ramp shape '{other}' (expected 'linear' or 'smoothstep')"
        ))),
    }
}

/// The abelian loop at fixed mixing angle and drive ratio.
#[pyclass]
struct AbelianLoop {
    params: AbelianParams,
}

#[pymethods]
impl AbelianLoop {
    #[new]
    #[pyo3(signature = (theta, gamma_ratio, omega = 1.0))]
    fn new(theta: f64, gamma_ratio: f64, omega: f64) -> PyResult<Self> {
        let params = AbelianParams::new(omega, theta, gamma_ratio * omega).map_err(py_err)?;
        Ok(Self { params })
    }

    /// Dimensionless invariant roots (x_minus, x0, x_plus).
    fn characteristic_roots(&self) -> PyResult<(f64, f64, f64)> {
        let s = abelian::characteristic_roots(&self.params).map_err(py_err)?;
        Ok((s.x_minus, s.x0, s.x_plus))
    }

    /// Leakage overlap eta in [0, 1].
    fn leakage_overlap(&self) -> PyResult<f64> {
        abelian::leakage_overlap(&self.params).map_err(py_err)
    }

    /// Total cyclic phase (return-amplitude convention, radians).
    fn total_phase(&self) -> PyResult<f64> {
        abelian::total_phase(&self.params).map_err(py_err)
    }

    /// Closed-form propagator U(t) as a nested list.
    fn propagator(&self, t: f64) -> Vec<Vec<C64>> {
        mat_to_py(&abelian::closed_form_propagator(&self.params, t))
    }

    /// Recurrent basis state at time t.
    fn recurrent_state(&self, t: f64) -> PyResult<Vec<C64>> {
        Ok(vec_to_py(&abelian::recurrent_basis(&self.params, t).map_err(py_err)?))
    }

    /// RK4-accumulated cyclic phase (the numerical referee).
    #[pyo3(signature = (steps = 20_000))]
    fn cyclic_phase_numeric(&self, steps: usize) -> PyResult<f64> {
        oracle::cyclic_phase_numeric(&self.params, steps).map_err(py_err)
    }

    /// Full cycle report: roots, eta, total phase, adiabatic reference.
    fn cycle<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = abelian::cycle(&self.params).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("theta", self.params.theta())?;
        d.set_item("gamma_ratio", self.params.ratio())?;
        d.set_item("eta", c.eta)?;
        d.set_item("phi_total", c.phi_total)?;
        d.set_item("phi_adiabatic_ref", c.phi_adiabatic_ref)?;
        d.set_item("roots", (c.spectrum.x_minus, c.spectrum.x0, c.spectrum.x_plus))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "AbelianLoop(theta={}, gamma_ratio={})",
            self.params.theta(),
            self.params.ratio()
        )
    }
}

/// The non-abelian loop at fixed mixing angle and drive ratio.
#[pyclass]
struct NonAbelianLoop {
    params: NonAbelianParams,
}

#[pymethods]
impl NonAbelianLoop {
    #[new]
    #[pyo3(signature = (theta, gamma_ratio, omega = 1.0))]
    fn new(theta: f64, gamma_ratio: f64, omega: f64) -> PyResult<Self> {
        let params = NonAbelianParams::new(omega, theta, gamma_ratio * omega).map_err(py_err)?;
        Ok(Self { params })
    }

    /// Closed-form gauged-frame energies (E1, E2, E3, E4).
    fn closed_form_energies(&self) -> (f64, f64, f64, f64) {
        let e = nonabelian::closed_form_eigenvalues(&self.params);
        (e[0], e[1], e[2], e[3])
    }

    /// Exact lab-frame propagator U(t).
    fn exact_propagator(&self, t: f64) -> Vec<Vec<C64>> {
        mat_to_py(&nonabelian::exact_propagator(&self.params, t))
    }

    /// One-loop evolution operator U_C(T).
    fn cyclic_operator(&self) -> PyResult<Vec<Vec<C64>>> {
        Ok(mat_to_py(&nonabelian::cyclic_operator(&self.params).map_err(py_err)?))
    }

    /// Phase-equipped dark dynamical pair at time t.
    fn dark_dynamical_states(&self, t: f64) -> (Vec<C64>, Vec<C64>) {
        let (a, b) = nonabelian::dark_dynamical_states(&self.params, t);
        (vec_to_py(&a), vec_to_py(&b))
    }

    /// Dark-space gate report: projected 2x2 matrix, populations,
    /// leakage, fidelity against the ideal holonomy.
    fn projected_gate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = nonabelian::projected_gate(&self.params).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("theta", self.params.theta())?;
        d.set_item("gamma_ratio", self.params.ratio())?;
        d.set_item("projected", mat_to_py(&r.projected))?;
        d.set_item("population_d1", r.population_d1)?;
        d.set_item("population_d2", r.population_d2)?;
        d.set_item("leakage_by_state", (r.leakage_by_state[0], r.leakage_by_state[1]))?;
        d.set_item("fidelity", r.fidelity)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "NonAbelianLoop(theta={}, gamma_ratio={})",
            self.params.theta(),
            self.params.ratio()
        )
    }
}

/// Ideal dark-space holonomy e^{i 2 pi cos(theta) D_y} as a 2x2 matrix.
#[pyfunction]
fn ideal_holonomy(theta: f64) -> Vec<Vec<C64>> {
    mat_to_py(&nonabelian::ideal_holonomy(theta))
}

/// Abelian dark state cos(theta)|g2> - sin(theta) e^{i phase}|g3>.
#[pyfunction]
#[pyo3(signature = (theta, phase = 0.0))]
fn dark_state(theta: f64, phase: f64) -> Vec<C64> {
    vec_to_py(&holonomy::models::abelian_dark_state(theta, phase))
}

/// Non-abelian dark pair (|D1>, |D2>) on the four-level basis.
#[pyfunction]
fn dark_states(theta: f64) -> (Vec<C64>, Vec<C64>) {
    let (d1, d2) = holonomy::models::nonabelian_dark_states(theta);
    (vec_to_py(&d1), vec_to_py(&d2))
}

/// Richardson-extrapolated adiabatic limit of |Phi|.
#[pyfunction]
fn adiabatic_phase_limit(theta: f64) -> f64 {
    abelian::adiabatic_phase_limit(theta)
}

/// Ramp the dark state from the computational basis and report the final
/// infidelity; `nonabelian=True` runs the (g1, g3) variant.
#[pyfunction]
#[pyo3(signature = (theta_end, duration, shape = "linear", with_matching = true, steps = 20_000, nonabelian = false))]
fn prepare_dark_state<'py>(
    py: Python<'py>,
    theta_end: f64,
    duration: f64,
    shape: &str,
    with_matching: bool,
    steps: usize,
    nonabelian: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let ramp = RampProfile::new(0.0, theta_end, duration, parse_shape(shape)?).map_err(py_err)?;
    let r = if nonabelian {
        experiments::prepare_dark_state_nonabelian(&ramp, with_matching, steps)
    } else {
        experiments::prepare_dark_state(&ramp, with_matching, steps)
    }
    .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("theta_end", theta_end)?;
    d.set_item("duration", duration)?;
    d.set_item("shape", shape)?;
    d.set_item("with_matching", with_matching)?;
    d.set_item("final_infidelity", r.final_infidelity)?;
    d.set_item("norm_drift", r.norm_drift)?;
    Ok(d)
}

/// Two-qubit controlled-phase report; `gamma_ratio` is gamma/kappa of
/// the mapped enclosed-space loop.
#[pyfunction]
#[pyo3(signature = (amp1, amp2, phi1 = 0.0, phi2 = 0.0, gamma_ratio = 0.2))]
fn two_qubit_gate<'py>(
    py: Python<'py>,
    amp1: f64,
    amp2: f64,
    phi1: f64,
    phi2: f64,
    gamma_ratio: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let drive = TwoQubitDriveParams::new(amp1, amp2, phi1, phi2).map_err(py_err)?;
    let eff = holonomy::models::EffectiveParams::from_drive(&drive).map_err(py_err)?;
    let r = experiments::two_qubit_gate(&drive, gamma_ratio * eff.kappa).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("kappa", r.effective.kappa)?;
    d.set_item("theta_eff", r.effective.theta_eff)?;
    d.set_item("phi_eff", r.effective.phi_eff)?;
    d.set_item("phase_on_11", r.phase_on_11)?;
    d.set_item("leakage_from_11", r.leakage_from_11)?;
    d.set_item("gate", mat_to_py(&r.gate))?;
    Ok(d)
}

/// Leakage/phase sweep rows (theta, gamma_ratio, eta, phi_total,
/// phi_adiabatic_ref, degenerate).
#[pyfunction]
fn sweep_fig1(thetas: Vec<f64>, ratios: Vec<f64>) -> Vec<(f64, f64, f64, f64, f64, bool)> {
    abelian::sweep_fig1(&thetas, &ratios)
        .into_iter()
        .map(|r| (r.theta, r.gamma_ratio, r.eta, r.phi_total, r.phi_adiabatic_ref, r.degenerate))
        .collect()
}

/// Population sweep rows (gamma_ratio, one_minus_cos_theta, pop_d1,
/// pop_d2, eta).
#[pyfunction]
#[pyo3(signature = (ratios, theta_points = 200))]
fn sweep_fig2(ratios: Vec<f64>, theta_points: usize) -> Vec<(f64, f64, f64, f64, f64)> {
    nonabelian::sweep_fig2(&ratios, theta_points)
        .into_iter()
        .map(|r| (r.gamma_ratio, r.one_minus_cos_theta, r.pop_d1, r.pop_d2, r.eta))
        .collect()
}

/// Run the cross-validation suite; returns (all_passed, checks) where
/// each check is a dict with name/residual/tolerance/passed.
#[pyfunction]
#[pyo3(signature = (steps = 20_000))]
fn run_verification<'py>(py: Python<'py>, steps: usize) -> PyResult<(bool, Vec<Bound<'py, PyDict>>)> {
    let report = verify::run_checks(steps);
    let mut checks = Vec::with_capacity(report.checks.len());
    for c in &report.checks {
        let d = PyDict::new(py);
        d.set_item("name", c.name)?;
        d.set_item("residual", c.residual)?;
        d.set_item("tolerance", c.tolerance)?;
        d.set_item("passed", c.passed)?;
        checks.push(d);
    }
    Ok((report.all_passed(), checks))
}

#[pymodule]
fn holonomy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<AbelianLoop>()?;
    m.add_class::<NonAbelianLoop>()?;
    m.add_function(wrap_pyfunction!(ideal_holonomy, m)?)?;
    m.add_function(wrap_pyfunction!(dark_state, m)?)?;
    m.add_function(wrap_pyfunction!(dark_states, m)?)?;
    m.add_function(wrap_pyfunction!(adiabatic_phase_limit, m)?)?;
    m.add_function(wrap_pyfunction!(prepare_dark_state, m)?)?;
    m.add_function(wrap_pyfunction!(two_qubit_gate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_fig1, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_fig2, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
