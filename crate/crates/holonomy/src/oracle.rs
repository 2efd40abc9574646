//! Brute-force numerical integration of the time-dependent Schrodinger
//! equation: the independent referee for every closed-form result.
//!
//! Fixed-step RK4, no renormalization — norm drift is the error signal.
//! Runs are parameterized in dimensionless Omega*t; gamma enters only
//! through the ratio g.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::models::{abelian_hamiltonian, abelian_invariant, cranking_rotation, AbelianParams};
use crate::numerics::{
    hermitian_eigensystem, hermiticity_deviation, spectral_norm, CMatrix, CVector, Tolerances,
};

/// A fixed-step RK4 run over [t_start, t_end].
#[derive(Debug, Clone, Copy)]
pub struct IntegrationSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub unitarity_tolerance: f64,
}

impl IntegrationSpec {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(Error::InvalidParameter(format!(
                "bad integration window [{t_start}, {t_end}]"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        Ok(Self { t_start, t_end, steps, unitarity_tolerance: 1e-8 })
    }

    /// Integration method tag; this referee is fixed-step RK4 only.
    pub fn method(&self) -> &'static str {
        "fixed-step rk4"
    }
}

/// Integration output: states at the step boundaries, the successive-
/// overlap accumulated phase (sum of arg <psi_k|psi_{k+1}>, unwrapped step
/// by step), and the worst norm drift seen along the run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub accumulated_phase: f64,
    pub max_norm_drift: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &CVector {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

fn check_hermitian_at(h: &CMatrix, t: f64) -> Result<()> {
    let dev = hermiticity_deviation(h);
    if dev >= Tolerances::default().hermiticity {
        // surface where it happened; the caller's H(t) is broken
        let _ = t;
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// One RK4 step from t0 to t1; the endpoint evaluations hit t0 and t1
/// exactly, so a caller-supplied H(t) never sees times outside its range.
fn rk4_step(
    hamiltonian: &impl Fn(f64) -> CMatrix,
    t0: f64,
    t1: f64,
    psi: &CVector,
    check: bool,
) -> Result<CVector> {
    let dt = t1 - t0;
    let tm = 0.5 * (t0 + t1);
    let minus_i = C64::new(0.0, -1.0);
    let h0 = hamiltonian(t0);
    let hm = hamiltonian(tm);
    let h1 = hamiltonian(t1);
    if check {
        check_hermitian_at(&h0, t0)?;
        check_hermitian_at(&hm, tm)?;
        check_hermitian_at(&h1, t1)?;
    }
    let k1 = (&h0 * psi) * minus_i;
    let k2 = (&hm * &(psi + &k1 * C64::from(0.5 * dt))) * minus_i;
    let k3 = (&hm * &(psi + &k2 * C64::from(0.5 * dt))) * minus_i;
    let k4 = (&h1 * &(psi + &k3 * C64::from(dt))) * minus_i;
    Ok(psi + (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(dt / 6.0))
}

/// k-th step boundary of [t_start, t_end] split into `steps` pieces; the
/// last boundary is t_end exactly.
fn sample_time(spec: &IntegrationSpec, k: usize) -> f64 {
    spec.t_start + (spec.t_end - spec.t_start) * (k as f64 / spec.steps as f64)
}

/// Integrate i d/dt |psi> = H(t)|psi> with fixed-step RK4.
///
/// Renormalization is off; the run fails with `NormDriftExceeded` when the
/// norm drifts past the run's tolerance. H(t) must be Hermitian at every
/// sampled time.
pub fn integrate(
    hamiltonian: impl Fn(f64) -> CMatrix,
    psi0: &CVector,
    spec: &IntegrationSpec,
) -> Result<Trajectory> {
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    let mut psi = psi0.clone();
    let mut times = Vec::with_capacity(spec.steps + 1);
    let mut states = Vec::with_capacity(spec.steps + 1);
    times.push(spec.t_start);
    states.push(psi.clone());
    let mut phase = 0.0;
    let mut drift = 0.0f64;
    for k in 0..spec.steps {
        let t0 = sample_time(spec, k);
        let t1 = sample_time(spec, k + 1);
        let next = rk4_step(&hamiltonian, t0, t1, &psi, true)?;
        phase += psi.dotc(&next).arg();
        drift = drift.max((next.norm() - 1.0).abs());
        psi = next;
        times.push(t1);
        states.push(psi.clone());
    }
    if drift > spec.unitarity_tolerance {
        return Err(Error::NormDriftExceeded {
            drift,
            tolerance: spec.unitarity_tolerance,
        });
    }
    Ok(Trajectory { times, states, accumulated_phase: phase, max_norm_drift: drift })
}

/// RK4 propagator with a step-halving consistency estimate.
#[derive(Debug, Clone)]
pub struct NumericPropagator {
    /// U(t_end) at the requested step count
    pub matrix: CMatrix,
    /// spectral-norm distance to the run at twice the steps
    pub richardson_error: f64,
}

fn propagate_columns(
    hamiltonian: &(impl Fn(f64) -> CMatrix + Sync),
    t_end: f64,
    steps: usize,
    tol: f64,
) -> Result<CMatrix> {
    let dim = hamiltonian(0.0).nrows();
    let mut u = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut psi0 = CVector::zeros(dim);
        psi0[j] = C64::from(1.0);
        let mut spec = IntegrationSpec::new(0.0, t_end, steps)?;
        spec.unitarity_tolerance = tol;
        let traj = integrate(hamiltonian, &psi0, &spec)?;
        u.set_column(j, traj.final_state());
    }
    Ok(u)
}

/// Build U(t_end) by integrating each basis column, and report the
/// distance to a run at 2x the steps as the error estimate.
pub fn numeric_propagator(
    hamiltonian: impl Fn(f64) -> CMatrix + Sync,
    t_end: f64,
    steps: usize,
) -> Result<NumericPropagator> {
    if t_end == 0.0 {
        let dim = hamiltonian(0.0).nrows();
        return Ok(NumericPropagator {
            matrix: crate::numerics::identity(dim),
            richardson_error: 0.0,
        });
    }
    // columns of a unitary stay unit norm; allow 10x the per-state drift
    let tol = 10.0 * 1e-8;
    let coarse = propagate_columns(&hamiltonian, t_end, steps, tol)?;
    let udev = crate::numerics::unitarity_deviation(&coarse);
    if udev > tol {
        return Err(Error::NormDriftExceeded { drift: udev, tolerance: tol });
    }
    let fine = propagate_columns(&hamiltonian, t_end, 2 * steps, tol)?;
    let err = spectral_norm(&(&coarse - fine));
    Ok(NumericPropagator { matrix: coarse, richardson_error: err })
}

/// Numerically accumulated total phase of the recurrent state over one
/// loop period.
///
/// The state is evolved from the middle invariant eigenvector by RK4 in
/// the lab frame; the phase is the stepwise-unwrapped argument of
/// <psi_0(t)|Psi(t)> against the recurrent reference, which at t = T is
/// exactly the unwrapped return amplitude arg <psi_0(0)|Psi(T)>. (The bare
/// successive-overlap sum of Psi alone would measure the dynamical phase
/// instead and miss the cranking winding.)
pub fn cyclic_phase_numeric(p: &AbelianParams, steps: usize) -> Result<f64> {
    let t_period = p.period()?;
    let eig = hermitian_eigensystem(&abelian_invariant(p, 0.0))?;
    let gap = (eig.values[1] - eig.values[0])
        .abs()
        .min((eig.values[2] - eig.values[1]).abs());
    let tol = Tolerances::default().degeneracy_gap * p.omega();
    if gap < tol {
        return Err(Error::DegenerateMiddleRoot { gap, tolerance: tol });
    }
    let phi0 = eig.vector(1);

    let spec = IntegrationSpec::new(0.0, t_period, steps)?;
    let hamiltonian = |t: f64| abelian_hamiltonian(p, t);
    let mut psi = phi0.clone();
    let mut phase = 0.0;
    let mut r_prev = phi0.dotc(&psi);
    let mut drift = 0.0f64;
    for k in 0..steps {
        let t0 = sample_time(&spec, k);
        let t1 = sample_time(&spec, k + 1);
        psi = rk4_step(&hamiltonian, t0, t1, &psi, false)?;
        drift = drift.max((psi.norm() - 1.0).abs());
        let reference = cranking_rotation(p.gamma(), t1) * &phi0;
        let r = reference.dotc(&psi);
        phase += (r * r_prev.conj()).arg();
        r_prev = r;
    }
    if drift > 1e-8 {
        return Err(Error::NormDriftExceeded { drift, tolerance: 1e-8 });
    }
    Ok(phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian;
    use crate::models::{abelian_dark_state, reduced};
    use crate::numerics::identity;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn zero_hamiltonian_freezes_the_state() {
        let psi0 = crate::models::basis_state(2, 0);
        let spec = IntegrationSpec::new(0.0, 5.0, 100).unwrap();
        let traj = integrate(|_| CMatrix::zeros(2, 2), &psi0, &spec).unwrap();
        assert_eq!(traj.final_state(), &psi0);
        assert_eq!(traj.accumulated_phase, 0.0);
        assert_eq!(traj.max_norm_drift, 0.0);
    }

    #[test]
    fn rabi_oscillation() {
        // constant x-coupling: amplitudes cos(t), -i sin(t)
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = C64::from(1.0);
        h[(1, 0)] = C64::from(1.0);
        let psi0 = crate::models::basis_state(2, 0);
        let spec = IntegrationSpec::new(0.0, 1.0, 10_000).unwrap();
        let traj = integrate(|_| h.clone(), &psi0, &spec).unwrap();
        let f = traj.final_state();
        assert!((f[0] - C64::from(1.0f64.cos())).norm() < 1e-8);
        assert!((f[1] - C64::new(0.0, -1.0f64.sin())).norm() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = C64::from(1.0);
        h[(1, 0)] = C64::from(1.0);
        let psi0 = crate::models::basis_state(2, 0);
        let t_end = 3.0_f64;
        let exact = CVector::from_vec(vec![
            C64::from(t_end.cos()),
            C64::new(0.0, -t_end.sin()),
        ]);
        let mut errs = Vec::new();
        for steps in [1000, 2000, 4000] {
            let spec = IntegrationSpec::new(0.0, t_end, steps).unwrap();
            let traj = integrate(|_| h.clone(), &psi0, &spec).unwrap();
            errs.push((traj.final_state() - &exact).norm());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(ratio > 8.0 && ratio < 32.0, "ratio {ratio} not ~16");
        }
    }

    #[test]
    fn rejects_non_hermitian_and_bad_norm() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = C64::from(1.0);
        let psi0 = crate::models::basis_state(2, 0);
        let spec = IntegrationSpec::new(0.0, 1.0, 10).unwrap();
        assert!(matches!(
            integrate(|_| h.clone(), &psi0, &spec),
            Err(Error::NotHermitian { .. })
        ));
        let short = &psi0 * C64::from(0.5);
        assert!(integrate(|_| CMatrix::zeros(2, 2), &short, &spec).is_err());
    }

    #[test]
    fn dark_state_loop_fidelity_small_g() {
        let p = AbelianParams::from_ratio(0.9, 0.01).unwrap();
        let t_period = p.period().unwrap();
        let psi0 = abelian_dark_state(p.theta(), 0.0);
        let spec = IntegrationSpec::new(0.0, t_period, 20_000).unwrap();
        let traj = integrate(|t| abelian_hamiltonian(&p, t), &psi0, &spec).unwrap();
        let overlap = abelian_dark_state(p.theta(), 0.0).dotc(traj.final_state());
        let fidelity = overlap.norm_sqr();
        assert!(1.0 - fidelity < 1e-3, "fidelity {fidelity}");
        // halving the steps does not change the physics
        let spec2 = IntegrationSpec::new(0.0, t_period, 10_000).unwrap();
        let traj2 = integrate(|t| abelian_hamiltonian(&p, t), &psi0, &spec2).unwrap();
        let f2 = abelian_dark_state(p.theta(), 0.0).dotc(traj2.final_state()).norm_sqr();
        assert!((fidelity - f2).abs() < 1e-6);
        // the cyclic return phase has the convention's sign
        let phi = abelian::total_phase(&p).unwrap();
        let measured = overlap.arg();
        let wrapped = (phi - measured + PI).rem_euclid(2.0 * PI) - PI;
        assert!(wrapped.abs() < 0.05, "phase convention mismatch: {wrapped}");
    }

    #[test]
    fn propagator_identity_and_constant_case() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = C64::from(0.8);
        h[(1, 0)] = C64::from(0.8);
        let res = numeric_propagator(|_| h.clone(), 1.7, 4000).unwrap();
        let exact = crate::numerics::unitary_exp(&h, 1.7).unwrap();
        assert!(spectral_norm(&(res.matrix.clone() - exact)) < 1e-8);
        assert!(res.richardson_error < 1e-8);

        let res0 = numeric_propagator(|_| h.clone(), 0.0, 100).unwrap();
        assert_eq!(res0.matrix, identity(2));
        assert_eq!(res0.richardson_error, 0.0);
    }

    #[test]
    fn propagator_matches_closed_form_spot() {
        let p = AbelianParams::from_ratio(0.8, 0.4).unwrap();
        let t_period = p.period().unwrap();
        let numeric =
            numeric_propagator(|t| abelian_hamiltonian(&p, t), t_period, 20_000).unwrap();
        let closed = abelian::closed_form_propagator(&p, t_period);
        assert!(spectral_norm(&(closed - numeric.matrix)) < 1e-6);
    }

    #[test]
    fn cyclic_phase_anchors() {
        // theta = 0: no phase
        let p = AbelianParams::from_ratio(0.0, 0.4).unwrap();
        assert!(cyclic_phase_numeric(&p, 5_000).unwrap().abs() < 1e-9);

        // theta = pi/2, g = 0.5: exactly -2 pi in this convention
        let p = AbelianParams::from_ratio(PI / 2.0, 0.5).unwrap();
        let phi = cyclic_phase_numeric(&p, 20_000).unwrap();
        assert!((phi + 2.0 * PI).abs() < 1e-6, "phi = {phi}");
    }

    #[test]
    fn cyclic_phase_matches_closed_form() {
        let p = AbelianParams::from_ratio(PI / 4.0, 0.2).unwrap();
        let numeric = cyclic_phase_numeric(&p, 20_000).unwrap();
        let closed = abelian::total_phase(&p).unwrap();
        assert!((numeric - closed).abs() < 1e-5, "{numeric} vs {closed}");
        // step halving consistency
        let refined = cyclic_phase_numeric(&p, 40_000).unwrap();
        assert!((numeric - refined).abs() < 1e-6);
    }

    #[test]
    fn recurrent_reference_strips_cranking_winding() {
        // the g3-heavy point: the lab-frame state barely moves, the
        // reference carries the whole -2 pi
        let p = AbelianParams::from_ratio(PI / 2.0, 0.5).unwrap();
        let psi0 = abelian::recurrent_basis(&p, 0.0).unwrap();
        assert!((psi0[reduced::G3].norm() - 1.0).abs() < 1e-12);
        let phi = cyclic_phase_numeric(&p, 10_000).unwrap();
        assert!(phi < -6.0);
    }
}
