//! Exact solution of the non-abelian loop via the gauge transformation:
//! time-independent gauged Hamiltonian, closed-form spectrum, exact and
//! cyclic propagators, the ideal dark-space holonomy, and the projected
//! gate with its leakage.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::Result;
use crate::models::{full, nonabelian_dark_states, NonAbelianParams};
use crate::numerics::{
    hermitian_eigensystem, unitary_exp, CMatrix, CVector, Eigensystem,
};

/// Real rotation by angle gamma*t in the (g1, g2) plane, identity on
/// (g3, e): the gauge transformation that makes the loop Hamiltonian
/// time-independent. Periodic with the loop, so it is the identity at T.
pub fn gauge_rotation(gamma: f64, t: f64) -> CMatrix {
    let a = gamma * t;
    let mut m = CMatrix::identity(full::DIM, full::DIM);
    m[(full::G1, full::G1)] = C64::from(a.cos());
    m[(full::G2, full::G2)] = C64::from(a.cos());
    m[(full::G1, full::G2)] = C64::from(-a.sin());
    m[(full::G2, full::G1)] = C64::from(a.sin());
    m
}

/// The gauged (rotating-frame) system: time-independent Hamiltonian,
/// its closed-form spectrum, and the numerical eigenvectors.
#[derive(Debug, Clone)]
pub struct GaugedSystem {
    /// H_g = Omega sin(theta)(s_1e + s_e1) + Omega cos(theta)(s_3e + s_e3)
    ///       + i gamma (s_12 - s_21)
    pub hamiltonian: CMatrix,
    /// Omega sqrt(1 + g^2)
    pub omega_bar: f64,
    /// cos(theta_bar) = cos(theta) / (1 + g^2)
    pub theta_bar: f64,
    /// closed-form (E1, E2, E3, E4) = (+small, -small, +large, -large)
    pub energies: [f64; 4],
    /// numerical eigendecomposition of the gauged Hamiltonian
    pub eigensystem: Eigensystem,
}

/// Gauged Hamiltonian matrix for the given loop parameters.
pub fn gauged_hamiltonian_matrix(p: &NonAbelianParams) -> CMatrix {
    let a = p.omega() * p.theta().sin();
    let b = p.omega() * p.theta().cos();
    let mut h = CMatrix::zeros(full::DIM, full::DIM);
    h[(full::G1, full::E)] = C64::from(a);
    h[(full::E, full::G1)] = C64::from(a);
    h[(full::G3, full::E)] = C64::from(b);
    h[(full::E, full::G3)] = C64::from(b);
    h[(full::G1, full::G2)] = C64::new(0.0, p.gamma());
    h[(full::G2, full::G1)] = C64::new(0.0, -p.gamma());
    h
}

/// Closed-form eigenvalues of the gauged Hamiltonian, paired as
/// (+E_small, -E_small, +E_large, -E_large). The inner square root is
/// rearranged to avoid cancellation at small g.
pub fn closed_form_eigenvalues(p: &NonAbelianParams) -> [f64; 4] {
    let g2 = p.ratio() * p.ratio();
    let omega_bar = p.omega() * (1.0 + g2).sqrt();
    let cos_bar = p.theta().cos() / (1.0 + g2);
    let x = (4.0 * g2 * cos_bar * cos_bar).min(1.0);
    let root = (1.0 - x).sqrt();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let e_small = half * omega_bar * (x / (1.0 + root)).sqrt();
    let e_large = half * omega_bar * (1.0 + root).sqrt();
    [e_small, -e_small, e_large, -e_large]
}

/// Assemble the gauged system: matrix, closed-form spectrum, numerical
/// eigenvectors.
pub fn gauged_system(p: &NonAbelianParams) -> GaugedSystem {
    let hamiltonian = gauged_hamiltonian_matrix(p);
    let eigensystem =
        hermitian_eigensystem(&hamiltonian).expect("gauged Hamiltonian is Hermitian");
    let g2 = p.ratio() * p.ratio();
    GaugedSystem {
        omega_bar: p.omega() * (1.0 + g2).sqrt(),
        theta_bar: (p.theta().cos() / (1.0 + g2)).acos(),
        energies: closed_form_eigenvalues(p),
        hamiltonian,
        eigensystem,
    }
}

/// Exact lab-frame propagator U(t) = U_g(t) e^{-i H_g t}.
pub fn exact_propagator(p: &NonAbelianParams, t: f64) -> CMatrix {
    let core = unitary_exp(&gauged_hamiltonian_matrix(p), t)
        .expect("gauged Hamiltonian is Hermitian");
    gauge_rotation(p.gamma(), t) * core
}

/// One-loop evolution operator U_C(T). The gauge rotation is the identity
/// at T, so this is e^{-i H_g T} in the gauged frame — no eigenvector
/// phase choices enter even when the spectrum is degenerate.
pub fn cyclic_operator(p: &NonAbelianParams) -> Result<CMatrix> {
    let t_period = p.period()?;
    Ok(unitary_exp(&gauged_hamiltonian_matrix(p), t_period)
        .expect("gauged Hamiltonian is Hermitian"))
}

/// Spectral form of the cyclic operator, sum_n e^{-i E_n T} |n><n| with
/// the closed-form energies and numerical projectors; retained as a
/// cross-check of [`cyclic_operator`].
pub fn spectral_cyclic_operator(p: &NonAbelianParams) -> Result<CMatrix> {
    let t_period = p.period()?;
    let sys = gauged_system(p);
    // numerical order is ascending: (-large, -small, +small, +large)
    let ordered = [
        sys.energies[3],
        sys.energies[1],
        sys.energies[0],
        sys.energies[2],
    ];
    let mut u = CMatrix::zeros(full::DIM, full::DIM);
    for (k, &e) in ordered.iter().enumerate() {
        let v = sys.eigensystem.vector(k);
        let proj = &v * v.adjoint();
        u += proj * (C64::new(0.0, -e * t_period)).exp();
    }
    Ok(u)
}

/// The dark pair at the loop start plus the antisymmetric generator
/// D_y = i(|D2><D1| - |D1><D2|) written on the (D1, D2) plane.
#[derive(Debug, Clone)]
pub struct DarkFrame {
    pub d1: CVector,
    pub d2: CVector,
    /// 2x2 representation of D_y in the (D1, D2) basis
    pub d_y: CMatrix,
}

pub fn dark_frame(theta: f64) -> DarkFrame {
    let (d1, d2) = nonabelian_dark_states(theta);
    let mut d_y = CMatrix::zeros(2, 2);
    d_y[(0, 1)] = C64::new(0.0, -1.0);
    d_y[(1, 0)] = C64::new(0.0, 1.0);
    DarkFrame { d1, d2, d_y }
}

/// Ideal adiabatic holonomy u_C = e^{i 2 pi cos(theta) D_y} on (D1, D2):
/// a rotation by 2 pi cos(theta); unitary with determinant 1.
pub fn ideal_holonomy(theta: f64) -> CMatrix {
    let ang = 2.0 * std::f64::consts::PI * theta.cos();
    let mut u = CMatrix::zeros(2, 2);
    u[(0, 0)] = C64::from(ang.cos());
    u[(1, 1)] = C64::from(ang.cos());
    u[(0, 1)] = C64::from(ang.sin());
    u[(1, 0)] = C64::from(-ang.sin());
    u
}

/// The phase-equipped dark dynamical pair
/// Psi_{1,2}(t) = e^{∓ i gamma t cos(theta)} (w(t) ∓ i v_perp(t)) / sqrt(2)
/// with w = cos(theta) v(phi) - sin(theta)|g3> and v_perp the dark ground
/// combination orthogonal to the bright one. Stripped of the phase factor
/// they are exact null vectors of the loop Hamiltonian at every t, and at
/// t = 0 they reduce to (|D1> ∓ i |D2>)/sqrt(2).
pub fn dark_dynamical_states(p: &NonAbelianParams, t: f64) -> (CVector, CVector) {
    let phi = p.gamma() * t;
    let (s, c) = (p.theta().sin(), p.theta().cos());
    let mut bright = CVector::zeros(full::DIM);
    bright[full::G1] = C64::from(phi.cos());
    bright[full::G2] = C64::from(phi.sin());
    let mut w = &bright * C64::from(c);
    w[full::G3] = C64::from(-s);
    let mut v_perp = CVector::zeros(full::DIM);
    v_perp[full::G1] = C64::from(-phi.sin());
    v_perp[full::G2] = C64::from(phi.cos());

    let half = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    let berry = C64::new(0.0, -phi * c).exp();
    let psi1 = (&w - &v_perp * C64::new(0.0, 1.0)) * half * berry;
    let psi2 = (&w + &v_perp * C64::new(0.0, 1.0)) * half * berry.conj();
    (psi1, psi2)
}

/// The cyclic gate seen from the dark space.
#[derive(Debug, Clone)]
pub struct GateReport {
    /// M_ij = <D_i| U_C(T) |D_j>
    pub projected: CMatrix,
    /// retained dark-space population per initial dark state (column sums
    /// of |M|^2); 1 - eta is the leakage out of the computational space
    pub leakage_by_state: [f64; 2],
    /// |Tr(adj(M) u_C)| / 2 against the ideal holonomy
    pub fidelity: f64,
    /// |<D1|U|D2>|^2 for the initial state |D2> = |g2>
    pub population_d1: f64,
    /// |<D2|U|D2>|^2
    pub population_d2: f64,
}

/// Project the one-loop evolution onto the dark space and compare against
/// the ideal holonomy.
pub fn projected_gate(p: &NonAbelianParams) -> Result<GateReport> {
    let u = cyclic_operator(p)?;
    let frame = dark_frame(p.theta());
    let dark = [&frame.d1, &frame.d2];
    let mut projected = CMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            projected[(i, j)] = dark[i].dotc(&(&u * dark[j]));
        }
    }
    let mut leakage_by_state = [0.0; 2];
    for j in 0..2 {
        leakage_by_state[j] = (0..2).map(|i| projected[(i, j)].norm_sqr()).sum::<f64>().min(1.0);
    }
    let ideal = ideal_holonomy(p.theta());
    let fidelity = ((projected.adjoint() * &ideal).trace().norm() / 2.0).min(1.0);
    Ok(GateReport {
        population_d1: projected[(0, 1)].norm_sqr(),
        population_d2: projected[(1, 1)].norm_sqr(),
        projected,
        leakage_by_state,
        fidelity,
    })
}

/// One row of the population sweep: initial state |D2>, abscissa
/// 1 - cos(theta).
#[derive(Debug, Clone, Copy)]
pub struct Fig2Row {
    pub gamma_ratio: f64,
    pub one_minus_cos_theta: f64,
    pub pop_d1: f64,
    pub pop_d2: f64,
    pub eta: f64,
    pub flagged: bool,
}

/// Population transfer blocks: for each g one block of `theta_points`
/// rows with 1 - cos(theta) ascending over [0, 1]. Rows are emitted in
/// deterministic block/row order independent of the parallel schedule.
pub fn sweep_fig2(ratios: &[f64], theta_points: usize) -> Vec<Fig2Row> {
    let points: Vec<(f64, f64)> = ratios
        .iter()
        .flat_map(|&g| {
            (0..theta_points).map(move |k| {
                let u = if theta_points > 1 {
                    k as f64 / (theta_points - 1) as f64
                } else {
                    0.0
                };
                (g, u)
            })
        })
        .collect();
    points
        .into_par_iter()
        .map(|(g, u)| {
            let theta = (1.0 - u).clamp(-1.0, 1.0).acos();
            let gate = NonAbelianParams::from_ratio(theta, g)
                .and_then(|p| projected_gate(&p));
            match gate {
                Ok(r) => Fig2Row {
                    gamma_ratio: g,
                    one_minus_cos_theta: u,
                    pop_d1: r.population_d1,
                    pop_d2: r.population_d2,
                    eta: r.population_d1 + r.population_d2,
                    flagged: false,
                },
                Err(_) => Fig2Row {
                    gamma_ratio: g,
                    one_minus_cos_theta: u,
                    pop_d1: f64::NAN,
                    pop_d2: f64::NAN,
                    eta: f64::NAN,
                    flagged: true,
                },
            }
        })
        .collect()
}
