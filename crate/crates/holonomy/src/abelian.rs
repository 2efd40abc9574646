//! Exact solution of the abelian loop via its dynamical invariant:
//! characteristic roots, recurrent basis, closed-form propagator, leakage
//! overlap and total phase, plus the (theta, gamma/Omega) sweeps.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{
    abelian_dark_state, abelian_invariant, cranking_rotation, AbelianParams,
};
use crate::numerics::{
    hermitian_eigensystem, solve_monic_real_cubic, unitary_exp, CMatrix, CVector,
    MonicRealCubic, Tolerances,
};

/// Dimensionless roots x_- <= x_0 <= x_+ of the invariant's characteristic
/// cubic x^3 - g x^2 - x + g sin^2(theta), with g = gamma/Omega. The
/// invariant eigenvalues are Omega * x_i; the middle branch connects
/// continuously to 0 as g -> 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSpectrum {
    pub x_minus: f64,
    pub x0: f64,
    pub x_plus: f64,
    omega: f64,
}

impl InvariantSpectrum {
    /// Invariant eigenvalues Omega * x_i, ascending.
    pub fn energies(&self) -> [f64; 3] {
        [
            self.omega * self.x_minus,
            self.omega * self.x0,
            self.omega * self.x_plus,
        ]
    }
}

/// One full cycle through the loop: leakage overlap, total phase, and the
/// adiabatic reference it approaches as g -> 0 (all under the
/// return-amplitude sign convention, see [`total_phase`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianCycleResult {
    pub eta: f64,
    pub phi_total: f64,
    pub phi_adiabatic_ref: f64,
    pub spectrum: InvariantSpectrum,
}

/// Solve the characteristic cubic of the invariant. Errors with
/// `DegenerateMiddleRoot` when the middle root collides with an outer one
/// (the corner g = 1, theta = pi/2).
pub fn characteristic_roots(p: &AbelianParams) -> Result<InvariantSpectrum> {
    let g = p.ratio();
    let s2 = p.theta().sin().powi(2);
    let roots = solve_monic_real_cubic(&MonicRealCubic::new(-g, -1.0, g * s2))?;
    let gap = (roots[1] - roots[0]).abs().min((roots[2] - roots[1]).abs());
    let tol = Tolerances::default().degeneracy_gap;
    if gap < tol {
        return Err(Error::DegenerateMiddleRoot { gap, tolerance: tol });
    }
    Ok(InvariantSpectrum {
        x_minus: roots[0],
        x0: roots[1],
        x_plus: roots[2],
        omega: p.omega(),
    })
}

/// Middle eigenvector of I(0), with the deterministic eigensolver phase
/// convention. Errors when the middle eigenvalue is not isolated.
fn invariant_middle_eigenvector(p: &AbelianParams) -> Result<CVector> {
    let eig = hermitian_eigensystem(&abelian_invariant(p, 0.0))?;
    let gap = (eig.values[1] - eig.values[0])
        .abs()
        .min((eig.values[2] - eig.values[1]).abs());
    let tol = Tolerances::default().degeneracy_gap * p.omega();
    if gap < tol {
        return Err(Error::DegenerateMiddleRoot { gap, tolerance: tol });
    }
    Ok(eig.vector(1))
}

/// Recurrent basis state of the middle invariant branch,
/// |psi_0(t)> = diag(1, e^{i gamma t}, 1) |phi_0> with I(0)|phi_0> = E_0|phi_0>.
/// Periodic over one loop by construction (the cranking phase closes).
pub fn recurrent_basis(p: &AbelianParams, t: f64) -> Result<CVector> {
    let phi0 = invariant_middle_eigenvector(p)?;
    Ok(cranking_rotation(p.gamma(), t) * phi0)
}

/// Closed-form propagator of the loop in the cranked frame:
/// U(t) = diag(1, e^{i gamma t}, 1) e^{-i (H0 + gamma sigma_33) t}.
pub fn closed_form_propagator(p: &AbelianParams, t: f64) -> CMatrix {
    let core = unitary_exp(&abelian_invariant(p, 0.0), t)
        .expect("invariant is Hermitian by construction");
    cranking_rotation(p.gamma(), t) * core
}

/// Leakage overlap eta = |<psi_0(0)|D(0)>|^2: how much of the recurrent
/// branch remains on the dark state. 1 means no nonadiabatic leakage.
pub fn leakage_overlap(p: &AbelianParams) -> Result<f64> {
    let phi0 = invariant_middle_eigenvector(p)?;
    let d0 = abelian_dark_state(p.theta(), 0.0);
    let eta = phi0.dotc(&d0).norm_sqr();
    Ok(eta.min(1.0))
}

/// Total phase accumulated by the recurrent state over one loop, under the
/// return-amplitude convention Phi = unwrapped arg <psi_0(0)|Psi(T)> for
/// |Psi(0)> = |psi_0(0)>. The cranked-frame solution gives Phi = -E_0 T,
/// i.e. -2 pi x_0 / g (negative for x_0 > 0).
pub fn total_phase(p: &AbelianParams) -> Result<f64> {
    if p.gamma() <= 0.0 {
        return Err(Error::NonCyclic);
    }
    let spec = characteristic_roots(p)?;
    Ok(-2.0 * std::f64::consts::PI * spec.x0 / p.ratio())
}

/// Adiabatic limit of |Phi|: lim_{g->0} 2 pi x_0(g)/g by Richardson
/// extrapolation over g in {1e-2, 5e-3, 2.5e-3}. The error expansion is
/// even in g, so two extrapolation levels leave O(g^6).
pub fn adiabatic_phase_limit(theta: f64) -> f64 {
    let f = |g: f64| -> f64 {
        let p = AbelianParams::from_ratio(theta, g).expect("small g is never degenerate");
        let spec = characteristic_roots(&p).expect("small g is never degenerate");
        2.0 * std::f64::consts::PI * spec.x0 / g
    };
    let (f1, f2, f3) = (f(1e-2), f(5e-3), f(2.5e-3));
    let r1a = (4.0 * f2 - f1) / 3.0;
    let r1b = (4.0 * f3 - f2) / 3.0;
    (16.0 * r1b - r1a) / 15.0
}

/// Leakage, phase and spectrum for one cycle. `phi_adiabatic_ref` is the
/// g -> 0 limit of `phi_total` (sign-matched, so phi_total approaches it).
pub fn cycle(p: &AbelianParams) -> Result<AbelianCycleResult> {
    Ok(AbelianCycleResult {
        eta: leakage_overlap(p)?,
        phi_total: total_phase(p)?,
        phi_adiabatic_ref: -adiabatic_phase_limit(p.theta()),
        spectrum: characteristic_roots(p)?,
    })
}

/// One row of the (theta, g) sweep. Degenerate points are flagged rather
/// than failing the whole grid; their value columns are NaN.
#[derive(Debug, Clone, Copy)]
pub struct Fig1Row {
    pub theta: f64,
    pub gamma_ratio: f64,
    pub eta: f64,
    pub phi_total: f64,
    pub phi_adiabatic_ref: f64,
    pub degenerate: bool,
}

/// Sweep the cycle quantities over a (theta, g) grid. Rows come back in
/// lexicographic (theta index, g index) order regardless of the parallel
/// execution order. The g = 0 column reports eta from the invariant (it is
/// 1 up to rounding) and the adiabatic phase in place of the cyclic one.
pub fn sweep_fig1(theta_grid: &[f64], ratio_grid: &[f64]) -> Vec<Fig1Row> {
    let points: Vec<(f64, f64)> = theta_grid
        .iter()
        .flat_map(|&th| ratio_grid.iter().map(move |&g| (th, g)))
        .collect();
    points
        .into_par_iter()
        .map(|(theta, g)| {
            let phi_ref = -adiabatic_phase_limit(theta);
            let make = |eta: Result<f64>, phi: Result<f64>| match (eta, phi) {
                (Ok(eta), Ok(phi_total)) => Fig1Row {
                    theta,
                    gamma_ratio: g,
                    eta,
                    phi_total,
                    phi_adiabatic_ref: phi_ref,
                    degenerate: false,
                },
                _ => Fig1Row {
                    theta,
                    gamma_ratio: g,
                    eta: f64::NAN,
                    phi_total: f64::NAN,
                    phi_adiabatic_ref: phi_ref,
                    degenerate: true,
                },
            };
            match AbelianParams::from_ratio(theta, g) {
                Ok(p) if g > 0.0 => make(leakage_overlap(&p), total_phase(&p)),
                Ok(p) => make(leakage_overlap(&p), Ok(phi_ref)),
                Err(_) => make(Err(Error::NonCyclic), Err(Error::NonCyclic)),
            }
        })
        .collect()
}
