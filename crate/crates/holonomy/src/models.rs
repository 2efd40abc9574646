//! Level bases, loop parameters, and the Hamiltonians, matching terms and
//! dark states of the four-level lambda scheme.
//!
//! Two bases are in play. The abelian loop leaves g1 exactly decoupled, so
//! it lives on the reduced 3-level basis (g2, g3, e); the non-abelian loop
//! uses the full (g1, g2, g3, e) basis. `sigma(dim, mu, nu)` is the matrix
//! unit |mu><nu| on whichever basis the dimension selects.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};

/// Index map for the reduced basis (g2, g3, e) carrying the abelian loop.
pub mod reduced {
    pub const G2: usize = 0;
    pub const G3: usize = 1;
    pub const E: usize = 2;
    pub const DIM: usize = 3;
}

/// Index map for the full basis (g1, g2, g3, e).
pub mod full {
    pub const G1: usize = 0;
    pub const G2: usize = 1;
    pub const G3: usize = 2;
    pub const E: usize = 3;
    pub const DIM: usize = 4;
}

/// Matrix unit |row><col| on a dim-dimensional basis.
pub fn sigma(dim: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(row, col)] = C64::from(1.0);
    m
}

/// Basis state |k> on a dim-dimensional basis.
pub fn basis_state(dim: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[k] = C64::from(1.0);
    v
}

/// Embed a reduced-basis (g2, g3, e) operator into the full four-level
/// basis, leaving g1 untouched.
pub fn lift_to_full_basis(m3: &CMatrix) -> CMatrix {
    assert_eq!(m3.nrows(), reduced::DIM);
    let map = [full::G2, full::G3, full::E];
    let mut m4 = CMatrix::zeros(full::DIM, full::DIM);
    for i in 0..reduced::DIM {
        for j in 0..reduced::DIM {
            m4[(map[i], map[j])] = m3[(i, j)];
        }
    }
    m4
}

fn check_loop_params(omega: f64, theta: f64, gamma: f64) -> Result<()> {
    if !(omega.is_finite() && theta.is_finite() && gamma.is_finite()) {
        return Err(Error::InvalidParameter("non-finite loop parameter".into()));
    }
    if omega <= 0.0 {
        return Err(Error::InvalidParameter(format!("omega must be > 0, got {omega}")));
    }
    if gamma < 0.0 {
        return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(())
}

/// Parameters of the abelian loop: Rabi strength, mixing angle, and the
/// drive-phase angular frequency. The ratio g = gamma/omega is recorded at
/// construction and never re-derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianParams {
    omega: f64,
    theta: f64,
    gamma: f64,
    ratio: f64,
}

impl AbelianParams {
    pub fn new(omega: f64, theta: f64, gamma: f64) -> Result<Self> {
        check_loop_params(omega, theta, gamma)?;
        Ok(Self { omega, theta, gamma, ratio: gamma / omega })
    }

    /// Construct from the dimensionless ratio g = gamma/omega with omega = 1.
    pub fn from_ratio(theta: f64, ratio: f64) -> Result<Self> {
        Self::new(1.0, theta, ratio)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// g = gamma/omega
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Loop period 2 pi / gamma; cyclic runs need gamma > 0.
    pub fn period(&self) -> Result<f64> {
        if self.gamma > 0.0 {
            Ok(2.0 * std::f64::consts::PI / self.gamma)
        } else {
            Err(Error::NonCyclic)
        }
    }
}

/// Parameters of the non-abelian loop; same roles as [`AbelianParams`]
/// but governing the four-level Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonAbelianParams {
    omega: f64,
    theta: f64,
    gamma: f64,
    ratio: f64,
}

impl NonAbelianParams {
    pub fn new(omega: f64, theta: f64, gamma: f64) -> Result<Self> {
        check_loop_params(omega, theta, gamma)?;
        Ok(Self { omega, theta, gamma, ratio: gamma / omega })
    }

    pub fn from_ratio(theta: f64, ratio: f64) -> Result<Self> {
        Self::new(1.0, theta, ratio)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn period(&self) -> Result<f64> {
        if self.gamma > 0.0 {
            Ok(2.0 * std::f64::consts::PI / self.gamma)
        } else {
            Err(Error::NonCyclic)
        }
    }
}

/// Abelian loop Hamiltonian on (g2, g3, e) at drive phase gamma*t:
/// Omega sin(theta) couples g2<->e, Omega cos(theta) e^{i gamma t} couples
/// g3<->e.
pub fn abelian_hamiltonian(p: &AbelianParams, t: f64) -> CMatrix {
    let s = p.omega() * p.theta().sin();
    let c = p.omega() * p.theta().cos();
    let phase = C64::new(0.0, p.gamma() * t).exp();
    let mut h = CMatrix::zeros(reduced::DIM, reduced::DIM);
    h[(reduced::G2, reduced::E)] = C64::from(s);
    h[(reduced::E, reduced::G2)] = C64::from(s);
    h[(reduced::G3, reduced::E)] = C64::from(c) * phase;
    h[(reduced::E, reduced::G3)] = C64::from(c) * phase.conj();
    h
}

/// The time-independent cranked core H0 = H(t = 0): the loop Hamiltonian
/// is diag(1, e^{i gamma t}, 1) H0 diag(1, e^{-i gamma t}, 1).
pub fn abelian_core(p: &AbelianParams) -> CMatrix {
    abelian_hamiltonian(p, 0.0)
}

/// Dynamical invariant I(t) = H(t) + gamma |g3><g3|. Its eigenbasis is the
/// recurrent basis of the loop.
pub fn abelian_invariant(p: &AbelianParams, t: f64) -> CMatrix {
    let mut m = abelian_hamiltonian(p, t);
    m[(reduced::G3, reduced::G3)] += C64::from(p.gamma());
    m
}

/// Diagonal cranking phase diag(1, e^{i gamma t}, 1) on the reduced basis.
pub fn cranking_rotation(gamma: f64, t: f64) -> CMatrix {
    let mut m = CMatrix::identity(reduced::DIM, reduced::DIM);
    m[(reduced::G3, reduced::G3)] = C64::new(0.0, gamma * t).exp();
    m
}

/// Abelian Hamiltonian at fixed mixing angle and drive phase zero; the
/// ramp Hamiltonian before any matching term.
pub fn abelian_hamiltonian_static(omega: f64, theta: f64) -> CMatrix {
    let s = omega * theta.sin();
    let c = omega * theta.cos();
    let mut h = CMatrix::zeros(reduced::DIM, reduced::DIM);
    h[(reduced::G2, reduced::E)] = C64::from(s);
    h[(reduced::E, reduced::G2)] = C64::from(s);
    h[(reduced::G3, reduced::E)] = C64::from(c);
    h[(reduced::E, reduced::G3)] = C64::from(c);
    h
}

/// Non-abelian loop Hamiltonian on (g1, g2, g3, e): the bright ground
/// combination cos(gamma t)|g1> + sin(gamma t)|g2> couples to e with
/// strength Omega sin(theta), g3 with strength Omega cos(theta).
pub fn nonabelian_hamiltonian(p: &NonAbelianParams, t: f64) -> CMatrix {
    let phi = p.gamma() * t;
    let a1 = p.omega() * p.theta().sin() * phi.cos();
    let a2 = p.omega() * p.theta().sin() * phi.sin();
    let b = p.omega() * p.theta().cos();
    let mut h = CMatrix::zeros(full::DIM, full::DIM);
    for (lvl, amp) in [(full::G1, a1), (full::G2, a2), (full::G3, b)] {
        h[(lvl, full::E)] = C64::from(amp);
        h[(full::E, lvl)] = C64::from(amp);
    }
    h
}

/// Non-abelian Hamiltonian at fixed angle, drive phase zero (g2 dark).
pub fn nonabelian_hamiltonian_static(omega: f64, theta: f64) -> CMatrix {
    let a = omega * theta.sin();
    let b = omega * theta.cos();
    let mut h = CMatrix::zeros(full::DIM, full::DIM);
    h[(full::G1, full::E)] = C64::from(a);
    h[(full::E, full::G1)] = C64::from(a);
    h[(full::G3, full::E)] = C64::from(b);
    h[(full::E, full::G3)] = C64::from(b);
    h
}

/// Mixing-angle ramp shapes. Smoothstep is 3s^2 - 2s^3 in normalized time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RampShape {
    Linear,
    Smoothstep,
}

/// A theta(t) schedule over [0, duration] with its analytic derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampProfile {
    pub theta_start: f64,
    pub theta_end: f64,
    pub duration: f64,
    pub shape: RampShape,
}

impl RampProfile {
    pub fn new(theta_start: f64, theta_end: f64, duration: f64, shape: RampShape) -> Result<Self> {
        if !(theta_start.is_finite() && theta_end.is_finite() && duration.is_finite()) {
            return Err(Error::InvalidParameter("non-finite ramp parameter".into()));
        }
        if duration <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "ramp duration must be > 0, got {duration}"
            )));
        }
        Ok(Self { theta_start, theta_end, duration, shape })
    }

    pub fn theta(&self, t: f64) -> f64 {
        let s = t / self.duration;
        let u = match self.shape {
            RampShape::Linear => s,
            RampShape::Smoothstep => (3.0 - 2.0 * s) * s * s,
        };
        self.theta_start + (self.theta_end - self.theta_start) * u
    }

    pub fn theta_dot(&self, t: f64) -> f64 {
        let s = t / self.duration;
        let du = match self.shape {
            RampShape::Linear => 1.0,
            RampShape::Smoothstep => 6.0 * s * (1.0 - s),
        };
        (self.theta_end - self.theta_start) * du / self.duration
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if (0.0..=self.duration).contains(&t) {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange { t, duration: self.duration })
        }
    }
}

/// Ramp Hamiltonian plus the matching term i theta_dot (|g2><g3| - |g3><g2|)
/// that cancels the gauge potential of the moving angle, so the dark state
/// is transported exactly at any ramp speed.
pub fn abelian_matching_hamiltonian(ramp: &RampProfile, t: f64, omega: f64) -> Result<CMatrix> {
    ramp.check_time(t)?;
    let mut h = abelian_hamiltonian_static(omega, ramp.theta(t));
    let td = ramp.theta_dot(t);
    h[(reduced::G2, reduced::G3)] += C64::new(0.0, td);
    h[(reduced::G3, reduced::G2)] += C64::new(0.0, -td);
    Ok(h)
}

/// Non-abelian analog with the matching term on the (g1, g3) block.
pub fn nonabelian_matching_hamiltonian(ramp: &RampProfile, t: f64, omega: f64) -> Result<CMatrix> {
    ramp.check_time(t)?;
    let mut h = nonabelian_hamiltonian_static(omega, ramp.theta(t));
    let td = ramp.theta_dot(t);
    h[(full::G1, full::G3)] += C64::new(0.0, td);
    h[(full::G3, full::G1)] += C64::new(0.0, -td);
    Ok(h)
}

/// Abelian dark state cos(theta)|g2> - sin(theta) e^{i phase}|g3> on the
/// reduced basis; a null vector of the loop Hamiltonian at drive phase
/// `phase`.
pub fn abelian_dark_state(theta: f64, phase: f64) -> CVector {
    let mut v = CVector::zeros(reduced::DIM);
    v[reduced::G2] = C64::from(theta.cos());
    v[reduced::G3] = -C64::new(0.0, phase).exp() * theta.sin();
    v
}

/// The orthonormal dark pair of the non-abelian loop at drive phase zero:
/// |D1> = cos(theta)|g1> - sin(theta)|g3> and |D2> = |g2>.
pub fn nonabelian_dark_states(theta: f64) -> (CVector, CVector) {
    let mut d1 = CVector::zeros(full::DIM);
    d1[full::G1] = C64::from(theta.cos());
    d1[full::G3] = C64::from(-theta.sin());
    (d1, basis_state(full::DIM, full::G2))
}

/// Two-ion drive: Rabi magnitudes and phases of the two bi-chromatic beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDriveParams {
    pub amp1: f64,
    pub amp2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl TwoQubitDriveParams {
    pub fn new(amp1: f64, amp2: f64, phi1: f64, phi2: f64) -> Result<Self> {
        if !(amp1.is_finite() && amp2.is_finite() && phi1.is_finite() && phi2.is_finite()) {
            return Err(Error::InvalidParameter("non-finite drive parameter".into()));
        }
        if amp1 < 0.0 || amp2 < 0.0 {
            return Err(Error::InvalidParameter("Rabi magnitudes must be >= 0".into()));
        }
        if amp1 * amp1 + amp2 * amp2 == 0.0 {
            return Err(Error::DegenerateDrive);
        }
        Ok(Self { amp1, amp2, phi1, phi2 })
    }
}

/// Effective parameters of the enclosed (g2g2, g3g3, ee) space. The branch
/// is fixed by sin(theta_eff) <= 0, cos(theta_eff) >= 0; every observable
/// used downstream depends on theta_eff only through sin^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// kappa = sqrt(amp1^4 + amp2^4), the coupling playing Omega's role
    pub kappa: f64,
    /// in [-pi/2, 0]; sin(theta_eff) = -amp1^2/kappa, cos = amp2^2/kappa
    pub theta_eff: f64,
    /// phi_eff = 2 (phi1 - phi2)
    pub phi_eff: f64,
}

impl EffectiveParams {
    pub fn from_drive(d: &TwoQubitDriveParams) -> Result<Self> {
        let i1 = d.amp1 * d.amp1;
        let i2 = d.amp2 * d.amp2;
        let kappa = i1.hypot(i2);
        if kappa <= 0.0 {
            return Err(Error::DegenerateDrive);
        }
        Ok(Self {
            kappa,
            theta_eff: (-i1).atan2(i2),
            phi_eff: 2.0 * (d.phi1 - d.phi2),
        })
    }
}

/// Effective two-ion Hamiltonian on the enclosed basis (g2g2, g3g3, ee),
/// returned together with the extracted effective parameters. Coefficients
/// reproduce -amp1^2 e^{i 2 phi1} on |ee><g2g2| and +amp2^2 e^{i 2 phi2}
/// on |ee><g3g3|.
pub fn two_qubit_effective(d: &TwoQubitDriveParams) -> Result<(CMatrix, EffectiveParams)> {
    let eff = EffectiveParams::from_drive(d)?;
    let carrier = C64::new(0.0, 2.0 * d.phi1).exp();
    let s = C64::from(eff.kappa * eff.theta_eff.sin()) * carrier;
    let c = C64::from(eff.kappa * eff.theta_eff.cos())
        * carrier
        * C64::new(0.0, -eff.phi_eff).exp();
    let mut h = CMatrix::zeros(3, 3);
    // basis order (g2g2, g3g3, ee)
    h[(2, 0)] = s;
    h[(0, 2)] = s.conj();
    h[(2, 1)] = c;
    h[(1, 2)] = c.conj();
    Ok((h, eff))
}

/// Invert [`two_qubit_effective`]: recover the effective parameters and
/// the carrier phase phi1 from the matrix entries.
pub fn effective_params_from_matrix(h: &CMatrix) -> Result<(EffectiveParams, f64)> {
    let s = h[(2, 0)];
    let c = h[(2, 1)];
    let i1 = s.norm();
    let i2 = c.norm();
    let kappa = i1.hypot(i2);
    if kappa <= 0.0 {
        return Err(Error::DegenerateDrive);
    }
    // s = -i1 e^{i 2 phi1}, so the carrier is the arg of -s
    let phi1 = if i1 > 0.0 { (-s).arg() / 2.0 } else { c.arg() / 2.0 };
    let phi_eff = if i1 > 0.0 && i2 > 0.0 { ((-s) * c.conj()).arg() } else { 0.0 };
    Ok((
        EffectiveParams { kappa, theta_eff: (-i1).atan2(i2), phi_eff },
        phi1,
    ))
}
