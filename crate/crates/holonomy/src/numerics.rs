//! Dense complex linear algebra at dimensions 2-4 plus a real-cubic root
//! solver: the computational substrate for every other module.
//!
//! All operations are pure; matrices and vectors are plain `nalgebra`
//! values and safe to share across threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Numerical tolerances used across the crate. One record so stress tests
/// have a single knob.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// max entrywise |A - adj(A)| for a matrix to count as Hermitian
    pub hermiticity: f64,
    /// eigenpair residual, relative to the matrix norm
    pub eigen_residual: f64,
    /// spectral-norm deviation of U'U from the identity
    pub unitarity: f64,
    /// normalized cubic residual for accepted roots
    pub cubic_residual: f64,
    /// negative-discriminant slack before roots count as complex
    pub discriminant: f64,
    /// minimum gap isolating the middle invariant root
    pub degeneracy_gap: f64,
    /// tie-break window for the eigenvector phase convention
    pub phase_tie: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            eigen_residual: 1e-10,
            unitarity: 1e-10,
            cubic_residual: 1e-10,
            discriminant: 1e-12,
            degeneracy_gap: 1e-10,
            phase_tie: 1e-12,
        }
    }
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Max entrywise |A - adj(A)|.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ensure_hermitian(a: &CMatrix, tol: &Tolerances) -> Result<()> {
    let dev = hermiticity_deviation(a);
    if dev < tol.hermiticity {
        Ok(())
    } else {
        Err(Error::NotHermitian { deviation: dev })
    }
}

/// Spectral norm (largest singular value), computed from the Hermitian
/// eigenvalues of adj(A)A.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .fold(0.0_f64, |m, &v| m.max(v))
        .max(0.0)
        .sqrt()
}

/// Spectral-norm distance of adj(U)U from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    spectral_norm(&(u.adjoint() * u - identity(n)))
}

/// Eigendecomposition of a Hermitian matrix with a deterministic output
/// convention.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// real eigenvalues, ascending
    pub values: Vec<f64>,
    /// orthonormal eigenvectors as columns, ordered like `values`
    pub vectors: CMatrix,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }
}

/// Hermitian eigensolve with eigenvalues ascending. Each eigenvector is
/// rotated so its largest-magnitude component (lowest index on ties) is
/// real and positive, which pins the output for snapshot tests.
pub fn hermitian_eigensystem(h: &CMatrix) -> Result<Eigensystem> {
    let tol = Tolerances::default();
    ensure_hermitian(h, &tol)?;
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut col: CVector = eig.eigenvectors.column(src).into_owned();
        col /= C64::from(col.norm());
        fix_phase(&mut col, tol.phase_tie);
        vectors.set_column(k, &col);
    }
    Ok(Eigensystem { values, vectors })
}

fn fix_phase(v: &mut CVector, tie: f64) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag + tie {
            best = i;
            best_mag = m;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best] / C64::from(best_mag);
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
        // kill the residual imaginary dust on the pinned component
        v[best] = C64::new(v[best].re.abs(), 0.0);
    }
}

/// e^{-iHt} for Hermitian H, assembled from the eigendecomposition.
/// t = 0 returns the identity exactly.
pub fn unitary_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let n = h.nrows();
    if t == 0.0 {
        ensure_hermitian(h, &Tolerances::default())?;
        return Ok(identity(n));
    }
    let eig = hermitian_eigensystem(h)?;
    let phases = CVector::from_iterator(
        n,
        eig.values.iter().map(|&e| (C64::new(0.0, -1.0) * e * t).exp()),
    );
    let d = CMatrix::from_diagonal(&phases);
    Ok(&eig.vectors * d * eig.vectors.adjoint())
}

/// Monic real cubic x^3 + c2 x^2 + c1 x + c0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonicRealCubic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl MonicRealCubic {
    pub fn new(c2: f64, c1: f64, c0: f64) -> Self {
        Self { c2, c1, c0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (3.0 * x + 2.0 * self.c2) * x + self.c1
    }

    /// Polynomial discriminant; >= 0 iff all three roots are real.
    pub fn discriminant(&self) -> f64 {
        let MonicRealCubic { c2, c1, c0 } = *self;
        18.0 * c2 * c1 * c0 - 4.0 * c2.powi(3) * c0 + c2 * c2 * c1 * c1
            - 4.0 * c1.powi(3)
            - 27.0 * c0 * c0
    }
}

/// Three real roots of a monic cubic, ascending. Trigonometric (Viete)
/// form, branch-free for the all-real case, plus one Newton polish per
/// root. Near-degenerate pairs come back as distinct values.
pub fn solve_monic_real_cubic(p: &MonicRealCubic) -> Result<[f64; 3]> {
    let tol = Tolerances::default();
    let scale = 1.0 + p.c2.abs().max(p.c1.abs()).max(p.c0.abs());
    let disc_tol = tol.discriminant * scale.powi(6);
    let disc = p.discriminant();
    if disc < -disc_tol {
        return Err(Error::ComplexRootsDetected {
            discriminant: disc,
            tolerance: disc_tol,
        });
    }

    // depressed form y^3 + q y + r with x = y - c2/3
    let shift = p.c2 / 3.0;
    let q = p.c1 - p.c2 * p.c2 / 3.0;
    let r = p.c0 + p.c2 * (2.0 * p.c2 * p.c2 - 9.0 * p.c1) / 27.0;

    let mut roots = if q < 0.0 {
        let m = 2.0 * (-q / 3.0).sqrt();
        // |3r / (q m)| <= 1 up to rounding when the discriminant is >= 0
        let cos_arg = (3.0 * r / (q * m)).clamp(-1.0, 1.0);
        let phi = cos_arg.acos() / 3.0;
        let tau = 2.0 * std::f64::consts::PI / 3.0;
        [
            m * phi.cos() - shift,
            m * (phi - tau).cos() - shift,
            m * (phi + tau).cos() - shift,
        ]
    } else {
        // q >= 0 with disc >= 0 forces r ~ 0: (near-)triple root
        [-shift; 3]
    };

    for x in roots.iter_mut() {
        for _ in 0..2 {
            let d = p.deriv(*x);
            // skip the polish near a critical point (double roots live there)
            if d.abs() > 1e-8 * scale * scale {
                *x -= p.eval(*x) / d;
            }
        }
    }
    roots.sort_by(f64::total_cmp);

    let res_tol = tol.cubic_residual * scale.powi(3);
    for &x in &roots {
        debug_assert!(p.eval(x).abs() < res_tol, "cubic residual {}", p.eval(x));
    }
    Ok(roots)
}
