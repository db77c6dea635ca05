//! Hermitian matrix values, eigenvalue signatures, the Ψ isomorphism
//! between traceless hermitian 2×2 matrices and R³, the retraction of the
//! signature-(1,1) component onto the unit sphere, and the block embedding
//! of that sphere into higher-rank signature components.
//!
//! The target involution throughout is entrywise complex conjugation
//! `H ↦ H̄` (equivalently `H ↦ Hᵀ` on hermitian matrices); under Ψ it
//! becomes the reflection `(x, y, z) ↦ (x, y, −z)`.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::torus_geometry::{EquivariantValue, SphereVec};

type C64 = Complex<f64>;

/// Relative tolerance for the hermiticity check in constructors.
const HERMITICITY_TOL: f64 = 1e-12;

/// Relative tolerance on `|trace|` in [`psi`].
const TRACE_TOL: f64 = 1e-12;

/// Errors from matrix-side operations.
#[derive(Debug, Error)]
pub enum HermitianError {
    /// An eigenvalue magnitude is at or below `1e−10·‖H‖`, so the matrix
    /// has no well-defined signature.
    #[error("matrix is singular within tolerance: min |eigenvalue| {min_abs:.3e} ≤ {tol:.3e}")]
    SingularMatrix { min_abs: f64, tol: f64 },
    /// [`psi`] was given a matrix with nonzero trace.
    #[error("matrix is not traceless: |trace| = {trace_abs:.3e}")]
    NonTraceless { trace_abs: f64 },
    /// [`retract_11`] was given a matrix whose signature is not (1,1).
    #[error("expected signature (1,1), got ({p},{q})")]
    WrongSignature { p: usize, q: usize },
    /// [`embed_isu2`] was given block sizes with `p < 1` or `q < 1`.
    #[error("block sizes must satisfy p ≥ 1 and q ≥ 1, got ({p},{q})")]
    BadBlock { p: usize, q: usize },
    /// A constructor was given a matrix that is not hermitian within
    /// `1e−12` relative tolerance.
    #[error("matrix is not hermitian: defect {defect:.3e} (relative tolerance 1e-12)")]
    NotHermitian { defect: f64 },
}

/// A hermitian n×n matrix with complex entries.
///
/// Construction validates hermiticity to `1e−12` relative and then
/// symmetrizes (`(H + H*)/2`), so stored entries are exactly hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: DMatrix<C64>,
}

impl HermitianMatrix {
    /// Wraps a square complex matrix, checking hermiticity.
    ///
    /// # Errors
    ///
    /// [`HermitianError::NotHermitian`] if `‖M − M*‖ > 1e−12·‖M‖`.
    pub fn from_matrix(mat: DMatrix<C64>) -> Result<Self, HermitianError> {
        assert_eq!(mat.nrows(), mat.ncols(), "matrix must be square");
        let adjoint = mat.adjoint();
        let defect = (&mat - &adjoint).norm();
        let scale = mat.norm().max(1.0);
        if defect > HERMITICITY_TOL * scale {
            return Err(HermitianError::NotHermitian {
                defect: defect / scale,
            });
        }
        let sym = (&mat + &adjoint).scale(0.5);
        Ok(Self { mat: sym })
    }

    /// Builds a matrix from a function over (row, column) indices, then
    /// validates hermiticity.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self, HermitianError> {
        Self::from_matrix(DMatrix::from_fn(n, n, f))
    }

    /// A real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mat = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { mat }
    }

    /// The block matrix `Diag(I_p, −I_q)`.
    pub fn block_identity(p: usize, q: usize) -> Self {
        let entries: Vec<f64> = (0..p + q).map(|i| if i < p { 1.0 } else { -1.0 }).collect();
        Self::diag(&entries)
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Real eigenvalues in ascending order. Dimensions 1 and 2 use closed
    /// forms (the quadratic formula on trace and determinant); larger
    /// dimensions use a hermitian eigensolver.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.n() {
            0 => vec![],
            1 => vec![self.mat[(0, 0)].re],
            2 => {
                let c = self.trace() / 2.0;
                let det = self.det2();
                let disc = (c * c - det).max(0.0).sqrt();
                vec![c - disc, c + disc]
            }
            _ => {
                let eig = self.mat.clone().symmetric_eigen();
                let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
                vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                vals
            }
        }
    }

    /// Determinant of a 2×2 hermitian matrix (real).
    fn det2(&self) -> f64 {
        debug_assert_eq!(self.n(), 2);
        let m = &self.mat;
        m[(0, 0)].re * m[(1, 1)].re - (m[(0, 1)] * m[(1, 0)]).re
    }

    /// Complex 3×3 determinant by the rule of Sarrus (no allocation).
    fn det3(&self) -> C64 {
        let m = &self.mat;
        m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
    }

    /// Complex 4×4 determinant by cofactor expansion into 2×2 blocks
    /// (no allocation).
    fn det4(&self) -> C64 {
        let m = &self.mat;
        let two = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)]
        };
        // Laplace expansion along the first two rows.
        two(0, 1, 0, 1) * two(2, 3, 2, 3) - two(0, 1, 0, 2) * two(2, 3, 1, 3)
            + two(0, 1, 0, 3) * two(2, 3, 1, 2)
            + two(0, 1, 1, 2) * two(2, 3, 0, 3)
            - two(0, 1, 1, 3) * two(2, 3, 0, 2)
            + two(0, 1, 2, 3) * two(2, 3, 0, 1)
    }

    /// Determinant (real for hermitian input). Closed forms for n ≤ 4,
    /// eigenvalue product otherwise.
    pub fn det(&self) -> f64 {
        match self.n() {
            0 => 1.0,
            1 => self.mat[(0, 0)].re,
            2 => self.det2(),
            3 => self.det3().re,
            4 => self.det4().re,
            _ => self.eigenvalues().iter().product(),
        }
    }

    /// JSON shape `{n, re: [[…]], im: [[…]]}` (row-major).
    pub fn to_json(&self) -> MatrixJson {
        let n = self.n();
        let row = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&self.mat[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            n,
            re: row(|c| c.re),
            im: row(|c| c.im),
        }
    }
}

/// JSON representation of a complex matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<HermitianMatrix, HermitianError> {
        let n = self.n;
        HermitianMatrix::from_fn(n, |i, j| C64::new(self.re[i][j], self.im[i][j]))
    }
}

/// An eigenvalue signature: counts of positive and negative eigenvalues of
/// a nonsingular hermitian matrix (`p + q = n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

/// Computes the eigenvalue signature of a nonsingular hermitian matrix.
///
/// # Errors
///
/// [`HermitianError::SingularMatrix`] when some eigenvalue has magnitude at
/// most `1e−10·‖H‖` (Frobenius), i.e. the point does not lie in any
/// nonsingular signature component.
pub fn signature(h: &HermitianMatrix) -> Result<Signature, HermitianError> {
    let tol = 1e-10 * h.norm();
    let eigs = h.eigenvalues();
    let min_abs = eigs.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
    if min_abs <= tol || min_abs.is_nan() {
        return Err(HermitianError::SingularMatrix { min_abs, tol });
    }
    let p = eigs.iter().filter(|l| **l > 0.0).count();
    let q = eigs.len() - p;
    Ok(Signature { p, q })
}

/// Coordinates of a traceless hermitian 2×2 matrix under Ψ:
/// `[[a, b], [b̄, −a]] ↦ (a, Re b, Im b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Vector {
    pub a: f64,
    pub re_b: f64,
    pub im_b: f64,
}

impl Su2Vector {
    pub const fn new(a: f64, re_b: f64, im_b: f64) -> Self {
        Self { a, re_b, im_b }
    }

    pub fn norm(&self) -> f64 {
        (self.a * self.a + self.re_b * self.re_b + self.im_b * self.im_b).sqrt()
    }

    /// The same point in sphere coordinates (`x = a`, `y = Re b`,
    /// `z = Im b`).
    pub fn to_sphere_vec(&self) -> SphereVec {
        SphereVec::new(self.a, self.re_b, self.im_b)
    }

    pub fn from_sphere_vec(v: SphereVec) -> Self {
        Self::new(v.x, v.y, v.z)
    }
}

/// Ψ: reads off `(a, Re b, Im b)` from a traceless hermitian 2×2 matrix.
///
/// # Errors
///
/// [`HermitianError::NonTraceless`] when `|trace| > 1e−12·‖M‖`.
pub fn psi(m: &HermitianMatrix) -> Result<Su2Vector, HermitianError> {
    assert_eq!(m.n(), 2, "psi is defined on 2×2 matrices");
    let trace_abs = m.trace().abs();
    if trace_abs > TRACE_TOL * m.norm().max(1.0) {
        return Err(HermitianError::NonTraceless { trace_abs });
    }
    let a = m.entry(0, 0).re;
    let b = m.entry(0, 1);
    Ok(Su2Vector::new(a, b.re, b.im))
}

/// Ψ⁻¹: assembles the traceless hermitian matrix `[[a, b], [b̄, −a]]`.
pub fn psi_inv(v: Su2Vector) -> HermitianMatrix {
    let b = C64::new(v.re_b, v.im_b);
    let mat = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(v.a, 0.0), b, b.conj(), C64::new(-v.a, 0.0)],
    );
    HermitianMatrix { mat }
}

/// The target involution: entrywise complex conjugation.
pub fn target_involution(h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix {
        mat: h.mat.map(|c| c.conj()),
    }
}

/// The involution Ψ conjugates entrywise conjugation into: reflection in
/// the `im_b = 0` plane.
pub fn sphere_involution(v: Su2Vector) -> Su2Vector {
    Su2Vector::new(v.a, v.re_b, -v.im_b)
}

impl EquivariantValue for HermitianMatrix {
    fn involve(&self) -> Self {
        target_involution(self)
    }
    fn distance_to(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).norm()
    }
}

/// A sampled retraction path produced by [`retract_11`].
///
/// The path is stored as matrices at uniformly spaced parameter values
/// `t = 0, …, 1`; the endpoint is traceless with determinant −1, so its
/// Ψ-coordinates are a unit vector, recovered by [`Self::endpoint_vector`].
#[derive(Debug, Clone)]
pub struct RetractionPath {
    pub matrices: Vec<HermitianMatrix>,
}

impl RetractionPath {
    /// Ψ-coordinates of the path endpoint (a unit vector by construction).
    pub fn endpoint_vector(&self) -> Su2Vector {
        let last = self.matrices.last().expect("path is nonempty");
        psi(last).expect("retraction endpoint is traceless")
    }
}

/// Retraction of the signature-(1,1) component of 2×2 hermitian matrices
/// onto the unit sphere of traceless matrices, sampled at `steps + 1`
/// parameter values.
///
/// Phase one (`t ∈ [0, ½]`) removes the trace along `H − (2t)·c·I₂` with
/// `c = trace(H)/2`; phase two (`t ∈ [½, 1]`) rescales the traceless part
/// radially onto the unit sphere. The determinant stays negative along the
/// whole path, so the path never leaves the signature-(1,1) component.
///
/// # Errors
///
/// [`HermitianError::WrongSignature`] (or a propagated
/// [`HermitianError::SingularMatrix`]) when `signature(H) ≠ (1,1)`.
pub fn retract_11(h: &HermitianMatrix, steps: usize) -> Result<RetractionPath, HermitianError> {
    assert_eq!(h.n(), 2, "retract_11 is defined on 2×2 matrices");
    let sig = signature(h)?;
    if (sig.p, sig.q) != (1, 1) {
        return Err(HermitianError::WrongSignature { p: sig.p, q: sig.q });
    }
    let c = h.trace() / 2.0;
    let traceless = HermitianMatrix {
        mat: &h.mat - DMatrix::identity(2, 2).map(|x: f64| C64::new(x * c, 0.0)),
    };
    // −det of the traceless part is ‖Ψ(H − cI₂)‖² > 0 on this component.
    let r = (-traceless.det2()).sqrt();
    let steps = steps.max(2);
    let matrices = (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            if t <= 0.5 {
                HermitianMatrix {
                    mat: &h.mat
                        - DMatrix::identity(2, 2).map(|x: f64| C64::new(x * c * 2.0 * t, 0.0)),
                }
            } else {
                let denom = (2.0 - 2.0 * t) + (2.0 * t - 1.0) * r;
                HermitianMatrix {
                    mat: traceless.mat.map(|x| x / denom),
                }
            }
        })
        .collect();
    Ok(RetractionPath { matrices })
}

/// Equivariant block embedding of Ψ-space into the closure of the
/// signature-(p,q) component: `v ↦ Diag(I_{p−1}, Ψ⁻¹(v), −I_{q−1})`.
///
/// The result has spectrum `{+1 (p−1 times), ±‖v‖, −1 (q−1 times)}`, hence
/// signature (p,q) exactly when `v ≠ 0`.
///
/// # Errors
///
/// [`HermitianError::BadBlock`] when `p < 1` or `q < 1`.
pub fn embed_isu2(v: Su2Vector, p: usize, q: usize) -> Result<HermitianMatrix, HermitianError> {
    if p < 1 || q < 1 {
        return Err(HermitianError::BadBlock { p, q });
    }
    let n = p + q;
    let xi = psi_inv(v);
    let mat = DMatrix::from_fn(n, n, |i, j| {
        let block = (p - 1)..(p + 1);
        if block.contains(&i) && block.contains(&j) {
            xi.mat[(i - (p - 1), j - (p - 1))]
        } else if i == j {
            C64::new(if i < p - 1 { 1.0 } else { -1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(HermitianMatrix { mat })
}
