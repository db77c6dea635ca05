//! The Weierstrass ℘-function on the square lattice `Λ = ℤ + iℤ` and the
//! four equivariant torus-to-sphere maps built from it.
//!
//! Two evaluators are provided. The reference evaluator
//! [`weierstrass_p`] / [`weierstrass_p_prime`] is the textbook symmetric
//! lattice truncation over `|λ| ≤ R`: for the disk truncation the odd
//! `O(λ⁻³)` terms cancel in `±λ` pairs, leaving an absolute defect
//! `O((1+|z|²)/R²)` (empirically `O(R⁻³)` thanks to angular cancellation
//! in the `λ⁻⁴` ring sums), so the caller picks `R` from that bound. The
//! fast evaluator [`weierstrass_p_series`] / [`weierstrass_p_prime_series`]
//! sums the Laurent expansion around the reduced representative; with the
//! per-component nearest-integer reduction `|w|² ≤ ½ + ε`, eighty cached
//! coefficients leave a truncation error below 1e−20. The two evaluators
//! are pinned against each other in tests; the maps use the fast one.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{DeclaredInvariant, MapError, TorusMap};
use crate::degree_invariants::{DegreePair, DegreeTriple};
use crate::torus_geometry::{InvolutionKind, SphereVec, TorusPoint};

/// A point of the Riemann sphere `ℂ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    /// Unwraps a finite value.
    ///
    /// # Errors
    ///
    /// [`MapError::PoleHit`] when the value is the point at infinity.
    pub fn finite(self) -> Result<Complex64, MapError> {
        match self {
            ExtComplex::Finite(v) => Ok(v),
            ExtComplex::Infinity => Err(MapError::PoleHit),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// Multiplies by a finite nonzero constant (fixing `∞`).
    #[must_use]
    pub fn scale(self, c: Complex64) -> Self {
        match self {
            ExtComplex::Finite(v) => ExtComplex::Finite(c * v),
            ExtComplex::Infinity => ExtComplex::Infinity,
        }
    }
}

/// Reduces `z` modulo `Λ = ℤ + iℤ` to the centered representative with
/// both components in `[−½, ½]`.
pub fn reduce_mod_lattice(z: Complex64) -> Complex64 {
    Complex64::new(z.re - z.re.round(), z.im - z.im.round())
}

/// The modular invariant `g₂` of the square lattice, computed through the
/// weight-4 Eisenstein series at `τ = i`:
/// `g₂ = 60·G₄ = (4π⁴/3)·E₄(i)` with
/// `E₄ = 1 + 240·Σ σ₃(n)·e^{−2πn}` (the tail beyond n = 20 is below
/// 1e−54). For this lattice `g₃ = 0` by the `i·Λ = Λ` symmetry.
pub fn g2_invariant() -> f64 {
    fn sigma3(n: u64) -> u64 {
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| d * d * d)
            .sum()
    }
    let q = (-TAU).exp();
    let mut e4 = 1.0;
    let mut qn = 1.0;
    for n in 1..=20u64 {
        qn *= q;
        e4 += 240.0 * sigma3(n) as f64 * qn;
    }
    (4.0 * PI.powi(4) / 3.0) * e4
}

const LAURENT_TERMS: usize = 80;

/// Laurent coefficients `a_k` of `℘(w) = w⁻² + Σ_{k≥1} a_k w^{2k}`:
/// `a₁ = g₂/20`, `a₂ = g₃/28 = 0`, and for `k ≥ 3`
/// `a_k = 3/((2k+3)(k−2)) · Σ_{m=1}^{k−2} a_m a_{k−1−m}`.
fn laurent_coeffs() -> &'static [f64; LAURENT_TERMS] {
    static COEFFS: OnceLock<[f64; LAURENT_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut a = [0.0f64; LAURENT_TERMS];
        a[0] = g2_invariant() / 20.0;
        a[1] = 0.0;
        for k in 3..=LAURENT_TERMS {
            let sum: f64 = (1..=k - 2).map(|m| a[m - 1] * a[k - 2 - m]).sum();
            a[k - 1] = 3.0 / ((2 * k + 3) as f64 * (k - 2) as f64) * sum;
        }
        a
    })
}

/// Fast evaluator for `℘(z)` on the square lattice via the Laurent series
/// at the reduced representative. Exact lattice points (and underflowing
/// neighborhoods whose principal part overflows) return
/// [`ExtComplex::Infinity`].
pub fn weierstrass_p_series(z: Complex64) -> ExtComplex {
    let w = reduce_mod_lattice(z);
    if w.re == 0.0 && w.im == 0.0 {
        return ExtComplex::Infinity;
    }
    let w2 = w * w;
    let principal = w2.finv();
    if !principal.re.is_finite() || !principal.im.is_finite() {
        return ExtComplex::Infinity;
    }
    let a = laurent_coeffs();
    let mut p = Complex64::new(a[LAURENT_TERMS - 1], 0.0);
    for k in (0..LAURENT_TERMS - 1).rev() {
        p = p * w2 + a[k];
    }
    ExtComplex::Finite(principal + w2 * p)
}

/// Fast evaluator for `℘′(z) = −2w⁻³ + Σ_{k≥1} 2k·a_k·w^{2k−1}`.
pub fn weierstrass_p_prime_series(z: Complex64) -> ExtComplex {
    let w = reduce_mod_lattice(z);
    if w.re == 0.0 && w.im == 0.0 {
        return ExtComplex::Infinity;
    }
    let w2 = w * w;
    let principal = -2.0 * (w2 * w).finv();
    if !principal.re.is_finite() || !principal.im.is_finite() {
        return ExtComplex::Infinity;
    }
    let a = laurent_coeffs();
    let mut p = Complex64::new(2.0 * LAURENT_TERMS as f64 * a[LAURENT_TERMS - 1], 0.0);
    for k in (0..LAURENT_TERMS - 1).rev() {
        p = p * w2 + 2.0 * (k + 1) as f64 * a[k];
    }
    ExtComplex::Finite(principal + w * p)
}

/// Reference evaluator: `℘(z) = w⁻² + Σ_{0<|λ|≤R} [(w−λ)⁻² − λ⁻²]` at the
/// reduced representative `w`, truncated over the symmetric disk. See the
/// module docs for the truncation-error budget in `R`.
pub fn weierstrass_p(z: Complex64, truncation_r: f64) -> ExtComplex {
    let w = reduce_mod_lattice(z);
    if w.re == 0.0 && w.im == 0.0 {
        return ExtComplex::Infinity;
    }
    let mut sum = (w * w).finv();
    let n = truncation_r.ceil() as i64;
    let rr = truncation_r * truncation_r;
    for a in -n..=n {
        for b in -n..=n {
            if a == 0 && b == 0 {
                continue;
            }
            let lam = Complex64::new(a as f64, b as f64);
            if lam.norm_sqr() > rr {
                continue;
            }
            let d = w - lam;
            sum += (d * d).finv() - (lam * lam).finv();
        }
    }
    ExtComplex::Finite(sum)
}

/// Reference evaluator: `℘′(z) = −2·Σ_{|λ|≤R} (w−λ)⁻³` (absolutely
/// convergent; the `λ = 0` term is the principal part).
pub fn weierstrass_p_prime(z: Complex64, truncation_r: f64) -> ExtComplex {
    let w = reduce_mod_lattice(z);
    if w.re == 0.0 && w.im == 0.0 {
        return ExtComplex::Infinity;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let n = truncation_r.ceil() as i64;
    let rr = truncation_r * truncation_r;
    for a in -n..=n {
        for b in -n..=n {
            let lam = Complex64::new(a as f64, b as f64);
            if lam.norm_sqr() > rr {
                continue;
            }
            let d = w - lam;
            sum += (d * d * d).finv();
        }
    }
    ExtComplex::Finite(-2.0 * sum)
}

/// The orientation-preserving identification `ℂ ∪ {∞} → S²` used for all
/// Weierstrass maps: inverse stereographic projection arranged so the real
/// line lands on the equator and conjugation becomes σ,
///
/// `w ↦ (2 Re w, |w|² − 1, 2 Im w) / (1 + |w|²)`, `∞ ↦ (0, 1, 0)`,
///
/// so `0 ↦ (0,−1,0)`, `1 ↦ p₀`, `i ↦` north pole. For `|w| > 1 the
/// algebraically identical reciprocal form in `ζ = 1/w` is used, which
/// stays stable all the way to the pole.
pub fn riemann_sphere_chart(v: ExtComplex) -> SphereVec {
    match v {
        ExtComplex::Infinity => SphereVec::new(0.0, 1.0, 0.0),
        ExtComplex::Finite(w) => {
            let n2 = w.norm_sqr();
            if n2 <= 1.0 {
                let d = 1.0 + n2;
                SphereVec::new(2.0 * w.re / d, (n2 - 1.0) / d, 2.0 * w.im / d)
            } else {
                let zeta = w.finv();
                let n2 = zeta.norm_sqr();
                let d = 1.0 + n2;
                SphereVec::new(2.0 * zeta.re / d, (1.0 - n2) / d, -2.0 * zeta.im / d)
            }
        }
    }
}

/// The complex coordinate of a torus point, `z = x + iy`.
fn torus_complex(p: TorusPoint) -> Complex64 {
    Complex64::new(p.x, p.y)
}

/// The four Weierstrass torus maps.
pub struct WeierstrassMaps {
    /// `st∘℘`: type I, `⟨0|2|0⟩`.
    pub p: TorusMap,
    /// `st∘℘′`: type I, `⟨1|3|0⟩`.
    pub p_prime: TorusMap,
    /// `st∘(i℘)`: type II, `⟨0|2⟩`.
    pub i_p: TorusMap,
    /// `st∘(e^{3πi/4}℘′)`: type II, `⟨1|3⟩`.
    pub rotated_p_prime: TorusMap,
}

/// Builds the four equivariant Weierstrass maps with their declared
/// invariants. `℘(z̄) = conj ℘(z)` makes `℘, ℘′` type I equivariant;
/// the square lattice's extra symmetry `℘(iz) = −℘(z)`,
/// `℘′(iz) = i℘′(z)` makes `i℘` and `e^{3πi/4}℘′` type II equivariant.
pub fn weierstrass_maps() -> WeierstrassMaps {
    let rot = Complex64::from_polar(1.0, 3.0 * PI / 4.0);
    WeierstrassMaps {
        p: TorusMap::new(
            InvolutionKind::TypeI,
            Some(DeclaredInvariant::Triple(DegreeTriple::new(0, 2, 0))),
            |p| riemann_sphere_chart(weierstrass_p_series(torus_complex(p))),
        ),
        p_prime: TorusMap::new(
            InvolutionKind::TypeI,
            Some(DeclaredInvariant::Triple(DegreeTriple::new(1, 3, 0))),
            |p| riemann_sphere_chart(weierstrass_p_prime_series(torus_complex(p))),
        ),
        i_p: TorusMap::new(
            InvolutionKind::TypeII,
            Some(DeclaredInvariant::Pair(DegreePair::new(0, 2))),
            |p| {
                riemann_sphere_chart(
                    weierstrass_p_series(torus_complex(p)).scale(Complex64::new(0.0, 1.0)),
                )
            },
        ),
        rotated_p_prime: TorusMap::new(
            InvolutionKind::TypeII,
            Some(DeclaredInvariant::Pair(DegreePair::new(1, 3))),
            move |p| riemann_sphere_chart(weierstrass_p_prime_series(torus_complex(p)).scale(rot)),
        ),
    }
}
