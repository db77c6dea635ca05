//! Closed-form equivariant map families with prescribed invariants: the
//! normal form and modified normal form on the type I cylinder, cylinder
//! concatenation, realization of arbitrary realizable triples and pairs,
//! the doubling construction, Weierstrass examples, and the physics
//! lattice family.
//!
//! All constructors are exactly equivariant by construction: type I maps
//! are defined by a kernel on the cylinder `Z = {0 ≤ y ≤ ½}` and extended
//! by `σ∘f∘T`; type II maps are built through the quotient `π: X → S²`
//! whose mirror branch applies `σ∘π∘T` verbatim.

pub mod weierstrass;

use std::f64::consts::TAU;

use serde::Serialize;
use thiserror::Error;

use crate::degree_invariants::{
    concat_triples, decompose_triple, degree_pair, degree_triple, realizable_pair,
    total_degree_simplicial, DegreeError, DegreePair, DegreeTriple, MeasuredPair, MeasuredTriple,
};
use crate::hermitian_core::{HermitianMatrix, Su2Vector};
use crate::torus_geometry::{
    apply_involution, in_fundamental_region, sphere_involution_vec, wrap_unit, Grid,
    InvolutionKind, SampleGrid, SphereVec, TorusPoint,
};

/// Errors from map construction.
#[derive(Debug, Error)]
pub enum MapError {
    /// The requested invariant violates its parity law.
    #[error("invariant {what} is not realizable: total degree parity violates the classification")]
    NotRealizable { what: String },
    /// A meromorphic evaluation hit a lattice pole.
    #[error("evaluation point lies on the period lattice (pole of the Weierstrass function)")]
    PoleHit,
    /// Normalization of a vector family that vanishes somewhere.
    #[error("normalization undefined: the family is singular at parameter t = {t}")]
    NormalizationUndefined { t: f64 },
    /// Cylinder concatenation with mismatched interface degrees.
    #[error("incompatible cylinder maps: boundary degree {left_d1} does not match {right_d0}")]
    Incompatible { left_d1: i64, right_d0: i64 },
}

/// Which complete invariant a map declares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeclaredInvariant {
    Triple(DegreeTriple),
    Pair(DegreePair),
}

/// A sphere-valued equivariant map of the torus with a closed-form kernel.
pub struct TorusMap {
    kernel: Box<dyn Fn(TorusPoint) -> SphereVec + Send + Sync>,
    pub involution: InvolutionKind,
    pub declared: Option<DeclaredInvariant>,
}

impl TorusMap {
    pub fn new(
        involution: InvolutionKind,
        declared: Option<DeclaredInvariant>,
        kernel: impl Fn(TorusPoint) -> SphereVec + Send + Sync + 'static,
    ) -> Self {
        Self {
            kernel: Box::new(kernel),
            involution,
            declared,
        }
    }

    /// The constant map at the equator basepoint `p₀`.
    pub fn constant(involution: InvolutionKind) -> Self {
        let declared = match involution {
            InvolutionKind::TypeI => DeclaredInvariant::Triple(DegreeTriple::new(0, 0, 0)),
            InvolutionKind::TypeII => DeclaredInvariant::Pair(DegreePair::new(0, 0)),
        };
        Self::new(involution, Some(declared), |_| SphereVec::BASEPOINT)
    }

    pub fn eval(&self, p: TorusPoint) -> SphereVec {
        (self.kernel)(p)
    }

    pub fn declared_triple(&self) -> Option<DegreeTriple> {
        match self.declared {
            Some(DeclaredInvariant::Triple(t)) => Some(t),
            _ => None,
        }
    }

    pub fn declared_pair(&self) -> Option<DegreePair> {
        match self.declared {
            Some(DeclaredInvariant::Pair(p)) => Some(p),
            _ => None,
        }
    }

    /// Measures the degree triple (type I maps).
    pub fn measure_triple(&self, grid: Grid) -> Result<MeasuredTriple, DegreeError> {
        degree_triple(|p| self.eval(p), grid)
    }

    /// Measures the degree pair (type II maps).
    pub fn measure_pair(&self, grid: Grid) -> Result<MeasuredPair, DegreeError> {
        degree_pair(|p| self.eval(p), grid)
    }

    pub fn sample(&self, grid: Grid) -> SampleGrid {
        SampleGrid::sample(|p| self.eval(p), grid)
    }
}

/// A hermitian-matrix-valued equivariant map of the torus.
pub struct MatrixTorusMap {
    kernel: Box<dyn Fn(TorusPoint) -> HermitianMatrix + Send + Sync>,
    pub involution: InvolutionKind,
    pub n: usize,
}

impl MatrixTorusMap {
    pub fn new(
        involution: InvolutionKind,
        n: usize,
        kernel: impl Fn(TorusPoint) -> HermitianMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            kernel: Box::new(kernel),
            involution,
            n,
        }
    }

    pub fn eval(&self, p: TorusPoint) -> HermitianMatrix {
        (self.kernel)(p)
    }
}

/// A map on the closed cylinder `[0,1]×S¹` (the fundamental region `Z` in
/// the rescaled coordinate `s = 2y`) with type-I-normalized boundary loops
/// `γ_{d0}` at `s = 0` and `γ_{d1}` at `s = 1`.
pub struct CylinderMap {
    kernel: Box<dyn Fn(f64, f64) -> SphereVec + Send + Sync>,
    /// Declared triple of the equivariant extension of this cylinder map.
    pub triple: DegreeTriple,
}

impl CylinderMap {
    pub fn eval(&self, x: f64, s: f64) -> SphereVec {
        (self.kernel)(x, s)
    }

    /// The normal form: the boundary loop `γ_{d0}` shrinks radially to the
    /// center for `s ≤ ½` while the image bubbles up the unit sphere, then
    /// grows back out as `γ_{d1}`:
    ///
    /// `w = (1−2s)·γ_{d0}(x)` for `s ≤ ½`, `w = (2s−1)·γ_{d1}(x)` for
    /// `s ≥ ½`, third coordinate `±2√(s(1−s))`.
    ///
    /// The plain form passes over the upper hemisphere and realizes
    /// `⟨d0 | d0−d1 | d1⟩`; the mirror composes with σ and realizes
    /// `⟨d0 | d1−d0 | d1⟩`.
    pub fn normal(d0: i64, d1: i64, mirror: bool) -> Self {
        let chi = if mirror { -1.0 } else { 1.0 };
        let kernel = move |x: f64, s: f64| {
            let (r, phi) = if s <= 0.5 {
                (1.0 - 2.0 * s, TAU * d0 as f64 * x)
            } else {
                (2.0 * s - 1.0, TAU * d1 as f64 * x)
            };
            let z = 2.0 * (s * (1.0 - s)).max(0.0).sqrt();
            SphereVec::new(r * phi.cos(), r * phi.sin(), chi * z)
        };
        let d = if mirror { d1 - d0 } else { d0 - d1 };
        Self {
            kernel: Box::new(kernel),
            triple: DegreeTriple::new(d0, d, d1),
        }
    }

    /// The modified normal form: the boundary loops shrink toward the
    /// off-center point `+1` instead of the origin,
    ///
    /// `w = (1−2s)·γ_{d0}(x) + 2s` for `s ≤ ½`,
    /// `w = (2s−1)·γ_{d1}(x) + (2−2s)` for `s ≥ ½`,
    ///
    /// so each pole has a finite fiber: `w = 0` happens only at `s = ¼`
    /// (at the `|d0|` solutions of `γ_{d0}(x) = −1`) and at `s = ¾` (the
    /// `|d1|` solutions of `γ_{d1}(x) = −1`). Same triple as [`Self::normal`].
    pub fn modified(d0: i64, d1: i64, mirror: bool) -> Self {
        let chi = if mirror { -1.0 } else { 1.0 };
        let kernel = move |x: f64, s: f64| {
            let (rho, center, phi) = if s <= 0.5 {
                (1.0 - 2.0 * s, 2.0 * s, TAU * d0 as f64 * x)
            } else {
                (2.0 * s - 1.0, 2.0 - 2.0 * s, TAU * d1 as f64 * x)
            };
            let (c, sn) = (phi.cos(), phi.sin());
            let w = (rho * c + center, rho * sn);
            // With ρ + center = 1, 1 − |w|² = 2·ρ·center·(1−cos φ): a
            // nonnegative product, no cancellation near the boundary loops.
            let z2 = 2.0 * rho * center * (1.0 - c);
            let z = z2.max(0.0).sqrt();
            SphereVec::new(w.0, w.1, chi * z)
        };
        let d = if mirror { d1 - d0 } else { d0 - d1 };
        Self {
            kernel: Box::new(kernel),
            triple: DegreeTriple::new(d0, d, d1),
        }
    }

    /// The constant band at the basepoint `p₀`, with triple `⟨0|0|0⟩`.
    pub fn constant() -> Self {
        Self {
            kernel: Box::new(|_, _| SphereVec::new(1.0, 0.0, 0.0)),
            triple: DegreeTriple::new(0, 0, 0),
        }
    }

    /// Realizes an arbitrary realizable triple as one banded cylinder map:
    /// the staircase decomposition of the triple, stacked into equal-width
    /// sub-bands of (mirrored) normal forms.
    ///
    /// # Errors
    ///
    /// [`MapError::NotRealizable`] when `d ≢ d0 + d1 (mod 2)`.
    pub fn realize(t: &DegreeTriple) -> Result<Self, MapError> {
        let parts = decompose_triple(t).map_err(|_| MapError::NotRealizable {
            what: t.to_string(),
        })?;
        if parts.is_empty() {
            return Ok(Self::constant());
        }
        let cylinders: Vec<CylinderMap> = parts
            .iter()
            .map(|e| CylinderMap::normal(e.d0, e.d1, e.d != e.d0 - e.d1))
            .collect();
        Ok(Self {
            kernel: Box::new(stack_kernel(cylinders)),
            triple: *t,
        })
    }

    /// Torus points in the open fundamental region whose image under the
    /// equivariant extension is the north or south pole (finite for the
    /// modified form: `s = ¼` and `s = ¾` rows, `x = (2j+1)/(2|d|)`).
    pub fn modified_pole_fiber(d0: i64, d1: i64) -> Vec<TorusPoint> {
        let mut pts = Vec::new();
        for (dd, s) in [(d0, 0.25), (d1, 0.75)] {
            let k = dd.unsigned_abs() as usize;
            for j in 0..k {
                let x = (2.0 * j as f64 + 1.0) / (2.0 * k as f64);
                pts.push(TorusPoint::new(x, s / 2.0));
            }
        }
        pts
    }
}

/// Extends a cylinder kernel (in the coordinate `s = 2y ∈ [0,1]`) to the
/// exactly type-I-equivariant torus map `f(x,y) = K(x, 2y)` on the
/// fundamental region, `σ∘K(x, 2(1−y))` off it.
pub(crate) fn extend_cylinder_kernel(
    kernel: impl Fn(f64, f64) -> SphereVec + Send + Sync + 'static,
) -> impl Fn(TorusPoint) -> SphereVec + Send + Sync + 'static {
    move |p: TorusPoint| {
        if p.y <= 0.5 {
            kernel(p.x, 2.0 * p.y)
        } else {
            sphere_involution_vec(kernel(p.x, 2.0 * (1.0 - p.y)))
        }
    }
}

/// The type I normal form as a full torus map realizing
/// `⟨d0 | ±(d0−d1) | d1⟩` (sign flipped by `mirror`).
pub fn normal_form(d0: i64, d1: i64, mirror: bool) -> TorusMap {
    let cyl = CylinderMap::normal(d0, d1, mirror);
    let triple = cyl.triple;
    TorusMap::new(
        InvolutionKind::TypeI,
        Some(DeclaredInvariant::Triple(triple)),
        extend_cylinder_kernel(move |x, s| cyl.eval(x, s)),
    )
}

/// The modified normal form as a full torus map: same triple as
/// [`normal_form`], finite pole fibers.
pub fn modified_normal_form(d0: i64, d1: i64, mirror: bool) -> TorusMap {
    let cyl = CylinderMap::modified(d0, d1, mirror);
    let triple = cyl.triple;
    TorusMap::new(
        InvolutionKind::TypeI,
        Some(DeclaredInvariant::Triple(triple)),
        extend_cylinder_kernel(move |x, s| cyl.eval(x, s)),
    )
}

/// Stacks compatible cylinder maps into bands of the cylinder and extends
/// equivariantly; the declared triple is the concatenation of the parts.
///
/// An empty list yields the constant map at `p₀`.
///
/// # Errors
///
/// [`MapError::Incompatible`] when adjacent boundary degrees differ.
pub fn concat_cylinder(parts: Vec<CylinderMap>) -> Result<TorusMap, MapError> {
    if parts.is_empty() {
        return Ok(TorusMap::constant(InvolutionKind::TypeI));
    }
    for pair in parts.windows(2) {
        if pair[0].triple.d1 != pair[1].triple.d0 {
            return Err(MapError::Incompatible {
                left_d1: pair[0].triple.d1,
                right_d0: pair[1].triple.d0,
            });
        }
    }
    let triple = parts.iter().skip(1).fold(parts[0].triple, |acc, c| {
        concat_triples(acc, c.triple).expect("interfaces checked above")
    });
    let stack = stack_kernel(parts);
    Ok(TorusMap::new(
        InvolutionKind::TypeI,
        Some(DeclaredInvariant::Triple(triple)),
        extend_cylinder_kernel(stack),
    ))
}

/// The banded cylinder kernel of a compatible stack.
fn stack_kernel(parts: Vec<CylinderMap>) -> impl Fn(f64, f64) -> SphereVec + Send + Sync {
    let m = parts.len();
    move |x: f64, s: f64| {
        let u = (s * m as f64).clamp(0.0, m as f64);
        let k = (u.floor() as usize).min(m - 1);
        parts[k].eval(x, u - k as f64)
    }
}

/// Realizes an arbitrary realizable degree triple as an exactly
/// equivariant type I map: the staircase decomposition of the triple is
/// realized band by band with (mirrored) normal forms.
///
/// # Errors
///
/// [`MapError::NotRealizable`] when `d ≢ d0 + d1 (mod 2)`.
pub fn realize_triple(t: &DegreeTriple) -> Result<TorusMap, MapError> {
    let cyl = CylinderMap::realize(t)?;
    Ok(TorusMap::new(
        InvolutionKind::TypeI,
        Some(DeclaredInvariant::Triple(*t)),
        extend_cylinder_kernel(move |x, s| cyl.eval(x, s)),
    ))
}

/// Orientation of the hemisphere the type II quotient sends its
/// pseudofundamental region to. Pinned so that the quotient has total
/// degree +1 with this crate's orientation conventions (the region chart
/// `(x,y) ↦ μ` is orientation-reversing, and the plane chart `(Re, Im)` is
/// a negative basis exactly at the south pole).
const QUOTIENT_HEMISPHERE: f64 = -1.0;

/// The equivariant quotient `π: X → S²` that collapses the two arm circles
/// `{y = 0} ∪ {x = 0}` to the basepoint `p₀`, sends the diagonal fixed
/// circle to the equator with winding +1, and conjugates the type II
/// involution to σ. Total degree +1.
///
/// On the pseudofundamental region `R = {0 ≤ y ≤ x}`: with `s = x − y` and
/// `t' = y/(1−s)`, the chord chart `μ = (1−s)·e^{2πit'} + s` maps `R` with
/// arms collapsed homeomorphically onto the unit disk (all chord circles
/// share only the point `μ = 1`), and the disk embeds as the hemisphere
/// `z = −√(1−|μ|²)`. Off the region, `π = σ∘π∘T` verbatim, which makes
/// equivariance bitwise exact.
pub fn pi_quotient(p: TorusPoint) -> SphereVec {
    if in_fundamental_region(InvolutionKind::TypeII, p) {
        pi_on_region(p)
    } else {
        sphere_involution_vec(pi_on_region(apply_involution(InvolutionKind::TypeII, p)))
    }
}

fn pi_on_region(p: TorusPoint) -> SphereVec {
    let s = p.x - p.y; // in [0, 1) on the region
    let t_prime = if 1.0 - s <= 0.0 { 0.0 } else { p.y / (1.0 - s) };
    let phi = TAU * t_prime;
    let (c, sn) = (phi.cos(), phi.sin());
    let mu_re = (1.0 - s) * c + s;
    let mu_im = (1.0 - s) * sn;
    // 1 − |μ|² = 2s(1 − Re μ) exactly (the chord-circle identity); this
    // form vanishes exactly on the diagonal (s = 0) and on the arms
    // (Re μ = 1), where the image must lie on the equator / at p₀.
    let z2 = 2.0 * s * (1.0 - mu_re).max(0.0);
    SphereVec::new(mu_re, mu_im, QUOTIENT_HEMISPHERE * z2.sqrt())
}

/// The identification `Ψ: X∖C₀ → S²∖{poles}`,
/// `(x,y) ↦ (√(1−u²)cos 2πx, √(1−u²)sin 2πx, u)` with `u = 2y−1`; it
/// conjugates the type I involution to σ and sends `C₁` to the equator
/// with winding +1.
pub fn psi_sphere(p: TorusPoint) -> SphereVec {
    let u = 2.0 * p.y - 1.0;
    let r = (1.0 - u * u).max(0.0).sqrt();
    SphereVec::new(r * (TAU * p.x).cos(), r * (TAU * p.x).sin(), u)
}

/// Inverse of [`psi_sphere`]: `x = arg(v_x + i v_y)/2π`, `y = (v_z+1)/2`.
/// Both poles land on the `C₀` circle (`y = 0`), matching maps that are
/// constant there.
pub fn psi_sphere_inv(v: SphereVec) -> TorusPoint {
    let x = wrap_unit(v.y.atan2(v.x) / TAU);
    let y = ((v.z + 1.0) / 2.0).clamp(0.0, 1.0);
    TorusPoint::new(x, y)
}

/// Realizes an arbitrary realizable degree pair as an exactly equivariant,
/// normalized type II map (constant `p₀` on the arm circles): the
/// composite of the quotient [`pi_quotient`], the identification
/// [`psi_sphere_inv`], and a type I map with triple `⟨0|d|dC⟩`. The arms
/// collapse through `p₀` on the equator to the `C₁` basepoint, where the
/// boundary loop `γ_{dC}` starts at `p₀`; the two quotient poles land on
/// `C₀`, where the degree-0 restriction is constant `p₀` — so the
/// composite is continuous and normalized.
///
/// # Errors
///
/// [`MapError::NotRealizable`] when `d ≢ dC (mod 2)`.
pub fn realize_pair(pair: &DegreePair) -> Result<TorusMap, MapError> {
    if !realizable_pair(pair) {
        return Err(MapError::NotRealizable {
            what: pair.to_string(),
        });
    }
    let f1 = realize_triple(&DegreeTriple::new(0, pair.d, pair.d_c))
        .expect("⟨0|d|dC⟩ inherits the pair's parity");
    let declared = DeclaredInvariant::Pair(*pair);
    Ok(TorusMap::new(
        InvolutionKind::TypeII,
        Some(declared),
        move |p| f1.eval(psi_sphere_inv(pi_quotient(p))),
    ))
}

/// A (generally non-equivariant) torus map measured by total degree only.
pub struct InducedMap {
    kernel: Box<dyn Fn(TorusPoint) -> SphereVec + Send + Sync>,
    pub declared_degree: i64,
}

impl InducedMap {
    pub fn eval(&self, p: TorusPoint) -> SphereVec {
        (self.kernel)(p)
    }

    pub fn measure_degree(&self, grid: Grid) -> Result<i64, DegreeError> {
        let samples = SampleGrid::sample(|p| self.eval(p), grid);
        Ok(total_degree_simplicial(&samples)?.degree)
    }
}

/// The doubling construction for a triple with equal fixed-point degrees
/// (`d0 = d1 = k`, so the two boundary restrictions agree as loops):
/// returns the equivariant realization `f` together with the torus map
/// `f̃` induced by gluing the half-cylinder kernel into a full torus
/// (`f̃(x,y) = K(x,y)` in the cylinder coordinate `s = y`). The total
/// degrees satisfy `deg f = 2·deg f̃`.
///
/// # Errors
///
/// [`MapError::NotRealizable`] on parity violation; panics if `d0 ≠ d1`
/// (caller contract).
pub fn doubling_pair(t: &DegreeTriple) -> Result<(TorusMap, InducedMap), MapError> {
    assert_eq!(
        t.d0, t.d1,
        "doubling requires equal boundary degrees, got {t}"
    );
    let parts = decompose_triple(t).map_err(|_| MapError::NotRealizable {
        what: t.to_string(),
    })?;
    let cylinders: Vec<CylinderMap> = parts
        .iter()
        .map(|e| CylinderMap::normal(e.d0, e.d1, e.d != e.d0 - e.d1))
        .collect();
    let induced = if cylinders.is_empty() {
        InducedMap {
            kernel: Box::new(|_| SphereVec::BASEPOINT),
            declared_degree: 0,
        }
    } else {
        let stack = stack_kernel(cylinders);
        InducedMap {
            kernel: Box::new(move |p: TorusPoint| stack(p.x, p.y)),
            declared_degree: t.d / 2,
        }
    };
    let f = realize_triple(t)?;
    Ok((f, induced))
}

/// The two-band lattice family from the physics example:
/// `Ψ-coordinates (t − cos q − cos(mp), sin q, −sin(mp))` with `q = 2πx`,
/// `p = 2πy`. Type I equivariant for every parameter; singular (vanishing
/// somewhere on the torus) exactly for `t ∈ {−2, 0, 2}`.
pub struct PhysicsFamily {
    pub t: f64,
    pub m: u32,
}

/// Builds the physics family `H_t ∘ p_m`.
pub fn physics_map(t: f64, m: u32) -> PhysicsFamily {
    assert!(m >= 1, "the covering index m must be positive");
    PhysicsFamily { t, m }
}

impl PhysicsFamily {
    /// The raw (unnormalized) hermitian family in Ψ-coordinates.
    pub fn raw(&self, p: TorusPoint) -> Su2Vector {
        let q = TAU * p.x;
        let mp = TAU * self.m as f64 * p.y;
        Su2Vector::new(self.t - q.cos() - mp.cos(), q.sin(), -mp.sin())
    }

    /// Whether the family vanishes somewhere on the torus (exactly the
    /// band-touching parameters −2, 0, 2).
    pub fn is_singular_parameter(&self) -> bool {
        const TOL: f64 = 1e-12;
        (self.t.abs() - 2.0).abs() < TOL || self.t.abs() < TOL
    }

    /// The normalized sphere-valued map.
    ///
    /// # Errors
    ///
    /// [`MapError::NormalizationUndefined`] at singular parameters.
    pub fn normalized(&self) -> Result<TorusMap, MapError> {
        if self.is_singular_parameter() {
            return Err(MapError::NormalizationUndefined { t: self.t });
        }
        let (t, m) = (self.t, self.m);
        Ok(TorusMap::new(InvolutionKind::TypeI, None, move |p| {
            let fam = PhysicsFamily { t, m };
            let v = fam.raw(p).to_sphere_vec();
            v.normalized()
                .expect("nonsingular parameter keeps the family off zero")
        }))
    }
}
