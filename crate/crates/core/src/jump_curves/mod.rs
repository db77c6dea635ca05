//! One-parameter families `H_t` of equivariant maps that cross the singular
//! set exactly at `t = 0`, in a prescribed finite set of points (or, for the
//! naive construction, along whole fixed circles).
//!
//! A [`JumpCurve`] packages the family evaluator with its two endpoint maps,
//! the analytically predicted singular set of `H₀`, and the count bookkeeping.
//! The numerical side lives in [`detector`]: a two-stage grid detector that
//! locates the singular set of a family and checks it against the prediction.
//!
//! Construction strategy, shared by all the point-type jumps: every family is
//! assembled from cylinder bands whose third coordinate vanishes only on band
//! edges, so the family value can vanish only where an edge loop does. Edge
//! loops are either unit loops (never zero), corrector loops
//! `ζ^{e}·ι_t(ζ)` with `ι_t(ζ) = ((1−t)ζ^{−k} + t + 1)/2` (zero exactly at
//! `t = 0`, at the `|k|` roots of `ζ^k = −1`), or — for interior jumps — the
//! off-center loops of a modified normal form whose isolated zeros are
//! shielded by a `z`-component proportional to `t`.

pub mod detector;

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::degree_invariants::{
    realizable_pair, realizable_triple, DegreeError, DegreePair, DegreeTriple,
};
use crate::hermitian_core::{
    embed_isu2, signature, HermitianError, HermitianMatrix, Signature, Su2Vector,
};
use crate::map_constructors::{
    pi_quotient, psi_sphere, psi_sphere_inv, CylinderMap, DeclaredInvariant, MapError,
    MatrixTorusMap, TorusMap,
};
use crate::torus_geometry::{
    apply_involution, sphere_involution_vec, FixedCircle, Grid, InvolutionKind, SphereVec,
    TorusPoint,
};

pub use detector::{detect_singular, verify_jump, DetectedSingularity, Detection, JumpReport};

/// Errors for jump-curve construction and detection.
#[derive(Debug, Error)]
pub enum JumpError {
    /// A requested endpoint invariant violates a parity law or a block
    /// constraint of the construction.
    #[error(transparent)]
    Map(#[from] MapError),
    /// A matrix-level precondition failed (bad block sizes, singular input).
    #[error(transparent)]
    Matrix(#[from] HermitianError),
    /// Measuring an endpoint invariant failed.
    #[error(transparent)]
    Degree(#[from] DegreeError),
    /// Two predicted singular points landed in the same detector cluster;
    /// the sampling grid cannot separate them.
    #[error("grid with {n} points per side cannot separate predicted singular points near (x={x:.4}, y={y:.4})")]
    ResolutionTooCoarse { x: f64, y: f64, n: usize },
}

/// Where a jump family is predicted to be singular at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SingularPrediction {
    /// An isolated singular point.
    Point { x: f64, y: f64 },
    /// A whole fixed circle (the naive construction).
    Circle { circle: FixedCircle },
}

impl SingularPrediction {
    fn point(x: f64, y: f64) -> Self {
        let p = TorusPoint::new(x, y);
        SingularPrediction::Point { x: p.x, y: p.y }
    }
}

type FamilyKernel = Arc<dyn Fn(f64, TorusPoint) -> Su2Vector + Send + Sync>;

/// A one-parameter family `H: [−1, 1] × T² → isu(2)` (or its block embedding
/// into n×n hermitian matrices) that is equivariant for every `t`,
/// nonsingular for `t ≠ 0`, and singular at `t = 0` exactly on the predicted
/// set.
pub struct JumpCurve {
    kernel: FamilyKernel,
    /// `Some((p, q))` when the family is block-embedded as
    /// `Diag(I_{p−1}, Ψ⁻¹(H_t), −I_{q−1})`.
    matrix_blocks: Option<(usize, usize)>,
    /// The involution both endpoints are equivariant for.
    pub involution: InvolutionKind,
    /// The maps `H_{−1}` and `H_{+1}`, with their declared invariants.
    pub endpoints: (TorusMap, TorusMap),
    /// The singular set of `H₀` predicted by the construction.
    pub predicted: Vec<SingularPrediction>,
    /// Number of predicted singular *points* (`None` when the prediction
    /// contains circles, i.e. the singular set is not discrete).
    pub predicted_count: Option<usize>,
    /// The count expression evaluated for the requested direction; negative
    /// values flag a direction the plain-orientation theorem does not cover
    /// (the construction then flips corrector orientations and realizes
    /// `predicted_count` points).
    pub signed_count: Option<i64>,
}

impl std::fmt::Debug for JumpCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JumpCurve")
            .field("rank", &self.rank())
            .field("involution", &self.involution)
            .field("predicted", &self.predicted)
            .field("predicted_count", &self.predicted_count)
            .field("signed_count", &self.signed_count)
            .finish_non_exhaustive()
    }
}

impl JumpCurve {
    /// The family value as a 2×2 traceless hermitian coordinate vector (the
    /// underlying vector family for block-embedded curves).
    pub fn eval(&self, t: f64, p: TorusPoint) -> Su2Vector {
        (self.kernel)(t, p)
    }

    /// The assembled matrix value (block embedding for rank > 2, `Ψ⁻¹` of
    /// the vector otherwise is omitted: rank-2 curves return `None`).
    pub fn matrix_at(&self, t: f64, p: TorusPoint) -> Option<HermitianMatrix> {
        self.matrix_blocks.map(|(bp, bq)| {
            embed_isu2(self.eval(t, p), bp, bq).expect("block sizes validated at construction")
        })
    }

    /// Matrix rank of the family's target (2 for plain curves).
    pub fn rank(&self) -> usize {
        self.matrix_blocks.map_or(2, |(p, q)| p + q)
    }

    /// The detector functional: `‖H_t(p)‖` for vector families, `|det|` of
    /// the assembled matrix for block-embedded families. Zero exactly on the
    /// singular set in both cases.
    pub fn functional(&self, t: f64, p: TorusPoint) -> f64 {
        match self.matrix_blocks {
            None => self.eval(t, p).norm(),
            Some((bp, bq)) => embed_isu2(self.eval(t, p), bp, bq)
                .expect("block sizes validated at construction")
                .det()
                .abs(),
        }
    }

    /// Minimum of the functional over a full sampling grid at fixed `t`.
    pub fn min_functional_at(&self, t: f64, grid: Grid) -> f64 {
        grid.points()
            .map(|p| self.functional(t, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// The endpoint maps as matrix-valued torus maps (block-embedded curves
    /// only).
    pub fn endpoint_matrix_maps(&self) -> Option<(MatrixTorusMap, MatrixTorusMap)> {
        let (bp, bq) = self.matrix_blocks?;
        let make = |t: f64| {
            let kernel = self.kernel.clone();
            MatrixTorusMap::new(self.involution, bp + bq, move |p| {
                embed_isu2(kernel(t, p), bp, bq).expect("block sizes validated at construction")
            })
        };
        Some((make(-1.0), make(1.0)))
    }
}

/// Extends a cylinder family kernel (in the coordinate `s = 2y`) to a family
/// of exactly type-I-equivariant torus maps, as for a single cylinder map.
fn extend_jump_kernel(
    kernel: impl Fn(f64, f64, f64) -> SphereVec + Send + Sync + 'static,
) -> FamilyKernel {
    Arc::new(move |t: f64, p: TorusPoint| {
        let v = if p.y <= 0.5 {
            kernel(t, p.x, 2.0 * p.y)
        } else {
            sphere_involution_vec(kernel(t, p.x, 2.0 * (1.0 - p.y)))
        };
        Su2Vector::from_sphere_vec(v)
    })
}

/// Freezes one endpoint of a family into a sphere-valued torus map.
fn endpoint_map(
    kernel: &FamilyKernel,
    t: f64,
    involution: InvolutionKind,
    declared: DeclaredInvariant,
) -> TorusMap {
    let k = kernel.clone();
    TorusMap::new(involution, Some(declared), move |p| k(t, p).to_sphere_vec())
}

/// The corrector loop `ι_t(ζ) = ((1−t)·ζ^{−k} + t + 1)/2` at `ζ = e^{2πix}`:
/// equal to `ζ^{−k}` at `t = −1` and to `1` at `t = +1`, with
/// `|ι_t| ≥ |t|` on the unit circle, and zeros exactly at `t = 0`,
/// `ζ^k = −1`.
fn corrector_loop(k: i64, t: f64, x: f64) -> Complex64 {
    let zeta_mk = Complex64::from_polar(1.0, -TAU * k as f64 * x);
    (zeta_mk.scale(1.0 - t) + (t + 1.0)).scale(0.5)
}

/// The x-positions `(2j+1)/(2|k|)` of the `|k|` roots of `ζ^k = −1`.
fn odd_half_positions(k: i64) -> Vec<f64> {
    let m = k.unsigned_abs() as usize;
    (0..m)
        .map(|j| (2.0 * j as f64 + 1.0) / (2.0 * m as f64))
        .collect()
}

/// A generalized normal-form band: the left loop `α` shrinks radially to the
/// center while the image bubbles over the `χ`-hemisphere, then grows back
/// out as the right loop `β`. For unit loops this contributes
/// `χ·(wind α − wind β)` to the total degree.
fn f_band(alpha: Complex64, beta: Complex64, chi: f64, u: f64) -> SphereVec {
    let w = if u <= 0.5 {
        alpha.scale(1.0 - 2.0 * u)
    } else {
        beta.scale(2.0 * u - 1.0)
    };
    let z = 2.0 * (u * (1.0 - u)).max(0.0).sqrt();
    SphereVec::new(w.re, w.im, chi * z)
}

/// The naive jump between two plain normal forms: the `(x, y)` sphere
/// components are scaled by `|t|`, so `H₀` collapses onto the `z`-axis and
/// is singular on the whole fixed circles `C₀ ∪ C₁` where the bubble
/// coordinate vanishes.
///
/// Endpoints: `⟨d0m | d0m−d1m | d1m⟩` and `⟨d0p | d0p−d1p | d1p⟩`.
pub fn naive_jump(d0m: i64, d1m: i64, d0p: i64, d1p: i64) -> JumpCurve {
    let minus = CylinderMap::normal(d0m, d1m, false);
    let plus = CylinderMap::normal(d0p, d1p, false);
    let kernel = extend_jump_kernel(move |t, x, s| {
        let v = if t < 0.0 {
            minus.eval(x, s)
        } else {
            plus.eval(x, s)
        };
        SphereVec::new(t.abs() * v.x, t.abs() * v.y, v.z)
    });
    let declared_minus = DeclaredInvariant::Triple(DegreeTriple::new(d0m, d0m - d1m, d1m));
    let declared_plus = DeclaredInvariant::Triple(DegreeTriple::new(d0p, d0p - d1p, d1p));
    let endpoints = (
        endpoint_map(&kernel, -1.0, InvolutionKind::TypeI, declared_minus),
        endpoint_map(&kernel, 1.0, InvolutionKind::TypeI, declared_plus),
    );
    JumpCurve {
        kernel,
        matrix_blocks: None,
        involution: InvolutionKind::TypeI,
        endpoints,
        predicted: vec![
            SingularPrediction::Circle {
                circle: FixedCircle::C0,
            },
            SingularPrediction::Circle {
                circle: FixedCircle::C1,
            },
        ],
        predicted_count: None,
        signed_count: None,
    }
}

/// The degree flip: the `z` component of a modified normal form is scaled
/// by `−t`, deforming the plain form (`t = −1`) into its mirror (`t = +1`)
/// through families whose only zeros are the `2(|d0| + |d1|)` off-center
/// loop zeros at `t = 0`.
///
/// Endpoints: `⟨d0 | d0−d1 | d1⟩` and `⟨d0 | d1−d0 | d1⟩`.
pub fn degree_flip_jump(d0: i64, d1: i64) -> JumpCurve {
    let cyl = CylinderMap::modified(d0, d1, false);
    let kernel = extend_jump_kernel(move |t, x, s| {
        let v = cyl.eval(x, s);
        SphereVec::new(v.x, v.y, -t * v.z)
    });
    let endpoints = (
        endpoint_map(
            &kernel,
            -1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(DegreeTriple::new(d0, d0 - d1, d1)),
        ),
        endpoint_map(
            &kernel,
            1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(DegreeTriple::new(d0, d1 - d0, d1)),
        ),
    );
    let mut predicted = Vec::new();
    for p in CylinderMap::modified_pole_fiber(d0, d1) {
        predicted.push(SingularPrediction::point(p.x, p.y));
        predicted.push(SingularPrediction::point(p.x, 1.0 - p.y));
    }
    let count = 2 * (d0.unsigned_abs() + d1.unsigned_abs()) as usize;
    debug_assert_eq!(predicted.len(), count);
    JumpCurve {
        kernel,
        matrix_blocks: None,
        involution: InvolutionKind::TypeI,
        endpoints,
        predicted,
        predicted_count: Some(count),
        signed_count: Some(count as i64),
    }
}

/// Which type I fixed circle a fixed-point-degree jump happens on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JumpSide {
    C0,
    C1,
}

/// A fixed-point-degree jump: the boundary loop on one fixed circle is
/// multiplied by the corrector `ι_t`, which sweeps its winding from
/// `d⁻` to `d⁺` while passing through zero at `t = 0` in exactly
/// `|d⁺ − d⁻|` points of that circle.
///
/// Endpoint triples: `⟨d∓ | d∓ | 0⟩` on `C₀`; the mirrored `⟨0 | d∓ | d∓⟩`
/// on `C₁`.
pub fn fixedpoint_jump(d_minus: i64, d_plus: i64, side: JumpSide) -> JumpCurve {
    let k = d_plus - d_minus;
    let lambda = move |t: f64, x: f64| {
        Complex64::from_polar(1.0, TAU * d_plus as f64 * x) * corrector_loop(k, t, x)
    };
    let kernel = match side {
        JumpSide::C0 => extend_jump_kernel(move |t, x, s| {
            f_band(lambda(t, x), Complex64::new(1.0, 0.0), 1.0, s)
        }),
        JumpSide::C1 => extend_jump_kernel(move |t, x, s| {
            f_band(Complex64::new(1.0, 0.0), lambda(t, x), -1.0, s)
        }),
    };
    let triple_at = |d: i64| match side {
        JumpSide::C0 => DegreeTriple::new(d, d, 0),
        JumpSide::C1 => DegreeTriple::new(0, d, d),
    };
    let endpoints = (
        endpoint_map(
            &kernel,
            -1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(triple_at(d_minus)),
        ),
        endpoint_map(
            &kernel,
            1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(triple_at(d_plus)),
        ),
    );
    let y = match side {
        JumpSide::C0 => 0.0,
        JumpSide::C1 => 0.5,
    };
    let predicted: Vec<SingularPrediction> = odd_half_positions(k)
        .into_iter()
        .map(|x| SingularPrediction::point(x, y))
        .collect();
    let count = k.unsigned_abs() as usize;
    JumpCurve {
        kernel,
        matrix_blocks: None,
        involution: InvolutionKind::TypeI,
        endpoints,
        predicted,
        predicted_count: Some(count),
        signed_count: Some(count as i64),
    }
}

/// The band plan of a general type I jump (see [`general_jump_type1`]).
struct Type1Plan {
    k0: i64,
    k1: i64,
    /// Hemisphere orientations of the C₀/C₁ corrector bands.
    s0: f64,
    s1: f64,
    /// Interior bubble strength: `2g` interior singular points carrying a
    /// total-degree change of `2·χc·g`.
    g: i64,
    chi_c: f64,
    /// Static filler degrees: band 1 realizes `⟨0|e1|g⟩`, band 3 `⟨0|e3|0⟩`.
    e1: i64,
    e3: i64,
    signed_count: i64,
}

fn plan_type1(minus: &DegreeTriple, plus: &DegreeTriple) -> Result<Type1Plan, JumpError> {
    for t in [minus, plus] {
        if !realizable_triple(t) {
            return Err(MapError::NotRealizable {
                what: t.to_string(),
            }
            .into());
        }
    }
    let k0 = plus.d0 - minus.d0;
    let k1 = plus.d1 - minus.d1;
    let dd = plus.d - minus.d;
    let delta_e = dd - k0 - k1;
    let signed_count = k0.abs() + k1.abs() + delta_e;
    // Corrector orientations: a C-side corrector with hemisphere sign s
    // changes the total degree by s·Δd_j while it changes the boundary
    // degree by Δd_j. The default (+1, +1) realizes the plain-orientation
    // count |Δd0| + |Δd1| + ΔE whenever ΔE ≥ 0; only when that expression
    // goes negative are the orientations flipped, to minimize the
    // interior-bubble budget |Δd − s0·Δd0 − s1·Δd1| (and with it the
    // realized count).
    let (mut s0, mut s1) = (1i64, 1i64);
    if delta_e < 0 {
        let mut best = delta_e.abs();
        for (c0, c1) in [(1i64, -1i64), (-1, 1), (-1, -1)] {
            let r = (dd - c0 * k0 - c1 * k1).abs();
            if r < best {
                (s0, s1, best) = (c0, c1, r);
            }
        }
    }
    let r = dd - s0 * k0 - s1 * k1;
    debug_assert_eq!(
        r.rem_euclid(2),
        0,
        "parity-realizable endpoints force even R"
    );
    let chi: i64 = if r < 0 { -1 } else { 1 };
    let g = r.abs() / 2;
    let e1 = g.rem_euclid(2);
    // Total degree at t = −1: s0·d0⁻ + e1 − χc·g + e3 + s1·d1⁻ = d⁻.
    let m = minus.d - s0 * minus.d0 - s1 * minus.d1 + chi * g;
    let e3 = m - e1;
    debug_assert_eq!(
        e3.rem_euclid(2),
        0,
        "filler band ⟨0|e3|0⟩ must be realizable"
    );
    Ok(Type1Plan {
        k0,
        k1,
        s0: s0 as f64,
        s1: s1 as f64,
        g,
        chi_c: chi as f64,
        e1,
        e3,
        signed_count,
    })
}

/// A general type I jump between two realizable triples, built from five
/// cylinder bands: a `C₀` corrector band (boundary loop `γ_{d0⁺}·ι_t`, its
/// `|Δd0|` zeros on `C₀`), a static filler `⟨0|e1|g⟩`, an interior bubble
/// band (a modified form `(g, 0)` with `z` scaled by `χc·t`, its `2g`
/// off-center zeros shielded for `t ≠ 0`), a static filler `⟨0|e3|0⟩`, and a
/// `C₁` corrector band.
///
/// The singular count realized is `|Δd0| + |Δd1| + 2g`. With the default
/// corrector orientations this equals the count expression
/// `|Δd0| + |Δd1| + (d⁺−d0⁺−d1⁺) − (d⁻−d0⁻−d1⁻)` whenever that expression
/// is meaningful (its excess term nonnegative); when the expression goes
/// negative, the corrector hemispheres are flipped so each boundary
/// corrector absorbs total degree of the opposite sign, and the reported
/// [`JumpCurve::signed_count`] keeps the raw (negative) value while
/// [`JumpCurve::predicted_count`] records the realized count.
///
/// # Errors
///
/// [`JumpError::Map`] (`NotRealizable`) when either triple violates the
/// parity law `d ≡ d0 + d1 (mod 2)`.
pub fn general_jump_type1(
    minus: &DegreeTriple,
    plus: &DegreeTriple,
) -> Result<JumpCurve, JumpError> {
    let plan = plan_type1(minus, plus)?;
    let Type1Plan {
        k0,
        k1,
        s0,
        s1,
        g,
        chi_c,
        e1,
        e3,
        signed_count,
    } = plan;
    let d0p = plus.d0;
    let d1p = plus.d1;
    let band1 =
        CylinderMap::realize(&DegreeTriple::new(0, e1, g)).expect("e1 chosen with the parity of g");
    let band2 = CylinderMap::modified(g, 0, false);
    let band3 = CylinderMap::realize(&DegreeTriple::new(0, e3, 0)).expect("e3 chosen even");
    let kernel = extend_jump_kernel(move |t, x, s| {
        let scaled = (s * 5.0).clamp(0.0, 5.0);
        let band = (scaled.floor() as usize).min(4);
        let u = scaled - band as f64;
        match band {
            0 => {
                let alpha =
                    Complex64::from_polar(1.0, TAU * d0p as f64 * x) * corrector_loop(k0, t, x);
                f_band(alpha, Complex64::new(1.0, 0.0), s0, u)
            }
            1 => band1.eval(x, u),
            2 => {
                let v = band2.eval(x, u);
                SphereVec::new(v.x, v.y, chi_c * t * v.z)
            }
            3 => band3.eval(x, u),
            _ => {
                let beta =
                    Complex64::from_polar(1.0, TAU * d1p as f64 * x) * corrector_loop(k1, t, x);
                f_band(Complex64::new(1.0, 0.0), beta, -s1, u)
            }
        }
    });
    let endpoints = (
        endpoint_map(
            &kernel,
            -1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(*minus),
        ),
        endpoint_map(
            &kernel,
            1.0,
            InvolutionKind::TypeI,
            DeclaredInvariant::Triple(*plus),
        ),
    );
    let mut predicted = Vec::new();
    for x in odd_half_positions(k0) {
        predicted.push(SingularPrediction::point(x, 0.0));
    }
    for x in odd_half_positions(k1) {
        predicted.push(SingularPrediction::point(x, 0.5));
    }
    // Bubble zeros: band-local u = ¼ of band 2 ⇒ s = 0.45 ⇒ y = 0.225,
    // plus the mirror copies.
    for x in odd_half_positions(g) {
        predicted.push(SingularPrediction::point(x, 0.225));
        predicted.push(SingularPrediction::point(x, 0.775));
    }
    let count = (k0.abs() + k1.abs() + 2 * g) as usize;
    debug_assert_eq!(predicted.len(), count);
    Ok(JumpCurve {
        kernel,
        matrix_blocks: None,
        involution: InvolutionKind::TypeI,
        endpoints,
        predicted,
        predicted_count: Some(count),
        signed_count: Some(signed_count),
    })
}

/// Closed-form inverse of the quotient `π` over a point of the open lower
/// hemisphere or the equator: recovers `(x, y)` in the pseudofundamental
/// region from the chord chart `μ = (1−s)e^{2πit'} + s`.
fn pi_region_inverse(v: SphereVec) -> TorusPoint {
    let mu = Complex64::new(v.x, v.y);
    let s = ((1.0 - mu.norm_sqr()) / (2.0 * (1.0 - mu.re))).clamp(0.0, 1.0);
    let t_prime = ((mu - s) / (1.0 - s)).arg() / TAU;
    let y = t_prime.rem_euclid(1.0) * (1.0 - s);
    TorusPoint::new(s + y, y)
}

/// Transports a type I torus point to the type II torus through
/// `π⁻¹ ∘ Ψ`: the unique preimage when `Ψ(q)` avoids the collapsed arms.
fn pi_point_preimage(q: TorusPoint) -> TorusPoint {
    let v = psi_sphere(q);
    if v.z <= 0.0 {
        pi_region_inverse(v)
    } else {
        apply_involution(
            InvolutionKind::TypeII,
            pi_region_inverse(sphere_involution_vec(v)),
        )
    }
}

/// A general type II jump between two realizable pairs, obtained by pulling
/// a type I jump `⟨0|d⁻|dC⁻⟩ → ⟨0|d⁺|dC⁺⟩` back through the equivariant
/// quotient: `H_t = H_t^I ∘ Ψ⁻¹ ∘ π`. The inner `C₁` corrector zeros land
/// on the diagonal fixed circle; the inner bubble zeros land at their unique
/// `π`-preimages. Count: `|ΔdC| + Δd − ΔdC` (signed; the realized count is
/// `|ΔdC| + |Δd − s·ΔdC|` with the orientation policy of
/// [`general_jump_type1`]).
///
/// # Errors
///
/// [`JumpError::Map`] (`NotRealizable`) when either pair violates the
/// parity law `d ≡ dC (mod 2)`.
pub fn general_jump_type2(minus: &DegreePair, plus: &DegreePair) -> Result<JumpCurve, JumpError> {
    for p in [minus, plus] {
        if !realizable_pair(p) {
            return Err(MapError::NotRealizable {
                what: p.to_string(),
            }
            .into());
        }
    }
    let inner = general_jump_type1(
        &DegreeTriple::new(0, minus.d, minus.d_c),
        &DegreeTriple::new(0, plus.d, plus.d_c),
    )?;
    let inner_kernel = inner.kernel.clone();
    let kernel: FamilyKernel =
        Arc::new(move |t, p| inner_kernel(t, psi_sphere_inv(pi_quotient(p))));
    let endpoints = (
        endpoint_map(
            &kernel,
            -1.0,
            InvolutionKind::TypeII,
            DeclaredInvariant::Pair(*minus),
        ),
        endpoint_map(
            &kernel,
            1.0,
            InvolutionKind::TypeII,
            DeclaredInvariant::Pair(*plus),
        ),
    );
    let predicted: Vec<SingularPrediction> = inner
        .predicted
        .iter()
        .map(|pred| match *pred {
            SingularPrediction::Point { x, y } => {
                let q = pi_point_preimage(TorusPoint::new(x, y));
                SingularPrediction::point(q.x, q.y)
            }
            SingularPrediction::Circle { .. } => {
                unreachable!("type I general jumps predict only points")
            }
        })
        .collect();
    let signed = (plus.d_c - minus.d_c).abs() + (plus.d - minus.d) - (plus.d_c - minus.d_c);
    Ok(JumpCurve {
        kernel,
        matrix_blocks: None,
        involution: InvolutionKind::TypeII,
        endpoints,
        predicted_count: Some(predicted.len()),
        predicted,
        signed_count: Some(signed),
    })
}

/// A rank-n jump: a general type I jump block-embedded as
/// `Diag(I_{p−1}, Ψ⁻¹(H_t), −I_{q−1})`. The determinant vanishes exactly
/// where the underlying vector family does, so the singular set and count
/// are those of the 2×2 jump, while both endpoints have eigenvalue
/// signature `(p, q)`.
///
/// The boundary fixed-point invariants of a higher-rank family are only
/// defined mod 2, so the endpoint triples must carry `d0, d1 ∈ {0, 1}`.
///
/// # Errors
///
/// - [`JumpError::Matrix`] (`BadBlock`) when `p < 1`, `q < 1`, or
///   `p + q ≤ 2`;
/// - [`JumpError::Map`] (`NotRealizable`) for a parity violation or for
///   boundary degrees outside `{0, 1}`.
pub fn rank_n_jump(
    minus: &DegreeTriple,
    plus: &DegreeTriple,
    p: usize,
    q: usize,
) -> Result<JumpCurve, JumpError> {
    if p < 1 || q < 1 || p + q <= 2 {
        return Err(HermitianError::BadBlock { p, q }.into());
    }
    for t in [minus, plus] {
        if !(0..=1).contains(&t.d0) || !(0..=1).contains(&t.d1) {
            return Err(MapError::NotRealizable {
                what: format!("{t} (rank-n boundary classes live in {{0, 1}})"),
            }
            .into());
        }
    }
    let inner = general_jump_type1(minus, plus)?;
    Ok(JumpCurve {
        matrix_blocks: Some((p, q)),
        ..inner
    })
}

/// A numerical witness that an affine interpolation between two matrix maps
/// passes through a singular matrix over one sampled base point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AffineWitness {
    pub x: f64,
    pub y: f64,
    /// The interpolation parameter in `(0, 1)` at the crossing.
    pub s: f64,
    /// Smallest eigenvalue magnitude found at `s` (≈ 0).
    pub min_abs_eigenvalue: f64,
}

/// Verdict of [`signature_jump_check`].
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SignatureJumpVerdict {
    /// Equal endpoint signatures: the two maps can sit on one jump curve
    /// with discrete singular set.
    SameComponent { signature: Signature },
    /// Different signatures: every family joining the endpoints is singular
    /// on a hypersurface, witnessed on the affine interpolation over every
    /// sampled base point.
    ImpossibleWithDiscreteSingularSet {
        minus: Signature,
        plus: Signature,
        witnesses: Vec<AffineWitness>,
    },
}

/// Samples a nonsingular matrix map's eigenvalue signature over a grid,
/// asserting it is constant.
pub(crate) fn constant_signature(
    h: &MatrixTorusMap,
    samples: Grid,
) -> Result<Signature, HermitianError> {
    let mut sig = None;
    for p in samples.points() {
        let s = signature(&h.eval(p))?;
        match sig {
            None => sig = Some(s),
            Some(prev) => assert_eq!(
                prev, s,
                "nonsingular matrix map must have constant signature"
            ),
        }
    }
    Ok(sig.expect("grid is nonempty"))
}

/// Decides whether two nonsingular hermitian-matrix-valued torus maps can be
/// joined by a jump with only a discrete singular set: possible exactly when
/// their (constant) eigenvalue signatures agree. On disagreement the affine
/// interpolation `(1−s)H⁻ + sH⁺` is scanned over the `samples` base grid and
/// a singular crossing `s ∈ (0, 1)` is located over every sampled point.
///
/// # Panics
///
/// Panics when a map's sampled signature is not constant (the maps are
/// required to be nonsingular, which forces a constant signature).
///
/// # Errors
///
/// [`HermitianError::SingularMatrix`] when either input is singular at a
/// sample point.
pub fn signature_jump_check(
    h_minus: &MatrixTorusMap,
    h_plus: &MatrixTorusMap,
    samples: Grid,
) -> Result<SignatureJumpVerdict, HermitianError> {
    let sig_minus = constant_signature(h_minus, samples)?;
    let sig_plus = constant_signature(h_plus, samples)?;
    if sig_minus == sig_plus {
        return Ok(SignatureJumpVerdict::SameComponent {
            signature: sig_minus,
        });
    }
    let mut witnesses = Vec::new();
    for p in samples.points() {
        let a = h_minus.eval(p);
        let b = h_plus.eval(p);
        let min_abs_eig = |s: f64| -> f64 {
            let m = HermitianMatrix::from_matrix(a.matrix().scale(1.0 - s) + b.matrix().scale(s))
                .expect("affine combination of hermitian matrices is hermitian");
            m.eigenvalues()
                .iter()
                .map(|l| l.abs())
                .fold(f64::INFINITY, f64::min)
        };
        // Coarse scan, then ternary-style shrink around the best sample.
        let mut best_s = 0.5;
        let mut best = f64::INFINITY;
        for i in 1..100 {
            let s = i as f64 / 100.0;
            let v = min_abs_eig(s);
            if v < best {
                (best_s, best) = (s, v);
            }
        }
        let mut step = 0.01;
        for _ in 0..60 {
            let mut moved = false;
            for cand in [best_s - step, best_s + step] {
                if cand > 0.0 && cand < 1.0 {
                    let v = min_abs_eig(cand);
                    if v < best {
                        (best_s, best) = (cand, v);
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        witnesses.push(AffineWitness {
            x: p.x,
            y: p.y,
            s: best_s,
            min_abs_eigenvalue: best,
        });
    }
    Ok(SignatureJumpVerdict::ImpossibleWithDiscreteSingularSet {
        minus: sig_minus,
        plus: sig_plus,
        witnesses,
    })
}
