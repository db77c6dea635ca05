//! Homotopy invariants of equivariant torus-to-sphere maps: total degree
//! (two independent algorithms), fixed-point winding numbers, mod-2
//! fixed-point signatures, the assembled degree triple / degree pair, the
//! concatenation algebra on triples, and the parity realizability
//! predicates with their staircase decomposition.
//!
//! Conventions (fixed once, globally): the torus carries `dx ∧ dy`; the
//! sphere carries the outer-normal orientation, so a tangent basis `(u, v)`
//! at `n` is positive iff `det[u, v, n] > 0`; fixed circles use the
//! parametrizations of [`crate::torus_geometry::FixedCircle`]; the equator
//! loop `φ ↦ (cos φ, sin φ, 0)` has winding +1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::torus_geometry::{
    apply_involution, EquivariantValue, Grid, InvolutionKind, SampleGrid, SphereVec, TorusPoint,
};

/// Default evaluation grid (per side).
pub const DEFAULT_GRID: usize = 256;
/// Default sample count for circle winding numbers.
pub const DEFAULT_WINDING_SAMPLES: usize = 4096;
/// Number of random orbits on which equivariance is checked.
pub const EQUIVARIANCE_ORBITS: usize = 1000;
/// Max orbit defect for accepting a map as equivariant.
pub const EQUIVARIANCE_TOL: f64 = 1e-6;

/// Errors from invariant computation.
#[derive(Debug, Error)]
pub enum DegreeError {
    /// The sampling grid cannot resolve the map (antipodal or degenerate
    /// image triangles, or a raw degree sum too far from an integer).
    #[error("resolution too coarse: {reason} (grid {n})")]
    ResolutionTooCoarse { reason: String, n: usize },
    /// The preimage-counting fiber point lies on an image fold or edge.
    #[error("fiber point is irregular (residual {residual:.3e}); retry with a perturbed point")]
    IrregularValue { residual: f64 },
    /// A winding-number sample is too far from the target circle.
    #[error("loop sample at parameter {at:.6} is off the circle (planar radius {radius:.3e})")]
    OffCircle { at: f64, radius: f64 },
    /// Consecutive winding-number samples differ by π/2 or more.
    #[error("angular step {step:.4} at parameter {at:.6} exceeds π/2; increase samples")]
    StepTooLarge { step: f64, at: f64 },
    /// The map is not equivariant within tolerance.
    #[error("map is not equivariant: max orbit defect {defect:.3e} > {tol:.1e}")]
    NotEquivariant { defect: f64, tol: f64 },
    /// Concatenation of triples with mismatched interface degrees.
    #[error("incompatible triples: left ends at d1 = {left_d1}, right starts at d0 = {right_d0}")]
    Incompatible { left_d1: i64, right_d0: i64 },
    /// The invariant violates its parity law and is realized by no
    /// equivariant map.
    #[error("invariant {what} is not realizable: parity condition violated")]
    NotRealizable { what: String },
}

/// The complete type I invariant `⟨d0 | d | d1⟩`: fixed-point degrees on
/// `C0` and `C1` and the total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeTriple {
    pub d0: i64,
    pub d: i64,
    pub d1: i64,
}

impl DegreeTriple {
    pub const fn new(d0: i64, d: i64, d1: i64) -> Self {
        Self { d0, d, d1 }
    }
}

impl std::fmt::Display for DegreeTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨{}|{}|{}⟩", self.d0, self.d, self.d1)
    }
}

/// The complete type II invariant `⟨dC | d⟩`: fixed-point degree on the
/// diagonal circle and the total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreePair {
    #[serde(rename = "dC")]
    pub d_c: i64,
    pub d: i64,
}

impl DegreePair {
    pub const fn new(d_c: i64, d: i64) -> Self {
        Self { d_c, d }
    }
}

impl std::fmt::Display for DegreePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "⟨{}|{}⟩", self.d_c, self.d)
    }
}

/// Mod-2 fixed-point classes, one per fixed circle, for targets whose real
/// locus has fundamental group of order two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSignature {
    pub values: Vec<u8>,
}

impl FixedSignature {
    pub fn from_triple(t: &DegreeTriple) -> Self {
        Self {
            values: vec![(t.d0.rem_euclid(2)) as u8, (t.d1.rem_euclid(2)) as u8],
        }
    }

    pub fn from_pair(p: &DegreePair) -> Self {
        Self {
            values: vec![(p.d_c.rem_euclid(2)) as u8],
        }
    }
}

/// Result of a total-degree computation: the rounded integer plus the raw
/// (pre-rounding) normalized area sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalDegree {
    pub degree: i64,
    pub raw: f64,
}

/// Total degree by summed signed spherical-triangle areas over the grid
/// triangulation (`deg = Ω/4π`).
///
/// Samples are unit-normalized first; the signed solid angle of each image
/// triangle comes from the two-argument arctangent solid-angle formula.
///
/// # Errors
///
/// [`DegreeError::ResolutionTooCoarse`] when an image triangle has a
/// (near-)antipodal or zero-length vertex pair, or when the raw sum is not
/// within 0.1 of an integer.
pub fn total_degree_simplicial(samples: &SampleGrid) -> Result<TotalDegree, DegreeError> {
    let n = samples.n;
    let grid = samples.grid();
    let mut unit: Vec<SphereVec> = Vec::with_capacity(samples.values.len());
    for v in &samples.values {
        match v.normalized() {
            Some(u) => unit.push(u),
            None => {
                return Err(DegreeError::ResolutionTooCoarse {
                    reason: "zero-length sample (map leaves the sphere)".into(),
                    n,
                })
            }
        }
    }
    let mut omega = 0.0;
    for [a, b, c] in grid.triangles() {
        let (v1, v2, v3) = (unit[a], unit[b], unit[c]);
        let d12 = v1.dot(&v2);
        let d23 = v2.dot(&v3);
        let d31 = v3.dot(&v1);
        if d12 <= -1.0 + 1e-6 || d23 <= -1.0 + 1e-6 || d31 <= -1.0 + 1e-6 {
            return Err(DegreeError::ResolutionTooCoarse {
                reason: "antipodal image samples in one triangle".into(),
                n,
            });
        }
        let num = v1.dot(&v2.cross(&v3));
        let den = 1.0 + d12 + d23 + d31;
        omega += 2.0 * num.atan2(den);
    }
    let raw = omega / (4.0 * std::f64::consts::PI);
    let degree = raw.round();
    if (raw - degree).abs() >= 0.1 {
        return Err(DegreeError::ResolutionTooCoarse {
            reason: format!("raw degree {raw:.4} too far from an integer"),
            n,
        });
    }
    Ok(TotalDegree {
        degree: degree as i64,
        raw,
    })
}

/// Total degree by signed counting of image triangles covering the fiber
/// point `q` (radial covering test on the piecewise-linear image).
///
/// # Errors
///
/// [`DegreeError::IrregularValue`] when `q` lies within tolerance of the
/// boundary of a covering triangle (an image fold); callers should retry
/// with a perturbed `q` or use [`total_degree_preimage_robust`].
pub fn total_degree_preimage(samples: &SampleGrid, q: SphereVec) -> Result<i64, DegreeError> {
    const TOL: f64 = 1e-10;
    let q = q.normalized().expect("fiber point must be nonzero");
    let grid = samples.grid();
    let unit: Vec<Option<SphereVec>> = samples.values.iter().map(|v| v.normalized()).collect();
    let mut count = 0i64;
    for [a, b, c] in grid.triangles() {
        let (Some(v1), Some(v2), Some(v3)) = (unit[a], unit[b], unit[c]) else {
            // Off-sphere (zero) samples cannot cover a unit fiber point.
            continue;
        };
        let s1 = v1.cross(&v2).dot(&q);
        let s2 = v2.cross(&v3).dot(&q);
        let s3 = v3.cross(&v1).dot(&q);
        // The three-plane sign test is blind to the antipode: the cone over
        // the antipodal triangle satisfies it with all signs flipped. Only
        // triangles in q's own hemisphere are candidates.
        let near = q.dot(&v1) + q.dot(&v2) + q.dot(&v3) > 0.0;
        let pos = [s1, s2, s3].iter().filter(|s| **s > TOL).count();
        let neg = [s1, s2, s3].iter().filter(|s| **s < -TOL).count();
        let zer = 3 - pos - neg;
        if !near {
            continue;
        }
        if zer == 0 {
            if pos == 3 {
                count += 1;
            } else if neg == 3 {
                count -= 1;
            }
            continue;
        }
        // A degenerate (zero-area) triangle cannot cover a regular value.
        let volume = v1.dot(&v2.cross(&v3)).abs();
        let degenerate = volume < TOL
            && v1.cross(&v2).norm() * v2.cross(&v3).norm() * v3.cross(&v1).norm() < TOL;
        if degenerate {
            continue;
        }
        // Near-zero determinant with the remaining signs agreeing means q
        // sits on the boundary of a candidate covering triangle.
        if neg == 0 || pos == 0 {
            let residual = [s1, s2, s3]
                .iter()
                .map(|s| s.abs())
                .fold(f64::INFINITY, f64::min);
            return Err(DegreeError::IrregularValue { residual });
        }
        // Mixed strict signs: q is strictly outside; the near-zero
        // determinant is irrelevant.
    }
    Ok(count)
}

/// [`total_degree_preimage`] with deterministic retries: on an irregular
/// fiber point the point is nudged by a small deterministic rotation and
/// the count recomputed, up to `tries` attempts.
pub fn total_degree_preimage_robust(
    samples: &SampleGrid,
    q: SphereVec,
    tries: usize,
) -> Result<i64, DegreeError> {
    let mut rng = SplitMix64::new(0x5EED_u64 ^ (samples.n as u64));
    let mut point = q;
    let mut last_err = None;
    for _ in 0..tries.max(1) {
        match total_degree_preimage(samples, point) {
            Ok(c) => return Ok(c),
            Err(e @ DegreeError::IrregularValue { .. }) => {
                last_err = Some(e);
                // Nudge by ~1e-4 radians in a pseudo-random tangent direction.
                let t = SphereVec::new(
                    rng.next_unit() - 0.5,
                    rng.next_unit() - 0.5,
                    rng.next_unit() - 0.5,
                );
                let tangent = t.sub(&point.scale(t.dot(&point))); // project off q
                if let Some(dir) = tangent.normalized() {
                    let eps: f64 = 1e-4;
                    point = point
                        .scale(eps.cos())
                        .sub(&dir.scale(-eps.sin()))
                        .normalized()
                        .unwrap();
                }
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Winding number of a sampled loop around the equator circle.
///
/// `loop_fn` is sampled at `samples` parameters `t = i/samples`; the planar
/// angle `atan2(y, x)` is unwrapped step by step.
///
/// # Errors
///
/// [`DegreeError::OffCircle`] when a sample's planar radius is below 1e−6
/// (no well-defined angle); [`DegreeError::StepTooLarge`] when an unwrapped
/// step reaches π/2 (aliasing risk); [`DegreeError::ResolutionTooCoarse`]
/// when the total is not within 0.05 of an integer.
pub fn winding_number(
    loop_fn: impl Fn(f64) -> SphereVec,
    samples: usize,
) -> Result<i64, DegreeError> {
    assert!(samples >= 4, "need at least 4 winding samples");
    let angle_at = |t: f64| -> Result<f64, DegreeError> {
        let v = loop_fn(t);
        let r = v.x.hypot(v.y);
        if r < 1e-6 {
            return Err(DegreeError::OffCircle { at: t, radius: r });
        }
        Ok(v.y.atan2(v.x))
    };
    let mut total = 0.0;
    let mut prev = angle_at(0.0)?;
    for i in 1..=samples {
        let t = if i == samples {
            0.0
        } else {
            i as f64 / samples as f64
        };
        let theta = angle_at(t)?;
        let mut step = theta - prev;
        step -= std::f64::consts::TAU * (step / std::f64::consts::TAU).round();
        if step.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(DegreeError::StepTooLarge {
                step: step.abs(),
                at: t,
            });
        }
        total += step;
        prev = theta;
    }
    let raw = total / std::f64::consts::TAU;
    let rounded = raw.round();
    if (raw - rounded).abs() >= 0.05 {
        return Err(DegreeError::ResolutionTooCoarse {
            reason: format!("raw winding {raw:.4} too far from an integer"),
            n: samples,
        });
    }
    Ok(rounded as i64)
}

/// Max equivariance defect `dist(f(T·x), T_target(f(x)))` over `orbits`
/// deterministic pseudo-random sample points (coordinates drawn on the
/// `2⁻⁵³` grid, where both involutions are bitwise exact).
pub fn equivariance_defect<V: EquivariantValue>(
    kind: InvolutionKind,
    f: impl Fn(TorusPoint) -> V,
    orbits: usize,
) -> f64 {
    let mut rng = SplitMix64::new(0x0BEE_F00D);
    let mut worst = 0.0f64;
    for _ in 0..orbits {
        let p = TorusPoint::new(rng.next_unit(), rng.next_unit());
        let lhs = f(apply_involution(kind, p));
        let rhs = f(p).involve();
        worst = worst.max(lhs.distance_to(&rhs));
    }
    worst
}

/// A measured type I invariant with its numerical diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredTriple {
    pub triple: DegreeTriple,
    pub raw_degree: f64,
    pub equivariance_defect: f64,
    pub grid: usize,
    pub winding_samples: usize,
}

/// A measured type II invariant with its numerical diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasuredPair {
    pub pair: DegreePair,
    pub raw_degree: f64,
    pub equivariance_defect: f64,
    pub grid: usize,
    pub winding_samples: usize,
}

/// Computes the degree triple of a type I equivariant sphere-valued map:
/// winding numbers on `C0` and `C1` plus the simplicial total degree.
///
/// # Errors
///
/// [`DegreeError::NotEquivariant`] when the orbit defect exceeds 1e−6;
/// winding/degree errors are propagated.
pub fn degree_triple(
    f: impl Fn(TorusPoint) -> SphereVec,
    grid: Grid,
) -> Result<MeasuredTriple, DegreeError> {
    let defect = equivariance_defect(InvolutionKind::TypeI, &f, EQUIVARIANCE_ORBITS);
    if defect > EQUIVARIANCE_TOL {
        return Err(DegreeError::NotEquivariant {
            defect,
            tol: EQUIVARIANCE_TOL,
        });
    }
    let d0 = winding_number(|t| f(TorusPoint::new(t, 0.0)), DEFAULT_WINDING_SAMPLES)?;
    let d1 = winding_number(|t| f(TorusPoint::new(t, 0.5)), DEFAULT_WINDING_SAMPLES)?;
    let samples = SampleGrid::sample(&f, grid);
    let total = total_degree_simplicial(&samples)?;
    Ok(MeasuredTriple {
        triple: DegreeTriple::new(d0, total.degree, d1),
        raw_degree: total.raw,
        equivariance_defect: defect,
        grid: grid.n(),
        winding_samples: DEFAULT_WINDING_SAMPLES,
    })
}

/// Computes the degree pair of a type II equivariant sphere-valued map:
/// winding number on the diagonal circle plus the simplicial total degree.
///
/// # Errors
///
/// As for [`degree_triple`].
pub fn degree_pair(
    f: impl Fn(TorusPoint) -> SphereVec,
    grid: Grid,
) -> Result<MeasuredPair, DegreeError> {
    let defect = equivariance_defect(InvolutionKind::TypeII, &f, EQUIVARIANCE_ORBITS);
    if defect > EQUIVARIANCE_TOL {
        return Err(DegreeError::NotEquivariant {
            defect,
            tol: EQUIVARIANCE_TOL,
        });
    }
    let d_c = winding_number(|t| f(TorusPoint::new(t, t)), DEFAULT_WINDING_SAMPLES)?;
    let samples = SampleGrid::sample(&f, grid);
    let total = total_degree_simplicial(&samples)?;
    Ok(MeasuredPair {
        pair: DegreePair::new(d_c, total.degree),
        raw_degree: total.raw,
        equivariance_defect: defect,
        grid: grid.n(),
        winding_samples: DEFAULT_WINDING_SAMPLES,
    })
}

/// Concatenation on degree triples:
/// `⟨d0|d|e⟩ • ⟨e|d'|d1⟩ = ⟨d0|d+d'|d1⟩`.
///
/// # Errors
///
/// [`DegreeError::Incompatible`] when the interface degrees differ.
pub fn concat_triples(t1: DegreeTriple, t2: DegreeTriple) -> Result<DegreeTriple, DegreeError> {
    if t1.d1 != t2.d0 {
        return Err(DegreeError::Incompatible {
            left_d1: t1.d1,
            right_d0: t2.d0,
        });
    }
    Ok(DegreeTriple::new(t1.d0, t1.d + t2.d, t2.d1))
}

/// The type I parity law: `⟨d0|d|d1⟩` is attained by an equivariant map
/// iff `d ≡ d0 + d1 (mod 2)`.
pub fn realizable_triple(t: &DegreeTriple) -> bool {
    (t.d - t.d0 - t.d1).rem_euclid(2) == 0
}

/// The type II parity law: `⟨dC|d⟩` is attained iff `d ≡ dC (mod 2)`.
pub fn realizable_pair(p: &DegreePair) -> bool {
    (p.d - p.d_c).rem_euclid(2) == 0
}

/// Decomposes a realizable triple into a compatible chain of elementary
/// triples (each of the form `⟨a|±1|b⟩` with `|a−b| = 1`) whose
/// concatenation re-yields the input: a descending staircase from `d0` to
/// 0, a core of `⟨0|±1|1⟩ • ⟨1|±1|0⟩` pairs carrying the excess total
/// degree, and an ascending staircase from 0 to `d1`. The triple
/// `⟨0|0|0⟩` decomposes into the empty chain (realized by a constant map).
///
/// # Errors
///
/// [`DegreeError::NotRealizable`] when the parity law fails.
pub fn decompose_triple(t: &DegreeTriple) -> Result<Vec<DegreeTriple>, DegreeError> {
    if !realizable_triple(t) {
        return Err(DegreeError::NotRealizable {
            what: t.to_string(),
        });
    }
    let mut parts = Vec::new();
    let s0 = t.d0.signum();
    for j in (1..=t.d0.abs()).rev() {
        parts.push(DegreeTriple::new(j * s0, s0, (j - 1) * s0));
    }
    let excess = t.d - t.d0 - t.d1; // even by the parity law
    let sign = excess.signum();
    for _ in 0..excess.abs() / 2 {
        parts.push(DegreeTriple::new(0, sign, 1));
        parts.push(DegreeTriple::new(1, sign, 0));
    }
    let s1 = t.d1.signum();
    for j in 1..=t.d1.abs() {
        parts.push(DegreeTriple::new((j - 1) * s1, s1, j * s1));
    }
    if let Some(folded) = fold_triples(&parts) {
        debug_assert_eq!(&folded, t);
    }
    Ok(parts)
}

/// Folds a chain of triples with [`concat_triples`]; `None` for an empty
/// chain.
pub fn fold_triples(parts: &[DegreeTriple]) -> Option<DegreeTriple> {
    let mut iter = parts.iter();
    let first = *iter.next()?;
    Some(iter.fold(first, |acc, t| {
        concat_triples(acc, *t).expect("chain must be compatible")
    }))
}

/// Minimal deterministic pseudo-random generator (SplitMix64) for internal
/// sampling; avoids a runtime dependency on an external RNG and fixes the
/// sample sequence across platforms.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` on the `2⁻⁵³` grid (exact under both involutions).
    pub(crate) fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    /// Inline normal-form cylinder kernel with boundary degrees (d, 0):
    /// a continuous, exactly equivariant map of triple ⟨d|d|0⟩.
    fn nf(d: i64) -> impl Fn(TorusPoint) -> SphereVec {
        move |p: TorusPoint| {
            let (y, flip) = if p.y <= 0.5 {
                (p.y, 1.0)
            } else {
                (1.0 - p.y, -1.0)
            };
            let s = 2.0 * y;
            let w = if s <= 0.5 {
                let phi = TAU * d as f64 * p.x;
                ((1.0 - 2.0 * s) * phi.cos(), (1.0 - 2.0 * s) * phi.sin())
            } else {
                (2.0 * s - 1.0, 0.0)
            };
            let z = 2.0 * (s * (1.0 - s)).max(0.0).sqrt();
            SphereVec::new(w.0, w.1, flip * z)
        }
    }

    #[test]
    fn simplicial_degree_of_normal_form_kernels() {
        for d in [-2i64, -1, 0, 1, 2, 3] {
            let samples = SampleGrid::sample(nf(d), Grid::new(128));
            let total = total_degree_simplicial(&samples).unwrap();
            assert_eq!(total.degree, d, "normal-form degree {d}");
            assert!((total.raw - d as f64).abs() < 0.01);
        }
    }

    #[test]
    fn simplicial_degree_of_constant_map() {
        let samples = SampleGrid::sample(|_| SphereVec::new(1.0, 0.0, 0.0), Grid::new(16));
        assert_eq!(total_degree_simplicial(&samples).unwrap().degree, 0);
    }

    #[test]
    fn preimage_degree_agrees_with_simplicial() {
        let q = SphereVec::new(0.3, -0.5, 0.81).normalized().unwrap();
        for d in [-2i64, 0, 1, 3] {
            let samples = SampleGrid::sample(nf(d), Grid::new(128));
            let count = total_degree_preimage_robust(&samples, q, 5).unwrap();
            assert_eq!(count, d, "preimage degree {d}");
        }
        let constant = SampleGrid::sample(|_| SphereVec::new(1.0, 0.0, 0.0), Grid::new(16));
        assert_eq!(
            total_degree_preimage(&constant, SphereVec::new(0.0, 0.0, 1.0)).unwrap(),
            0
        );
    }

    #[test]
    fn winding_numbers_of_standard_loops() {
        for d in [-3i64, -1, 0, 1, 2, 3] {
            let w = winding_number(
                |t| SphereVec::new((TAU * d as f64 * t).cos(), (TAU * d as f64 * t).sin(), 0.0),
                DEFAULT_WINDING_SAMPLES,
            )
            .unwrap();
            assert_eq!(w, d);
        }
        // z ↦ z³ as a planar loop.
        let w = winding_number(
            |t| {
                let z = num_complex::Complex64::from_polar(1.0, TAU * t);
                let w = z * z * z;
                SphereVec::new(w.re, w.im, 0.0)
            },
            512,
        )
        .unwrap();
        assert_eq!(w, 3);
    }

    #[test]
    fn winding_rejects_bad_loops() {
        assert!(matches!(
            winding_number(|_| SphereVec::new(0.0, 0.0, 1.0), 64),
            Err(DegreeError::OffCircle { .. })
        ));
        // Winding 40 with 64 samples: steps of 2π·40/64 ≈ 3.9 > π/2.
        assert!(matches!(
            winding_number(
                |t| SphereVec::new((TAU * 40.0 * t).cos(), (TAU * 40.0 * t).sin(), 0.0),
                64
            ),
            Err(DegreeError::StepTooLarge { .. })
        ));
    }

    #[test]
    fn triple_of_normal_form_kernel() {
        let m = degree_triple(nf(1), Grid::new(128)).unwrap();
        assert_eq!(m.triple, DegreeTriple::new(1, 1, 0));
        assert_eq!(m.equivariance_defect, 0.0);
        let m = degree_triple(nf(-2), Grid::new(128)).unwrap();
        assert_eq!(m.triple, DegreeTriple::new(-2, -2, 0));
    }

    #[test]
    fn pair_of_diagonal_invariant_map() {
        // f(x, y) = γ_d(x + y) is exactly type II equivariant with pair ⟨2d|0⟩.
        for d in [-1i64, 0, 2] {
            let f = move |p: TorusPoint| {
                let phi = TAU * d as f64 * (p.x + p.y);
                SphereVec::new(phi.cos(), phi.sin(), 0.0)
            };
            let m = degree_pair(f, Grid::new(64)).unwrap();
            assert_eq!(m.pair, DegreePair::new(2 * d, 0));
        }
    }

    #[test]
    fn non_equivariant_map_is_rejected() {
        let f = |p: TorusPoint| {
            let u = (2.0 * p.y - 1.0).abs(); // even in the involution, breaks σ
            let r = (1.0 - u * u).max(0.0).sqrt();
            SphereVec::new(r * (TAU * p.x).cos(), r * (TAU * p.x).sin(), u)
        };
        assert!(matches!(
            degree_triple(f, Grid::new(32)),
            Err(DegreeError::NotEquivariant { .. })
        ));
    }

    #[test]
    fn concat_algebra() {
        let t = concat_triples(DegreeTriple::new(0, 1, 1), DegreeTriple::new(1, 1, 0)).unwrap();
        assert_eq!(t, DegreeTriple::new(0, 2, 0));
        for a in -2..=2 {
            let idem = DegreeTriple::new(a, 0, a);
            assert_eq!(concat_triples(idem, idem).unwrap(), idem);
        }
        assert!(matches!(
            concat_triples(DegreeTriple::new(2, 5, 3), DegreeTriple::new(1, 1, 0)),
            Err(DegreeError::Incompatible { .. })
        ));
    }

    #[test]
    fn parity_predicates() {
        assert!(!realizable_triple(&DegreeTriple::new(0, 1, 0)));
        assert!(realizable_triple(&DegreeTriple::new(1, 3, 0)));
        assert!(realizable_pair(&DegreePair::new(0, 2)));
        assert!(!realizable_pair(&DegreePair::new(1, 2)));
    }

    #[test]
    fn decomposition_folds_back() {
        assert_eq!(
            decompose_triple(&DegreeTriple::new(0, 2, 0)).unwrap(),
            vec![DegreeTriple::new(0, 1, 1), DegreeTriple::new(1, 1, 0)]
        );
        assert_eq!(
            decompose_triple(&DegreeTriple::new(1, 1, 0)).unwrap(),
            vec![DegreeTriple::new(1, 1, 0)]
        );
        assert!(decompose_triple(&DegreeTriple::new(0, 0, 0))
            .unwrap()
            .is_empty());
        for d0 in -3..=3i64 {
            for d1 in -3..=3i64 {
                for d in -4..=4i64 {
                    let t = DegreeTriple::new(d0, d, d1);
                    if !realizable_triple(&t) {
                        assert!(decompose_triple(&t).is_err());
                        continue;
                    }
                    let parts = decompose_triple(&t).unwrap();
                    if let Some(folded) = fold_triples(&parts) {
                        assert_eq!(folded, t, "fold mismatch for {t}");
                    } else {
                        assert_eq!(t, DegreeTriple::new(0, 0, 0));
                    }
                    for part in &parts {
                        assert_eq!(part.d.abs(), 1, "non-elementary part {part} of {t}");
                        assert_eq!((part.d0 - part.d1).abs(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn fixed_signatures_are_windings_mod_two() {
        let t = DegreeTriple::new(-1, 3, 2);
        assert_eq!(FixedSignature::from_triple(&t).values, vec![1, 0]);
        let p = DegreePair::new(3, 1);
        assert_eq!(FixedSignature::from_pair(&p).values, vec![1]);
    }

    #[test]
    fn triple_pair_display_and_serde() {
        let t = DegreeTriple::new(1, -3, 0);
        assert_eq!(t.to_string(), "⟨1|-3|0⟩");
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"d0":1,"d":-3,"d1":0}"#);
        let p = DegreePair::new(2, 4);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"dC":2,"d":4}"#);
    }
}
