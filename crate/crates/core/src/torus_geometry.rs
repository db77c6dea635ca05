//! Torus points, time-reversal involutions, fixed circles, fundamental
//! regions, equivariant extension, grids, sampling, and sample export.
//!
//! The torus is the square lattice quotient `X = R²/Z²` with coordinates
//! `(x, y) ∈ [0,1)²` and orientation `dx ∧ dy`. Two involutions act on it:
//!
//! - type I (complex conjugation `[z] ↦ [z̄]`): `(x, y) ↦ (x, −y mod 1)`,
//!   fixed set the two horizontal circles `C0 = {y = 0}` and `C1 = {y = ½}`;
//! - type II (`[z] ↦ [iz̄]`): `(x, y) ↦ (y, x)`, fixed set the diagonal
//!   circle `C = {y = x}`.
//!
//! Fixed circles are parametrized `t ↦ (t, j/2)` (type I) and `t ↦ (t, t)`
//! (type II); all winding numbers elsewhere in the crate refer to these
//! parametrizations.
//!
//! Floating-point exactness: the type I involution is bitwise involutive on
//! every coordinate of the form `k·2⁻⁵³` (the output grid of standard
//! uniform generators) and on dyadic grid fractions `i/n` with `n` a power
//! of two, because `1 − y` is then exactly representable. Coordinates below
//! `2⁻⁵³` that are not exactly zero may round across the seam; callers that
//! need exact involutivity should sample on such grids (all grids in this
//! crate are).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Angular tolerance used when validating closed-form kernels on boundaries
/// and seams.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Errors from torus-side geometry operations.
#[derive(Debug, Error)]
pub enum TorusGeometryError {
    /// A kernel handed to [`equivariant_extend`] does not satisfy the
    /// boundary conditions of the chosen fundamental region: values on the
    /// fixed set must be fixed by the target involution, and identified
    /// boundary edges must glue.
    #[error(
        "kernel violates fundamental-region boundary conditions: max defect {max_defect:.3e} at (x={x:.6}, y={y:.6}) (tolerance {tol:.1e})"
    )]
    BoundaryMismatch {
        max_defect: f64,
        x: f64,
        y: f64,
        tol: f64,
    },
}

/// A point on the square torus, with both coordinates in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    /// Builds a torus point, wrapping both coordinates into `[0, 1)`.
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: wrap_unit(x),
            y: wrap_unit(y),
        }
    }

    /// Shortest representative of the displacement to `other` on the torus,
    /// component-wise in `[−½, ½)`.
    pub fn displacement_to(&self, other: &TorusPoint) -> (f64, f64) {
        (wrap_half(other.x - self.x), wrap_half(other.y - self.y))
    }

    /// Torus distance (euclidean on shortest representatives).
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let (dx, dy) = self.displacement_to(other);
        dx.hypot(dy)
    }
}

/// Wraps a real number into `[0, 1)`.
pub fn wrap_unit(v: f64) -> f64 {
    let w = v - v.floor();
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Wraps a real number into `[−½, ½)`.
pub fn wrap_half(v: f64) -> f64 {
    let w = wrap_unit(v);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

/// The two time-reversal involutions on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvolutionKind {
    /// `[z] ↦ [z̄]`: `(x, y) ↦ (x, −y mod 1)`.
    #[serde(rename = "type-i")]
    TypeI,
    /// `[z] ↦ [iz̄]`: `(x, y) ↦ (y, x)`.
    #[serde(rename = "type-ii")]
    TypeII,
}

impl InvolutionKind {
    /// Human-readable name matching the CLI flag spelling.
    pub fn name(&self) -> &'static str {
        match self {
            InvolutionKind::TypeI => "type-i",
            InvolutionKind::TypeII => "type-ii",
        }
    }
}

/// Applies the involution to a torus point.
///
/// Type I maps `y = 0` to itself and `y ∈ (0,1)` to `1 − y`; type II swaps
/// the coordinates. See the module documentation for the exactness domain.
pub fn apply_involution(kind: InvolutionKind, p: TorusPoint) -> TorusPoint {
    match kind {
        InvolutionKind::TypeI => {
            let y = if p.y == 0.0 { 0.0 } else { 1.0 - p.y };
            TorusPoint::new(p.x, y)
        }
        InvolutionKind::TypeII => TorusPoint { x: p.y, y: p.x },
    }
}

/// One fixed circle of an involution, with its standard parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedCircle {
    /// `{y = 0}`, parametrized `t ↦ (t, 0)` (type I).
    C0,
    /// `{y = ½}`, parametrized `t ↦ (t, ½)` (type I).
    C1,
    /// `{y = x}`, parametrized `t ↦ (t, t)` (type II).
    Diagonal,
}

impl FixedCircle {
    /// The standard parametrization by `t ∈ [0, 1)`.
    pub fn point_at(&self, t: f64) -> TorusPoint {
        match self {
            FixedCircle::C0 => TorusPoint::new(t, 0.0),
            FixedCircle::C1 => TorusPoint::new(t, 0.5),
            FixedCircle::Diagonal => TorusPoint::new(t, t),
        }
    }

    /// Torus distance from `p` to this circle.
    pub fn distance_to(&self, p: &TorusPoint) -> f64 {
        match self {
            FixedCircle::C0 => wrap_half(p.y).abs(),
            FixedCircle::C1 => wrap_half(p.y - 0.5).abs(),
            FixedCircle::Diagonal => wrap_half(p.y - p.x).abs() / std::f64::consts::SQRT_2,
        }
    }
}

/// The fixed set of an involution: a list of circles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSet {
    pub circles: Vec<FixedCircle>,
}

/// Returns the fixed set of the involution.
pub fn fixed_set(kind: InvolutionKind) -> FixedSet {
    match kind {
        InvolutionKind::TypeI => FixedSet {
            circles: vec![FixedCircle::C0, FixedCircle::C1],
        },
        InvolutionKind::TypeII => FixedSet {
            circles: vec![FixedCircle::Diagonal],
        },
    }
}

/// Membership in the (pseudo)fundamental region of the involution:
/// the closed cylinder `Z = {0 ≤ y ≤ ½}` for type I, the closed triangle
/// `R = {0 ≤ y ≤ x ≤ 1}` (in `[0,1)` coordinates: `y ≤ x`) for type II.
pub fn in_fundamental_region(kind: InvolutionKind, p: TorusPoint) -> bool {
    match kind {
        InvolutionKind::TypeI => p.y <= 0.5,
        InvolutionKind::TypeII => p.y <= p.x,
    }
}

/// A point of the 2-sphere (or, for jump families, of the ambient R³).
///
/// Coordinates follow the traceless-hermitian dictionary: `(x, y, z)` =
/// `(a, Re b, Im b)`. The equator is `{z = 0}`; the target involution σ is
/// `(x, y, z) ↦ (x, y, −z)`; the sphere carries the outer-normal
/// orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereVec {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SphereVec {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// The equator basepoint `p₀ = (1, 0, 0)`.
    pub const BASEPOINT: SphereVec = SphereVec::new(1.0, 0.0, 0.0);

    pub fn dot(&self, o: &SphereVec) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &SphereVec) -> SphereVec {
        SphereVec::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> SphereVec {
        SphereVec::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn sub(&self, o: &SphereVec) -> SphereVec {
        SphereVec::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn distance(&self, o: &SphereVec) -> f64 {
        self.sub(o).norm()
    }

    /// Rescales to unit length; returns `None` for (near-)zero vectors.
    pub fn normalized(&self) -> Option<SphereVec> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }
}

/// The target involution σ on the sphere / ambient R³: reflection in the
/// `z = 0` plane (the image of entrywise matrix conjugation under the
/// traceless dictionary).
pub fn sphere_involution_vec(v: SphereVec) -> SphereVec {
    SphereVec::new(v.x, v.y, -v.z)
}

/// Values that carry an action of the target involution, for use with
/// [`equivariant_extend`].
pub trait EquivariantValue: Clone {
    /// Applies the target involution.
    fn involve(&self) -> Self;
    /// A metric compatible with the involution (used for defect checks).
    fn distance_to(&self, other: &Self) -> f64;
}

impl EquivariantValue for SphereVec {
    fn involve(&self) -> Self {
        sphere_involution_vec(*self)
    }
    fn distance_to(&self, other: &Self) -> f64 {
        self.distance(other)
    }
}

/// A map on the whole torus produced by [`equivariant_extend`].
pub struct ExtendedMap<V, F>
where
    F: Fn(TorusPoint) -> V,
{
    kind: InvolutionKind,
    kernel: F,
}

impl<V, F> ExtendedMap<V, F>
where
    V: EquivariantValue,
    F: Fn(TorusPoint) -> V,
{
    /// Evaluates the extension: `g(p) = f(p)` on the fundamental region and
    /// `g(p) = T_target(f(T(p)))` off it.
    pub fn eval(&self, p: TorusPoint) -> V {
        if in_fundamental_region(self.kind, p) {
            (self.kernel)(p)
        } else {
            (self.kernel)(apply_involution(self.kind, p)).involve()
        }
    }
}

/// Extends a kernel defined on the fundamental region to an equivariant map
/// of the whole torus.
///
/// The kernel must satisfy the boundary conditions of the region: its values
/// on the fixed circles must be fixed by the target involution, and for
/// type II the identified edges `A1 = {y = 0}` and `A2 = {x = 1}` must glue
/// (`f(1, t) = T_target(f(t, 0))`). Both are validated on `samples` points
/// per boundary component against [`CLOSED_FORM_TOL`].
///
/// # Errors
///
/// [`TorusGeometryError::BoundaryMismatch`] when a boundary sample violates
/// the conditions.
pub fn equivariant_extend<V, F>(
    kind: InvolutionKind,
    kernel: F,
    samples: usize,
) -> Result<ExtendedMap<V, F>, TorusGeometryError>
where
    V: EquivariantValue,
    F: Fn(TorusPoint) -> V,
{
    let mut worst: (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut record = |defect: f64, x: f64, y: f64| {
        if defect > worst.0 {
            worst = (defect, x, y);
        }
    };
    match kind {
        InvolutionKind::TypeI => {
            for circle in [FixedCircle::C0, FixedCircle::C1] {
                for i in 0..samples {
                    let p = circle.point_at(i as f64 / samples as f64);
                    let v = kernel(p);
                    record(v.distance_to(&v.involve()), p.x, p.y);
                }
            }
        }
        InvolutionKind::TypeII => {
            for i in 0..samples {
                let t = i as f64 / samples as f64;
                let p = TorusPoint::new(t, t);
                let v = kernel(p);
                record(v.distance_to(&v.involve()), p.x, p.y);
                // Edge gluing: the kernel is defined on the closed triangle
                // with x ∈ [0, 1]; compare f at (1, t) with T(f(t, 0)).
                let a2 = kernel(TorusPoint { x: 1.0, y: t });
                let a1 = kernel(TorusPoint::new(t, 0.0));
                record(a2.distance_to(&a1.involve()), 1.0, t);
            }
        }
    }
    if worst.0 > CLOSED_FORM_TOL {
        return Err(TorusGeometryError::BoundaryMismatch {
            max_defect: worst.0,
            x: worst.1,
            y: worst.2,
            tol: CLOSED_FORM_TOL,
        });
    }
    Ok(ExtendedMap { kind, kernel })
}

/// A uniform n×n sampling grid on the torus with its standard triangulation
/// (two positively oriented triangles per cell; total signed area 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// Builds a grid with `n ≥ 2` points per side.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "grid needs at least 2 points per side, got {n}");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The grid point at column `i`, row `j` (coordinates `(i/n, j/n)`),
    /// indices taken modulo `n`.
    pub fn point(&self, i: usize, j: usize) -> TorusPoint {
        let n = self.n;
        TorusPoint {
            x: (i % n) as f64 / n as f64,
            y: (j % n) as f64 / n as f64,
        }
    }

    /// Row-major index of the grid point at column `i`, row `j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        (j % self.n) * self.n + (i % self.n)
    }

    /// All grid points in row-major order (x fastest).
    pub fn points(&self) -> impl Iterator<Item = TorusPoint> + '_ {
        let n = self.n;
        (0..n * n).map(move |k| self.point(k % n, k / n))
    }

    /// Vertex index triples of the triangulation, both triangles of each
    /// cell positively oriented with respect to `dx ∧ dy`:
    /// `(P00, P10, P11)` and `(P00, P11, P01)`.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let n = self.n;
        (0..n * n).flat_map(move |c| {
            let (i, j) = (c % n, c / n);
            let p00 = self.index(i, j);
            let p10 = self.index(i + 1, j);
            let p01 = self.index(i, j + 1);
            let p11 = self.index(i + 1, j + 1);
            [[p00, p10, p11], [p00, p11, p01]]
        })
    }

    /// Sum of signed planar areas of all triangles (lifted to the unit
    /// square); equals 1 for every `n`.
    pub fn signed_area(&self) -> f64 {
        // Each cell contributes two triangles of area 1/(2n²) each, both
        // positively oriented; computed explicitly so the invariant is
        // testable against the actual triangulation.
        let n = self.n as f64;
        let h = 1.0 / n;
        let tri_area = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
            0.5 * ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1))
        };
        let per_cell =
            tri_area((0.0, 0.0), (h, 0.0), (h, h)) + tri_area((0.0, 0.0), (h, h), (0.0, h));
        per_cell * (self.n * self.n) as f64
    }
}

/// Sphere-valued samples of a map on a [`Grid`], row-major.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    pub n: usize,
    pub values: Vec<SphereVec>,
}

impl SampleGrid {
    /// Samples a closed-form kernel on the grid.
    pub fn sample(f: impl Fn(TorusPoint) -> SphereVec, grid: Grid) -> Self {
        let values = grid.points().map(f).collect();
        Self {
            n: grid.n(),
            values,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> SphereVec {
        self.values[(j % self.n) * self.n + (i % self.n)]
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n)
    }
}

/// JSON shape for sampled sphere-valued maps:
/// `{kind, n, samples: [{x, y, fx, fy, fz}, …]}`, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledMapJson {
    pub kind: InvolutionKind,
    pub n: usize,
    pub samples: Vec<SampleRow>,
}

/// One sample row of [`SampledMapJson`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleRow {
    pub x: f64,
    pub y: f64,
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
}

impl SampledMapJson {
    /// Exports grid samples of a kernel.
    pub fn from_kernel(
        kind: InvolutionKind,
        f: impl Fn(TorusPoint) -> SphereVec,
        grid: Grid,
    ) -> Self {
        let samples = grid
            .points()
            .map(|p| {
                let v = f(p);
                SampleRow {
                    x: p.x,
                    y: p.y,
                    fx: v.x,
                    fy: v.y,
                    fz: v.z,
                }
            })
            .collect();
        Self {
            kind,
            n: grid.n(),
            samples,
        }
    }

    /// Reassembles the sample grid (values only, row-major order trusted).
    pub fn to_sample_grid(&self) -> SampleGrid {
        SampleGrid {
            n: self.n,
            values: self
                .samples
                .iter()
                .map(|r| SphereVec::new(r.fx, r.fy, r.fz))
                .collect(),
        }
    }

    /// CSV export with the mandatory header `x,y,fx,fy,fz`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,fx,fy,fz\n");
        for r in &self.samples {
            out.push_str(&format!("{},{},{},{},{}\n", r.x, r.y, r.fx, r.fy, r.fz));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_reduces_to_unit_interval() {
        assert_eq!(wrap_unit(1.25), 0.25);
        assert_eq!(wrap_unit(-0.25), 0.75);
        assert_eq!(wrap_unit(1.0), 0.0);
        assert_eq!(wrap_unit(-1.0), 0.0);
        assert_eq!(wrap_unit(0.0), 0.0);
    }

    #[test]
    fn involutions_are_exactly_involutive_on_sample_grids() {
        // Dyadic grid fractions and 2⁻⁵³-grid values: bitwise involutivity.
        for kind in [InvolutionKind::TypeI, InvolutionKind::TypeII] {
            let n = 64;
            for i in 0..n {
                for j in 0..n {
                    let p = TorusPoint::new(i as f64 / n as f64, j as f64 / n as f64);
                    let q = apply_involution(kind, apply_involution(kind, p));
                    assert_eq!(p, q, "involution not exact at {p:?} ({kind:?})");
                }
            }
        }
        let scale = (1u64 << 53) as f64;
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..10_000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let x = (state >> 11) as f64 / scale;
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let y = (state >> 11) as f64 / scale;
            let p = TorusPoint::new(x, y);
            for kind in [InvolutionKind::TypeI, InvolutionKind::TypeII] {
                let q = apply_involution(kind, apply_involution(kind, p));
                assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn orbit_trichotomy() {
        // A point is fixed iff it lies on a fixed circle; otherwise its orbit
        // has exactly two elements.
        for kind in [InvolutionKind::TypeI, InvolutionKind::TypeII] {
            let circles = fixed_set(kind).circles;
            let n = 32;
            for i in 0..n {
                for j in 0..n {
                    let p = TorusPoint::new(i as f64 / n as f64, j as f64 / n as f64);
                    let q = apply_involution(kind, p);
                    let on_circle = circles.iter().any(|c| c.distance_to(&p) == 0.0);
                    assert_eq!(p == q, on_circle, "trichotomy failed at {p:?} ({kind:?})");
                }
            }
        }
    }

    #[test]
    fn fundamental_regions_cover_orbits() {
        // Every orbit meets the fundamental region.
        for kind in [InvolutionKind::TypeI, InvolutionKind::TypeII] {
            let n = 97;
            for i in 0..n {
                for j in 0..n {
                    let p = TorusPoint::new(i as f64 / n as f64, j as f64 / n as f64);
                    let q = apply_involution(kind, p);
                    assert!(
                        in_fundamental_region(kind, p) || in_fundamental_region(kind, q),
                        "orbit of {p:?} misses the region ({kind:?})"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_triangulation_has_signed_area_one() {
        for n in [2, 3, 16, 64] {
            let g = Grid::new(n);
            assert!((g.signed_area() - 1.0).abs() < 1e-12);
            assert_eq!(g.triangles().count(), 2 * n * n);
        }
    }

    #[test]
    fn equivariant_extension_reproduces_kernel_and_is_equivariant() {
        // A kernel on the type I cylinder with equator boundary values.
        let kernel = |p: TorusPoint| {
            let phi = std::f64::consts::TAU * p.x;
            let s = 2.0 * p.y; // cylinder coordinate in [0, 1]
            let r = 1.0 - 2.0 * s * (1.0 - s);
            let z = (1.0 - r * r).max(0.0).sqrt();
            SphereVec::new(r * phi.cos(), r * phi.sin(), z)
        };
        let g = equivariant_extend(InvolutionKind::TypeI, kernel, 256).expect("valid kernel");
        for i in 0..40 {
            for j in 0..40 {
                let p = TorusPoint::new(i as f64 / 40.0, j as f64 / 40.0);
                let lhs = g.eval(apply_involution(InvolutionKind::TypeI, p));
                let rhs = sphere_involution_vec(g.eval(p));
                assert!(lhs.distance(&rhs) < 1e-12, "not equivariant at {p:?}");
                if in_fundamental_region(InvolutionKind::TypeI, p) {
                    assert_eq!(g.eval(p), kernel(p));
                }
            }
        }
    }

    #[test]
    fn equivariant_extension_rejects_bad_boundary() {
        // North-pole value on C0 is not σ-fixed.
        let kernel = |_p: TorusPoint| SphereVec::new(0.0, 0.0, 1.0);
        match equivariant_extend(InvolutionKind::TypeI, kernel, 64) {
            Err(TorusGeometryError::BoundaryMismatch { max_defect, .. }) => {
                assert!(max_defect > 1.0);
            }
            Ok(_) => panic!("expected a boundary mismatch"),
        }
    }

    #[test]
    fn sampled_map_json_roundtrip() {
        let grid = Grid::new(4);
        let f = |p: TorusPoint| SphereVec::new(p.x, p.y, 0.0);
        let json = SampledMapJson::from_kernel(InvolutionKind::TypeI, f, grid);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"kind\":\"type-i\""));
        let back: SampledMapJson = serde_json::from_str(&text).unwrap();
        let sg = back.to_sample_grid();
        assert_eq!(sg.n, 4);
        assert_eq!(sg.value(1, 2), SphereVec::new(0.25, 0.5, 0.0));
        let csv = json.to_csv();
        assert!(csv.starts_with("x,y,fx,fy,fz\n"));
        assert_eq!(csv.lines().count(), 17);
    }
}
