//! Equivariant homotopy invariants of maps from the square 2-torus into the
//! 2-sphere and into spaces of nonsingular hermitian matrices.
//!
//! The crate computes complete homotopy invariants of maps equivariant with
//! respect to a time-reversal involution on the torus (type I: complex
//! conjugation, type II: conjugation composed with a quarter rotation):
//! eigenvalue signatures, total (Brouwer) degrees by two independent
//! algorithms, fixed-point degrees (winding numbers on the fixed circles),
//! and the assembled degree triples `⟨d0|d|d1⟩` / degree pairs `⟨dC|d⟩`.
//! It constructs closed-form equivariant maps realizing any admissible
//! invariant, and builds one-parameter families ("jump curves") connecting
//! inequivalent classes through a single degenerate time with a finite,
//! independently detected singular set.
//!
//! Modules follow the pipeline:
//! - [`torus_geometry`]: torus points, involutions, fixed circles, grids,
//!   equivariant extension from fundamental regions, sampling and export;
//! - [`hermitian_core`]: hermitian matrices, eigenvalue signatures, the
//!   traceless 2×2 ↔ R³ dictionary, retraction to the unit sphere, and the
//!   block embedding into n×n matrices;
//! - [`degree_invariants`]: degree algorithms, winding numbers, triple/pair
//!   assembly, concatenation algebra, parity realizability, decomposition;
//! - [`map_constructors`]: normal forms, cylinder concatenation, triple/pair
//!   realization, Weierstrass examples, and the physics lattice family;
//! - [`jump_curves`]: jump-curve constructors, the singular-set detector,
//!   and the signature-jump impossibility check.

pub mod degree_invariants;
pub mod hermitian_core;
pub mod jump_curves;
pub mod map_constructors;
pub mod torus_geometry;
