//! Exact-arithmetic verification toolkit for quotient constructions of
//! hyperkaehler manifolds.
//!
//! The crate has four pillars:
//!
//! - [`torsion`]: torsion points of elliptic curves and products, complex
//!   multiplication by small roots of unity, affine automorphisms, finite
//!   translation subgroups and coset representatives.
//! - [`cycles`]: zero-cycles on finite models of abelian surfaces, the
//!   induced actions on symmetric products, invariance of the zero-sum
//!   fiber, and freeness verdicts by closed-form criterion and by
//!   independent brute-force search.
//! - [`numerics`]: index constraints, Hodge numbers and Euler
//!   characteristics of Enriques manifolds, and the invariant table of the
//!   known hyperkaehler families.
//! - [`lattice`] and [`mukai`]: integral quadratic lattices (the K3 lattice
//!   with its Enriques involution, eigenlattices, discriminant groups, root
//!   enumeration) and Mukai-vector arithmetic over a scaled Neron-Severi
//!   model.
//!
//! Everything is exact: residue arithmetic at explicit torsion levels,
//! `BigInt`/`BigRational` linear algebra, no floating point in any result.

pub mod cycles;
mod linalg;
pub mod lattice;
pub mod mukai;
pub mod numerics;
pub mod torsion;

pub use linalg::Inertia;
