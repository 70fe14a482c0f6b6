//! Exact computer algebra for associative algebras indexed by a finite
//! semigroup and equipped with Nijenhuis operator families.
//!
//! The crate provides:
//!
//! - carriers and exhaustive axiom validators ([`algebra`], [`validate`]),
//! - the deformed product, induced module structures and split extensions
//!   derived from an operator family ([`derived`]),
//! - three cochain complexes (algebra, operator family, and their mapping
//!   cone) with exact differentials and the comparison chain map
//!   ([`cochain`]),
//! - exact linear algebra and cohomology tables, cocycle and coboundary
//!   queries, and a long-exact-sequence verifier ([`matrix`], [`cohomology`]),
//! - truncated one-parameter deformations with gauge equivalence and a
//!   trivialization step ([`deformation`]),
//! - abelian extensions classified by degree-two cohomology ([`extension`]).
//!
//! All arithmetic is exact: rationals with arbitrary-precision integers by
//! default, prime fields opt-in. There is no floating point anywhere.

pub mod algebra;
pub mod builders;
pub mod cochain;
pub mod cohomology;
pub mod deformation;
pub mod extension;
pub mod derived;
pub mod matrix;
pub mod rng;
pub mod scalar;
pub mod semigroup;
pub mod validate;

pub use algebra::{Context, NfBimodule, OmegaAlgebra, OperatorFamily, OperatorMatrix};
pub use scalar::{PrimeField, Rational, Scalar, DEFAULT_PRIME};
pub use semigroup::{Semigroup, SemigroupError};
pub use validate::{ValidationReport, Violation};
