//! Exact verification of Lefschetz-type fixed point identities for
//! correspondences on model manifolds.
//!
//! Each model computes a global side (an alternating trace on cohomology)
//! and a local side (a sum over enumerated fixed points) by independent
//! code paths, and reports both:
//!
//! - [`torus`]: affine smooth correspondences on `Tⁿ`, with the
//!   diagonal-class integral as a third path.
//! - [`ctorus`]: holomorphic correspondences on `ℂ/Λ`, including the
//!   `n`-division (Hecke-like) family.
//! - [`cp1`]: Möbius maps on `ℂP¹` lifted to `O(d)`, and unions of graphs.
//!
//! All arithmetic is exact ([`ExactScalar`]) except the floating fallback
//! for irrational eigenvalues in [`cp1`].

pub mod cp1;
pub mod ctorus;
pub mod error;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod snf;
pub mod text;
pub mod torus;
pub mod trace;

pub use error::{Error, Result};
pub use matrix::{Matrix, QMatrix, ZMatrix};
pub use report::{Model, Value, VerificationReport, FLOAT_TOLERANCE};
pub use scalar::{ExactScalar, Field};
