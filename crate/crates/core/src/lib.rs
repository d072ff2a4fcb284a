//! Numerical machinery for holomorphic functions on the unit ball of `C^N`.
//!
//! Functions are represented by truncated homogeneous expansions
//! ([`HoloPoly`]). On top of that the crate provides integral means and
//! mixed norms ([`quad`]), Littlewood-Paley blocks and best polynomial
//! approximation ([`lpblocks`]), difference operators and moduli of
//! smoothness ([`moduli`]), and a verification harness that measures both
//! sides of the classical norm equivalences on families of test functions
//! ([`harness`]).
//!
//! The `parallel` feature (on by default) evaluates families, quadrature
//! slices and sample pools with rayon. Without it every loop runs
//! sequentially; results are bit-identical either way.

pub mod error;
pub mod harness;
pub mod holopoly;
pub mod lpblocks;
pub mod moduli;
pub mod multi_index;
pub mod par;
pub mod quad;

pub use error::{Error, Result};
pub use holopoly::{HoloPoly, MixedPoly, MultiplierKind, MultiplierSpec, DiffOp};
pub use multi_index::MultiIndex;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix acting on `C^N`.
pub type CMatrix = nalgebra::DMatrix<C64>;
