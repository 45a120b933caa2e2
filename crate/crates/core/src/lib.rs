//! Motivic volumes of tropical semi-algebraic sets, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! * [`polyhedra`]: constructible subsets of ℚⁿ, Fourier–Motzkin feasibility,
//!   arrangement decomposition, affine images.
//! * [`euler`]: the bounded Euler characteristic χ′, constructible functions,
//!   integration and pushforward.
//! * [`motring`]: symbolic classes in the equivariant Grothendieck ring and
//!   their finite-field point-count realizations.
//! * [`sncvol`]: volumes from strict normal crossings data.
//! * [`trophyp`]: tropical hypersurfaces, schön volumes and the verification
//!   workflows built on them.

pub mod error;
pub mod euler;
pub mod motring;
pub mod polyhedra;
pub(crate) mod poly_text;
pub mod rat;
pub mod selftest;
pub mod sncvol;
pub mod trophyp;

pub use error::{Error, Result};
pub use rat::Rat;
