//! Lattice models of pyrotechnics market topology.
//!
//! A market is a rectangular grid of block cells (stall clusters that burn
//! as a unit) and aisle cells; anything off the grid is exterior. On top of
//! that grid the crate provides:
//!
//! - [`layout`]: checkerboard, linear and folded-strip generators plus the
//!   `B`/`.` site-plan text format.
//! - [`egress`]: exact distance-to-exterior fields, the closed-form
//!   checkerboard expectation, and an exponential mortality weight.
//! - [`propagation`]: a discrete-time contact process with Chebyshev-radius
//!   spark dispersal, Monte Carlo spread probabilities and critical-gamma
//!   bisection.
//! - [`compliance`]: the block-count / expected-egress rule and the
//!   fold-exposure check for arbitrary site plans.
//! - [`experiment`]: scaling sweeps and side-by-side layout comparisons.
//! - [`render`]: SVG output for site plans and distance fields.

pub mod compliance;
pub mod egress;
mod error;
pub mod experiment;
pub mod format;
pub mod layout;
pub mod propagation;
pub mod render;
pub mod rng;

pub use error::{Error, Result};
