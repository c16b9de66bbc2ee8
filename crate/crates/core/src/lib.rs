//! Open tight-binding chain with a single impurity.
//!
//! An infinite chain with unit hopping has one impurity site at `x = 0`, with
//! hopping `t0` to its neighbours and on-site potential `V0`. Under outgoing-wave
//! (Siegert) boundary conditions the chain has a discrete spectrum of bound,
//! anti-bound, resonant and anti-resonant states. This crate computes that
//! spectrum and the machinery around it:
//!
//! - [`spectrum`]: roots of the secular quadratic in `lambda = exp(iK)`, their
//!   classification, exceptional points and parameter sweeps.
//! - [`siegert`]: eigenfunctions, the partial norm over `[-L, L]`, the boundary
//!   current, and the balance between temporal decay and spatial outflow.
//! - [`dynamics`]: the survival amplitude `A(t) = <0|exp(-iHt)|0>` split into one
//!   component per point state by unit-circle contour quadrature, and the ratio
//!   of resonant to anti-resonant weights.
//! - [`lattice`]: exact propagation on a large finite chain, used as an
//!   independent reference for the contour decomposition.
//! - [`validation`]: the invariant suite behind `impurity-chain validate`.
//! - [`cli`]: the command-line surface and its CSV/JSON output.
//!
//! Units: bulk hopping, `hbar` and the lattice spacing are all one.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod siegert;
pub mod spectrum;
pub mod validation;

pub use error::{Error, Result};
pub use spectrum::{ModelParams, PointSpectrum, PointState, StateClass};
