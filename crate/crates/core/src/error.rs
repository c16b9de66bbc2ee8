use num_complex::Complex64;
use thiserror::Error;

use crate::spectrum::StateClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid model parameters: t0={t0}, v0={v0} (must be finite)")]
    InvalidParams { t0: f64, v0: f64 },

    #[error(
        "degenerate model at t0={t0}, v0={v0}: 1-2t0^2 = 0 and V0 = 0 leave no point spectrum"
    )]
    DegenerateModel { t0: f64, v0: f64 },

    #[error("state sits at an exceptional point; its normalization diverges")]
    ExceptionalPoint,

    #[error("bi-orthogonal normalization is singular: |2 + V0*lambda| = {magnitude:e}")]
    NormalizationSingular { magnitude: f64 },

    #[error("expected a {expected:?} state, got {found:?}")]
    Class {
        expected: StateClass,
        found: StateClass,
    },

    #[error("no {wanted:?} state at index {index} for t0={t0}, v0={v0}")]
    StateAbsent {
        wanted: StateClass,
        index: usize,
        t0: f64,
        v0: f64,
    },

    #[error("lambda = {lambda} is within {tolerance:e} of a pole of the resolvent")]
    Pole { lambda: Complex64, tolerance: f64 },

    #[error("pole lambda = {lambda} lies on the unit-circle contour")]
    PoleOnContour { lambda: Complex64 },

    #[error("contour quadrature did not converge at t={t} after {doublings} doublings (last change {change:e})")]
    NonConvergence { t: f64, doublings: u32, change: f64 },

    #[error("|t| = {t} exceeds the reflection horizon {horizon} of the finite chain")]
    HorizonExceeded { t: f64, horizon: f64 },

    #[error("anti-resonant weight underflows at t={t}")]
    Underflow { t: f64 },

    #[error("tridiagonal eigensolver failed to converge for eigenvalue {index}")]
    EigenSolver { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
