//! Construction and numerical verification of maximal symplectic ball packings
//! of the complex projective plane.
//!
//! The Fubini–Study form is normalized so that a projective line has area π;
//! with that convention CP² has total volume π²/2 and a ball of radius r has
//! volume π²r⁴/2. All packings built here (toric corner packings, the full
//! 4-ball packing and the regular 5-ball packing over the quadric) are exact
//! or quadrature-backed symplectic embeddings, and every claimed property is
//! re-verified numerically: pullback defects, pairwise disjointness, volumes,
//! characteristic foliations, shared Hopf circles, supporting surfaces and the
//! arithmetic certificates behind maximality.

pub mod characteristics;
pub mod cli;
pub mod embedding;
pub mod export;
pub mod models;
pub mod obstructions;
pub mod projective;
pub mod quadrature;
pub mod quadric;
pub mod report;
pub mod sampling;
pub mod surfaces;
pub mod toric;

pub use embedding::{Ambient, BallEmbedding, Packing};
pub use projective::ProjectivePoint;

/// Errors shared across the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid projective point: all homogeneous coordinates are zero")]
    ZeroHomogeneous,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("degenerate tangent frame: {0}")]
    DegenerateFrame(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("containment error: {0}")]
    Containment(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Gate for exact constructions checked with analytic Jacobians.
pub const TOL_ANALYTIC: f64 = 1e-8;
/// Gate for exact constructions checked with central finite differences.
pub const TOL_FD: f64 = 1e-6;
/// Gate for quadrature-backed composite constructions.
pub const TOL_QUAD: f64 = 1e-4;
/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-5;
