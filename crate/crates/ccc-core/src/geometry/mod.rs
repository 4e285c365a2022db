//! Exact polyhedral primitives: cones, relatively open cells, face
//! enumeration and hyperplane arrangements, all over arbitrary-precision
//! rationals. Dual cones and projections go through Fourier–Motzkin
//! elimination; arrangements enumerate feasible sign vectors.

pub mod arrangement;
pub mod cell;
pub mod cone;
pub mod fm;

pub use arrangement::Arrangement;
pub use cell::Cell;
pub use cone::Cone;
pub use fm::{Constraint, LinearSystem, Rel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cell construction from an infeasible constraint system")]
    EmptyCell,
    #[error("unbounded region where a bounded one was required")]
    Unbounded,
    #[error("operation unsupported: {0}")]
    Unsupported(String),
}
