//! Arc sets and piecewise rotations on a finite union of circles.
//!
//! Every element of the full group handled here is a [`PiecewiseRotation`]:
//! each circle is cut into half-open arcs and each arc is moved by an
//! integer power of that circle's rotation. Composition, inversion and the
//! uniform distance are computed exactly.

mod arcs;
mod rotation;
mod system;

pub use arcs::{ArcSet, CircleArc};
pub use rotation::{Piece, PiecewiseRotation};
pub use system::{default_alphas, default_beta, RotationSystem};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleMapError {
    /// `A` meets `T(A)`, so the involution `T_A` is undefined.
    #[error("A and T(A) intersect; the involution T_A is undefined")]
    Overlap,
    #[error("maps belong to different rotation systems")]
    SystemMismatch,
    #[error("circle index {index} out of range for {circles} circle(s)")]
    CircleIndex { index: usize, circles: usize },
    #[error("arc [{start}, {end}) is empty or longer than the circle")]
    BadArc { start: String, end: String },
    #[error("invalid rotation system: {0}")]
    InvalidSystem(String),
    #[error("rotation amounts are not linearly independent over the rationals together with 1")]
    Dependent,
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}
