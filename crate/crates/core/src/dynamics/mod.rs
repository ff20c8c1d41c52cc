//! Discrete-time maps on described domains and their orbits.

mod domain;
mod map;
mod state;
mod trajectory;

pub use domain::{
    linspace, AxisBounds, DomainKind, DomainRegion, Endpoint, DEFAULT_EXCLUSION_RADIUS,
};
pub use map::{DiscreteMap, Evaluator};
pub use state::StatePoint;
pub(crate) use state::{distance, distance_sq};
pub(crate) use domain::cartesian;
pub use trajectory::{Direction, Orbit, Tail, Termination, Trajectory, DEFAULT_DIVERGENCE_RADIUS};

use thiserror::Error;

/// Why a point could not be mapped.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("point {point:?} is within the exclusion radius of {excluded:?}")]
    ExcludedPoint { point: Vec<f64>, excluded: Vec<f64> },
    #[error("point {point:?} lies outside the domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("image of {point:?} is not finite")]
    NonFiniteImage { point: Vec<f64> },
    #[error("expected a point of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl DomainError {
    /// The offending point, when one is attached.
    pub fn point(&self) -> Option<&[f64]> {
        match self {
            DomainError::ExcludedPoint { point, .. }
            | DomainError::OutsideDomain { point }
            | DomainError::NonFiniteImage { point } => Some(point),
            DomainError::DimensionMismatch { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("state coordinates must be finite")]
    NonFiniteState,
    #[error("a state needs at least one coordinate")]
    EmptyState,
    #[error("map `{0}` has no inverse")]
    NoInverse(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
