//! Finite-dimensional linear lifts `z_{k+1} = K z_k`, `z = Psi(x)`, learned by
//! ridge regression on sampled dynamics, and sweeps over dictionaries and
//! ridges that trade conjugacy error against separation of limit sets.

mod dictionary;
mod fit;
mod sweep;

pub use dictionary::{build_dictionary, BasisFunction, Dictionary, DictionaryKind, DictionarySpec, MAX_ORDER};
pub use fit::{
    fit_lift, fit_lift_on, FitReport, LearnedLift, Solver, NORMAL_EQUATIONS_MAX_CONDITION, SINGULAR_GRAM_CONDITION,
};
pub use sweep::{
    domain_catalog, obstruction_sweep, SweepConfig, TradeoffReport, TradeoffRow, MAX_CATALOG_MEMBERS,
};

use crate::dynamics::DynamicsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),
    #[error("ridge must be finite and nonnegative, got {0}")]
    InvalidRidge(f64),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("expected points of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dictionary is not finite at {point:?}")]
    NonFiniteFeatures { point: Vec<f64> },
    #[error("Gram matrix is singular (condition {condition:e}); use a positive ridge")]
    SingularGram { condition: f64 },
    #[error("catalog has {members} members, more than the {limit} a sweep accepts")]
    CountableCatalogExceeded { members: usize, limit: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("{0}")]
    Numeric(String),
}

impl From<DynamicsError> for LiftError {
    fn from(e: DynamicsError) -> Self {
        Self::InvalidDomain(e.to_string())
    }
}
