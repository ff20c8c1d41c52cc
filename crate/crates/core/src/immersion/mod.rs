//! Checks on candidate immersions `F` with `F o f = g o F`: conjugacy
//! residuals, pushforward of limit sets, collapse of limit-set images,
//! injectivity probing and omega/alpha consistency of targets.

mod checks;
mod collapse;

pub use checks::{
    conjugacy_residual, omega_alpha_consistency, pushforward_check, ConjugacyReport, ConsistencyReport,
    PushforwardReport, PushforwardSide,
};
pub use collapse::{
    collapse_report, injectivity_probe, CollapseReport, InjectivityReport, DEFAULT_DELTA_IMG, DEFAULT_DELTA_SEP,
};

use crate::dynamics::{DomainError, DomainRegion, DynamicsError, Evaluator, StatePoint};
use crate::scalar::Real;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImmersionError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("immersion is undefined at {point:?} (member {label})")]
    ImmersionUndefined { label: String, point: Vec<f64> },
    #[error("no sample could be evaluated")]
    NoValidSamples,
    #[error("no limit-set estimate converged")]
    Unconverged,
    #[error("{0} has no inverse")]
    NoInverse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl From<DynamicsError> for ImmersionError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::NoInverse(name) => Self::NoInverse(name),
            DynamicsError::Domain(d) => Self::Domain(d),
            other => Self::DimensionMismatch(other.to_string()),
        }
    }
}

/// A candidate lift `F: X -> Z` on a described domain.
#[derive(Clone)]
pub struct ImmersionMap<T: Real> {
    name: String,
    dim_in: usize,
    dim_out: usize,
    eval: Evaluator<T>,
    domain: DomainRegion<T>,
}

impl<T: Real> fmt::Debug for ImmersionMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersionMap")
            .field("name", &self.name)
            .field("dim_in", &self.dim_in)
            .field("dim_out", &self.dim_out)
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Real> ImmersionMap<T> {
    pub fn new<F>(name: impl Into<String>, domain: DomainRegion<T>, dim_out: usize, eval: F) -> Self
    where
        F: Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    {
        Self { name: name.into(), dim_in: domain.dim(), dim_out, eval: Arc::new(eval), domain }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn domain(&self) -> &DomainRegion<T> {
        &self.domain
    }

    pub fn with_domain(mut self, domain: DomainRegion<T>) -> Self {
        self.domain = domain;
        self
    }

    /// `F(x)`, checked against the domain and for finiteness.
    pub fn apply(&self, x: &StatePoint<T>) -> Result<StatePoint<T>, DomainError> {
        self.domain.check(x)?;
        let out = (self.eval)(x.coords());
        if out.len() != self.dim_out {
            return Err(DomainError::DimensionMismatch { expected: self.dim_out, got: out.len() });
        }
        StatePoint::new(out).map_err(|_| DomainError::NonFiniteImage { point: x.to_f64_vec() })
    }

    /// Images of a cloud; fails at the first point where `F` is undefined.
    pub fn apply_all(&self, cloud: &[StatePoint<T>]) -> Result<Vec<StatePoint<T>>, DomainError> {
        cloud.iter().map(|p| self.apply(p)).collect()
    }
}
