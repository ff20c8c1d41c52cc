use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};
use std::fmt;
use std::sync::Arc;

use super::{DomainError, DomainRegion, DynamicsError, StatePoint};

/// Shared, thread-safe point evaluator.
pub type Evaluator<T> = Arc<dyn Fn(&[T]) -> Vec<T> + Send + Sync>;

/// An evaluable map `x -> f(x)` on a described domain, optionally invertible.
///
/// The inverse is checked against its own domain (defaults to the forward
/// domain) since poles of `f` and `f^-1` generally differ.
#[derive(Clone)]
pub struct DiscreteMap<T: Real> {
    name: String,
    dim: usize,
    forward: Evaluator<T>,
    inverse: Option<Evaluator<T>>,
    domain: DomainRegion<T>,
    inverse_domain: DomainRegion<T>,
}

impl<T: Real> fmt::Debug for DiscreteMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteMap")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("invertible", &self.inverse.is_some())
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Real> DiscreteMap<T> {
    pub fn new<F>(name: impl Into<String>, domain: DomainRegion<T>, forward: F) -> Self
    where
        F: Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            dim: domain.dim(),
            forward: Arc::new(forward),
            inverse: None,
            inverse_domain: domain.clone(),
            domain,
        }
    }

    pub fn with_inverse<F>(mut self, inverse: F) -> Self
    where
        F: Fn(&[T]) -> Vec<T> + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn with_inverse_domain(mut self, domain: DomainRegion<T>) -> Self {
        self.inverse_domain = domain;
        self
    }

    /// Same evaluators on a different domain. With `both`, the inverse domain
    /// is replaced too.
    pub fn restricted_to(&self, domain: DomainRegion<T>, both: bool) -> Self {
        let mut out = self.clone();
        if both {
            out.inverse_domain = domain.clone();
        }
        out.domain = domain;
        out
    }

    /// `x -> A x` on all of R^n, with `A^-1` attached when `A` is invertible.
    pub fn linear(name: impl Into<String>, a: DMatrix<T>) -> Self {
        assert!(a.is_square(), "linear map needs a square matrix");
        let n = a.nrows();
        let fwd = a.clone();
        let mut map = Self::new(name, DomainRegion::full_space(n), move |x| {
            (&fwd * DVector::from_column_slice(x)).as_slice().to_vec()
        });
        if let Some(inv) = a.try_inverse() {
            map = map.with_inverse(move |x| (&inv * DVector::from_column_slice(x)).as_slice().to_vec());
        }
        map
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &DomainRegion<T> {
        &self.domain
    }

    pub fn inverse_domain(&self) -> &DomainRegion<T> {
        &self.inverse_domain
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// Forward image of an in-domain point.
    pub fn evaluate(&self, x: &StatePoint<T>) -> Result<StatePoint<T>, DomainError> {
        apply(&self.forward, &self.domain, x)
    }

    pub fn evaluate_inverse(&self, x: &StatePoint<T>) -> Result<StatePoint<T>, DynamicsError> {
        let inv = self.inverse.as_ref().ok_or_else(|| DynamicsError::NoInverse(self.name.clone()))?;
        Ok(apply(inv, &self.inverse_domain, x)?)
    }

    /// Raw forward evaluator without domain checks.
    pub fn forward_raw(&self) -> &Evaluator<T> {
        &self.forward
    }

    /// The time-reversed map: forward and inverse (and their domains) swapped.
    pub fn inverted(&self) -> Result<Self, DynamicsError> {
        let inv = self.inverse.clone().ok_or_else(|| DynamicsError::NoInverse(self.name.clone()))?;
        Ok(Self {
            name: format!("{}^-1", self.name),
            dim: self.dim,
            forward: inv,
            inverse: Some(self.forward.clone()),
            domain: self.inverse_domain.clone(),
            inverse_domain: self.domain.clone(),
        })
    }
}

fn apply<T: Real>(
    eval: &Evaluator<T>,
    domain: &DomainRegion<T>,
    x: &StatePoint<T>,
) -> Result<StatePoint<T>, DomainError> {
    domain.check(x)?;
    let image = eval(x.coords());
    StatePoint::new(image).map_err(|_| DomainError::NonFiniteImage { point: x.to_f64_vec() })
}
