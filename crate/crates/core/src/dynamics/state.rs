use crate::scalar::Real;
use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// A finite point of the state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct StatePoint<T: Real> {
    coords: Vec<T>,
}

impl<T: Real> StatePoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, DynamicsError> {
        if coords.is_empty() {
            return Err(DynamicsError::EmptyState);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(DynamicsError::NonFiniteState);
        }
        Ok(Self { coords })
    }

    pub fn scalar(x: T) -> Result<Self, DynamicsError> {
        Self::new(vec![x])
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self, DynamicsError> {
        Self::new(coords.iter().map(|&c| T::lit(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![T::zero(); dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.to_f64_lossy()).collect()
    }

    pub fn norm(&self) -> T {
        norm(&self.coords)
    }

    pub fn distance(&self, other: &Self) -> T {
        distance(&self.coords, &other.coords)
    }

    /// Largest coordinate magnitude.
    pub fn max_abs(&self) -> T {
        self.coords.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }
}

impl<T: Real> TryFrom<Vec<T>> for StatePoint<T> {
    type Error = DynamicsError;

    fn try_from(coords: Vec<T>) -> Result<Self, Self::Error> {
        Self::new(coords)
    }
}

impl<T: Real> From<StatePoint<T>> for Vec<T> {
    fn from(p: StatePoint<T>) -> Self {
        p.coords
    }
}

pub(crate) fn norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt()
}

pub(crate) fn distance_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

pub(crate) fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    distance_sq(a, b).sqrt()
}
