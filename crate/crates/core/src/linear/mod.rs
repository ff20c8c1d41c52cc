//! Structure of linear systems `x_{k+1} = A x_k`: invariant-subspace split by
//! eigenvalue modulus, Jordan block powers, growth of individual orbits and
//! uniform bounds on stable subspaces.

mod growth;
mod split;

pub use growth::{classify_growth, omega_nonempty_linear, stability_bound, GrowthClass, GrowthRate, GrowthVerdict};
pub use split::{eigenvalues, spectral_split, EigenReport, MagnitudeClass, SpectralCluster, SpectralSplit};

use crate::dynamics::{DiscreteMap, StatePoint};
use crate::scalar::Real;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOL_EIG: f64 = 1e-8;
/// Rank decisions use `DEFAULT_TOL_RANK * ||A||`.
pub const DEFAULT_TOL_RANK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("matrix must be square and nonempty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("expected a vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigen-decomposition is ill-conditioned (residual {residual:e})")]
    IllConditioned { residual: f64 },
    #[error("subspace is not invariant under A (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("restricted system has an unstable component")]
    NotStable,
}

/// `x_{k+1} = A x_k` with a finite square `A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct LinearSystem<T: Real> {
    a: DMatrix<T>,
}

impl<T: Real> LinearSystem<T> {
    pub fn new(a: DMatrix<T>) -> Result<Self, LinearError> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(LinearError::NotSquare { rows: a.nrows(), cols: a.ncols() });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(LinearError::NonFinite);
        }
        Ok(Self { a })
    }

    pub fn from_row_slice(n: usize, entries: &[T]) -> Result<Self, LinearError> {
        if entries.len() != n * n {
            return Err(LinearError::NotSquare { rows: n, cols: entries.len() / n.max(1) });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    /// Rotation of the plane by `theta` radians.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self { a: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]) }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn apply(&self, x: &StatePoint<T>) -> Result<StatePoint<T>, LinearError> {
        let v = self.vector(x)?;
        Ok(StatePoint::new((&self.a * v).as_slice().to_vec()).expect("finite matrix times finite vector"))
    }

    pub fn to_map(&self, name: impl Into<String>) -> DiscreteMap<T> {
        DiscreteMap::linear(name, self.a.clone())
    }

    pub(crate) fn vector(&self, x: &StatePoint<T>) -> Result<nalgebra::DVector<T>, LinearError> {
        if x.dim() != self.dim() {
            return Err(LinearError::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        Ok(nalgebra::DVector::from_column_slice(x.coords()))
    }

    pub(crate) fn norm2(&self) -> T {
        spectral_norm(&self.a)
    }
}

pub(crate) fn spectral_norm<T: Real>(m: &DMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.singular_values().iter().fold(T::zero(), |acc, &s| acc.max(s))
}

/// `J^k` for the `m x m` Jordan block with eigenvalue `lambda`, from the
/// binomial expansion of `(lambda I + N)^k`.
pub fn jordan_block_power<T: Real>(lambda: T, m: usize, k: u32) -> DMatrix<T> {
    let m = m.max(1);
    let mut out = DMatrix::zeros(m, m);
    let mut binom = T::one();
    for i in 0..m.min(k as usize + 1) {
        if i > 0 {
            binom = binom * T::from_u32(k - i as u32 + 1).expect("u32 fits") / T::from_usize_lossy(i);
        }
        let term = binom * lambda.powi((k - i as u32) as i32);
        for r in 0..m - i {
            out[(r, r + i)] = term;
        }
    }
    out
}
