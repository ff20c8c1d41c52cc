use crate::dynamics::DEFAULT_DIVERGENCE_RADIUS;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Tuning for limit-set estimation, boundedness probes and basin labelling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct EstimatorConfig<T: Real> {
    /// Steps discarded before the first tail window.
    pub burn: usize,
    /// Points per tail window.
    pub tail: usize,
    /// Windows tried before giving up on settling.
    pub max_windows: usize,
    /// Allowed Hausdorff drift between consecutive windows, on top of the
    /// windows' own sampling gap.
    pub tol_settle: T,
    /// Diameter below which a cloud is a fixed point; also the revisit
    /// tolerance for period detection.
    pub tol_fp: T,
    /// Hausdorff distance under which two limit sets are the same.
    pub tol_cluster: T,
    /// Radius a trajectory must stay inside to be called bounded.
    pub bound_radius: T,
    /// Radius a trajectory must exceed to be called unbounded.
    pub escape_radius: T,
    /// Iteration stops once the state norm exceeds this.
    pub divergence_radius: T,
    /// Steps used by the boundedness probe.
    pub horizon: usize,
    /// Longest period tested by the periodic-orbit detector.
    pub max_period: usize,
}

impl<T: Real> Default for EstimatorConfig<T> {
    fn default() -> Self {
        Self {
            burn: 500,
            tail: 500,
            max_windows: 8,
            tol_settle: T::lit(1e-7),
            tol_fp: T::lit(1e-6),
            tol_cluster: T::lit(1e-3),
            bound_radius: T::lit(1e6),
            escape_radius: T::lit(1e8),
            divergence_radius: T::lit(DEFAULT_DIVERGENCE_RADIUS),
            horizon: 2000,
            max_period: 64,
        }
    }
}

impl<T: Real> EstimatorConfig<T> {
    /// Points closer than this are merged when compacting clouds.
    pub fn merge_tol(&self) -> T {
        self.tol_settle * T::lit(1e-2)
    }
}
