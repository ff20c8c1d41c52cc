//! Limit-set estimation, boundedness probes, catalogs of limit sets and
//! basin maps.

mod basins;
mod boundedness;
mod config;
mod estimate;
mod family;
mod witness;

pub use basins::{classify_point, compute_basins, BasinMap, CellLabel, GridSpec};
pub use boundedness::{classify_boundedness, Boundedness, BoundednessVerdict};
pub use config::EstimatorConfig;
pub use estimate::{detect_period, estimate_alpha, estimate_omega, EstimateStatus, LimitSetEstimate, LimitSource, ShapeGuess};
pub use family::{
    cluster_limit_sets, estimate_many, survey_catalog, CatalogMember, CatalogSummary, LimitSetCatalog, MemberSummary,
};
pub use witness::{basin_closedness_witness, Witness, WitnessConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LimitError {
    #[error("estimate {index} did not converge")]
    Unconverged { index: usize },
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
