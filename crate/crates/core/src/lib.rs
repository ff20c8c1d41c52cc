//! Numerical laboratory for discrete-time dynamical systems: orbits, limit
//! sets and basins, growth of linear systems, immersion checks and learned
//! linear lifts.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! catalog and the command-line tool use.

pub mod catalog;
pub mod cloud;
pub mod dynamics;
pub mod immersion;
pub mod lift;
pub mod limits;
pub mod linear;
pub mod scalar;

pub use scalar::Real;

pub type StatePoint = dynamics::StatePoint<f64>;
pub type DomainRegion = dynamics::DomainRegion<f64>;
pub type DiscreteMap = dynamics::DiscreteMap<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type LinearSystem = linear::LinearSystem<f64>;
pub type ImmersionMap = immersion::ImmersionMap<f64>;
pub type LimitSetEstimate = limits::LimitSetEstimate<f64>;
pub type LimitSetCatalog = limits::LimitSetCatalog<f64>;
pub type EstimatorConfig = limits::EstimatorConfig<f64>;
pub type GridSpec = limits::GridSpec<f64>;
pub type BasinMap = limits::BasinMap<f64>;
pub type Dictionary = lift::Dictionary<f64>;
pub type LearnedLift = lift::LearnedLift<f64>;
pub type FitReport = lift::FitReport<f64>;
pub type TradeoffReport = lift::TradeoffReport<f64>;
