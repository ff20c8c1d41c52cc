use crate::cloud::{compact, diameter, hausdorff, sampling_gap};
use crate::dynamics::{DiscreteMap, Direction, DynamicsError, Orbit, StatePoint, Termination};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

use super::EstimatorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitSource {
    Omega,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "period")]
pub enum ShapeGuess {
    FixedPoint,
    PeriodicOrbit(usize),
    Curve,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateStatus {
    /// Consecutive windows agreed.
    Settled,
    /// Every window was produced but they never agreed.
    Unsettled,
    /// The orbit diverged or left the domain.
    Escaped,
    /// The orbit hit an excluded point or produced a non-finite value.
    Singular,
}

/// Finite point-cloud approximation of an omega- or alpha-limit set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct LimitSetEstimate<T: Real> {
    pub points: Vec<StatePoint<T>>,
    pub source: LimitSource,
    pub seed: StatePoint<T>,
    pub diameter: T,
    pub shape: ShapeGuess,
    pub converged: bool,
    pub status: EstimateStatus,
    /// How coarsely the cloud samples the set: the Hausdorff distance between
    /// the two halves of the final window (the sampling gap for clouds built
    /// directly). Zero for fixed points and periodic orbits.
    pub resolution: T,
    /// Hausdorff distance between the last two windows, when two were formed.
    pub window_distance: Option<T>,
    /// Orbit index of the first point of the final window.
    pub tail_start: usize,
    /// Whether the orbit stayed within the bound radius throughout.
    pub precompact: bool,
}

impl<T: Real> LimitSetEstimate<T> {
    /// Builds an estimate around an explicit cloud (e.g. a merged catalog
    /// representative), recomputing the derived fields.
    pub fn from_cloud(
        points: Vec<StatePoint<T>>,
        source: LimitSource,
        seed: StatePoint<T>,
        cfg: &EstimatorConfig<T>,
    ) -> Self {
        let points = compact(&points, cfg.merge_tol());
        let diameter = diameter(&points);
        let shape = if diameter < cfg.tol_fp { ShapeGuess::FixedPoint } else { ShapeGuess::Curve };
        let resolution = if shape == ShapeGuess::FixedPoint { T::zero() } else { sampling_gap(&points) };
        Self {
            points,
            source,
            seed,
            diameter,
            shape,
            converged: true,
            status: EstimateStatus::Settled,
            resolution,
            window_distance: None,
            tail_start: 0,
            precompact: true,
        }
    }

    /// Hausdorff-based identity test used by clustering and basin labelling:
    /// the clouds must agree to `tol` beyond their own sampling gaps.
    pub fn matches(&self, other: &Self, tol: T) -> bool {
        hausdorff(&self.points, &other.points) < tol + self.resolution + other.resolution
    }
}

/// Smallest lag `p <= max_period` at which every window point is revisited
/// within `tol`.
pub fn detect_period<T: Real>(window: &[StatePoint<T>], tol: T, max_period: usize) -> Option<usize> {
    (1..=max_period.min(window.len().saturating_sub(1))).find(|&p| {
        window
            .iter()
            .zip(&window[p..])
            .all(|(a, b)| a.distance(b) < tol)
    })
}

struct Window<T: Real> {
    cloud: Vec<StatePoint<T>>,
    period: Option<usize>,
    resolution: T,
}

fn summarize<T: Real>(raw: &[StatePoint<T>], cfg: &EstimatorConfig<T>) -> Window<T> {
    // lag 1 only says consecutive points are close, which a slow drift also satisfies
    let period = detect_period(raw, cfg.tol_fp, cfg.max_period).filter(|&p| p > 1);
    let cloud = compact(raw, cfg.merge_tol());
    // how well one half of the window covers the other; nearest-neighbour
    // gaps understate this for rotations, whose points arrive in close pairs
    let resolution = if period.is_some() {
        T::zero()
    } else {
        let (a, b) = raw.split_at(raw.len() / 2);
        hausdorff(&compact(a, cfg.merge_tol()), &compact(b, cfg.merge_tol()))
    };
    Window { cloud, period, resolution }
}

fn status_for(t: Termination) -> EstimateStatus {
    match t {
        Termination::Completed => EstimateStatus::Unsettled,
        Termination::LeftDomain | Termination::Diverged => EstimateStatus::Escaped,
        Termination::Singular => EstimateStatus::Singular,
    }
}

/// Omega-limit estimate of `x0` from tail windows of the forward orbit.
pub fn estimate_omega<T: Real>(
    map: &DiscreteMap<T>,
    x0: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
) -> LimitSetEstimate<T> {
    estimate_along(map, x0, cfg, LimitSource::Omega)
}

/// Alpha-limit estimate: the omega-limit estimate of the inverse map.
pub fn estimate_alpha<T: Real>(
    map: &DiscreteMap<T>,
    x0: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<LimitSetEstimate<T>, DynamicsError> {
    let reversed = map.inverted()?;
    Ok(estimate_along(&reversed, x0, cfg, LimitSource::Alpha))
}

fn estimate_along<T: Real>(
    map: &DiscreteMap<T>,
    x0: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
    source: LimitSource,
) -> LimitSetEstimate<T> {
    let mut orbit = Orbit::new(map, x0.clone(), Direction::Forward, cfg.divergence_radius);
    let mut max_norm = x0.norm();
    let mut failed: Option<Termination> = None;

    fn step<T: Real>(orbit: &mut Orbit<'_, T>, max_norm: &mut T) -> Result<(), Termination> {
        let p = orbit.advance()?;
        *max_norm = max_norm.max(p.norm());
        Ok(())
    }

    for _ in 0..cfg.burn {
        if let Err(t) = step(&mut orbit, &mut max_norm) {
            failed = Some(t);
            break;
        }
    }

    let tail = cfg.tail.max(2);
    let mut prev: Option<Window<T>> = None;
    let mut last_raw: Vec<StatePoint<T>> = Vec::new();
    let mut settled: Option<(Window<T>, T)> = None;
    let mut window_distance = None;
    let mut tail_start = cfg.burn;

    if failed.is_none() {
        'windows: for w in 0..cfg.max_windows.max(2) {
            tail_start = cfg.burn + w * tail;
            let mut raw = Vec::with_capacity(tail);
            for i in 0..tail {
                if w > 0 || i > 0 {
                    if let Err(t) = step(&mut orbit, &mut max_norm) {
                        failed = Some(t);
                        last_raw = raw;
                        break 'windows;
                    }
                }
                raw.push(orbit.current().clone());
            }
            let win = summarize(&raw, cfg);
            if let Some(p) = &prev {
                let d = hausdorff(&p.cloud, &win.cloud);
                window_distance = Some(d);
                if d <= cfg.tol_settle + p.resolution.max(win.resolution) * T::lit(2.0) {
                    settled = Some((win, d));
                    last_raw = raw;
                    break;
                }
            }
            prev = Some(win);
            last_raw = raw;
        }
    }

    let (converged, status, window) = match (settled, failed) {
        (Some((win, _)), _) => (true, EstimateStatus::Settled, win),
        (None, Some(t)) => (false, status_for(t), summarize(&last_raw, cfg)),
        (None, None) => (false, EstimateStatus::Unsettled, summarize(&last_raw, cfg)),
    };
    let diameter = diameter(&window.cloud);
    let shape = if window.cloud.is_empty() {
        ShapeGuess::Unknown
    } else if diameter < cfg.tol_fp {
        ShapeGuess::FixedPoint
    } else if let Some(p) = window.period {
        ShapeGuess::PeriodicOrbit(p)
    } else if converged {
        ShapeGuess::Curve
    } else {
        ShapeGuess::Unknown
    };
    let resolution = if matches!(shape, ShapeGuess::FixedPoint) { T::zero() } else { window.resolution };
    LimitSetEstimate {
        points: window.cloud,
        source,
        seed: x0.clone(),
        diameter,
        shape,
        converged,
        status,
        resolution,
        window_distance,
        tail_start,
        precompact: converged && max_norm <= cfg.bound_radius,
    }
}
