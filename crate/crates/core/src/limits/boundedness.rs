use crate::dynamics::{DiscreteMap, Direction, Orbit, StatePoint, Termination};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

use super::EstimatorConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct BoundednessVerdict<T: Real> {
    pub verdict: Boundedness,
    pub escape_radius: T,
    pub steps_used: usize,
    pub max_norm: T,
}

/// Simulation-based boundedness probe over `cfg.horizon` steps.
///
/// Bounded: the whole horizon was simulated inside `bound_radius` and the
/// norm is not still climbing at the end. Unbounded: the norm passed
/// `escape_radius` and never decreased over the final quarter of the
/// recorded steps. Anything else is undetermined.
pub fn classify_boundedness<T: Real>(
    map: &DiscreteMap<T>,
    x0: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
) -> BoundednessVerdict<T> {
    let mut orbit = Orbit::new(map, x0.clone(), Direction::Forward, cfg.divergence_radius);
    let mut norms = Vec::with_capacity(cfg.horizon + 1);
    norms.push(x0.norm());
    let mut stop = None;
    while norms.len() <= cfg.horizon {
        match orbit.advance() {
            Ok(p) => norms.push(p.norm()),
            Err(t) => {
                stop = Some(t);
                break;
            }
        }
    }
    let steps_used = norms.len() - 1;
    let max_norm = norms.iter().fold(T::zero(), |m, &v| m.max(v));
    let verdict = |verdict| BoundednessVerdict { verdict, escape_radius: cfg.escape_radius, steps_used, max_norm };

    if matches!(stop, Some(Termination::LeftDomain | Termination::Singular)) {
        return verdict(Boundedness::Undetermined);
    }
    let quarter = &norms[norms.len() - (norms.len() / 4).max(2).min(norms.len())..];
    let nondecreasing = quarter.windows(2).all(|w| w[1] >= w[0]);
    if stop.is_none() && max_norm <= cfg.bound_radius {
        let half_max = norms[..norms.len() / 2 + 1].iter().fold(T::zero(), |m, &v| m.max(v));
        let climbing = nondecreasing && quarter[quarter.len() - 1] > half_max * T::lit(1.5);
        return verdict(if climbing { Boundedness::Undetermined } else { Boundedness::Bounded });
    }
    if max_norm > cfg.escape_radius && nondecreasing {
        return verdict(Boundedness::Unbounded);
    }
    verdict(Boundedness::Undetermined)
}
