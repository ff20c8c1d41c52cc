use crate::dynamics::{DiscreteMap, StatePoint};
use crate::scalar::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::{classify_point, BasinMap, CellLabel, EstimatorConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessConfig {
    /// Number of halvings `j = 1..=depth` toward the limit point.
    pub depth: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { depth: 30 }
    }
}

/// Numeric evidence that a basin is not closed: `x_j = x_inf + (seed - x_inf) 2^-j`
/// all have omega-limit `labels.0`, while `x_inf` has `labels.1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Witness<T: Real> {
    pub sequence_seed: StatePoint<T>,
    pub limit_point: StatePoint<T>,
    pub labels: (String, String),
    pub depth: usize,
}

impl<T: Real> Witness<T> {
    /// The `j`-th point of the witnessing sequence.
    pub fn point(&self, j: usize) -> StatePoint<T> {
        let scale = T::lit(0.5f64.powi(j as i32));
        let coords = self
            .limit_point
            .coords()
            .iter()
            .zip(self.sequence_seed.coords())
            .map(|(&l, &s)| l + (s - l) * scale)
            .collect();
        StatePoint::new(coords).expect("convex combination of finite points")
    }
}

/// Searches basin boundaries for sequences converging into a different basin.
///
/// For every pair of adjacent cells `a`, `b` labelled with distinct catalog
/// members, the sequence from the centre of `a` halving toward the centre of
/// `b` is re-labelled point by point. A witness is kept when every point keeps
/// the label of `a`. One witness per (limit cell, label) pair. An empty result
/// means nothing was found, not that the basins are closed.
pub fn basin_closedness_witness<T: Real>(
    map: &DiscreteMap<T>,
    basins: &BasinMap<T>,
    cfg: &EstimatorConfig<T>,
    wcfg: &WitnessConfig,
) -> Vec<Witness<T>> {
    let grid = &basins.grid;
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let mut seen = BTreeSet::new();
    for b in 0..grid.cell_count() {
        let CellLabel::Member(lb) = basins.labels[b] else { continue };
        for a in grid.neighbours(b) {
            if let CellLabel::Member(la) = basins.labels[a] {
                if la != lb && seen.insert((b, la)) {
                    candidates.push((a, b));
                }
            }
        }
    }
    candidates
        .par_iter()
        .filter_map(|&(a, b)| {
            let (CellLabel::Member(la), CellLabel::Member(lb)) = (basins.labels[a], basins.labels[b]) else {
                return None;
            };
            let w = Witness {
                sequence_seed: grid.centre(a),
                limit_point: grid.centre(b),
                labels: (basins.catalog.members[la].label.clone(), basins.catalog.members[lb].label.clone()),
                depth: wcfg.depth,
            };
            let holds = (1..=wcfg.depth).all(|j| {
                let x = w.point(j);
                x != w.limit_point && classify_point(map, &x, &basins.catalog, cfg).0 == CellLabel::Member(la)
            });
            holds.then_some(w)
        })
        .collect()
}
