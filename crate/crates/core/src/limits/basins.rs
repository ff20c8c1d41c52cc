use crate::dynamics::{cartesian, linspace, DiscreteMap, StatePoint};
use crate::scalar::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{estimate_omega, EstimateStatus, EstimatorConfig, LimitError, LimitSetCatalog, LimitSetEstimate};

/// Axis-aligned grid of cell centres. Centres are evenly spaced nodes with
/// both bounds included, so `[-2, 2]` at 401 cells has a centre at exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GridSpec<T: Real> {
    pub bounds: Vec<(T, T)>,
    pub resolution: Vec<usize>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(bounds: Vec<(T, T)>, resolution: Vec<usize>) -> Result<Self, LimitError> {
        if bounds.is_empty() || bounds.len() != resolution.len() {
            return Err(LimitError::InvalidGrid("one resolution per axis is required".into()));
        }
        if bounds.iter().any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(LimitError::InvalidGrid("bounds must be finite with lower < upper".into()));
        }
        if resolution.iter().any(|&n| n == 0) {
            return Err(LimitError::InvalidGrid("resolution must be positive".into()));
        }
        Ok(Self { bounds, resolution })
    }

    /// Same bounds and resolution on every axis.
    pub fn uniform(dim: usize, lo: T, hi: T, n: usize) -> Result<Self, LimitError> {
        Self::new(vec![(lo, hi); dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn cell_count(&self) -> usize {
        self.resolution.iter().product()
    }

    /// Row-major multi-index, last axis fastest.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.resolution[a];
            flat /= self.resolution[a];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.resolution).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn axis_centres(&self, axis: usize) -> Vec<T> {
        let (lo, hi) = self.bounds[axis];
        linspace(lo, hi, self.resolution[axis])
    }

    pub fn centres(&self) -> Vec<StatePoint<T>> {
        let axes: Vec<Vec<T>> = (0..self.dim()).map(|a| self.axis_centres(a)).collect();
        cartesian(&axes)
            .into_iter()
            .map(|c| StatePoint::new(c).expect("grid centres are finite"))
            .collect()
    }

    pub fn centre(&self, flat: usize) -> StatePoint<T> {
        let coords = self
            .multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.axis_centres(a)[i])
            .collect();
        StatePoint::new(coords).expect("grid centres are finite")
    }

    /// Flat indices of the axis neighbours of a cell.
    pub fn neighbours(&self, flat: usize) -> Vec<usize> {
        let idx = self.multi_index(flat);
        let mut out = Vec::with_capacity(2 * self.dim());
        for a in 0..self.dim() {
            for delta in [-1i64, 1] {
                let j = idx[a] as i64 + delta;
                if j >= 0 && (j as usize) < self.resolution[a] {
                    let mut n = idx.clone();
                    n[a] = j as usize;
                    out.push(self.flat_index(&n));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellLabel {
    /// Index into the catalog.
    Member(usize),
    Undetermined,
    Singular,
    Escaped,
}

/// Per-cell omega-limit labels over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct BasinMap<T: Real> {
    pub grid: GridSpec<T>,
    pub labels: Vec<CellLabel>,
    pub params: EstimatorConfig<T>,
    pub catalog: LimitSetCatalog<T>,
}

impl<T: Real> BasinMap<T> {
    pub fn label_name(&self, label: CellLabel) -> String {
        match label {
            CellLabel::Member(i) => self.catalog.members[i].label.clone(),
            CellLabel::Undetermined => "undetermined".into(),
            CellLabel::Singular => "singular".into(),
            CellLabel::Escaped => "escaped".into(),
        }
    }

    /// Label of the cell whose centre is nearest to `p`.
    pub fn label_at(&self, p: &StatePoint<T>) -> CellLabel {
        let idx: Vec<usize> = p
            .coords()
            .iter()
            .enumerate()
            .map(|(a, &c)| {
                let (lo, hi) = self.grid.bounds[a];
                let n = self.grid.resolution[a];
                if n == 1 {
                    return 0;
                }
                let t = ((c - lo) / (hi - lo) * T::from_usize_lossy(n - 1)).round();
                t.max(T::zero()).min(T::from_usize_lossy(n - 1)).to_f64_lossy() as usize
            })
            .collect();
        self.labels[self.grid.flat_index(&idx)]
    }

    /// Number of cells per label, in catalog order followed by the
    /// undetermined/singular/escaped buckets.
    pub fn counts(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = self.catalog.members.iter().map(|m| (m.label.clone(), 0)).collect();
        let mut extra = [0usize; 3];
        for l in &self.labels {
            match *l {
                CellLabel::Member(i) => out[i].1 += 1,
                CellLabel::Undetermined => extra[0] += 1,
                CellLabel::Singular => extra[1] += 1,
                CellLabel::Escaped => extra[2] += 1,
            }
        }
        out.extend(["undetermined", "singular", "escaped"].iter().zip(extra).map(|(n, c)| (n.to_string(), c)));
        out
    }

    /// CSV with one index column per axis followed by `label`.
    pub fn to_csv(&self) -> String {
        let axis_names = ["i", "j", "k", "l", "m", "n"];
        let mut out = String::new();
        for a in 0..self.grid.dim() {
            let name = axis_names.get(a).map_or_else(|| format!("i{a}"), |s| s.to_string());
            let _ = write!(out, "{name},");
        }
        out.push_str("label\n");
        for (flat, &label) in self.labels.iter().enumerate() {
            for i in self.grid.multi_index(flat) {
                let _ = write!(out, "{i},");
            }
            out.push_str(&self.label_name(label));
            out.push('\n');
        }
        out
    }
}

/// Label a single point the way basin cells are labelled.
pub fn classify_point<T: Real>(
    map: &DiscreteMap<T>,
    x: &StatePoint<T>,
    catalog: &LimitSetCatalog<T>,
    cfg: &EstimatorConfig<T>,
) -> (CellLabel, LimitSetEstimate<T>) {
    let est = estimate_omega(map, x, cfg);
    let label = match est.status {
        EstimateStatus::Singular => CellLabel::Singular,
        EstimateStatus::Escaped => CellLabel::Escaped,
        EstimateStatus::Unsettled => CellLabel::Undetermined,
        EstimateStatus::Settled => catalog.match_estimate(&est).map_or(CellLabel::Undetermined, CellLabel::Member),
    };
    (label, est)
}

/// Labels every grid cell by the limit set its centre settles onto.
pub fn compute_basins<T: Real>(
    map: &DiscreteMap<T>,
    grid: &GridSpec<T>,
    catalog: &LimitSetCatalog<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<BasinMap<T>, LimitError> {
    if catalog.is_empty() {
        return Err(LimitError::EmptyCatalog);
    }
    if grid.dim() != map.dim() {
        return Err(LimitError::InvalidGrid(format!(
            "grid has {} axes, map has dimension {}",
            grid.dim(),
            map.dim()
        )));
    }
    let centres = grid.centres();
    let labels = centres
        .par_iter()
        .map(|c| classify_point(map, c, catalog, cfg).0)
        .collect();
    Ok(BasinMap { grid: grid.clone(), labels, params: *cfg, catalog: catalog.clone() })
}
