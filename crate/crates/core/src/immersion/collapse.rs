use crate::cloud::{diameter, directed_hausdorff, hausdorff};
use crate::dynamics::StatePoint;
use crate::limits::LimitSetCatalog;
use crate::scalar::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ImmersionError, ImmersionMap};

/// Pairs closer than this in the domain are not probed.
pub const DEFAULT_DELTA_SEP: f64 = 1e-3;
/// Images closer than this count as a collision.
pub const DEFAULT_DELTA_IMG: f64 = 1e-6;

/// At most this many collision pairs are kept in a report.
const MAX_REPORTED_COLLISIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct CollapseReport<T: Real> {
    pub labels: Vec<String>,
    /// Hausdorff distances between member images, symmetric with zero diagonal.
    pub pairwise_distances: Vec<Vec<T>>,
    /// The member whose image contains every other image within tolerance.
    pub maximal_member: Option<String>,
    /// Smallest off-diagonal distance over the diameter of `F` on the
    /// reference samples; undefined with fewer than two members.
    pub collapse_ratio: Option<T>,
    pub reference_diameter: T,
}

/// Images of the catalog members under `F` and how far apart they stay.
///
/// `reference` should sample the domain of interest; its image diameter
/// normalises the distances so the ratio does not depend on the scale of `F`.
pub fn collapse_report<T: Real>(
    lift: &ImmersionMap<T>,
    catalog: &LimitSetCatalog<T>,
    reference: &[StatePoint<T>],
    tol: T,
) -> Result<CollapseReport<T>, ImmersionError> {
    let mut images = Vec::with_capacity(catalog.len());
    for m in &catalog.members {
        let mut img = Vec::with_capacity(m.points().len());
        for p in m.points() {
            let fp = lift.apply(p).map_err(|_| ImmersionError::ImmersionUndefined {
                label: m.label.clone(),
                point: p.to_f64_vec(),
            })?;
            img.push(fp);
        }
        images.push(img);
    }
    let k = images.len();
    let mut dist = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let d = hausdorff(&images[i], &images[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let maximal_member = (0..k)
        .find(|&i| (0..k).all(|j| i == j || directed_hausdorff(&images[j], &images[i]) < tol))
        .map(|i| catalog.members[i].label.clone());

    let ref_images: Vec<_> = reference.iter().filter_map(|p| lift.apply(p).ok()).collect();
    let reference_diameter = diameter(&ref_images);
    let min_off = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| dist[i][j])
        .fold(None, |m: Option<T>, d| Some(m.map_or(d, |m| m.min(d))));
    let collapse_ratio = match min_off {
        Some(d) if reference_diameter > T::zero() => Some(d / reference_diameter),
        _ => None,
    };
    Ok(CollapseReport {
        labels: catalog.members.iter().map(|m| m.label.clone()).collect(),
        pairwise_distances: dist,
        maximal_member,
        collapse_ratio,
        reference_diameter,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct InjectivityReport<T: Real> {
    /// Pairs more than `delta_sep` apart whose images are within `delta_img`
    /// (at most the first 64 found, in scan order).
    pub collisions: Vec<(StatePoint<T>, StatePoint<T>)>,
    pub collision_count: usize,
    /// Minimum of `|F(x) - F(y)| / |x - y|` over pairs more than `delta_sep`
    /// apart.
    pub min_separation_ratio: Option<T>,
    pub samples_used: usize,
    pub delta_sep: T,
    pub delta_img: T,
}

/// All-pairs scan for points that `F` maps (almost) onto each other.
/// Samples outside the domain of `F` are skipped. Finding no collision is
/// evidence of injectivity, not proof.
pub fn injectivity_probe<T: Real>(
    lift: &ImmersionMap<T>,
    samples: &[StatePoint<T>],
    delta_sep: T,
    delta_img: T,
) -> InjectivityReport<T> {
    let pairs: Vec<(StatePoint<T>, StatePoint<T>)> =
        samples.iter().filter_map(|p| lift.apply(p).ok().map(|fp| (p.clone(), fp))).collect();
    let n = pairs.len();
    let rows: Vec<(Vec<usize>, usize, Option<T>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut hits = Vec::new();
            let mut count = 0;
            let mut ratio: Option<T> = None;
            for j in i + 1..n {
                let sep = pairs[i].0.distance(&pairs[j].0);
                if sep <= delta_sep {
                    continue;
                }
                let img = pairs[i].1.distance(&pairs[j].1);
                let r = img / sep;
                ratio = Some(ratio.map_or(r, |m| m.min(r)));
                if img < delta_img {
                    count += 1;
                    if hits.len() < MAX_REPORTED_COLLISIONS {
                        hits.push(j);
                    }
                }
            }
            (hits, count, ratio)
        })
        .collect();
    let mut collisions = Vec::new();
    let mut collision_count = 0;
    let mut min_ratio: Option<T> = None;
    for (i, (hits, count, ratio)) in rows.into_iter().enumerate() {
        collision_count += count;
        if let Some(r) = ratio {
            min_ratio = Some(min_ratio.map_or(r, |m| m.min(r)));
        }
        for j in hits {
            if collisions.len() < MAX_REPORTED_COLLISIONS {
                collisions.push((pairs[i].0.clone(), pairs[j].0.clone()));
            }
        }
    }
    InjectivityReport {
        collisions,
        collision_count,
        min_separation_ratio: min_ratio,
        samples_used: n,
        delta_sep,
        delta_img,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{linspace, DomainRegion};
    use crate::limits::EstimatorConfig;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<StatePoint<f64>> {
        linspace(lo, hi, n).into_iter().map(|x| StatePoint::scalar(x).unwrap()).collect()
    }

    #[test]
    fn even_function_collides() {
        let sq = ImmersionMap::new("sq", DomainRegion::closed_interval(-1.0, 1.0).unwrap(), 1, |x: &[f64]| {
            vec![x[0] * x[0]]
        });
        let rep = injectivity_probe(&sq, &grid(-1.0, 1.0, 201), 1e-3, 1e-6);
        assert!(rep.collision_count >= 100);
        let (a, b) = &rep.collisions[0];
        assert!((a.coords()[0] + b.coords()[0]).abs() < 1e-12);
    }

    #[test]
    fn cosine_separates_the_endpoints() {
        let cos = ImmersionMap::new("cos", DomainRegion::closed_interval(0.0, std::f64::consts::PI).unwrap(), 1, |x: &[f64]| {
            vec![x[0].cos()]
        });
        let cfg = EstimatorConfig::default();
        let cat = LimitSetCatalog::from_point_sets(
            vec![vec![StatePoint::scalar(0.0).unwrap()], vec![StatePoint::scalar(std::f64::consts::PI).unwrap()]],
            &cfg,
        );
        let rep = collapse_report(&cos, &cat, &grid(0.0, std::f64::consts::PI, 101), cfg.tol_cluster).unwrap();
        assert_eq!(rep.pairwise_distances[0][1], 2.0);
        assert_eq!(rep.pairwise_distances[1][1], 0.0);
        assert_eq!(rep.maximal_member, None);
        assert!((rep.collapse_ratio.unwrap() - 1.0).abs() < 1e-12);
    }
}
