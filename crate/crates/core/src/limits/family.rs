use crate::dynamics::{DiscreteMap, StatePoint};
use crate::scalar::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::{estimate_alpha, estimate_omega, EstimatorConfig, LimitError, LimitSetEstimate, LimitSource, ShapeGuess};

/// One deduplicated limit set with the evidence that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct CatalogMember<T: Real> {
    pub label: String,
    /// Union of the member clouds.
    pub representative: LimitSetEstimate<T>,
    pub seeds: Vec<StatePoint<T>>,
    pub sources: BTreeSet<LimitSource>,
    /// Some omega-witness had a forward precompact orbit.
    pub forward_precompact: bool,
    /// Some alpha-witness had a backward precompact orbit.
    pub backward_precompact: bool,
}

impl<T: Real> CatalogMember<T> {
    pub fn points(&self) -> &[StatePoint<T>] {
        &self.representative.points
    }
}

/// Deduplicated family of estimated limit sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct LimitSetCatalog<T: Real> {
    pub members: Vec<CatalogMember<T>>,
    pub tol_cluster: T,
}

/// Shape of the catalog JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub tol_cluster: f64,
    pub members: Vec<MemberSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberSummary {
    pub label: String,
    pub representative_points: Vec<Vec<f64>>,
    pub diameter: f64,
    pub shape: ShapeGuess,
    pub sources: Vec<LimitSource>,
    pub forward_precompact: bool,
    pub backward_precompact: bool,
    pub seeds: Vec<Vec<f64>>,
}

impl<T: Real> LimitSetCatalog<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|m| m.label.as_str()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.members.iter().position(|m| m.label == label)
    }

    /// First member the estimate matches within `tol_cluster`.
    pub fn match_estimate(&self, est: &LimitSetEstimate<T>) -> Option<usize> {
        self.members
            .iter()
            .position(|m| m.representative.matches(est, self.tol_cluster))
    }

    /// Member clouds as plain estimates, e.g. for re-clustering.
    pub fn as_estimates(&self) -> Vec<LimitSetEstimate<T>> {
        self.members.iter().map(|m| m.representative.clone()).collect()
    }

    /// A catalog built from known point sets, one member per set, in order.
    pub fn from_point_sets(sets: Vec<Vec<StatePoint<T>>>, cfg: &EstimatorConfig<T>) -> Self {
        let members = sets
            .into_iter()
            .enumerate()
            .map(|(i, pts)| {
                let seed = pts[0].clone();
                let rep = LimitSetEstimate::from_cloud(pts, LimitSource::Omega, seed.clone(), cfg);
                CatalogMember {
                    label: format!("L{i}"),
                    representative: rep,
                    seeds: vec![seed],
                    sources: BTreeSet::from([LimitSource::Omega]),
                    forward_precompact: true,
                    backward_precompact: false,
                }
            })
            .collect();
        Self { members, tol_cluster: cfg.tol_cluster }
    }

    pub fn summary(&self) -> CatalogSummary {
        CatalogSummary {
            tol_cluster: self.tol_cluster.to_f64_lossy(),
            members: self
                .members
                .iter()
                .map(|m| MemberSummary {
                    label: m.label.clone(),
                    representative_points: m.points().iter().map(StatePoint::to_f64_vec).collect(),
                    diameter: m.representative.diameter.to_f64_lossy(),
                    shape: m.representative.shape,
                    sources: m.sources.iter().copied().collect(),
                    forward_precompact: m.forward_precompact,
                    backward_precompact: m.backward_precompact,
                    seeds: m.seeds.iter().map(StatePoint::to_f64_vec).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("catalog summary serializes")
    }
}

fn merge_into<T: Real>(member: &mut CatalogMember<T>, est: &LimitSetEstimate<T>, cfg: &EstimatorConfig<T>) {
    let rep = &member.representative;
    let shape = rep.shape;
    let mut points = rep.points.clone();
    points.extend(est.points.iter().cloned());
    let mut merged = LimitSetEstimate::from_cloud(points, rep.source, rep.seed.clone(), cfg);
    // keep the finer shape diagnosis of the first witness when it is exact
    if matches!(shape, ShapeGuess::PeriodicOrbit(_)) && merged.shape == ShapeGuess::Curve {
        merged.shape = shape;
        merged.resolution = T::zero();
    }
    merged.precompact = rep.precompact || est.precompact;
    member.representative = merged;
    member.seeds.push(est.seed.clone());
    member.sources.insert(est.source);
    match est.source {
        LimitSource::Omega => member.forward_precompact |= est.precompact,
        LimitSource::Alpha => member.backward_precompact |= est.precompact,
    }
}

fn new_member<T: Real>(est: &LimitSetEstimate<T>) -> CatalogMember<T> {
    CatalogMember {
        label: String::new(),
        representative: est.clone(),
        seeds: vec![est.seed.clone()],
        sources: BTreeSet::from([est.source]),
        forward_precompact: est.source == LimitSource::Omega && est.precompact,
        backward_precompact: est.source == LimitSource::Alpha && est.precompact,
    }
}

/// Greedy Hausdorff clustering of converged estimates into a catalog.
///
/// Estimates join the first member they match; members that come to match
/// each other after merging are fused. Labels `L0, L1, ...` follow the order
/// in which members were first seen.
pub fn cluster_limit_sets<T: Real>(
    estimates: &[LimitSetEstimate<T>],
    tol_cluster: T,
) -> Result<LimitSetCatalog<T>, LimitError> {
    if let Some(i) = estimates.iter().position(|e| !e.converged) {
        return Err(LimitError::Unconverged { index: i });
    }
    let cfg = EstimatorConfig { tol_cluster, ..EstimatorConfig::default() };
    let mut members: Vec<CatalogMember<T>> = Vec::new();
    for est in estimates {
        match members.iter().position(|m| m.representative.matches(est, tol_cluster)) {
            Some(i) => merge_into(&mut members[i], est, &cfg),
            None => members.push(new_member(est)),
        }
    }
    // fuse until pairwise separated
    loop {
        let pair = (0..members.len()).find_map(|i| {
            (i + 1..members.len())
                .find(|&j| members[i].representative.matches(&members[j].representative, tol_cluster))
                .map(|j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        let absorbed = members.remove(j);
        let target = &mut members[i];
        merge_into(target, &absorbed.representative, &cfg);
        target.seeds.extend(absorbed.seeds.into_iter().skip(1));
        target.sources.extend(absorbed.sources);
        target.forward_precompact |= absorbed.forward_precompact;
        target.backward_precompact |= absorbed.backward_precompact;
    }
    for (i, m) in members.iter_mut().enumerate() {
        m.label = format!("L{i}");
    }
    Ok(LimitSetCatalog { members, tol_cluster })
}

/// Omega (and, when `with_alpha`, alpha) estimates for many seeds, in seed order.
pub fn estimate_many<T: Real>(
    map: &DiscreteMap<T>,
    seeds: &[StatePoint<T>],
    cfg: &EstimatorConfig<T>,
    with_alpha: bool,
) -> Vec<LimitSetEstimate<T>> {
    let omegas: Vec<_> = seeds.par_iter().map(|s| estimate_omega(map, s, cfg)).collect();
    if !with_alpha || !map.has_inverse() {
        return omegas;
    }
    let alphas: Vec<_> = seeds
        .par_iter()
        .filter_map(|s| estimate_alpha(map, s, cfg).ok())
        .collect();
    omegas.into_iter().chain(alphas).collect()
}

/// Estimates from every seed, keeping only converged ones, clustered.
pub fn survey_catalog<T: Real>(
    map: &DiscreteMap<T>,
    seeds: &[StatePoint<T>],
    cfg: &EstimatorConfig<T>,
    with_alpha: bool,
) -> LimitSetCatalog<T> {
    let converged: Vec<_> = estimate_many(map, seeds, cfg, with_alpha)
        .into_iter()
        .filter(|e| e.converged)
        .collect();
    cluster_limit_sets(&converged, cfg.tol_cluster).expect("only converged estimates are clustered")
}
