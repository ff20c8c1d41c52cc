//! The worked example systems, each with its exact immersion and linear or
//! Möbius target where one exists, and the limit sets known in closed form.

mod entries;

use crate::dynamics::{DiscreteMap, DomainRegion, StatePoint};
use crate::immersion::ImmersionMap;
use crate::limits::LimitSource;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown system '{0}'")]
    UnknownSystem(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("system '{0}' has no exact immersion")]
    NoExactImmersion(String),
}

/// A limit set documented in closed form, with seeds whose orbits reach it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnownLimitSet {
    pub description: String,
    pub points: Vec<StatePoint<f64>>,
    pub kind: LimitSource,
    pub seeds: Vec<StatePoint<f64>>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub system: DiscreteMap<f64>,
    pub exact_immersion: Option<ImmersionMap<f64>>,
    pub lifted_target: Option<DiscreteMap<f64>>,
    pub known_limit_sets: Vec<KnownLimitSet>,
    /// Where the immersion claims hold (the system domain when there are none).
    pub valid_domain: DomainRegion<f64>,
    /// Bounded region used for default sampling, grids and golden checks.
    pub sample_domain: DomainRegion<f64>,
    pub formulas: Formulas,
    pub notes: String,
}

impl CatalogEntry {
    pub fn inverse_available(&self) -> bool {
        self.system.has_inverse()
    }

    pub fn manifest(&self) -> ManifestEntry {
        ManifestEntry {
            name: self.name.clone(),
            params: self.params.clone(),
            formulas: self.formulas.clone(),
            system_domain: self.system.domain().to_string(),
            valid_domain: self.valid_domain.to_string(),
            sample_domain: self.sample_domain.to_string(),
            inverse_available: self.inverse_available(),
            exact_immersion: self.exact_immersion.is_some(),
            known_limit_sets: self
                .known_limit_sets
                .iter()
                .map(|k| ManifestLimitSet {
                    description: k.description.clone(),
                    kind: k.kind,
                    points: k.points.iter().map(StatePoint::to_f64_vec).collect(),
                })
                .collect(),
            notes: self.notes.clone(),
        }
    }
}

/// Display strings of the maps in an entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Formulas {
    pub system: String,
    pub inverse: Option<String>,
    pub immersion: Option<String>,
    pub target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: String,
    pub default: f64,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemInfo {
    pub name: String,
    pub params: Vec<ParamSpec>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestLimitSet {
    pub description: String,
    pub kind: LimitSource,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub formulas: Formulas,
    pub system_domain: String,
    pub valid_domain: String,
    pub sample_domain: String,
    pub inverse_available: bool,
    pub exact_immersion: bool,
    pub known_limit_sets: Vec<ManifestLimitSet>,
    pub notes: String,
}

fn param(name: &str, default: f64, description: &str) -> ParamSpec {
    ParamSpec { name: name.into(), default, description: description.into() }
}

/// Every catalog system, in a fixed order.
pub fn list_systems() -> Vec<SystemInfo> {
    let info = |name: &str, params: Vec<ParamSpec>, summary: &str| SystemInfo {
        name: name.into(),
        params,
        summary: summary.into(),
    };
    vec![
        info("mobius", vec![], "x -> -(3x-1)/(x-3); omega-limit sets {-1} and {1}; lifts to z -> z/2 on (-inf,1)"),
        info("mobius-inverse", vec![], "x -> (3x+1)/(x+3); lifts to z -> z/2 on (-1,inf)"),
        info("cot-map", vec![], "x -> 2 arccot(cot(x/2)/sqrt 2) on [0,pi]; cos x conjugates it to the Möbius map on [-1,1]"),
        info(
            "rotation-scaling",
            vec![param("theta", 1.0, "rotation angle in radians, in (0, 2pi)")],
            "rotate by theta, scale |x| to 2|x|/(|x|+1); limit sets {0} and the unit circle; lifts to a 3x3 linear map",
        ),
        info("negation", vec![], "x -> -x on [-1,1]; uncountably many period-2 limit sets"),
        info("scalar-linear", vec![param("a", 0.5, "multiplier")], "x -> a x"),
        info(
            "jordan",
            vec![param("lambda", 1.0, "eigenvalue"), param("m", 2.0, "block size, integer in 1..=4")],
            "x -> J x with J the m x m Jordan block for lambda",
        ),
        info("rotation", vec![param("theta", 1.0, "rotation angle in radians")], "planar rotation by theta"),
    ]
}

/// Builds the named entry; parameters not given take their defaults.
pub fn get_system(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry, CatalogError> {
    let info = list_systems()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| CatalogError::UnknownSystem(name.to_string()))?;
    if let Some(unknown) = params.keys().find(|k| !info.params.iter().any(|p| &p.name == *k)) {
        return Err(CatalogError::InvalidParam {
            name: unknown.clone(),
            reason: format!("'{name}' takes no such parameter"),
        });
    }
    let mut resolved = BTreeMap::new();
    for p in &info.params {
        let v = params.get(&p.name).copied().unwrap_or(p.default);
        if !v.is_finite() {
            return Err(CatalogError::InvalidParam { name: p.name.clone(), reason: "must be finite".into() });
        }
        resolved.insert(p.name.clone(), v);
    }
    entries::build(name, resolved)
}

/// The exact immersion of the named system with default parameters.
pub fn exact_immersion(name: &str) -> Result<ImmersionMap<f64>, CatalogError> {
    get_system(name, &BTreeMap::new())?
        .exact_immersion
        .ok_or_else(|| CatalogError::NoExactImmersion(name.to_string()))
}

/// JSON manifest of every system with default parameters.
pub fn manifest_json() -> String {
    let entries: Vec<ManifestEntry> = list_systems()
        .iter()
        .map(|s| get_system(&s.name, &BTreeMap::new()).expect("defaults are valid").manifest())
        .collect();
    serde_json::to_string_pretty(&entries).expect("manifest serializes")
}
