//! Every numeric default the CLI uses, overridable with `--set name=value`.

use crate::error::CliError;
use limitlab_core::lift::SweepConfig;
use limitlab_core::limits::{EstimatorConfig, WitnessConfig};
use serde::Serialize;
use std::collections::BTreeMap;

pub struct Setting {
    pub name: &'static str,
    pub default: f64,
    pub integer: bool,
    pub help: &'static str,
}

const fn int(name: &'static str, default: f64, help: &'static str) -> Setting {
    Setting { name, default, integer: true, help }
}

const fn real(name: &'static str, default: f64, help: &'static str) -> Setting {
    Setting { name, default, integer: false, help }
}

pub const TABLE: &[Setting] = &[
    int("burn", 500.0, "orbit steps discarded before the first tail window"),
    int("tail", 500.0, "points per tail window"),
    int("max_windows", 8.0, "tail windows tried before an estimate is unsettled"),
    real("tol_settle", 1e-7, "Hausdorff drift allowed between consecutive windows"),
    real("tol_fp", 1e-6, "diameter under which a limit set is a fixed point"),
    real("tol_cluster", 1e-3, "Hausdorff distance under which two limit sets coincide"),
    real("bound_radius", 1e6, "norm an orbit must stay under to be bounded"),
    real("escape_radius", 1e8, "norm an orbit must pass to be unbounded"),
    real("divergence_radius", 1e12, "norm at which iteration stops"),
    int("horizon", 2000.0, "steps of the boundedness probe"),
    int("max_period", 64.0, "longest period the cycle detector tests"),
    int("witness_depth", 30.0, "halvings in a basin-closedness witness sequence"),
    int("steps", 200.0, "trajectory length for simulate"),
    int("seeds", 9.0, "grid seeds per axis when surveying limit sets"),
    int("grid", 101.0, "basin grid cells per axis"),
    int("samples", 1000.0, "sample points for verify"),
    int("catalog_seeds", 33.0, "grid seeds per axis for the sweep catalog"),
    int("grid_samples", 512.0, "grid training samples for learn and sweep"),
    int("random_samples", 512.0, "random training samples for learn and sweep"),
    int("heldout_samples", 257.0, "held-out midpoints per axis in a sweep"),
    real("delta_sep", 1e-3, "pairs closer than this are not probed for injectivity"),
    real("delta_img", 1e-6, "images closer than this are collisions"),
];

/// The table as JSON: name, default, integer flag and meaning.
pub fn table_json() -> String {
    let rows: Vec<serde_json::Value> = TABLE
        .iter()
        .map(|s| serde_json::json!({ "name": s.name, "default": s.default, "integer": s.integer, "help": s.help }))
        .collect();
    serde_json::to_string_pretty(&rows).expect("settings serialize")
}

/// Resolved values of every setting.
#[derive(Debug, Clone, Serialize)]
pub struct Settings(BTreeMap<&'static str, f64>);

impl Settings {
    pub fn from_overrides(overrides: &BTreeMap<String, f64>) -> Result<Self, CliError> {
        let mut values: BTreeMap<&'static str, f64> = TABLE.iter().map(|s| (s.name, s.default)).collect();
        for (key, &v) in overrides {
            let Some(s) = TABLE.iter().find(|s| s.name == key) else {
                let known: Vec<&str> = TABLE.iter().map(|s| s.name).collect();
                return Err(CliError::validation(
                    "unknown_setting",
                    format!("unknown setting '{key}'; known: {}", known.join(", ")),
                ));
            };
            let ok = v.is_finite() && v > 0.0 && (!s.integer || v.fract() == 0.0);
            if !ok {
                let what = if s.integer { "a positive integer" } else { "a positive number" };
                return Err(CliError::validation("invalid_setting", format!("{key} must be {what}, got {v}")));
            }
            values.insert(s.name, v);
        }
        Ok(Self(values))
    }

    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn count(&self, name: &str) -> usize {
        self.0[name] as usize
    }

    pub fn estimator(&self) -> EstimatorConfig<f64> {
        EstimatorConfig {
            burn: self.count("burn"),
            tail: self.count("tail"),
            max_windows: self.count("max_windows"),
            tol_settle: self.get("tol_settle"),
            tol_fp: self.get("tol_fp"),
            tol_cluster: self.get("tol_cluster"),
            bound_radius: self.get("bound_radius"),
            escape_radius: self.get("escape_radius"),
            divergence_radius: self.get("divergence_radius"),
            horizon: self.count("horizon"),
            max_period: self.count("max_period"),
        }
    }

    pub fn witness(&self) -> WitnessConfig {
        WitnessConfig { depth: self.count("witness_depth") }
    }

    pub fn sweep(&self, seed: u64) -> SweepConfig<f64> {
        SweepConfig {
            seed,
            grid_samples: self.count("grid_samples"),
            random_samples: self.count("random_samples"),
            heldout_samples: self.count("heldout_samples"),
            include_constant: false,
            delta_sep: self.get("delta_sep"),
            delta_img: self.get("delta_img"),
            tol_cluster: self.get("tol_cluster"),
        }
    }
}
