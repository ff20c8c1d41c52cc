use crate::dynamics::{cartesian, linspace, DiscreteMap, DomainRegion, StatePoint};
use crate::immersion::{collapse_report, injectivity_probe, DEFAULT_DELTA_IMG, DEFAULT_DELTA_SEP};
use crate::limits::{survey_catalog, EstimatorConfig, LimitSetCatalog};
use crate::scalar::Real;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

use super::{build_dictionary, fit_lift_on, Dictionary, DictionaryKind, DictionarySpec, LiftError};

/// Sweeps refuse catalogs with more members than this.
pub const MAX_CATALOG_MEMBERS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct SweepConfig<T: Real> {
    pub seed: u64,
    /// Grid nodes per axis in the training set.
    pub grid_samples: usize,
    /// Uniform random training points, drawn per row.
    pub random_samples: usize,
    /// Held-out cell midpoints per axis.
    pub heldout_samples: usize,
    pub include_constant: bool,
    pub delta_sep: T,
    pub delta_img: T,
    pub tol_cluster: T,
}

impl<T: Real> Default for SweepConfig<T> {
    fn default() -> Self {
        Self {
            seed: 42,
            grid_samples: 512,
            random_samples: 512,
            heldout_samples: 257,
            include_constant: false,
            delta_sep: T::lit(DEFAULT_DELTA_SEP),
            delta_img: T::lit(DEFAULT_DELTA_IMG),
            tol_cluster: T::lit(1e-3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct TradeoffRow<T: Real> {
    pub dict_kind: DictionaryKind,
    /// Number of dictionary functions.
    pub dict_size: usize,
    pub ridge: T,
    pub train_residual: Option<T>,
    pub gram_condition: Option<T>,
    /// Max conjugacy residual over the held-out midpoints.
    pub residual_heldout: Option<T>,
    pub collapse_ratio: Option<T>,
    pub min_sep_ratio: Option<T>,
    pub collisions: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct TradeoffReport<T: Real> {
    pub system: String,
    pub domain: String,
    pub catalog_labels: Vec<String>,
    pub config: SweepConfig<T>,
    pub rows: Vec<TradeoffRow<T>>,
}

impl<T: Real> TradeoffReport<T> {
    /// One line per row; undefined metrics are empty fields.
    pub fn to_csv(&self) -> String {
        fn opt<T: Real>(v: Option<T>) -> String {
            v.map_or_else(String::new, |v| format!("{v:e}"))
        }
        let mut out = String::from("dict_kind,dict_size,ridge,residual_heldout,collapse_ratio,min_sep_ratio\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{:e},{},{},{}",
                r.dict_kind,
                r.dict_size,
                r.ridge,
                opt(r.residual_heldout),
                opt(r.collapse_ratio),
                opt(r.min_sep_ratio)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tradeoff report serializes")
    }

    /// Rows whose held-out residual is below `eps`.
    pub fn rows_below(&self, eps: T) -> impl Iterator<Item = &TradeoffRow<T>> {
        self.rows.iter().filter(move |r| r.residual_heldout.is_some_and(|v| v < eps))
    }
}

/// Catalog of limit sets reached from a node grid of `n` seeds per axis.
pub fn domain_catalog<T: Real>(
    f: &DiscreteMap<T>,
    domain: &DomainRegion<T>,
    n: usize,
    cfg: &EstimatorConfig<T>,
) -> Result<LimitSetCatalog<T>, LiftError> {
    let seeds = domain.grid(n)?;
    Ok(survey_catalog(f, &seeds, cfg, false))
}

/// Fits one lift per (dictionary, ridge) and records how well it conjugates
/// `f` on held-out points against how far apart it keeps the catalog
/// members. Rows are sorted by dictionary size then ridge; a failing row is
/// kept with its error and the sweep continues.
pub fn obstruction_sweep<T: Real>(
    f: &DiscreteMap<T>,
    domain: &DomainRegion<T>,
    dicts: &[DictionarySpec<T>],
    ridges: &[T],
    catalog: &LimitSetCatalog<T>,
    cfg: &SweepConfig<T>,
) -> Result<TradeoffReport<T>, LiftError> {
    if catalog.len() > MAX_CATALOG_MEMBERS {
        return Err(LiftError::CountableCatalogExceeded { members: catalog.len(), limit: MAX_CATALOG_MEMBERS });
    }
    if ridges.iter().any(|r| !(*r >= T::zero()) || !r.is_finite()) {
        return Err(LiftError::InvalidRidge(f64::NAN));
    }
    let bounds = domain
        .bounding_box()
        .ok_or_else(|| LiftError::InvalidDomain("the sweep needs a bounded domain".into()))?;
    let grid = domain.grid(cfg.grid_samples)?;
    let heldout = midpoints(domain, &bounds, cfg.heldout_samples);
    if heldout.is_empty() {
        return Err(LiftError::InvalidDomain("no held-out points inside the domain".into()));
    }

    let dictionaries: Vec<Dictionary<T>> = dicts
        .iter()
        .map(|s| build_dictionary(s, domain.dim(), cfg.include_constant))
        .collect::<Result<_, _>>()?;
    let mut configs: Vec<(usize, T)> = (0..dictionaries.len())
        .flat_map(|d| ridges.iter().map(move |&r| (d, r)))
        .collect();
    configs.sort_by(|a, b| {
        dictionaries[a.0]
            .dim_out()
            .cmp(&dictionaries[b.0].dim_out())
            .then(a.1.partial_cmp(&b.1).expect("ridges are finite"))
    });

    let rows = configs
        .par_iter()
        .enumerate()
        .map(|(row, &(d, ridge))| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(row as u64);
            sweep_row(f, domain, &dictionaries[d], ridge, catalog, &grid, &heldout, cfg, &mut rng)
        })
        .collect();
    Ok(TradeoffReport {
        system: f.name().to_string(),
        domain: domain.to_string(),
        catalog_labels: catalog.labels().into_iter().map(String::from).collect(),
        config: *cfg,
        rows,
    })
}

#[allow(clippy::too_many_arguments)]
fn sweep_row<T: Real>(
    f: &DiscreteMap<T>,
    domain: &DomainRegion<T>,
    dict: &Dictionary<T>,
    ridge: T,
    catalog: &LimitSetCatalog<T>,
    grid: &[StatePoint<T>],
    heldout: &[StatePoint<T>],
    cfg: &SweepConfig<T>,
    rng: &mut ChaCha8Rng,
) -> TradeoffRow<T> {
    let mut row = TradeoffRow {
        dict_kind: dict.kind(),
        dict_size: dict.dim_out(),
        ridge,
        train_residual: None,
        gram_condition: None,
        residual_heldout: None,
        collapse_ratio: None,
        min_sep_ratio: None,
        collisions: None,
        error: None,
    };
    let random = match domain.sample_uniform(cfg.random_samples, rng) {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let pairs: Vec<_> = grid
        .iter()
        .chain(&random)
        .filter_map(|x| f.evaluate(x).ok().map(|y| (x.clone(), y)))
        .collect();
    let (lift, report) = match fit_lift_on(&pairs, dict, ridge, domain.clone()) {
        Ok(fit) => fit,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.train_residual = Some(report.train_residual);
    row.gram_condition = Some(report.gram_condition);
    row.residual_heldout = heldout
        .iter()
        .filter_map(|x| f.evaluate(x).ok().map(|y| lift.residual_at(x, &y)))
        .filter(|r| r.is_finite())
        .fold(None, |m: Option<T>, r| Some(m.map_or(r, |m| m.max(r))));

    let immersion = lift.immersion();
    match collapse_report(&immersion, catalog, heldout, cfg.tol_cluster) {
        Ok(c) => row.collapse_ratio = c.collapse_ratio,
        Err(e) => row.error = Some(e.to_string()),
    }
    let probe = injectivity_probe(&immersion, heldout, cfg.delta_sep, cfg.delta_img);
    row.min_sep_ratio = probe.min_separation_ratio;
    row.collisions = Some(probe.collision_count);
    row
}

/// Midpoints of `n` cells per axis over the bounding box, kept if inside.
fn midpoints<T: Real>(domain: &DomainRegion<T>, bounds: &[(T, T)], n: usize) -> Vec<StatePoint<T>> {
    let axes: Vec<Vec<T>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            let nodes = linspace(lo, hi, n + 1);
            nodes.windows(2).map(|w| (w[0] + w[1]) / T::lit(2.0)).collect()
        })
        .collect();
    cartesian(&axes)
        .into_iter()
        .filter_map(|c| StatePoint::new(c).ok())
        .filter(|p| domain.contains(p))
        .collect()
}
