use crate::error::CliError;
use crate::parse;
use crate::settings::Settings;
use limitlab_core::catalog::CatalogEntry;
use limitlab_core::dynamics::DomainRegion;
use limitlab_core::immersion::{collapse_report, conjugacy_residual, injectivity_probe, CollapseReport};
use limitlab_core::lift::{build_dictionary, domain_catalog, fit_lift_on, obstruction_sweep, DictionarySpec};
use limitlab_core::limits::{
    basin_closedness_witness, cluster_limit_sets, compute_basins, estimate_many, GridSpec, LimitSetCatalog,
};
use limitlab_core::{DiscreteMap, ImmersionMap, LearnedLift, StatePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

/// Injectivity is probed on at most this many samples (the scan is quadratic).
const INJECTIVITY_SAMPLES: usize = 2000;

/// Everything a command needs besides its own flags.
pub struct Ctx {
    pub entry: CatalogEntry,
    pub domain: DomainRegion<f64>,
    pub domain_given: bool,
    pub seed: u64,
    pub out: PathBuf,
    pub settings: Settings,
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<String, CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

pub fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    write_file(dir, name, &text)
}

impl Ctx {
    fn system(&self) -> &DiscreteMap {
        &self.entry.system
    }

    fn header(&self, schema: &str) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("schema".into(), json!(schema));
        m.insert("system".into(), json!(self.entry.name));
        m.insert("params".into(), json!(self.entry.params));
        m.insert("domain".into(), json!(self.domain.to_string()));
        m.insert("seed".into(), json!(self.seed));
        m
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Documented seeds of the known limit sets plus a node grid over the domain.
    fn default_seeds(&self) -> Vec<StatePoint> {
        let mut seeds: Vec<StatePoint> =
            self.entry.known_limit_sets.iter().flat_map(|k| k.seeds.iter().cloned()).collect();
        if let Ok(grid) = self.domain.grid(self.settings.count("seeds")) {
            seeds.extend(grid);
        }
        seeds.retain(|s| self.domain.contains(s));
        seeds
    }

    /// Node grid in one dimension (endpoints included), seeded uniform samples otherwise.
    fn samples(&self, n: usize) -> Result<Vec<StatePoint>, CliError> {
        if self.domain.dim() == 1 {
            Ok(self.domain.grid(n)?)
        } else {
            Ok(self.domain.sample_uniform(n, &mut self.rng())?)
        }
    }

    fn survey(&self, seeds: &[StatePoint], with_alpha: bool) -> Result<(LimitSetCatalog<f64>, usize), CliError> {
        let cfg = self.settings.estimator();
        let estimates = estimate_many(self.system(), seeds, &cfg, with_alpha);
        let total = estimates.len();
        let converged: Vec<_> = estimates.into_iter().filter(|e| e.converged).collect();
        let unconverged = total - converged.len();
        Ok((cluster_limit_sets(&converged, cfg.tol_cluster)?, unconverged))
    }

    /// Known limit sets lying inside the domain, as a catalog.
    fn known_catalog(&self) -> Option<LimitSetCatalog<f64>> {
        let sets: Vec<Vec<StatePoint>> = self
            .entry
            .known_limit_sets
            .iter()
            .filter(|k| k.points.iter().all(|p| self.domain.contains(p)))
            .map(|k| k.points.clone())
            .collect();
        (!sets.is_empty()).then(|| LimitSetCatalog::from_point_sets(sets, &self.settings.estimator()))
    }

    /// Pairs `(x, f(x))` on a node grid plus seeded random points of the domain.
    fn training_pairs(&self) -> Result<Vec<(StatePoint, StatePoint)>, CliError> {
        let per_axis = self.settings.count("grid_samples");
        let grid = if self.domain.dim() == 1 {
            self.domain.grid(per_axis)?
        } else {
            self.domain.grid((per_axis as f64).sqrt().ceil() as usize)?
        };
        let random = self.domain.sample_uniform(self.settings.count("random_samples"), &mut self.rng())?;
        Ok(grid
            .into_iter()
            .chain(random)
            .filter_map(|x| self.system().evaluate(&x).ok().map(|y| (x, y)))
            .collect())
    }

    fn fit(&self, spec: &DictionarySpec<f64>, ridge: f64) -> Result<(LearnedLift, Value), CliError> {
        let dict = build_dictionary(spec, self.system().dim(), false)?;
        let pairs = self.training_pairs()?;
        let (lift, report) = fit_lift_on(&pairs, &dict, ridge, self.domain.clone())?;
        Ok((lift, serde_json::to_value(report).expect("fit report serializes")))
    }
}

pub fn simulate(ctx: &Ctx, x0: Option<&str>, backward: bool) -> Result<Value, CliError> {
    let dim = ctx.system().dim();
    let x0 = match x0 {
        Some(s) => parse::point(s, dim)?,
        None => ctx.default_seeds().into_iter().next().unwrap_or_else(|| StatePoint::origin(dim)),
    };
    let steps = ctx.settings.count("steps");
    let traj = if backward { ctx.system().iterate_back(&x0, steps)? } else { ctx.system().iterate(&x0, steps) };
    write_file(&ctx.out, "trajectory.csv", &traj.to_csv())?;
    let mut r = ctx.header("limitlab/simulate/v1");
    r.insert("x0".into(), json!(x0));
    r.insert("direction".into(), json!(traj.direction));
    r.insert("steps_requested".into(), json!(steps));
    r.insert("steps_taken".into(), json!(traj.steps_taken));
    r.insert("termination".into(), json!(traj.termination));
    r.insert("final_point".into(), json!(traj.last()));
    let report = Value::Object(r);
    write_json(&ctx.out, "simulate.json", &report)?;
    Ok(report)
}

pub fn limits(ctx: &Ctx, seeds: Option<&str>, alpha: bool) -> Result<Value, CliError> {
    let seeds = match seeds {
        Some(s) => parse::points(s, ctx.system().dim())?,
        None => ctx.default_seeds(),
    };
    if seeds.is_empty() {
        return Err(CliError::validation("no_seeds", "no seed lies in the domain"));
    }
    let (catalog, unconverged) = ctx.survey(&seeds, alpha)?;
    let mut r = ctx.header("limitlab/catalog/v1");
    r.insert("seeds_used".into(), json!(seeds.len()));
    r.insert("with_alpha".into(), json!(alpha));
    r.insert("unconverged".into(), json!(unconverged));
    r.insert("catalog".into(), serde_json::to_value(catalog.summary()).expect("catalog serializes"));
    let report = Value::Object(r);
    write_json(&ctx.out, "catalog.json", &report)?;
    Ok(report)
}

pub fn basins(ctx: &Ctx) -> Result<Value, CliError> {
    let bounds = ctx
        .domain
        .bounding_box()
        .ok_or_else(|| CliError::validation("invalid_domain", "basins need a bounded domain"))?;
    let n = ctx.settings.count("grid");
    let grid = GridSpec::new(bounds, vec![n; ctx.domain.dim()])?;
    let (catalog, _) = ctx.survey(&ctx.default_seeds(), false)?;
    let cfg = ctx.settings.estimator();
    let map = compute_basins(ctx.system(), &grid, &catalog, &cfg)?;
    let witnesses = basin_closedness_witness(ctx.system(), &map, &cfg, &ctx.settings.witness());
    write_file(&ctx.out, "basins.csv", &map.to_csv())?;
    let mut r = ctx.header("limitlab/basins/v1");
    r.insert("grid".into(), json!({ "bounds": grid.bounds, "resolution": grid.resolution }));
    let counts: Vec<Value> = map.counts().into_iter().map(|(label, cells)| json!({ "label": label, "cells": cells })).collect();
    r.insert("counts".into(), json!(counts));
    r.insert("catalog".into(), serde_json::to_value(catalog.summary()).expect("catalog serializes"));
    let ws: Vec<Value> = witnesses
        .iter()
        .map(|w| {
            json!({
                "sequence_seed": w.sequence_seed,
                "limit_point": w.limit_point,
                "labels": [w.labels.0, w.labels.1],
                "depth": w.depth,
            })
        })
        .collect();
    r.insert("witnesses".into(), json!(ws));
    let report = Value::Object(r);
    write_json(&ctx.out, "basins.json", &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ImmersionChoice {
    Exact,
    Learned,
}

pub fn verify(ctx: &Ctx, which: ImmersionChoice, dict: &str, ridge: f64) -> Result<Value, CliError> {
    let (lift, target, fit): (ImmersionMap, DiscreteMap, Option<Value>) = match which {
        ImmersionChoice::Exact => {
            let lift = ctx
                .entry
                .exact_immersion
                .clone()
                .ok_or_else(|| CliError::from(limitlab_core::catalog::CatalogError::NoExactImmersion(ctx.entry.name.clone())))?;
            let lift = if ctx.domain_given { lift.with_domain(ctx.domain.clone()) } else { lift };
            (lift, ctx.entry.lifted_target.clone().expect("exact immersions come with a target"), None)
        }
        ImmersionChoice::Learned => {
            let specs = parse::dictionaries(dict)?;
            let [spec] = specs.as_slice() else {
                return Err(CliError::validation("invalid_dictionary", "verify takes a single dictionary"));
            };
            let (learned, report) = ctx.fit(spec, ridge)?;
            (learned.immersion(), learned.target(), Some(report))
        }
    };
    let samples = ctx.samples(ctx.settings.count("samples"))?;
    // the claim is that F is defined on the whole domain, so any gap fails
    for x in &samples {
        if let Err(e) = lift.apply(x) {
            return Err(CliError::undefined_at(&x.to_f64_vec(), e));
        }
    }
    let conjugacy = conjugacy_residual(&lift, ctx.system(), &target, &samples)?;
    let probe = &samples[..samples.len().min(INJECTIVITY_SAMPLES)];
    let injectivity = injectivity_probe(&lift, probe, ctx.settings.get("delta_sep"), ctx.settings.get("delta_img"));
    let collapse: Option<CollapseReport<f64>> = match ctx.known_catalog() {
        Some(catalog) => Some(collapse_report(&lift, &catalog, &samples, ctx.settings.get("tol_cluster"))?),
        None => None,
    };
    let mut r = ctx.header("limitlab/verify/v1");
    r.insert("immersion".into(), json!(lift.name()));
    r.insert("fit".into(), fit.unwrap_or(Value::Null));
    r.insert("conjugacy".into(), serde_json::to_value(&conjugacy).expect("serializes"));
    r.insert("injectivity".into(), serde_json::to_value(&injectivity).expect("serializes"));
    r.insert("collapse".into(), serde_json::to_value(&collapse).expect("serializes"));
    let report = Value::Object(r);
    write_json(&ctx.out, "verify.json", &report)?;
    Ok(report)
}

pub fn learn(ctx: &Ctx, dict: &str, ridge: f64) -> Result<Value, CliError> {
    let specs = parse::dictionaries(dict)?;
    let [spec] = specs.as_slice() else {
        return Err(CliError::validation("invalid_dictionary", "learn takes a single dictionary"));
    };
    let (lift, fit) = ctx.fit(spec, ridge)?;
    let eig: Vec<[f64; 2]> = lift.eigenvalues()?.into_iter().map(|(re, im)| [re, im]).collect();
    let k: Vec<Vec<f64>> = lift.k.row_iter().map(|row| row.iter().copied().collect()).collect();
    let mut r = ctx.header("limitlab/lift/v1");
    r.insert("dictionary".into(), json!({ "kind": lift.dictionary.kind(), "names": lift.dictionary.names() }));
    r.insert("ridge".into(), json!(ridge));
    r.insert("k".into(), json!(k));
    r.insert("eigenvalues".into(), json!(eig));
    r.insert("fit".into(), fit);
    let report = Value::Object(r);
    write_json(&ctx.out, "lift.json", &report)?;
    Ok(report)
}

pub fn sweep(ctx: &Ctx, dicts: &str, ridges: &str) -> Result<Value, CliError> {
    let specs = parse::dictionaries(dicts)?;
    let ridges = parse::ridges(ridges)?;
    let cfg = ctx.settings.estimator();
    let catalog = domain_catalog(ctx.system(), &ctx.domain, ctx.settings.count("catalog_seeds"), &cfg)?;
    let report = obstruction_sweep(ctx.system(), &ctx.domain, &specs, &ridges, &catalog, &ctx.settings.sweep(ctx.seed))?;
    write_file(&ctx.out, "sweep.csv", &report.to_csv())?;
    let mut r = ctx.header("limitlab/sweep/v1");
    r.insert("report".into(), serde_json::to_value(&report).expect("sweep report serializes"));
    let report = Value::Object(r);
    write_json(&ctx.out, "sweep.json", &report)?;
    Ok(report)
}
