//! The four worked examples end to end, with their golden checks.

use crate::commands::{write_file, write_json};
use crate::error::CliError;
use crate::settings::Settings;
use limitlab_core::catalog::{get_system, CatalogEntry};
use limitlab_core::cloud::hausdorff;
use limitlab_core::dynamics::{linspace, DomainRegion, Endpoint};
use limitlab_core::immersion::{collapse_report, conjugacy_residual, injectivity_probe, ImmersionError};
use limitlab_core::lift::{domain_catalog, obstruction_sweep, DictionarySpec};
use limitlab_core::limits::{
    basin_closedness_witness, compute_basins, estimate_alpha, estimate_omega, survey_catalog, EstimatorConfig,
    GridSpec, LimitSetCatalog,
};
use limitlab_core::{DiscreteMap, StatePoint};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: Option<f64>,
    /// `value < threshold` passes, or `value >= threshold` for `at_least`.
    threshold: f64,
    at_least: bool,
    pass: bool,
}

impl Check {
    fn below(name: &'static str, value: f64, threshold: f64) -> Self {
        Self { name, value: Some(value), threshold, at_least: false, pass: value < threshold }
    }

    fn at_least(name: &'static str, value: f64, threshold: f64) -> Self {
        Self { name, value: Some(value), threshold, at_least: true, pass: value >= threshold }
    }
}

#[derive(Serialize)]
struct Example {
    name: &'static str,
    system: &'static str,
    checks: Vec<Check>,
}

#[derive(Serialize)]
struct Summary {
    schema: &'static str,
    seed: u64,
    all_pass: bool,
    examples: Vec<Example>,
    artifacts: Vec<String>,
}

fn entry(name: &str) -> Result<CatalogEntry, CliError> {
    Ok(get_system(name, &BTreeMap::new())?)
}

fn line(lo: f64, hi: f64, n: usize) -> Vec<StatePoint> {
    linspace(lo, hi, n).into_iter().map(|x| StatePoint::scalar(x).expect("finite")).collect()
}

fn s(x: f64) -> StatePoint {
    StatePoint::scalar(x).expect("finite")
}

fn half() -> DiscreteMap {
    DiscreteMap::linear("z/2", DMatrix::from_element(1, 1, 0.5))
}

fn max_conjugacy(e: &CatalogEntry, target: &DiscreteMap, samples: &[StatePoint]) -> Result<f64, CliError> {
    let lift = e.exact_immersion.as_ref().expect("worked examples have exact immersions");
    Ok(conjugacy_residual(lift, &e.system, target, samples)?.max_residual)
}

fn example_1(cfg: &EstimatorConfig<f64>, out: &Path, files: &mut Vec<String>) -> Result<Example, CliError> {
    let m = entry("mobius")?;
    let residual = max_conjugacy(&m, &half(), &line(-5.0, 0.5, 1000))?;
    let traj = m.system.iterate(&s(0.0), 40);
    let closed_form_error = traj
        .points
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let two = 2f64.powi(k as i32);
            (x.coords()[0] + (two - 1.0) / (two + 1.0)).abs()
        })
        .fold(0.0, f64::max);
    files.push(write_file(out, "ex1-trajectory.csv", &traj.to_csv())?);
    let omega = estimate_omega(&m.system, &s(0.0), cfg);
    Ok(Example {
        name: "example-1",
        system: "mobius",
        checks: vec![
            Check::below("conjugacy_max_residual", residual, 1e-12),
            Check::below("closed_form_error", closed_form_error, 1e-12),
            Check::below("omega_distance_to_minus_one", hausdorff(&omega.points, &[s(-1.0)]), 1e-6),
        ],
    })
}

fn example_2(cfg: &EstimatorConfig<f64>) -> Result<Example, CliError> {
    let inv = entry("mobius-inverse")?;
    let residual = max_conjugacy(&inv, &half(), &line(-0.5, 10.0, 1000))?;
    let right = DomainRegion::interval(Endpoint::Open(-1.0), Endpoint::Unbounded)?;
    let forward = entry("mobius")?.system.restricted_to(right, true);
    let alpha = estimate_alpha(&forward, &s(0.0), cfg)?;
    Ok(Example {
        name: "example-2",
        system: "mobius-inverse",
        checks: vec![
            Check::below("conjugacy_max_residual", residual, 1e-12),
            Check::below("alpha_distance_to_one", hausdorff(&alpha.points, &[s(1.0)]), 1e-6),
        ],
    })
}

fn example_3(settings: &Settings, out: &Path, files: &mut Vec<String>) -> Result<Example, CliError> {
    let cfg = settings.estimator();
    let cot = entry("cot-map")?;
    let target = cot.lifted_target.clone().expect("cot-map has a target");
    let residual = max_conjugacy(&cot, &target, &line(0.05, PI - 0.05, 1000))?;

    let catalog = survey_catalog(&cot.system, &[s(PI / 2.0), s(0.0)], &cfg, false);
    let basins = compute_basins(&cot.system, &GridSpec::uniform(1, 0.0, PI, 101)?, &catalog, &cfg)?;
    files.push(write_file(out, "ex3-basins.csv", &basins.to_csv())?);
    let cot_witnesses = basin_closedness_witness(&cot.system, &basins, &cfg, &settings.witness());

    let catalog = survey_catalog(&target, &[s(0.0), s(1.0)], &cfg, false);
    let basins = compute_basins(&target, &GridSpec::uniform(1, -1.0, 1.0, 201)?, &catalog, &cfg)?;
    let at_one = basin_closedness_witness(&target, &basins, &cfg, &settings.witness())
        .iter()
        .filter(|w| w.limit_point == s(1.0))
        .count();
    Ok(Example {
        name: "example-3",
        system: "cot-map",
        checks: vec![
            Check::below("conjugacy_max_residual", residual, 1e-9),
            Check::at_least("cot_map_witnesses", cot_witnesses.len() as f64, 1.0),
            Check::at_least("target_witnesses_at_one", at_one as f64, 1.0),
        ],
    })
}

fn example_4(settings: &Settings, seed: u64, out: &Path, files: &mut Vec<String>) -> Result<Example, CliError> {
    let rs = entry("rotation-scaling")?;
    let target = rs.lifted_target.clone().expect("rotation-scaling has a target");
    let annulus = DomainRegion::annulus(2, Endpoint::Closed(0.1), Endpoint::Closed(10.0))?;
    let samples = annulus.sample_uniform(2000, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let residual = max_conjugacy(&rs, &target, &samples)?;

    for (i, x0) in [[2.0, 0.0], [0.1, 0.0], [-3.0, 1.0]].iter().enumerate() {
        let traj = rs.system.iterate(&StatePoint::new(x0.to_vec()).expect("finite"), 200);
        files.push(write_file(out, &format!("ex4-trajectory-{}.csv", i + 1), &traj.to_csv())?);
    }

    let cfg = EstimatorConfig { tail: 2000, ..settings.estimator() };
    let omega = estimate_omega(&rs.system, &StatePoint::new(vec![2.0, 0.0]).expect("finite"), &cfg);
    let circle: Vec<StatePoint> = (0..4096)
        .map(|i| 2.0 * PI * i as f64 / 4096.0)
        .map(|t| StatePoint::new(vec![t.cos(), t.sin()]).expect("finite"))
        .collect();
    let to_circle = hausdorff(&omega.points, &circle);

    let lift = rs.exact_immersion.as_ref().expect("rotation-scaling has an exact immersion");
    let inj = injectivity_probe(lift, &samples[..1000], settings.get("delta_sep"), settings.get("delta_img"));

    let catalog = LimitSetCatalog::from_point_sets(
        vec![vec![StatePoint::origin(2)], circle.iter().step_by(16).cloned().collect()],
        &cfg,
    );
    let undefined_at_origin = matches!(
        collapse_report(lift, &catalog, &samples[..100], cfg.tol_cluster),
        Err(ImmersionError::ImmersionUndefined { ref point, .. }) if point == &[0.0, 0.0]
    );
    Ok(Example {
        name: "example-4",
        system: "rotation-scaling",
        checks: vec![
            Check::below("conjugacy_max_residual", residual, 1e-9),
            Check::below("omega_distance_to_circle", to_circle, 1e-2),
            Check::below("injectivity_collisions", inj.collision_count as f64, 1.0),
            Check::at_least("collapse_undefined_at_origin", f64::from(u8::from(undefined_at_origin)), 1.0),
        ],
    })
}

/// A small Fourier sweep on the cot map, written as CSV for the renderer.
fn sweep(settings: &Settings, seed: u64, out: &Path, files: &mut Vec<String>) -> Result<(), CliError> {
    let cot = entry("cot-map")?;
    let domain = DomainRegion::closed_interval(0.0, PI)?;
    let catalog = domain_catalog(&cot.system, &domain, settings.count("catalog_seeds"), &settings.estimator())?;
    let dicts: Vec<_> = (1..=4).map(|j| DictionarySpec::Fourier { max_frequency: j }).collect();
    let report = obstruction_sweep(&cot.system, &domain, &dicts, &[0.0, 1e-8], &catalog, &settings.sweep(seed))?;
    files.push(write_file(out, "sweep.csv", &report.to_csv())?);
    Ok(())
}

pub fn run(settings: &Settings, seed: u64, out: &Path) -> Result<serde_json::Value, CliError> {
    let cfg = settings.estimator();
    let mut artifacts = Vec::new();
    let examples = vec![
        example_1(&cfg, out, &mut artifacts)?,
        example_2(&cfg)?,
        example_3(settings, out, &mut artifacts)?,
        example_4(settings, seed, out, &mut artifacts)?,
    ];
    sweep(settings, seed, out, &mut artifacts)?;
    let all_pass = examples.iter().all(|e| e.checks.iter().all(|c| c.pass));
    artifacts.push("summary.json".into());
    let summary = Summary { schema: "limitlab/demo/v1", seed, all_pass, examples, artifacts };
    write_json(out, "summary.json", &summary)?;
    let value = serde_json::to_value(&summary).expect("summary serializes");
    if !all_pass {
        let failed: Vec<String> = summary
            .examples
            .iter()
            .flat_map(|e| e.checks.iter().filter(|c| !c.pass).map(move |c| format!("{}/{}", e.name, c.name)))
            .collect();
        return Err(CliError::numeric("golden_check_failed", format!("failed checks: {}", failed.join(", "))));
    }
    Ok(value)
}
