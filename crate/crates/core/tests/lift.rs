mod common;

use limitlab_core::catalog::get_system;
use limitlab_core::dynamics::{linspace, DomainRegion};
use limitlab_core::lift::{
    build_dictionary, domain_catalog, fit_lift, obstruction_sweep, BasisFunction, DictionarySpec, LiftError,
    SweepConfig,
};
use limitlab_core::limits::EstimatorConfig;
use limitlab_core::linear::eigenvalues;
use limitlab_core::{DiscreteMap, StatePoint};
use nalgebra::DMatrix;
use std::collections::BTreeMap;

fn system(name: &str) -> limitlab_core::catalog::CatalogEntry {
    get_system(name, &BTreeMap::new()).unwrap()
}

fn pairs_on(f: &DiscreteMap, xs: &[f64]) -> Vec<(StatePoint, StatePoint)> {
    xs.iter()
        .map(|&x| {
            let p = StatePoint::scalar(x).unwrap();
            let y = f.evaluate(&p).unwrap();
            (p, y)
        })
        .collect()
}

fn sorted_spectrum(mut eigs: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    eigs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    eigs
}

#[test]
fn exact_mobius_lift_is_recovered() {
    let f = system("mobius").system;
    let pairs = pairs_on(&f, &linspace(-0.5, 0.5, 200));
    let dict = build_dictionary(&DictionarySpec::RationalPole { pole: 1.0, max_power: 1 }, 1, true).unwrap();
    let (lift, report) = fit_lift(&pairs, &dict, 0.0).unwrap();
    assert!(report.train_residual < 1e-12, "{}", report.train_residual);
    let spec = sorted_spectrum(lift.eigenvalues().unwrap());
    assert!((spec[0].0 - 0.5).abs() < 1e-9 && (spec[1].0 - 1.0).abs() < 1e-9, "{spec:?}");
    assert!(spec.iter().all(|e| e.1 == 0.0));
}

#[test]
fn identity_pairs_give_identity() {
    let xs = linspace(-1.0, 1.0, 64);
    let pairs: Vec<_> = xs.iter().map(|&x| (StatePoint::scalar(x).unwrap(), StatePoint::scalar(x).unwrap())).collect();
    for spec in [
        DictionarySpec::Monomial { max_degree: 4 },
        DictionarySpec::Fourier { max_frequency: 2 },
        DictionarySpec::RationalPole { pole: 2.0, max_power: 3 },
    ] {
        let dict = build_dictionary(&spec, 1, true).unwrap();
        let (lift, _) = fit_lift(&pairs, &dict, 0.0).unwrap();
        let n = dict.dim_out();
        assert!((lift.k - DMatrix::identity(n, n)).amax() < 1e-9, "{spec:?}");
    }
}

#[test]
fn cos_alone_is_not_a_linear_lift_of_the_cot_map() {
    let oracle = common::oracle();
    let f = system("cot-map").system;
    let pairs = pairs_on(&f, &linspace(0.1, std::f64::consts::PI - 0.1, 512));
    let dict = build_dictionary(&DictionarySpec::Fourier { max_frequency: 1 }, 1, false).unwrap();
    let (_, report) = fit_lift(&pairs, &dict, 1e-8).unwrap();
    let expected = oracle["cot_fourier1_train_rms"].as_f64().unwrap();
    assert!(report.train_residual > 1e-3);
    assert!((report.train_residual - expected).abs() < 1e-9, "{} vs {expected}", report.train_residual);
}

#[test]
fn train_residual_is_nondecreasing_in_ridge() {
    let f = system("mobius").system;
    let pairs = pairs_on(&f, &linspace(-1.0, 1.0, 300));
    let dict = build_dictionary(&DictionarySpec::Monomial { max_degree: 5 }, 1, true).unwrap();
    let mut prev = 0.0;
    for ridge in [0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 100.0] {
        let (_, r) = fit_lift(&pairs, &dict, ridge).unwrap();
        assert!(r.train_residual >= prev * (1.0 - 1e-12), "ridge {ridge}: {} < {prev}", r.train_residual);
        prev = r.train_residual;
    }
}

#[test]
fn rotation_scaling_lift_is_recovered() {
    let entry = system("rotation-scaling");
    let f = &entry.system;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    let samples = entry.sample_domain.sample_uniform(400, &mut rng).unwrap();
    let pairs: Vec<_> = samples.iter().map(|x| (x.clone(), f.evaluate(x).unwrap())).collect();
    let norm = |x: &[f64]| (x[0] * x[0] + x[1] * x[1]).sqrt();
    let dict = build_dictionary(
        &DictionarySpec::Custom(vec![
            BasisFunction::new("x1/|x|", move |x: &[f64]| x[0] / norm(x)),
            BasisFunction::new("x2/|x|", move |x: &[f64]| x[1] / norm(x)),
            BasisFunction::new("(|x|-1)/|x|", move |x: &[f64]| (norm(x) - 1.0) / norm(x)),
        ]),
        2,
        false,
    )
    .unwrap();
    let (lift, report) = fit_lift(&pairs, &dict, 0.0).unwrap();
    assert!(report.train_residual < 1e-9, "{}", report.train_residual);

    let target = entry.lifted_target.as_ref().unwrap();
    let cols: Vec<f64> = (0..3)
        .flat_map(|j| {
            let mut e = vec![0.0; 3];
            e[j] = 1.0;
            target.evaluate(&StatePoint::new(e).unwrap()).unwrap().into_coords()
        })
        .collect();
    let expected = sorted_spectrum(eigenvalues(&DMatrix::from_column_slice(3, 3, &cols)).unwrap());
    let got = sorted_spectrum(lift.eigenvalues().unwrap());
    for (a, b) in got.iter().zip(&expected) {
        assert!((a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-6, "{got:?} vs {expected:?}");
    }
}

#[test]
fn fits_are_bit_identical() {
    let f = system("cot-map").system;
    let pairs = pairs_on(&f, &linspace(0.0, std::f64::consts::PI, 257));
    let dict = build_dictionary(&DictionarySpec::Fourier { max_frequency: 3 }, 1, true).unwrap();
    let (a, _) = fit_lift(&pairs, &dict, 1e-8).unwrap();
    let (b, _) = fit_lift(&pairs, &dict, 1e-8).unwrap();
    assert_eq!(a.k.as_slice(), b.k.as_slice());
}

fn cot_sweep(cfg: &SweepConfig<f64>) -> limitlab_core::TradeoffReport {
    let f = system("cot-map").system;
    let domain = DomainRegion::closed_interval(0.0, std::f64::consts::PI).unwrap();
    let catalog = domain_catalog(&f, &domain, 33, &EstimatorConfig::default()).unwrap();
    assert_eq!(catalog.len(), 2);
    let dicts: Vec<_> = (1..=8).map(|j| DictionarySpec::Fourier { max_frequency: j }).collect();
    obstruction_sweep(&f, &domain, &dicts, &[0.0, 1e-8, 1e-4], &catalog, cfg).unwrap()
}

#[test]
fn cot_sweep_frontier_matches_the_oracle() {
    let report = cot_sweep(&SweepConfig::default());
    assert_eq!(report.rows.len(), 24);
    for w in report.rows.windows(2) {
        assert!((w[0].dict_size, w[0].ridge) < (w[1].dict_size, w[1].ridge));
    }
    // no Fourier lift gets close to conjugating the cot map; the oracle's
    // best held-out residual is about 0.11
    let oracle = common::oracle();
    let oracle_min = oracle["cot_fourier_sweep"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["residual"].as_f64().unwrap())
        .fold(f64::INFINITY, f64::min);
    let min = report.rows.iter().filter_map(|r| r.residual_heldout).fold(f64::INFINITY, f64::min);
    assert!(min >= 0.05, "{min}");
    assert!((min - oracle_min).abs() < 0.5 * oracle_min, "{min} vs oracle {oracle_min}");
    for r in report.rows_below(1e-6) {
        assert!(r.collapse_ratio.unwrap() < 0.05, "{r:?}");
    }
    // the size-2 row reproduces the oracle's separation of cos/sin images
    let row = report.rows.iter().find(|r| r.dict_size == 2 && r.ridge == 0.0).unwrap();
    assert!((row.collapse_ratio.unwrap() - 1.0000186788559033).abs() < 1e-3, "{row:?}");
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    let cfg = SweepConfig::default();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| cot_sweep(&cfg));
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| cot_sweep(&cfg));
    assert_eq!(one, many);
    let other = cot_sweep(&SweepConfig { seed: 7, ..cfg });
    assert_ne!(one.rows[0].residual_heldout, other.rows[0].residual_heldout);
}

#[test]
fn one_limit_set_admits_a_one_to_one_lift() {
    let f = system("mobius").system;
    let domain = DomainRegion::closed_interval(-0.9, 0.5).unwrap();
    let catalog = domain_catalog(&f, &domain, 33, &EstimatorConfig::default()).unwrap();
    assert_eq!(catalog.len(), 1);
    let dicts = [DictionarySpec::RationalPole { pole: 1.0, max_power: 1 }, DictionarySpec::Monomial { max_degree: 3 }];
    let report = obstruction_sweep(&f, &domain, &dicts, &[0.0], &catalog, &SweepConfig::default()).unwrap();
    let exact: Vec<_> = report.rows_below(1e-9).collect();
    assert_eq!(exact.len(), 1);
    let row = exact[0];
    assert_eq!(row.collisions, Some(0));
    assert_eq!(row.collapse_ratio, None);
    let train = row.train_residual.unwrap();
    assert!(row.residual_heldout.unwrap() <= 10.0 * train.max(f64::EPSILON), "{row:?}");
}

#[test]
fn negation_defeats_the_countable_catalog_guard() {
    let f = system("negation").system;
    let domain = DomainRegion::closed_interval(-1.0, 1.0).unwrap();
    let catalog = domain_catalog(&f, &domain, 257, &EstimatorConfig::default()).unwrap();
    assert!(catalog.len() > 64);
    let err = obstruction_sweep(
        &f,
        &domain,
        &[DictionarySpec::Monomial { max_degree: 2 }],
        &[0.0],
        &catalog,
        &SweepConfig::default(),
    )
    .unwrap_err();
    assert!(matches!(err, LiftError::CountableCatalogExceeded { limit: 64, .. }));
}

#[test]
fn polynomial_lifts_of_mobius_stay_far_from_exact() {
    // the collapse regime needs residual <= 1e-6, which no admissible degree reaches
    let f = system("mobius").system;
    let domain = DomainRegion::closed_interval(-1.0, 1.0).unwrap();
    let catalog = domain_catalog(&f, &domain, 33, &EstimatorConfig::default()).unwrap();
    assert_eq!(catalog.len(), 2);
    let dicts: Vec<_> = (1..=12).map(|d| DictionarySpec::Monomial { max_degree: d }).collect();
    let report = obstruction_sweep(&f, &domain, &dicts, &[0.0, 1e-8], &catalog, &SweepConfig::default()).unwrap();
    assert_eq!(report.rows_below(1e-6).count(), 0);
    let oracle = common::oracle();
    let deg12 = oracle["mobius_poly_frontier"][11]["residual"].as_f64().unwrap();
    let best = report.rows.iter().filter_map(|r| r.residual_heldout).fold(f64::INFINITY, f64::min);
    assert!(best > 0.2 * deg12, "{best} vs {deg12}");
}
