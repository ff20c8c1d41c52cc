use limitlab_core::catalog::{get_system, list_systems};
use limitlab_core::dynamics::{linspace, DomainRegion, Endpoint};
use limitlab_core::immersion::{
    collapse_report, conjugacy_residual, injectivity_probe, omega_alpha_consistency, pushforward_check,
    ImmersionError,
};
use limitlab_core::limits::{survey_catalog, EstimatorConfig, LimitSetCatalog};
use limitlab_core::{DiscreteMap, ImmersionMap, StatePoint};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn entry(name: &str) -> limitlab_core::catalog::CatalogEntry {
    get_system(name, &BTreeMap::new()).unwrap()
}

fn s(x: f64) -> StatePoint {
    StatePoint::scalar(x).unwrap()
}

fn line(lo: f64, hi: f64, n: usize) -> Vec<StatePoint> {
    linspace(lo, hi, n).into_iter().map(s).collect()
}

fn half() -> DiscreteMap {
    DiscreteMap::linear("z/2", DMatrix::from_element(1, 1, 0.5))
}

#[test]
fn conjugacy_examples() {
    let m = entry("mobius");
    let r = conjugacy_residual(m.exact_immersion.as_ref().unwrap(), &m.system, &half(), &line(-5.0, 0.5, 1000)).unwrap();
    assert!(r.max_residual < 1e-12, "{}", r.max_residual);
    assert!(r.max_residual >= r.mean_residual);

    let c = entry("cot-map");
    let r = conjugacy_residual(
        c.exact_immersion.as_ref().unwrap(),
        &c.system,
        c.lifted_target.as_ref().unwrap(),
        &line(0.05, PI - 0.05, 1000),
    )
    .unwrap();
    assert!(r.max_residual < 1e-9);

    let sq = ImmersionMap::new("x^2", DomainRegion::full_space(1), 1, |x: &[f64]| vec![x[0] * x[0]]);
    let r = conjugacy_residual(&sq, &m.system, &half(), &[s(0.0)]).unwrap();
    assert!((r.max_residual - 1.0 / 9.0).abs() < 1e-15);
}

#[test]
fn pushforward_examples() {
    let cfg = EstimatorConfig::default();
    let m = entry("mobius");
    let rep = pushforward_check(m.exact_immersion.as_ref().unwrap(), &m.system, &half(), &s(0.0), &cfg).unwrap();
    assert!(rep.omega.unwrap().hausdorff < 1e-6);

    let rs = entry("rotation-scaling");
    let rep = pushforward_check(
        rs.exact_immersion.as_ref().unwrap(),
        &rs.system,
        rs.lifted_target.as_ref().unwrap(),
        &StatePoint::new(vec![2.0, 0.0]).unwrap(),
        &cfg,
    )
    .unwrap();
    assert!(rep.omega.unwrap().hausdorff < 1e-2);

    // alpha side: forward Möbius on (-1, inf) with alpha-limit {1}; (x-1)/(x+1)
    // doubles along orbits, so the target is z -> 2z with alpha-limit {0}
    let right = DomainRegion::interval(Endpoint::Open(-1.0), Endpoint::Unbounded).unwrap();
    let f = m.system.restricted_to(right.clone(), true);
    let lift = ImmersionMap::new("(x-1)/(x+1)", right, 1, |x: &[f64]| vec![(x[0] - 1.0) / (x[0] + 1.0)]);
    let double = DiscreteMap::linear("2z", DMatrix::from_element(1, 1, 2.0));
    let rep = pushforward_check(&lift, &f, &double, &s(0.0), &cfg).unwrap();
    assert!(rep.omega.is_none());
    assert!(rep.alpha.unwrap().hausdorff < 1e-6);
}

#[test]
fn pushforward_inclusion_holds_on_every_triple() {
    let cfg = EstimatorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for info in list_systems() {
        let e = entry(&info.name);
        let (Some(lift), Some(target)) = (&e.exact_immersion, &e.lifted_target) else { continue };
        for xi in e.sample_domain.sample_uniform(5, &mut rng).unwrap() {
            let Ok(rep) = pushforward_check(lift, &e.system, target, &xi, &cfg) else { continue };
            for side in [rep.omega, rep.alpha].into_iter().flatten() {
                assert!(side.directed < cfg.tol_settle, "{} {xi:?}: {}", info.name, side.directed);
            }
        }
    }
}

#[test]
fn collapse_examples() {
    let cfg = EstimatorConfig::default();
    let m = entry("mobius");
    let closed = DomainRegion::interval(Endpoint::Unbounded, Endpoint::Closed(1.0)).unwrap();
    let lift = m.exact_immersion.clone().unwrap().with_domain(closed);
    let catalog = survey_catalog(&m.system, &[s(0.0), s(1.0)], &cfg, false);
    match collapse_report(&lift, &catalog, &line(-5.0, 0.5, 100), cfg.tol_cluster) {
        Err(ImmersionError::ImmersionUndefined { point, .. }) => assert_eq!(point, vec![1.0]),
        other => panic!("{other:?}"),
    }

    let c = entry("cot-map");
    let catalog = LimitSetCatalog::from_point_sets(vec![vec![s(0.0)], vec![s(PI)]], &cfg);
    let rep = collapse_report(c.exact_immersion.as_ref().unwrap(), &catalog, &line(0.0, PI, 200), cfg.tol_cluster)
        .unwrap();
    assert!((rep.pairwise_distances[0][1] - 2.0).abs() < 1e-15);
    assert!(rep.maximal_member.is_none());
    assert!((rep.collapse_ratio.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn collapse_is_permutation_equivariant() {
    let cfg = EstimatorConfig::default();
    let sets = vec![vec![s(-1.0)], vec![s(0.2), s(0.4)], vec![s(0.9)]];
    let lift = ImmersionMap::new("x^3", DomainRegion::full_space(1), 1, |x: &[f64]| vec![x[0].powi(3)]);
    let reference = line(-1.0, 1.0, 50);
    let a = collapse_report(&lift, &LimitSetCatalog::from_point_sets(sets.clone(), &cfg), &reference, 1e-3).unwrap();
    let perm = [2, 0, 1];
    let shuffled: Vec<_> = perm.iter().map(|&i| sets[i].clone()).collect();
    let b = collapse_report(&lift, &LimitSetCatalog::from_point_sets(shuffled, &cfg), &reference, 1e-3).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(b.pairwise_distances[i][j], a.pairwise_distances[perm[i]][perm[j]]);
        }
    }
    assert_eq!(a.collapse_ratio, b.collapse_ratio);
}

#[test]
fn injectivity_examples() {
    let m = entry("mobius");
    let rep = injectivity_probe(m.exact_immersion.as_ref().unwrap(), &line(-5.0, 0.5, 500), 1e-3, 1e-6);
    assert_eq!(rep.collision_count, 0);
    assert!(rep.min_separation_ratio.unwrap() > 0.0);

    let sq = ImmersionMap::new("x^2", DomainRegion::closed_interval(-1.0, 1.0).unwrap(), 1, |x: &[f64]| {
        vec![x[0] * x[0]]
    });
    let rep = injectivity_probe(&sq, &line(-1.0, 1.0, 101), 1e-3, 1e-6);
    assert!(rep.collision_count > 0);
    let (a, b) = &rep.collisions[0];
    assert!((a.coords()[0] + b.coords()[0]).abs() < 1e-12);

    let rs = entry("rotation-scaling");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let samples = rs.sample_domain.sample_uniform(1500, &mut rng).unwrap();
    let rep = injectivity_probe(rs.exact_immersion.as_ref().unwrap(), &samples, 1e-3, 1e-6);
    assert_eq!(rep.collision_count, 0);
}

#[test]
fn omega_alpha_examples() {
    let cfg = EstimatorConfig::default();
    let rep = omega_alpha_consistency(&half(), &s(1.0), &cfg).unwrap();
    assert!(rep.consistent && rep.vacuous);

    let rot = entry("rotation").system;
    let rep = omega_alpha_consistency(&rot, &StatePoint::new(vec![1.0, 0.0]).unwrap(), &cfg).unwrap();
    assert!(rep.consistent && !rep.vacuous);

    let target = entry("cot-map").lifted_target.unwrap();
    let rep = omega_alpha_consistency(&target, &s(0.0), &cfg).unwrap();
    assert!(!rep.consistent && !rep.vacuous, "{rep:?}");
    assert!((rep.hausdorff.unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn linear_targets_are_never_inconsistent() {
    let cfg = EstimatorConfig::default();
    let targets = [
        half(),
        entry("rotation-scaling").lifted_target.unwrap(),
        entry("rotation").system,
        DiscreteMap::linear("diag", DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.5, 1.0, 2.0]))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in &targets {
        let d = DomainRegion::closed_box(&vec![(-2.0, 2.0); g.dim()]).unwrap();
        for z0 in d.sample_uniform(5, &mut rng).unwrap() {
            let rep = omega_alpha_consistency(g, &z0, &cfg).unwrap();
            assert!(rep.consistent, "{} {z0:?}: {}", g.name(), rep.detail);
        }
    }
}
