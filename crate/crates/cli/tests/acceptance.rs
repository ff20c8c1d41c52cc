//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line with
//! its wall time; the test fails if any criterion does.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use common::{brute_force_growth, jordan_by_multiplication, random_family, OracleVerdict};
use limitlab_core::catalog::{exact_immersion, get_system, list_systems};
use limitlab_core::cloud::hausdorff;
use limitlab_core::dynamics::{linspace, DomainRegion, Endpoint};
use limitlab_core::immersion::{
    collapse_report, conjugacy_residual, injectivity_probe, pushforward_check, ImmersionError,
};
use limitlab_core::lift::{domain_catalog, obstruction_sweep, DictionarySpec, SweepConfig};
use limitlab_core::limits::{
    basin_closedness_witness, classify_boundedness, compute_basins, estimate_alpha, estimate_omega, survey_catalog,
    Boundedness, EstimatorConfig, GridSpec, LimitSetCatalog, WitnessConfig,
};
use limitlab_core::linear::{classify_growth, jordan_block_power, omega_nonempty_linear, GrowthVerdict};
use limitlab_core::{DiscreteMap, StatePoint};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn s(x: f64) -> StatePoint {
    StatePoint::scalar(x).unwrap()
}

fn p(x: f64, y: f64) -> StatePoint {
    StatePoint::new(vec![x, y]).unwrap()
}

fn line(lo: f64, hi: f64, n: usize) -> Vec<StatePoint> {
    linspace(lo, hi, n).into_iter().map(s).collect()
}

fn entry(name: &str) -> limitlab_core::catalog::CatalogEntry {
    get_system(name, &BTreeMap::new()).unwrap()
}

fn half() -> DiscreteMap {
    DiscreteMap::linear("z/2", DMatrix::from_element(1, 1, 0.5))
}

fn criterion_1() -> Check {
    let m = entry("mobius");
    let r = conjugacy_residual(&exact_immersion("mobius").unwrap(), &m.system, &half(), &line(-5.0, 0.5, 1000))
        .map_err(|e| e.to_string())?;
    ensure!(r.max_residual < 1e-12, "residual {:e}", r.max_residual);
    let traj = m.system.iterate(&s(0.0), 40);
    for (k, x) in traj.points.iter().enumerate() {
        let two = 2f64.powi(k as i32);
        let closed = -(two - 1.0) / (two + 1.0);
        ensure!((x.coords()[0] - closed).abs() < 1e-12, "k={k}: {} vs {closed}", x.coords()[0]);
    }
    ensure!(traj.points.len() == 41, "orbit stopped early");
    Ok(())
}

fn criterion_2() -> Check {
    let inv = entry("mobius-inverse");
    let r = conjugacy_residual(&exact_immersion("mobius-inverse").unwrap(), &inv.system, &half(), &line(-0.5, 10.0, 1000))
        .map_err(|e| e.to_string())?;
    ensure!(r.max_residual < 1e-12, "residual {:e}", r.max_residual);
    let right = DomainRegion::interval(Endpoint::Open(-1.0), Endpoint::Unbounded).unwrap();
    let f = entry("mobius").system.restricted_to(right, true);
    let est = estimate_alpha(&f, &s(0.0), &EstimatorConfig::default()).map_err(|e| e.to_string())?;
    ensure!(est.converged, "alpha estimate did not settle");
    let d = hausdorff(&est.points, &[s(1.0)]);
    ensure!(d < 1e-6, "alpha-limit at distance {d:e} from {{1}}");
    Ok(())
}

fn criterion_3() -> Check {
    let cot = entry("cot-map");
    let r = conjugacy_residual(
        cot.exact_immersion.as_ref().unwrap(),
        &cot.system,
        cot.lifted_target.as_ref().unwrap(),
        &line(0.05, PI - 0.05, 1000),
    )
    .map_err(|e| e.to_string())?;
    ensure!(r.max_residual < 1e-9, "residual {:e}", r.max_residual);

    let cfg = EstimatorConfig::default();
    let g = cot.lifted_target.unwrap();
    let catalog = survey_catalog(&g, &[s(0.0), s(1.0)], &cfg, false);
    ensure!(catalog.len() == 2, "catalog has {} members", catalog.len());
    let grid = GridSpec::uniform(1, -1.0, 1.0, 201).unwrap();
    let basins = compute_basins(&g, &grid, &catalog, &cfg).map_err(|e| e.to_string())?;
    let witnesses = basin_closedness_witness(&g, &basins, &cfg, &WitnessConfig::default());
    let minus_one = catalog.match_estimate(&estimate_omega(&g, &s(-1.0), &cfg)).unwrap();
    let found = witnesses
        .iter()
        .any(|w| w.limit_point == s(1.0) && w.labels.0 == catalog.members[minus_one].label);
    ensure!(found, "no witness at 1 for the basin of -1: {witnesses:?}");
    Ok(())
}

fn criterion_4() -> Check {
    let rs = entry("rotation-scaling");
    let fbar = rs.exact_immersion.as_ref().unwrap();
    let annulus = DomainRegion::annulus(2, Endpoint::Closed(0.1), Endpoint::Closed(10.0)).unwrap();
    let samples = annulus.sample_uniform(10_000, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let r = conjugacy_residual(fbar, &rs.system, rs.lifted_target.as_ref().unwrap(), &samples)
        .map_err(|e| e.to_string())?;
    ensure!(r.max_residual < 1e-9, "residual {:e}", r.max_residual);

    let cfg = EstimatorConfig { tail: 10_000, ..EstimatorConfig::default() };
    let est = estimate_omega(&rs.system, &p(2.0, 0.0), &cfg);
    let circle: Vec<_> = (0..20_000).map(|i| 2.0 * PI * i as f64 / 20_000.0).map(|t| p(t.cos(), t.sin())).collect();
    let d = hausdorff(&est.points, &circle);
    ensure!(est.converged && d < 1e-2, "omega(2,0) at distance {d:e} from the circle (converged={})", est.converged);

    let inj = injectivity_probe(fbar, &samples[..2000], 1e-3, 1e-6);
    ensure!(inj.collision_count == 0, "{} collisions", inj.collision_count);

    let base = EstimatorConfig::default();
    let catalog = LimitSetCatalog::from_point_sets(vec![vec![p(0.0, 0.0)], circle[..256].to_vec()], &base);
    match collapse_report(fbar, &catalog, &samples[..100], base.tol_cluster) {
        Err(ImmersionError::ImmersionUndefined { point, .. }) if point == vec![0.0, 0.0] => Ok(()),
        other => Err(format!("expected a domain failure at the origin, got {other:?}")),
    }
}

fn criterion_5() -> Check {
    let mut determined = 0;
    for (i, (sys, xi)) in random_family(7, 100).iter().enumerate() {
        let got = classify_growth(sys, xi, 1e-8).map_err(|e| e.to_string())?.verdict;
        let expected = match brute_force_growth(sys, xi) {
            OracleVerdict::Vanishes => GrowthVerdict::Vanishes,
            OracleVerdict::Bounded => GrowthVerdict::BoundedNonvanishing,
            OracleVerdict::Unbounded => GrowthVerdict::Unbounded,
            OracleVerdict::Undetermined => continue,
        };
        determined += 1;
        ensure!(got == expected, "system {i}: {got:?} vs oracle {expected:?}");
    }
    ensure!(determined >= 50, "only {determined} determined cases");
    for lambda in [0.5, 1.0, 2.0] {
        for m in 1..=4 {
            for k in 0..=50u32 {
                let closed = jordan_block_power(lambda, m, k);
                let brute = jordan_by_multiplication(lambda, m, k);
                for (c, b) in closed.iter().zip(brute.iter()) {
                    ensure!((c - b).abs() <= 1e-9 * b.abs().max(1.0), "J({lambda}, {m})^{k}");
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    let cfg = EstimatorConfig::default();
    for (i, (sys, xi)) in random_family(7, 100).iter().enumerate() {
        let verdict = classify_boundedness(&sys.to_map("family"), xi, &cfg).verdict;
        if verdict == Boundedness::Undetermined {
            continue;
        }
        let nonempty = omega_nonempty_linear(sys, xi).map_err(|e| e.to_string())?;
        ensure!(nonempty == (verdict == Boundedness::Bounded), "system {i}: nonempty={nonempty}, {verdict:?}");
    }
    let systems = [
        // a line of fixed points, one basin per horizontal line
        DiscreteMap::linear("diag(0.5,1)", DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0])),
        DiscreteMap::linear("jordan(0.5)", DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, 0.5])),
        DiscreteMap::linear("diag(0.5,2)", DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0])),
    ];
    // these maps contract by 0.5 per step, so short windows settle just as well
    let grid_cfg = EstimatorConfig { burn: 100, tail: 100, ..EstimatorConfig::default() };
    let cfg = &grid_cfg;
    for g in &systems {
        for n in [101, 401] {
            let grid = GridSpec::uniform(2, -1.0, 1.0, n).unwrap();
            let axis = grid.axis_centres(1);
            let seeds: Vec<_> = axis.iter().map(|&y| p(0.0, y)).collect();
            let catalog = survey_catalog(g, &seeds, cfg, false);
            let basins = compute_basins(g, &grid, &catalog, cfg).map_err(|e| e.to_string())?;
            let w = basin_closedness_witness(g, &basins, cfg, &WitnessConfig::default());
            ensure!(w.is_empty(), "{} at {n}^2: {} witnesses", g.name(), w.len());
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let cfg = EstimatorConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for info in list_systems() {
        let e = entry(&info.name);
        let (Some(lift), Some(target)) = (&e.exact_immersion, &e.lifted_target) else { continue };
        for xi in e.sample_domain.sample_uniform(5, &mut rng).unwrap() {
            let rep = match pushforward_check(lift, &e.system, target, &xi, &cfg) {
                Ok(rep) => rep,
                Err(ImmersionError::Unconverged) => continue,
                Err(err) => return Err(format!("{} at {xi:?}: {err}", info.name)),
            };
            let precompact = estimate_omega(&e.system, &xi, &cfg).precompact;
            for side in [rep.omega, rep.alpha].into_iter().flatten() {
                ensure!(side.directed < 1e-4, "{} at {xi:?}: one-sided {:e}", info.name, side.directed);
                ensure!(!precompact || side.hausdorff < 1e-2, "{} at {xi:?}: full {:e}", info.name, side.hausdorff);
                checked += 1;
            }
        }
    }
    ensure!(checked >= 20, "only {checked} converged comparisons");
    Ok(())
}

fn criterion_8() -> Check {
    let est = EstimatorConfig::default();
    let cfg = SweepConfig::default();
    let oracle = common::oracle();
    let oracle_min = oracle["cot_fourier_sweep"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["residual"].as_f64().unwrap())
        .fold(f64::INFINITY, f64::min);

    let cot = entry("cot-map").system;
    let domain = DomainRegion::closed_interval(0.0, PI).unwrap();
    let catalog = domain_catalog(&cot, &domain, 33, &est).map_err(|e| e.to_string())?;
    ensure!(catalog.len() == 2, "cot catalog has {} members", catalog.len());
    let dicts: Vec<_> = (1..=8).map(|j| DictionarySpec::Fourier { max_frequency: j }).collect();
    let report = obstruction_sweep(&cot, &domain, &dicts, &[0.0, 1e-8, 1e-4], &catalog, &cfg).map_err(|e| e.to_string())?;
    ensure!(report.rows.len() == 24, "{} rows", report.rows.len());
    for r in report.rows_below(1e-6) {
        let ratio = r.collapse_ratio.ok_or("missing collapse ratio")?;
        ensure!(ratio < 0.05, "size {} ridge {:e}: collapse ratio {ratio}", r.dict_size, r.ridge);
    }
    // pinned frontier: no Fourier lift approaches conjugacy
    let min = report.rows.iter().filter_map(|r| r.residual_heldout).fold(f64::INFINITY, f64::min);
    ensure!((min - oracle_min).abs() < 0.5 * oracle_min, "best residual {min} vs oracle {oracle_min}");

    let mobius = entry("mobius").system;
    let domain = DomainRegion::closed_interval(-0.9, 0.5).unwrap();
    let catalog = domain_catalog(&mobius, &domain, 33, &est).map_err(|e| e.to_string())?;
    let dict = [DictionarySpec::RationalPole { pole: 1.0, max_power: 1 }];
    let control = obstruction_sweep(&mobius, &domain, &dict, &[0.0], &catalog, &cfg).map_err(|e| e.to_string())?;
    let row = &control.rows[0];
    let residual = row.residual_heldout.ok_or("control row failed")?;
    ensure!(residual < 1e-9, "control residual {residual:e}");
    ensure!(row.collisions == Some(0), "control collisions {:?}", row.collisions);
    Ok(())
}

fn run_demo(dir: &std::path::Path, threads: usize) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_limitlab"))
        .args(["demo", "--seed", "42", "--threads", &threads.to_string(), "--out"])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "demo failed: {}", String::from_utf8_lossy(&out.stderr));
    Ok(())
}

fn tree(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn criterion_9() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [("a", 1), ("b", 1), ("c", 8)];
    for (name, threads) in runs {
        run_demo(&tmp.path().join(name), threads)?;
    }
    let a = tree(&tmp.path().join("a"));
    ensure!(!a.is_empty(), "demo wrote nothing");
    for (name, _) in &runs[1..] {
        let other = tree(&tmp.path().join(name));
        ensure!(a.keys().eq(other.keys()), "run {name} wrote different files");
        for (file, bytes) in &a {
            ensure!(&other[file] == bytes, "{file} differs in run {name}");
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 9] = [
        ("1 mobius golden", criterion_1, Some(Duration::from_secs(1))),
        ("2 inverse mobius golden", criterion_2, None),
        ("3 cot map golden", criterion_3, None),
        ("4 rotation-scaling golden", criterion_4, Some(Duration::from_secs(30))),
        ("5 linear growth oracle", criterion_5, None),
        ("6 linear basins", criterion_6, None),
        ("7 pushforward", criterion_7, None),
        ("8 obstruction sweep", criterion_8, Some(Duration::from_secs(120))),
        ("9 demo determinism", criterion_9, None),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(_) => Err("panicked".into()),
        };
        let elapsed = start.elapsed();
        let result = result.and_then(|()| match budget {
            Some(b) if elapsed > b => Err(format!("over the {b:?} budget")),
            _ => Ok(()),
        });
        // written directly so the lines show without --nocapture
        let line = match &result {
            Ok(()) => format!("criterion {name}: PASS ({:.2}s)\n", elapsed.as_secs_f64()),
            Err(why) => format!("criterion {name}: FAIL ({:.2}s) {why}\n", elapsed.as_secs_f64()),
        };
        stdout.write_all(line.as_bytes()).unwrap();
        if result.is_err() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
