use crate::dynamics::{DiscreteMap, DomainRegion, Endpoint, StatePoint};
use crate::immersion::ImmersionMap;
use crate::limits::LimitSource;
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use super::{CatalogEntry, CatalogError, Formulas, KnownLimitSet};

fn pt(v: &[f64]) -> StatePoint<f64> {
    StatePoint::new(v.to_vec()).expect("catalog constants are finite")
}

fn known(description: &str, points: Vec<StatePoint<f64>>, kind: LimitSource, seeds: &[&[f64]]) -> KnownLimitSet {
    KnownLimitSet {
        description: description.into(),
        points,
        kind,
        seeds: seeds.iter().map(|s| pt(s)).collect(),
    }
}

fn formulas(system: &str, inverse: Option<&str>, immersion: Option<&str>, target: Option<&str>) -> Formulas {
    Formulas {
        system: system.into(),
        inverse: inverse.map(Into::into),
        immersion: immersion.map(Into::into),
        target: target.map(Into::into),
    }
}

fn scalar_linear(name: &str, a: f64) -> DiscreteMap<f64> {
    DiscreteMap::linear(name, DMatrix::from_element(1, 1, a))
}

fn punctured_line(pole: f64) -> DomainRegion<f64> {
    DomainRegion::full_space(1).excluding(vec![pt(&[pole])]).expect("1-d pole")
}

/// f(x) = -(3x-1)/(x-3), pole at 3. Fixed points -1 (attracting) and 1 (repelling).
pub(crate) fn mobius_forward() -> DiscreteMap<f64> {
    DiscreteMap::new("mobius", punctured_line(3.0), |x| vec![-(3.0 * x[0] - 1.0) / (x[0] - 3.0)])
        .with_inverse(|x| vec![(3.0 * x[0] + 1.0) / (x[0] + 3.0)])
        .with_inverse_domain(punctured_line(-3.0))
}

fn mobius() -> CatalogEntry {
    // F(f(x)) = F(x)/2: f(x)+1 = -2(x+1)/(x-3) and f(x)-1 = -4(x-1)/(x-3)
    let below_one = DomainRegion::interval(Endpoint::Unbounded, Endpoint::Open(1.0)).expect("valid interval");
    CatalogEntry {
        name: "mobius".into(),
        params: BTreeMap::new(),
        system: mobius_forward(),
        exact_immersion: Some(ImmersionMap::new("(x+1)/(x-1)", below_one.clone(), 1, |x| {
            vec![(x[0] + 1.0) / (x[0] - 1.0)]
        })),
        lifted_target: Some(scalar_linear("z/2", 0.5)),
        known_limit_sets: vec![
            known("attracting fixed point {-1}", vec![pt(&[-1.0])], LimitSource::Omega, &[&[0.0], &[-0.5], &[5.0]]),
            known("repelling fixed point {1}", vec![pt(&[1.0])], LimitSource::Omega, &[&[1.0]]),
            known("alpha-limit {1}", vec![pt(&[1.0])], LimitSource::Alpha, &[&[0.0]]),
        ],
        valid_domain: below_one,
        sample_domain: DomainRegion::closed_interval(-5.0, 0.5).expect("valid interval"),
        formulas: formulas("-(3x-1)/(x-3)", Some("(3x+1)/(x+3)"), Some("(x+1)/(x-1) on (-inf,1)"), Some("z/2")),
        notes: "The lift is undefined at the second fixed point x=1, so it cannot be an immersion of the whole line."
            .into(),
    }
}

fn mobius_inverse() -> CatalogEntry {
    let above_minus_one = DomainRegion::interval(Endpoint::Open(-1.0), Endpoint::Unbounded).expect("valid interval");
    CatalogEntry {
        name: "mobius-inverse".into(),
        params: BTreeMap::new(),
        system: mobius_forward().inverted().expect("mobius is invertible"),
        exact_immersion: Some(ImmersionMap::new("(x-1)/(x+1)", above_minus_one.clone(), 1, |x| {
            vec![(x[0] - 1.0) / (x[0] + 1.0)]
        })),
        lifted_target: Some(scalar_linear("z/2", 0.5)),
        known_limit_sets: vec![
            known("attracting fixed point {1}", vec![pt(&[1.0])], LimitSource::Omega, &[&[0.0], &[5.0]]),
            known("repelling fixed point {-1}", vec![pt(&[-1.0])], LimitSource::Omega, &[&[-1.0]]),
        ],
        valid_domain: above_minus_one,
        sample_domain: DomainRegion::closed_interval(-0.5, 5.0).expect("valid interval"),
        formulas: formulas("(3x+1)/(x+3)", Some("-(3x-1)/(x-3)"), Some("(x-1)/(x+1) on (-1,inf)"), Some("z/2")),
        notes: "Time reversal of mobius: its omega-limit sets are the alpha-limit sets of the forward map.".into(),
    }
}

/// 2 arccot(cot(x/2)/sqrt 2) with the (0,pi) branch, extended by the fixed points 0 and pi.
pub(crate) fn cot_map_value(x: f64) -> f64 {
    let h = x / 2.0;
    2.0 * (SQRT_2 * h.sin()).atan2(h.cos())
}

fn cot_map() -> CatalogEntry {
    let interval = DomainRegion::closed_interval(0.0, PI).expect("valid interval");
    let target_domain = DomainRegion::closed_interval(-1.0, 1.0).expect("valid interval");
    let target = mobius_forward().restricted_to(target_domain, true);
    let system = DiscreteMap::new("cot-map", interval.clone(), |x| vec![cot_map_value(x[0])]).with_inverse(|x| {
        let h = x[0] / 2.0;
        vec![2.0 * h.sin().atan2(SQRT_2 * h.cos())]
    });
    CatalogEntry {
        name: "cot-map".into(),
        params: BTreeMap::new(),
        system,
        exact_immersion: Some(ImmersionMap::new("cos x", interval.clone(), 1, |x| vec![x[0].cos()])),
        lifted_target: Some(target),
        known_limit_sets: vec![
            known("repelling fixed point {0}", vec![pt(&[0.0])], LimitSource::Omega, &[&[0.0]]),
            known("attracting fixed point {pi}", vec![pt(&[PI])], LimitSource::Omega, &[&[PI / 2.0], &[0.1]]),
        ],
        valid_domain: interval,
        sample_domain: DomainRegion::closed_interval(0.05, PI - 0.05).expect("valid interval"),
        formulas: formulas(
            "2 arccot(cot(x/2)/sqrt(2))",
            Some("2 arccot(sqrt(2) cot(x/2))"),
            Some("cos x"),
            Some("-(3y-1)/(y-3) on [-1,1]"),
        ),
        notes: "Immersed into the Möbius map restricted to [-1,1], which does not have closed basins.".into(),
    }
}

fn rotation_scaling(theta: f64) -> Result<CatalogEntry, CatalogError> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(CatalogError::InvalidParam { name: "theta".into(), reason: "must lie in (0, 2pi)".into() });
    }
    let (s, c) = theta.sin_cos();
    let system = DiscreteMap::new("rotation-scaling", DomainRegion::full_space(2), move |x: &[f64]| {
        let k = 2.0 / ((x[0] * x[0] + x[1] * x[1]).sqrt() + 1.0);
        vec![k * (c * x[0] + s * x[1]), k * (-s * x[0] + c * x[1])]
    })
    .with_inverse(move |y: &[f64]| {
        let k = 1.0 / (2.0 - (y[0] * y[0] + y[1] * y[1]).sqrt());
        vec![k * (c * y[0] - s * y[1]), k * (s * y[0] + c * y[1])]
    })
    .with_inverse_domain(
        DomainRegion::annulus(2, Endpoint::Closed(0.0), Endpoint::Open(2.0)).expect("valid annulus"),
    );
    let punctured = DomainRegion::annulus(2, Endpoint::Open(0.0), Endpoint::Unbounded).expect("valid annulus");
    let lift = ImmersionMap::new("(x/|x|, (|x|-1)/|x|)", punctured.clone(), 3, |x: &[f64]| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        vec![x[0] / r, x[1] / r, (r - 1.0) / r]
    });
    let target = DiscreteMap::linear(
        "rotation-scaling-lift",
        DMatrix::from_row_slice(3, 3, &[c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 0.5]),
    );
    let circle: Vec<StatePoint<f64>> =
        (0..256).map(|i| 2.0 * PI * i as f64 / 256.0).map(|t| pt(&[t.cos(), t.sin()])).collect();
    Ok(CatalogEntry {
        name: "rotation-scaling".into(),
        params: BTreeMap::from([("theta".to_string(), theta)]),
        system,
        exact_immersion: Some(lift),
        lifted_target: Some(target),
        known_limit_sets: vec![
            known("fixed point {0}", vec![pt(&[0.0, 0.0])], LimitSource::Omega, &[&[0.0, 0.0]]),
            known("unit circle", circle, LimitSource::Omega, &[&[2.0, 0.0], &[0.5, 0.0]]),
        ],
        valid_domain: punctured,
        sample_domain: DomainRegion::annulus(2, Endpoint::Closed(0.1), Endpoint::Closed(10.0)).expect("valid annulus"),
        formulas: formulas(
            "2/(|x|+1) [[cos t, sin t], [-sin t, cos t]] x",
            Some("[[cos t, -sin t], [sin t, cos t]] y / (2-|y|) for |y| < 2"),
            Some("(x1/|x|, x2/|x|, (|x|-1)/|x|) on R^2 minus {0}"),
            Some("[[cos t, sin t, 0], [-sin t, cos t, 0], [0, 0, 1/2]] z"),
        ),
        notes: "Orbits off the origin approach the unit circle; the circle's basin is R^2 minus {0}, which is not closed."
            .into(),
    })
}

fn negation() -> CatalogEntry {
    let interval = DomainRegion::closed_interval(-1.0, 1.0).expect("valid interval");
    CatalogEntry {
        name: "negation".into(),
        params: BTreeMap::new(),
        system: DiscreteMap::new("negation", interval.clone(), |x| vec![-x[0]]).with_inverse(|x| vec![-x[0]]),
        exact_immersion: None,
        lifted_target: None,
        known_limit_sets: vec![known("fixed point {0}", vec![pt(&[0.0])], LimitSource::Omega, &[&[0.0]])],
        valid_domain: interval.clone(),
        sample_domain: interval,
        formulas: formulas("-x", Some("-x"), None, None),
        notes: "Every {a, -a} is a limit set: uncountably many, outside the countable-catalog regime.".into(),
    }
}

fn linear_entry(name: &str, a: DMatrix<f64>, params: BTreeMap<String, f64>, formula: String, known: Vec<KnownLimitSet>) -> CatalogEntry {
    let n = a.nrows();
    let system = DiscreteMap::linear(name, a);
    let bounds = vec![(-2.0, 2.0); n];
    CatalogEntry {
        name: name.into(),
        params,
        system,
        exact_immersion: None,
        lifted_target: None,
        known_limit_sets: known,
        valid_domain: DomainRegion::full_space(n),
        sample_domain: DomainRegion::closed_box(&bounds).expect("valid box"),
        formulas: formulas(&formula, None, None, None),
        notes: "Linear system on R^n; all basins are closed.".into(),
    }
}

pub(super) fn build(name: &str, p: BTreeMap<String, f64>) -> Result<CatalogEntry, CatalogError> {
    match name {
        "mobius" => Ok(mobius()),
        "mobius-inverse" => Ok(mobius_inverse()),
        "cot-map" => Ok(cot_map()),
        "rotation-scaling" => rotation_scaling(p["theta"]),
        "negation" => Ok(negation()),
        "scalar-linear" => {
            let a = p["a"];
            let limits = if a.abs() < 1.0 {
                vec![known("fixed point {0}", vec![pt(&[0.0])], LimitSource::Omega, &[&[1.0]])]
            } else {
                Vec::new()
            };
            Ok(linear_entry("scalar-linear", DMatrix::from_element(1, 1, a), p, format!("{a} x"), limits))
        }
        "jordan" => {
            let (lambda, m) = (p["lambda"], p["m"]);
            if m.fract() != 0.0 || !(1.0..=4.0).contains(&m) {
                return Err(CatalogError::InvalidParam { name: "m".into(), reason: "must be an integer in 1..=4".into() });
            }
            let m = m as usize;
            let a = DMatrix::from_fn(m, m, |r, c| if r == c { lambda } else if c == r + 1 { 1.0 } else { 0.0 });
            let limits = if lambda.abs() < 1.0 {
                vec![known("fixed point {0}", vec![StatePoint::origin(m)], LimitSource::Omega, &[&vec![1.0; m]])]
            } else {
                Vec::new()
            };
            Ok(linear_entry("jordan", a, p, format!("J_{m}({lambda}) x"), limits))
        }
        "rotation" => {
            let (s, c) = p["theta"].sin_cos();
            let a = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
            let theta = p["theta"];
            Ok(linear_entry("rotation", a, p, format!("R({theta}) x"), Vec::new()))
        }
        other => Err(CatalogError::UnknownSystem(other.to_string())),
    }
}
