use crate::cloud::{compact, directed_hausdorff, hausdorff};
use crate::dynamics::{DiscreteMap, StatePoint};
use crate::limits::{estimate_alpha, estimate_omega, EstimateStatus, EstimatorConfig, LimitSetEstimate};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

use super::{ImmersionError, ImmersionMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ConjugacyReport<T: Real> {
    pub max_residual: T,
    pub mean_residual: T,
    pub worst_point: StatePoint<T>,
    pub samples_used: usize,
    /// Samples where `f`, `F` or `g` was undefined.
    pub samples_excluded: usize,
}

/// `||F(f(x)) - g(F(x))||` over the samples. Samples where any of the three
/// maps is undefined are skipped and counted.
pub fn conjugacy_residual<T: Real>(
    lift: &ImmersionMap<T>,
    f: &DiscreteMap<T>,
    g: &DiscreteMap<T>,
    samples: &[StatePoint<T>],
) -> Result<ConjugacyReport<T>, ImmersionError> {
    if lift.dim_in() != f.dim() || lift.dim_out() != g.dim() {
        return Err(ImmersionError::DimensionMismatch(format!(
            "F: {} -> {}, f on {}, g on {}",
            lift.dim_in(),
            lift.dim_out(),
            f.dim(),
            g.dim()
        )));
    }
    let residual = |x: &StatePoint<T>| -> Option<T> {
        let lhs = lift.apply(&f.evaluate(x).ok()?).ok()?;
        let rhs = g.evaluate(&lift.apply(x).ok()?).ok()?;
        Some(lhs.distance(&rhs))
    };
    let mut max = T::zero();
    let mut sum = T::zero();
    let mut worst = None;
    let mut used = 0;
    for x in samples {
        let Some(r) = residual(x) else { continue };
        used += 1;
        sum += r;
        if worst.is_none() || r > max {
            max = r;
            worst = Some(x.clone());
        }
    }
    let worst_point = worst.ok_or(ImmersionError::NoValidSamples)?;
    Ok(ConjugacyReport {
        max_residual: max,
        mean_residual: sum / T::from_usize_lossy(used),
        worst_point,
        samples_used: used,
        samples_excluded: samples.len() - used,
    })
}

/// Distances between `F` applied to a limit set of `f` and the matching
/// limit set of `g`, both over the same orbit indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct PushforwardSide<T: Real> {
    pub hausdorff: T,
    /// `max over F(S) of the distance to the lifted set`; the inclusion
    /// `F(omega(xi)) ⊆ omega(F(xi))` makes this small whenever `F` conjugates.
    pub directed: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct PushforwardReport<T: Real> {
    pub omega: Option<PushforwardSide<T>>,
    pub alpha: Option<PushforwardSide<T>>,
}

fn compare_tails<T: Real>(
    lift: &ImmersionMap<T>,
    f: &DiscreteMap<T>,
    g: &DiscreteMap<T>,
    xi: &StatePoint<T>,
    est_x: &LimitSetEstimate<T>,
    est_z: &LimitSetEstimate<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<Option<PushforwardSide<T>>, ImmersionError> {
    if !est_x.converged || !est_z.converged {
        return Ok(None);
    }
    // same indices on both sides so F(x_k) and z_k pair up
    let start = est_x.tail_start.max(est_z.tail_start);
    let tail_x = f.orbit_tail(xi, start, cfg.tail);
    let tail_z = g.orbit_tail(&lift.apply(xi)?, start, cfg.tail);
    if tail_x.points.is_empty() || tail_z.points.is_empty() {
        return Ok(None);
    }
    let image = compact(&lift.apply_all(&tail_x.points)?, cfg.merge_tol());
    let lifted = compact(&tail_z.points, cfg.merge_tol());
    Ok(Some(PushforwardSide { hausdorff: hausdorff(&image, &lifted), directed: directed_hausdorff(&image, &lifted) }))
}

/// Compares `F(omega_f(xi))` with `omega_g(F(xi))`, and the alpha-limit sets
/// when both maps are invertible. A side is `None` when one of its
/// estimates did not converge.
pub fn pushforward_check<T: Real>(
    lift: &ImmersionMap<T>,
    f: &DiscreteMap<T>,
    g: &DiscreteMap<T>,
    xi: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<PushforwardReport<T>, ImmersionError> {
    let z0 = lift.apply(xi)?;
    let omega = compare_tails(lift, f, g, xi, &estimate_omega(f, xi, cfg), &estimate_omega(g, &z0, cfg), cfg)?;
    let alpha = if f.has_inverse() && g.has_inverse() {
        let (fi, gi) = (f.inverted()?, g.inverted()?);
        compare_tails(lift, &fi, &gi, xi, &estimate_alpha(f, xi, cfg)?, &estimate_alpha(g, &z0, cfg)?, cfg)?
    } else {
        None
    };
    if omega.is_none() && alpha.is_none() {
        return Err(ImmersionError::Unconverged);
    }
    Ok(PushforwardReport { omega, alpha })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ConsistencyReport<T: Real> {
    pub consistent: bool,
    /// Set when one direction did not settle, making the verdict vacuous.
    pub vacuous: bool,
    pub hausdorff: Option<T>,
    pub omega_status: EstimateStatus,
    pub alpha_status: EstimateStatus,
    pub detail: String,
}

/// For a target with closed basins the omega- and alpha-limit sets through
/// a point coincide; disagreement is evidence that basins are not closed.
pub fn omega_alpha_consistency<T: Real>(
    g: &DiscreteMap<T>,
    z0: &StatePoint<T>,
    cfg: &EstimatorConfig<T>,
) -> Result<ConsistencyReport<T>, ImmersionError> {
    let alpha = estimate_alpha(g, z0, cfg)?;
    let omega = estimate_omega(g, z0, cfg);
    let describe = |e: &LimitSetEstimate<T>| match e.points.first() {
        Some(p) if e.converged => {
            format!("{} points near {:?}, diameter {:.3e}", e.points.len(), p.to_f64_vec(), e.diameter.to_f64_lossy())
        }
        _ => format!("{:?}", e.status).to_lowercase(),
    };
    let (consistent, vacuous, hd) = if omega.converged && alpha.converged {
        (omega.matches(&alpha, cfg.tol_cluster), false, Some(hausdorff(&omega.points, &alpha.points)))
    } else {
        (true, true, None)
    };
    let detail = format!("omega: {}; alpha: {}", describe(&omega), describe(&alpha));
    Ok(ConsistencyReport {
        consistent,
        vacuous,
        hausdorff: hd,
        omega_status: omega.status,
        alpha_status: alpha.status,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DomainRegion, Endpoint};
    use nalgebra::DMatrix;

    fn s(x: f64) -> StatePoint<f64> {
        StatePoint::scalar(x).unwrap()
    }

    fn mobius() -> DiscreteMap<f64> {
        let domain = DomainRegion::full_space(1).excluding(vec![s(3.0)]).unwrap();
        DiscreteMap::new("mobius", domain, |x| vec![-(3.0 * x[0] - 1.0) / (x[0] - 3.0)])
    }

    #[test]
    fn squared_lift_residual_at_zero() {
        let sq = ImmersionMap::new("sq", DomainRegion::full_space(1), 1, |x: &[f64]| vec![x[0] * x[0]]);
        let half = DiscreteMap::linear("half", DMatrix::from_element(1, 1, 0.5));
        let r = conjugacy_residual(&sq, &mobius(), &half, &[s(0.0)]).unwrap();
        assert!((r.max_residual - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(r.samples_used, 1);
    }

    #[test]
    fn exact_mobius_lift_pushes_forward() {
        let d = DomainRegion::interval(Endpoint::Unbounded, Endpoint::Open(1.0)).unwrap();
        let lift = ImmersionMap::new("F", d, 1, |x: &[f64]| vec![(x[0] + 1.0) / (x[0] - 1.0)]);
        let half = DiscreteMap::linear("half", DMatrix::from_element(1, 1, 0.5));
        let rep = pushforward_check(&lift, &mobius(), &half, &s(0.0), &EstimatorConfig::default()).unwrap();
        assert!(rep.omega.unwrap().hausdorff < 1e-6);
        assert!(rep.alpha.is_none());
    }

    #[test]
    fn linear_contraction_is_vacuously_consistent() {
        let half = DiscreteMap::linear("half", DMatrix::from_element(1, 1, 0.5));
        let c = omega_alpha_consistency(&half, &s(1.0), &EstimatorConfig::default()).unwrap();
        assert!(c.consistent && c.vacuous);
        assert_eq!(c.alpha_status, EstimateStatus::Escaped);
    }
}
