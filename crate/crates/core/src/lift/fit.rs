use crate::dynamics::{DiscreteMap, DomainRegion, StatePoint};
use crate::immersion::ImmersionMap;
use crate::linear::eigenvalues;
use crate::scalar::Real;
use nalgebra::{Cholesky, DMatrix};
use serde::Serialize;

use super::{Dictionary, LiftError};

/// Above this Gram condition the normal equations lose too many digits and
/// the stacked least-squares problem is factorized instead.
pub const NORMAL_EQUATIONS_MAX_CONDITION: f64 = 1e8;
/// Unregularized fits are refused above this Gram condition.
pub const SINGULAR_GRAM_CONDITION: f64 = 1e14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Cholesky,
    Qr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real"))]
pub struct FitReport<T: Real> {
    /// RMS over samples of `||Psi(f(x)) - K Psi(x)||`.
    pub train_residual: T,
    /// Condition number of `Psi_X^T Psi_X + ridge I`.
    pub gram_condition: T,
    pub samples: usize,
    pub solver: Solver,
}

/// Dictionary `Psi` and matrix `K` with `Psi(f(x)) ~ K Psi(x)`.
#[derive(Debug, Clone)]
pub struct LearnedLift<T: Real> {
    pub dictionary: Dictionary<T>,
    pub k: DMatrix<T>,
    pub training_domain: DomainRegion<T>,
    pub ridge: T,
}

impl<T: Real> LearnedLift<T> {
    pub fn lift(&self, x: &StatePoint<T>) -> Vec<T> {
        self.dictionary.eval(x.coords())
    }

    /// `x -> Psi(x)` on the training domain.
    pub fn immersion(&self) -> ImmersionMap<T> {
        let dict = self.dictionary.clone();
        ImmersionMap::new(
            format!("learned-{}", self.dictionary.kind()),
            self.training_domain.clone(),
            self.dictionary.dim_out(),
            move |x| dict.eval(x),
        )
    }

    /// `z -> K z`.
    pub fn target(&self) -> DiscreteMap<T> {
        DiscreteMap::linear("learned-target", self.k.clone())
    }

    /// Spectrum of `K` as `(re, im)`.
    pub fn eigenvalues(&self) -> Result<Vec<(T, T)>, LiftError> {
        eigenvalues(&self.k).map_err(|e| LiftError::Numeric(e.to_string()))
    }

    /// `||Psi(f(x)) - K Psi(x)||`, evaluated without domain checks.
    pub fn residual_at(&self, x: &StatePoint<T>, fx: &StatePoint<T>) -> T {
        let px = nalgebra::DVector::from_vec(self.lift(x));
        let py = nalgebra::DVector::from_vec(self.lift(fx));
        (py - &self.k * px).norm()
    }
}

/// Ridge least squares for `K`, minimising
/// `sum ||Psi(y) - K Psi(x)||^2 + ridge ||K||_F^2` over the pairs `(x, y = f(x))`.
///
/// Well-conditioned problems use the normal equations; otherwise the stacked
/// matrix `[Psi_X; sqrt(ridge) I]` is QR-factorized. The training domain of
/// the returned lift is the bounding box of the inputs.
pub fn fit_lift<T: Real>(
    pairs: &[(StatePoint<T>, StatePoint<T>)],
    dict: &Dictionary<T>,
    ridge: T,
) -> Result<(LearnedLift<T>, FitReport<T>), LiftError> {
    let bounds = bounding_box(pairs.iter().map(|p| &p.0), dict.dim_in());
    let domain = DomainRegion::closed_box(&bounds).unwrap_or_else(|_| DomainRegion::full_space(dict.dim_in()));
    fit_lift_on(pairs, dict, ridge, domain)
}

/// As [`fit_lift`] with an explicit training domain.
pub fn fit_lift_on<T: Real>(
    pairs: &[(StatePoint<T>, StatePoint<T>)],
    dict: &Dictionary<T>,
    ridge: T,
    training_domain: DomainRegion<T>,
) -> Result<(LearnedLift<T>, FitReport<T>), LiftError> {
    if !(ridge >= T::zero()) || !ridge.is_finite() {
        return Err(LiftError::InvalidRidge(ridge.to_f64_lossy()));
    }
    let m = dict.dim_out();
    let n = pairs.len();
    if n < m {
        return Err(LiftError::InsufficientSamples { needed: m, got: n });
    }
    let mut px = DMatrix::zeros(n, m);
    let mut py = DMatrix::zeros(n, m);
    for (i, (x, y)) in pairs.iter().enumerate() {
        if x.dim() != dict.dim_in() || y.dim() != dict.dim_in() {
            return Err(LiftError::DimensionMismatch { expected: dict.dim_in(), got: x.dim().max(y.dim()) });
        }
        for (row, p) in [(&mut px, x), (&mut py, y)] {
            let feats = dict.eval(p.coords());
            if feats.iter().any(|v| !v.is_finite()) {
                return Err(LiftError::NonFiniteFeatures { point: p.to_f64_vec() });
            }
            for (j, v) in feats.into_iter().enumerate() {
                row[(i, j)] = v;
            }
        }
    }

    let sv = px.singular_values();
    let smax = sv.iter().fold(T::zero(), |a, &s| a.max(s));
    let smin = sv.iter().fold(T::infinity(), |a, &s| a.min(s));
    let gram_condition = (smax * smax + ridge) / (smin * smin + ridge);
    let gram_condition = if gram_condition.is_finite() { gram_condition.max(T::one()) } else { T::infinity() };
    if ridge == T::zero() && gram_condition > T::lit(SINGULAR_GRAM_CONDITION) {
        return Err(LiftError::SingularGram { condition: gram_condition.to_f64_lossy() });
    }

    let normal = (gram_condition <= T::lit(NORMAL_EQUATIONS_MAX_CONDITION))
        .then(|| {
            let gram = px.transpose() * &px + DMatrix::identity(m, m) * ridge;
            Cholesky::new(gram).map(|c| c.solve(&(px.transpose() * &py)))
        })
        .flatten();
    let (kt, solver) = match normal {
        Some(kt) => (kt, Solver::Cholesky),
        None => {
            let mut a = DMatrix::zeros(n + m, m);
            a.rows_mut(0, n).copy_from(&px);
            a.rows_mut(n, m).fill_diagonal(ridge.sqrt());
            let mut b = DMatrix::zeros(n + m, m);
            b.rows_mut(0, n).copy_from(&py);
            let qr = a.qr();
            let qtb = qr.q().transpose() * b;
            let kt = qr
                .r()
                .solve_upper_triangular(&qtb)
                .ok_or(LiftError::SingularGram { condition: gram_condition.to_f64_lossy() })?;
            (kt, Solver::Qr)
        }
    };
    let k = kt.transpose();
    if k.iter().any(|v| !v.is_finite()) {
        return Err(LiftError::Numeric("least-squares solution is not finite".into()));
    }
    let res = &py - &px * &kt;
    let train_residual = (res.norm_squared() / T::from_usize_lossy(n)).sqrt();
    let lift = LearnedLift { dictionary: dict.clone(), k, training_domain, ridge };
    let report = FitReport { train_residual, gram_condition, samples: n, solver };
    Ok((lift, report))
}

fn bounding_box<'a, T: Real>(points: impl Iterator<Item = &'a StatePoint<T>>, dim: usize) -> Vec<(T, T)> {
    let mut bb = vec![(T::infinity(), -T::infinity()); dim];
    for p in points {
        for (b, &c) in bb.iter_mut().zip(p.coords()) {
            b.0 = b.0.min(c);
            b.1 = b.1.max(c);
        }
    }
    bb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{build_dictionary, DictionarySpec};

    fn pairs(xs: &[f64], f: impl Fn(f64) -> f64) -> Vec<(StatePoint<f64>, StatePoint<f64>)> {
        xs.iter().map(|&x| (StatePoint::scalar(x).unwrap(), StatePoint::scalar(f(x)).unwrap())).collect()
    }

    #[test]
    fn identity_gives_identity() {
        let xs: Vec<f64> = crate::dynamics::linspace(-1.0, 1.0, 50);
        let d = build_dictionary(&DictionarySpec::Monomial { max_degree: 3 }, 1, true).unwrap();
        let (lift, rep) = fit_lift(&pairs(&xs, |x| x), &d, 0.0).unwrap();
        assert!((lift.k.clone() - DMatrix::identity(4, 4)).amax() < 1e-9);
        assert!(rep.train_residual < 1e-12);
        assert!(rep.gram_condition >= 1.0);
    }

    #[test]
    fn refuses_singular_gram() {
        let xs = vec![0.5; 10];
        let d = build_dictionary(&DictionarySpec::Monomial { max_degree: 2 }, 1, true).unwrap();
        assert!(matches!(fit_lift(&pairs(&xs, |x| x), &d, 0.0), Err(LiftError::SingularGram { .. })));
        let (_, rep) = fit_lift(&pairs(&xs, |x| x), &d, 1e-4).unwrap();
        assert_eq!(rep.solver, Solver::Cholesky);
        let (_, rep) = fit_lift(&pairs(&xs, |x| x), &d, 1e-12).unwrap();
        assert_eq!(rep.solver, Solver::Qr);
    }

    #[test]
    fn too_few_samples() {
        let d = build_dictionary(&DictionarySpec::Monomial { max_degree: 3 }, 1, true).unwrap();
        assert!(matches!(
            fit_lift(&pairs(&[0.0, 1.0], |x| x), &d, 0.0),
            Err(LiftError::InsufficientSamples { needed: 4, got: 2 })
        ));
    }
}
