use crate::dynamics::StatePoint;
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{
    spectral_norm, spectral_split, LinearError, LinearSystem, MagnitudeClass, DEFAULT_TOL_EIG, DEFAULT_TOL_RANK,
};

/// Horizon over which the empirical growth constant is minimised.
const RATE_PROBE_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthVerdict {
    Vanishes,
    BoundedNonvanishing,
    Unbounded,
}

/// `||A^k xi_u|| >= c alpha^k k^j` for large `k`; `c` is the empirical
/// minimum over the probe horizon, not a certified constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GrowthRate<T: Real> {
    pub alpha: T,
    pub j: usize,
    pub c: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GrowthClass<T: Real> {
    pub verdict: GrowthVerdict,
    pub rate: Option<GrowthRate<T>>,
    /// Norms of the projections of the initial condition onto the stable,
    /// unit and unstable subspaces.
    pub stable_norm: T,
    pub unit_norm: T,
    pub unstable_norm: T,
}

/// Long-run behaviour of `A^k xi` from the projections of `xi` onto the
/// generalized eigenspaces. Components below `tol * ||xi||` are ignored.
///
/// A component on a unit-modulus eigenvalue that lies in the eigenspace
/// proper (Jordan chain length 1) stays bounded even when the block is
/// nontrivial.
pub fn classify_growth<T: Real>(
    sys: &LinearSystem<T>,
    xi: &StatePoint<T>,
    tol: T,
) -> Result<GrowthClass<T>, LinearError> {
    let x = sys.vector(xi)?;
    let a = sys.matrix();
    let n = sys.dim();
    let split = spectral_split(sys, T::lit(DEFAULT_TOL_EIG))?;
    let bases: Vec<&DMatrix<T>> = split.clusters.iter().map(|c| &c.basis).collect();
    let mut joint = DMatrix::zeros(n, n);
    let mut col = 0;
    for b in &bases {
        joint.columns_mut(col, b.ncols()).copy_from(b);
        col += b.ncols();
    }
    let coeffs = joint.lu().solve(&x).ok_or(LinearError::IllConditioned { residual: f64::INFINITY })?;

    let threshold = tol * x.norm();
    let mut norms = [T::zero(); 3];
    let mut growing = DVector::zeros(n);
    let mut alpha = T::zero();
    let mut degree = 0usize;
    let mut bounded_nonzero = false;
    let mut col = 0;
    for cluster in &split.clusters {
        let d = cluster.basis.ncols();
        let part = &cluster.basis * coeffs.rows(col, d);
        col += d;
        let part_norm = part.norm();
        let slot = match cluster.eigen.class {
            MagnitudeClass::Stable => 0,
            MagnitudeClass::Unit => 1,
            MagnitudeClass::Unstable => 2,
        };
        norms[slot] = (norms[slot] * norms[slot] + part_norm * part_norm).sqrt();
        if part_norm <= threshold || cluster.eigen.class == MagnitudeClass::Stable {
            continue;
        }
        let m = cluster.annihilator(a);
        let m_norm = spectral_norm(&m).max(T::one());
        let mut chain = 1;
        let mut v = &m * &part;
        while chain < cluster.eigen.algebraic
            && v.norm() > T::lit(DEFAULT_TOL_RANK) * m_norm.powi(chain as i32) * part_norm
        {
            v = &m * v;
            chain += 1;
        }
        let modulus = cluster.eigen.modulus();
        let unit = (modulus - T::one()).abs() <= split.tol_eig;
        if unit && chain == 1 {
            bounded_nonzero = true;
            continue;
        }
        growing += &part;
        if modulus > alpha + split.tol_eig {
            alpha = modulus;
            degree = chain - 1;
        } else if (modulus - alpha).abs() <= split.tol_eig {
            degree = degree.max(chain - 1);
        }
    }

    let [stable_norm, unit_norm, unstable_norm] = norms;
    let verdict = if alpha > T::zero() {
        GrowthVerdict::Unbounded
    } else if bounded_nonzero {
        GrowthVerdict::BoundedNonvanishing
    } else {
        GrowthVerdict::Vanishes
    };
    let rate = (verdict == GrowthVerdict::Unbounded).then(|| GrowthRate {
        alpha,
        j: degree,
        c: empirical_constant(a, &growing, alpha, degree),
    });
    Ok(GrowthClass { verdict, rate, stable_norm, unit_norm, unstable_norm })
}

fn empirical_constant<T: Real>(a: &DMatrix<T>, xi_u: &DVector<T>, alpha: T, j: usize) -> T {
    let mut v = xi_u.clone();
    let mut c = T::infinity();
    for k in 1..=RATE_PROBE_STEPS {
        v = a * v / alpha;
        let ratio = v.norm() / T::from_usize_lossy(k).powi(j as i32);
        c = c.min(ratio);
    }
    c
}

/// Whether the omega-limit set of `xi` is nonempty, i.e. its orbit is bounded.
pub fn omega_nonempty_linear<T: Real>(sys: &LinearSystem<T>, xi: &StatePoint<T>) -> Result<bool, LinearError> {
    Ok(classify_growth(sys, xi, T::lit(1e-8))?.verdict != GrowthVerdict::Unbounded)
}

/// `max_k ||A^k restricted to span(basis)||_2` over `k <= 10 n max(1, ceil(1 / (1 - rho)))`,
/// where `rho` is the largest stable modulus of the restriction.
pub fn stability_bound<T: Real>(sys: &LinearSystem<T>, basis: &DMatrix<T>) -> Result<T, LinearError> {
    let n = sys.dim();
    if basis.nrows() != n {
        return Err(LinearError::DimensionMismatch { expected: n, got: basis.nrows() });
    }
    if basis.ncols() == 0 {
        return Ok(T::zero());
    }
    let a = sys.matrix();
    let q = basis.clone().qr().q();
    let restricted = q.transpose() * a * &q;
    let a_norm = sys.norm2().max(T::one());
    let residual = spectral_norm(&(a * &q - &q * &restricted)) / a_norm;
    if residual > T::lit(DEFAULT_TOL_RANK) {
        return Err(LinearError::NotInvariant { residual: residual.to_f64_lossy() });
    }
    let sub = LinearSystem::new(restricted)?;
    let split = spectral_split(&sub, T::lit(DEFAULT_TOL_EIG))?;
    if split.dims().2 > 0 {
        return Err(LinearError::NotStable);
    }
    let rho = split
        .clusters
        .iter()
        .filter(|c| c.eigen.class == MagnitudeClass::Stable)
        .fold(T::zero(), |m, c| m.max(c.eigen.modulus()));
    let steps = (T::one() / (T::one() - rho)).ceil().to_f64_lossy().max(1.0) as usize;
    let horizon = 10 * n * steps;
    let b = sub.matrix();
    let mut power = DMatrix::identity(b.nrows(), b.ncols());
    let mut bound = T::one();
    for _ in 0..horizon {
        power = b * power;
        bound = bound.max(spectral_norm(&power));
    }
    Ok(bound)
}
