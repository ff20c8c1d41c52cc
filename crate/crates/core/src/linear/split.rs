use crate::scalar::Real;
use nalgebra::{DMatrix, Schur, SVD};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{spectral_norm, LinearError, LinearSystem, DEFAULT_TOL_RANK};

/// Eigenvalues closer than this are treated as one (possibly defective) eigenvalue.
const CLUSTER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnitudeClass {
    Stable,
    Unit,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct EigenReport<T: Real> {
    pub re: T,
    pub im: T,
    pub algebraic: usize,
    pub geometric: usize,
    pub class: MagnitudeClass,
}

impl<T: Real> EigenReport<T> {
    pub fn modulus(&self) -> T {
        self.re.hypot(self.im)
    }

    pub fn is_complex(&self) -> bool {
        self.im != T::zero()
    }

    pub fn has_trivial_blocks(&self) -> bool {
        self.geometric == self.algebraic
    }
}

/// One real eigenvalue, or one complex-conjugate pair, with a real basis of
/// its generalized eigenspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SpectralCluster<T: Real> {
    pub eigen: EigenReport<T>,
    /// Orthonormal columns; `algebraic` of them, twice that for a pair.
    pub basis: DMatrix<T>,
}

impl<T: Real> SpectralCluster<T> {
    /// `A - lambda I` for a real eigenvalue, `A^2 - 2 Re(lambda) A + |lambda|^2 I`
    /// for a pair. Its kernel powers give the generalized eigenspace.
    pub(crate) fn annihilator(&self, a: &DMatrix<T>) -> DMatrix<T> {
        annihilator(a, self.eigen.re, self.eigen.im)
    }
}

fn annihilator<T: Real>(a: &DMatrix<T>, re: T, im: T) -> DMatrix<T> {
    let n = a.nrows();
    let id = DMatrix::<T>::identity(n, n);
    if im == T::zero() {
        a - id * re
    } else {
        a * a - a * (re + re) + id * (re * re + im * im)
    }
}

/// Real invariant subspaces of `A` split by eigenvalue modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SpectralSplit<T: Real> {
    pub stable_basis: DMatrix<T>,
    pub unit_basis: DMatrix<T>,
    pub unstable_basis: DMatrix<T>,
    pub clusters: Vec<SpectralCluster<T>>,
    pub tol_eig: T,
}

impl<T: Real> SpectralSplit<T> {
    /// (stable, unit, unstable) dimensions.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.stable_basis.ncols(), self.unit_basis.ncols(), self.unstable_basis.ncols())
    }

    pub fn eigenvalues(&self) -> Vec<EigenReport<T>> {
        self.clusters.iter().map(|c| c.eigen).collect()
    }

    /// JSON with the eigenvalue report and the three bases, column-major,
    /// numbers printed with 17 significant digits.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Eig {
            re: Box<RawValue>,
            im: Box<RawValue>,
            algebraic: usize,
            geometric: usize,
            class: MagnitudeClass,
        }
        #[derive(Serialize)]
        struct Basis {
            rows: usize,
            cols: usize,
            data: Box<RawValue>,
        }
        #[derive(Serialize)]
        struct Out {
            eigenvalues: Vec<Eig>,
            stable_basis: Basis,
            unit_basis: Basis,
            unstable_basis: Basis,
        }
        fn num<T: Real>(v: T) -> String {
            format!("{:.16e}", v.to_f64_lossy())
        }
        fn raw(s: String) -> Box<RawValue> {
            RawValue::from_string(s).expect("formatted numbers are valid JSON")
        }
        fn basis<T: Real>(m: &DMatrix<T>) -> Basis {
            let data: Vec<String> = m.iter().map(|&v| num(v)).collect();
            Basis { rows: m.nrows(), cols: m.ncols(), data: raw(format!("[{}]", data.join(","))) }
        }
        let out = Out {
            eigenvalues: self
                .clusters
                .iter()
                .map(|c| Eig {
                    re: raw(num(c.eigen.re)),
                    im: raw(num(c.eigen.im)),
                    algebraic: c.eigen.algebraic,
                    geometric: c.eigen.geometric,
                    class: c.eigen.class,
                })
                .collect(),
            stable_basis: basis(&self.stable_basis),
            unit_basis: basis(&self.unit_basis),
            unstable_basis: basis(&self.unstable_basis),
        };
        serde_json::to_string_pretty(&out).expect("split serializes")
    }
}

/// Every eigenvalue of `a` as `(re, im)`, conjugate pairs listed together.
pub fn eigenvalues<T: Real>(a: &DMatrix<T>) -> Result<Vec<(T, T)>, LinearError> {
    let n = a.nrows();
    // the QR iteration occasionally stalls at machine epsilon on clustered spectra
    let schur = [1.0, 16.0, 256.0]
        .iter()
        .find_map(|&m| Schur::try_new(a.clone(), T::default_epsilon() * T::lit(m), 10_000 * n))
        .ok_or(LinearError::IllConditioned { residual: f64::INFINITY })?;
    // read the quasi-triangular factor directly: the library's complex
    // eigenvalues come out NaN for 2x2 blocks with a vanishing discriminant
    let (_, t) = schur.unpack();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != T::zero() {
            let (p, q, r, s) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (p + s) / T::lit(2.0);
            let disc = ((p - s) / T::lit(2.0)).powi(2) + q * r;
            if disc >= T::zero() {
                let root = disc.sqrt();
                out.push((half_tr + root, T::zero()));
                out.push((half_tr - root, T::zero()));
            } else {
                let root = (-disc).sqrt();
                out.push((half_tr, root));
                out.push((half_tr, -root));
            }
            i += 2;
        } else {
            out.push((t[(i, i)], T::zero()));
            i += 1;
        }
    }
    Ok(out)
}

/// Single-linkage groups of eigenvalues within `CLUSTER_TOL`, as
/// (mean re, mean im, count), with conjugate groups folded into the one with
/// positive imaginary part.
fn group_eigenvalues<T: Real>(eigs: &[(T, T)], tol_eig: T) -> Vec<(T, T, usize)> {
    let n = eigs.len();
    let tol = T::lit(CLUSTER_TOL);
    let mut group: Vec<usize> = (0..n).collect();
    fn root(g: &mut [usize], mut i: usize) -> usize {
        while g[i] != i {
            g[i] = g[g[i]];
            i = g[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i].0 - eigs[j].0).hypot(eigs[i].1 - eigs[j].1) < tol {
                let (ri, rj) = (root(&mut group, i), root(&mut group, j));
                group[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut out: Vec<(usize, T, T, usize)> = Vec::new();
    for i in 0..n {
        let r = root(&mut group, i);
        match out.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += eigs[i].0;
                g.2 += eigs[i].1;
                g.3 += 1;
            }
            None => out.push((r, eigs[i].0, eigs[i].1, 1)),
        }
    }
    let mut groups: Vec<(T, T, usize)> = out
        .into_iter()
        .map(|(_, re, im, c)| {
            let c_t = T::from_usize_lossy(c);
            let im = im / c_t;
            (re / c_t, if im.abs() <= tol_eig.max(tol) { T::zero() } else { im }, c)
        })
        .filter(|g| g.1 >= T::zero())
        .collect();
    groups.sort_by(|a, b| {
        let (ma, mb) = (a.0.hypot(a.1), b.0.hypot(b.1));
        ma.partial_cmp(&mb)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
    });
    groups
}

fn rank<T: Real>(m: &DMatrix<T>, tol: T) -> usize {
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis of the `d`-dimensional approximate kernel of `m`.
fn kernel<T: Real>(m: DMatrix<T>, d: usize) -> DMatrix<T> {
    let n = m.ncols();
    if d >= n {
        return DMatrix::identity(n, n);
    }
    let svd = SVD::new(m, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[i].partial_cmp(&svd.singular_values[j]).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut basis = DMatrix::zeros(n, d);
    for (c, &i) in order.iter().take(d).enumerate() {
        basis.set_column(c, &v_t.row(i).transpose());
    }
    basis
}

fn hcat<T: Real>(n: usize, blocks: &[&DMatrix<T>]) -> DMatrix<T> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(n, cols);
    let mut c = 0;
    for b in blocks {
        out.columns_mut(c, b.ncols()).copy_from(b);
        c += b.ncols();
    }
    out
}

/// Splits the state space into the stable, unit-modulus and unstable
/// invariant subspaces of `A`. Unit-modulus eigenvalues with nontrivial
/// Jordan blocks count as unstable.
pub fn spectral_split<T: Real>(sys: &LinearSystem<T>, tol_eig: T) -> Result<SpectralSplit<T>, LinearError> {
    let a = sys.matrix();
    let n = sys.dim();
    let a_norm = spectral_norm(a);
    let tol_rank = T::lit(DEFAULT_TOL_RANK) * a_norm.max(T::one());
    let groups = group_eigenvalues(&eigenvalues(a)?, tol_eig);

    let mut clusters = Vec::with_capacity(groups.len());
    for (re, im, count) in groups {
        let complex = im != T::zero();
        let q = annihilator(a, re, im);
        let scale = if complex { a_norm * a_norm + T::one() } else { a_norm + T::one() };
        let geometric_raw = n - rank(&q, tol_rank * scale);
        let geometric = if complex { geometric_raw / 2 } else { geometric_raw };
        // rescaled each step so high powers of a tiny annihilator do not underflow
        let q_unit = &q / spectral_norm(&q).max(T::lit(f64::MIN_POSITIVE));
        let mut power = q_unit.clone();
        for _ in 1..count {
            power = &power * &q_unit;
            power /= spectral_norm(&power).max(T::lit(f64::MIN_POSITIVE));
        }
        let dim = if complex { 2 * count } else { count };
        let basis = kernel(power, dim);
        let modulus = re.hypot(im);
        let class = if modulus < T::one() - tol_eig {
            MagnitudeClass::Stable
        } else if modulus > T::one() + tol_eig || geometric != count {
            MagnitudeClass::Unstable
        } else {
            MagnitudeClass::Unit
        };
        clusters.push(SpectralCluster {
            eigen: EigenReport { re, im, algebraic: count, geometric, class },
            basis,
        });
    }

    // invariance of each generalized eigenspace and joint spanning
    let mut residual = T::zero();
    for c in &clusters {
        let ab = a * &c.basis;
        let proj = &c.basis * (c.basis.transpose() * &ab);
        residual = residual.max(spectral_norm(&(ab - proj)) / a_norm.max(T::one()));
    }
    let all: Vec<&DMatrix<T>> = clusters.iter().map(|c| &c.basis).collect();
    let joint = hcat(n, &all);
    let joint_ok = joint.ncols() == n && rank(&joint, T::lit(DEFAULT_TOL_RANK)) == n;
    if residual > tol_rank || !joint_ok {
        return Err(LinearError::IllConditioned { residual: residual.to_f64_lossy() });
    }

    let pick = |class| {
        let blocks: Vec<&DMatrix<T>> =
            clusters.iter().filter(|c| c.eigen.class == class).map(|c| &c.basis).collect();
        hcat(n, &blocks)
    };
    Ok(SpectralSplit {
        stable_basis: pick(MagnitudeClass::Stable),
        unit_basis: pick(MagnitudeClass::Unit),
        unstable_basis: pick(MagnitudeClass::Unstable),
        tol_eig,
        clusters,
    })
}
