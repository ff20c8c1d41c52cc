#![allow(dead_code)]

use limitlab_core::linear::LinearSystem;
use limitlab_core::StatePoint;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FAMILY_EIGENVALUES: [f64; 4] = [0.3, 0.9, 1.0, 1.1];

/// Seeded random 4x4 systems `S D S^-1` with eigenvalues drawn from
/// `FAMILY_EIGENVALUES`, paired with a random initial condition.
pub fn random_family(seed: u64, count: usize) -> Vec<(LinearSystem<f64>, StatePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = 4;
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                FAMILY_EIGENVALUES[rng.gen_range(0..FAMILY_EIGENVALUES.len())]
            } else {
                0.0
            }
        });
        let s = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let sv = s.singular_values();
        if sv.min() < 1e-2 * sv.max() {
            continue;
        }
        let a = &s * d * s.clone().try_inverse().expect("well-conditioned");
        let xi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        out.push((LinearSystem::new(a).unwrap(), StatePoint::new(xi).unwrap()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Vanishes,
    Bounded,
    Unbounded,
    /// Still visibly growing or decaying at the horizon without crossing a threshold.
    Undetermined,
}

/// Iterates `A^k xi` for `k <= 200`: unbounded once the norm passes 1e8,
/// vanishing if it ends below 1e-8. Otherwise bounded if the norm changed by
/// less than a factor 2 over the second half, undetermined if not.
pub fn brute_force_growth(sys: &LinearSystem<f64>, xi: &StatePoint) -> OracleVerdict {
    const HORIZON: usize = 200;
    let a = sys.matrix();
    let mut v = nalgebra::DVector::from_column_slice(xi.coords());
    let mut mid = 0.0;
    for k in 1..=HORIZON {
        v = a * v;
        if v.norm() > 1e8 {
            return OracleVerdict::Unbounded;
        }
        if k == HORIZON / 2 {
            mid = v.norm();
        }
    }
    let last = v.norm();
    if last < 1e-8 {
        OracleVerdict::Vanishes
    } else if last <= 2.0 * mid && last >= 0.5 * mid {
        OracleVerdict::Bounded
    } else {
        OracleVerdict::Undetermined
    }
}

/// Explicit Jordan block times itself `k` times.
pub fn jordan_by_multiplication(lambda: f64, m: usize, k: u32) -> DMatrix<f64> {
    let j = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            lambda
        } else if c == r + 1 {
            1.0
        } else {
            0.0
        }
    });
    (0..k).fold(DMatrix::identity(m, m), |acc, _| &acc * &j)
}

pub fn oracle() -> serde_json::Value {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/oracle.json"))
        .expect("oracle fixture present");
    serde_json::from_str(&text).expect("oracle fixture is JSON")
}
