//! Finite point clouds: Hausdorff distances, diameters and sampling gaps.
//!
//! All routines are brute force, O(|A||B|). Large scans are split across the
//! rayon pool; reductions are `max`/`min`, so the result does not depend on
//! how the work was scheduled.

use crate::dynamics::{distance, distance_sq, StatePoint};
use crate::scalar::Real;
use rayon::prelude::*;

const PARALLEL_THRESHOLD: usize = 1 << 16;

fn nearest_sq<T: Real>(p: &StatePoint<T>, cloud: &[StatePoint<T>]) -> T {
    cloud
        .iter()
        .fold(T::infinity(), |m, q| m.min(distance_sq(p.coords(), q.coords())))
}

fn max_of<T: Real>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::zero(), |a, b| a.max(b))
}

/// `max_{a in A} min_{b in B} |a - b|`. Zero when either cloud is empty.
pub fn directed_hausdorff<T: Real>(a: &[StatePoint<T>], b: &[StatePoint<T>]) -> T {
    if a.is_empty() || b.is_empty() {
        return T::zero();
    }
    let worst = if a.len() * b.len() >= PARALLEL_THRESHOLD {
        a.par_iter()
            .map(|p| nearest_sq(p, b))
            .reduce(T::zero, |x, y| x.max(y))
    } else {
        max_of(a.iter().map(|p| nearest_sq(p, b)))
    };
    worst.sqrt()
}

/// Symmetric Hausdorff distance. `hausdorff(a, b) == hausdorff(b, a)` bit for bit.
pub fn hausdorff<T: Real>(a: &[StatePoint<T>], b: &[StatePoint<T>]) -> T {
    let ab = directed_hausdorff(a, b);
    let ba = directed_hausdorff(b, a);
    ab.max(ba)
}

/// Largest pairwise distance.
pub fn diameter<T: Real>(cloud: &[StatePoint<T>]) -> T {
    let row = |i: usize| {
        max_of(cloud[i + 1..].iter().map(|q| distance_sq(cloud[i].coords(), q.coords())))
    };
    let n = cloud.len();
    let worst = if n * n >= 2 * PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(row).reduce(T::zero, |x, y| x.max(y))
    } else {
        max_of((0..n).map(row))
    };
    worst.sqrt()
}

/// Largest nearest-neighbour distance inside the cloud: how coarsely the
/// cloud samples whatever set it approximates.
pub fn sampling_gap<T: Real>(cloud: &[StatePoint<T>]) -> T {
    if cloud.len() < 2 {
        return T::zero();
    }
    let nn = |i: usize| {
        cloud
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(T::infinity(), |m, (_, q)| m.min(distance_sq(cloud[i].coords(), q.coords())))
    };
    let n = cloud.len();
    let worst = if n * n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(nn).reduce(T::zero, |x, y| x.max(y))
    } else {
        max_of((0..n).map(nn))
    };
    worst.sqrt()
}

/// Drops points within `merge_tol` of an earlier kept point. Order preserving.
pub fn compact<T: Real>(cloud: &[StatePoint<T>], merge_tol: T) -> Vec<StatePoint<T>> {
    let mut kept: Vec<StatePoint<T>> = Vec::new();
    let tol_sq = merge_tol * merge_tol;
    for p in cloud {
        // recent points are the likeliest duplicates for orbit data
        if !kept.iter().rev().any(|q| distance_sq(p.coords(), q.coords()) <= tol_sq) {
            kept.push(p.clone());
        }
    }
    kept
}

/// Distance from `p` to the closest member of `cloud`.
pub fn distance_to_cloud<T: Real>(p: &StatePoint<T>, cloud: &[StatePoint<T>]) -> T {
    if cloud.is_empty() {
        return T::infinity();
    }
    cloud.iter().fold(T::infinity(), |m, q| m.min(distance(p.coords(), q.coords())))
}
