use crate::scalar::Real;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::state::{distance, norm};
use super::{DomainError, DynamicsError, StatePoint};

/// Default exclusion radius around poles and other removed points.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint<T> {
    Unbounded,
    Closed(T),
    Open(T),
}

impl<T: Real> Endpoint<T> {
    pub fn value(&self) -> Option<T> {
        match *self {
            Endpoint::Unbounded => None,
            Endpoint::Closed(v) | Endpoint::Open(v) => Some(v),
        }
    }

    fn admits_above(&self, x: T) -> bool {
        match *self {
            Endpoint::Unbounded => true,
            Endpoint::Closed(v) => x >= v,
            Endpoint::Open(v) => x > v,
        }
    }

    fn admits_below(&self, x: T) -> bool {
        match *self {
            Endpoint::Unbounded => true,
            Endpoint::Closed(v) => x <= v,
            Endpoint::Open(v) => x < v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisBounds<T> {
    pub lower: Endpoint<T>,
    pub upper: Endpoint<T>,
}

impl<T: Real> AxisBounds<T> {
    pub fn closed(lo: T, hi: T) -> Self {
        Self { lower: Endpoint::Closed(lo), upper: Endpoint::Closed(hi) }
    }

    pub fn unbounded() -> Self {
        Self { lower: Endpoint::Unbounded, upper: Endpoint::Unbounded }
    }

    pub fn contains(&self, x: T) -> bool {
        self.lower.admits_above(x) && self.upper.admits_below(x)
    }

    pub fn finite(&self) -> Option<(T, T)> {
        Some((self.lower.value()?, self.upper.value()?))
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        for v in [self.lower.value(), self.upper.value()].into_iter().flatten() {
            if !v.is_finite() {
                return Err(DynamicsError::InvalidDomain("bounds must be finite".into()));
            }
        }
        if let (Some(lo), Some(hi)) = (self.lower.value(), self.upper.value()) {
            if lo >= hi {
                return Err(DynamicsError::InvalidDomain(format!(
                    "lower bound {lo} must be below upper bound {hi}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Interval,
    Box,
    /// Radial shell around the origin; `bounds[0]` holds the radii.
    Annulus,
    PuncturedBox,
    FullSpace,
}

/// Region a map or immersion is defined on.
///
/// Membership: inside the bounds and farther than `exclusion_radius` from
/// every excluded point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct DomainRegion<T: Real> {
    kind: DomainKind,
    dim: usize,
    bounds: Vec<AxisBounds<T>>,
    excluded: Vec<StatePoint<T>>,
    exclusion_radius: T,
}

impl<T: Real> DomainRegion<T> {
    pub fn full_space(dim: usize) -> Self {
        Self {
            kind: DomainKind::FullSpace,
            dim,
            bounds: Vec::new(),
            excluded: Vec::new(),
            exclusion_radius: T::lit(DEFAULT_EXCLUSION_RADIUS),
        }
    }

    pub fn interval(lower: Endpoint<T>, upper: Endpoint<T>) -> Result<Self, DynamicsError> {
        let b = AxisBounds { lower, upper };
        b.validate()?;
        Ok(Self {
            kind: DomainKind::Interval,
            dim: 1,
            bounds: vec![b],
            excluded: Vec::new(),
            exclusion_radius: T::lit(DEFAULT_EXCLUSION_RADIUS),
        })
    }

    pub fn closed_interval(lo: T, hi: T) -> Result<Self, DynamicsError> {
        Self::interval(Endpoint::Closed(lo), Endpoint::Closed(hi))
    }

    pub fn boxed(bounds: Vec<AxisBounds<T>>) -> Result<Self, DynamicsError> {
        if bounds.is_empty() {
            return Err(DynamicsError::InvalidDomain("a box needs at least one axis".into()));
        }
        for b in &bounds {
            b.validate()?;
        }
        Ok(Self {
            kind: if bounds.len() == 1 { DomainKind::Interval } else { DomainKind::Box },
            dim: bounds.len(),
            bounds,
            excluded: Vec::new(),
            exclusion_radius: T::lit(DEFAULT_EXCLUSION_RADIUS),
        })
    }

    pub fn closed_box(bounds: &[(T, T)]) -> Result<Self, DynamicsError> {
        Self::boxed(bounds.iter().map(|&(lo, hi)| AxisBounds::closed(lo, hi)).collect())
    }

    /// Points whose Euclidean norm lies between `inner` and `outer`.
    pub fn annulus(dim: usize, inner: Endpoint<T>, outer: Endpoint<T>) -> Result<Self, DynamicsError> {
        let b = AxisBounds { lower: inner, upper: outer };
        b.validate()?;
        if b.lower.value().is_some_and(|r| r < T::zero()) {
            return Err(DynamicsError::InvalidDomain("radii must be nonnegative".into()));
        }
        Ok(Self {
            kind: DomainKind::Annulus,
            dim,
            bounds: vec![b],
            excluded: Vec::new(),
            exclusion_radius: T::lit(DEFAULT_EXCLUSION_RADIUS),
        })
    }

    /// Removes the given points (within the exclusion radius) from the region.
    pub fn excluding(mut self, points: Vec<StatePoint<T>>) -> Result<Self, DynamicsError> {
        if let Some(p) = points.iter().find(|p| p.dim() != self.dim) {
            return Err(DynamicsError::InvalidDomain(format!(
                "excluded point has dimension {}, domain has {}",
                p.dim(),
                self.dim
            )));
        }
        self.excluded.extend(points);
        if self.kind == DomainKind::Box {
            self.kind = DomainKind::PuncturedBox;
        }
        Ok(self)
    }

    pub fn with_exclusion_radius(mut self, eps: T) -> Self {
        self.exclusion_radius = eps;
        self
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &[AxisBounds<T>] {
        &self.bounds
    }

    pub fn excluded(&self) -> &[StatePoint<T>] {
        &self.excluded
    }

    pub fn exclusion_radius(&self) -> T {
        self.exclusion_radius
    }

    pub fn contains(&self, x: &StatePoint<T>) -> bool {
        self.check(x).is_ok()
    }

    /// Membership with the reason for rejection.
    pub fn check(&self, x: &StatePoint<T>) -> Result<(), DomainError> {
        if x.dim() != self.dim {
            return Err(DomainError::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        let inside = match self.kind {
            DomainKind::FullSpace => true,
            DomainKind::Annulus => self.bounds[0].contains(norm(x.coords())),
            _ => self.bounds.iter().zip(x.coords()).all(|(b, &c)| b.contains(c)),
        };
        if !inside {
            return Err(DomainError::OutsideDomain { point: x.to_f64_vec() });
        }
        if let Some(e) = self
            .excluded
            .iter()
            .find(|e| distance(e.coords(), x.coords()) <= self.exclusion_radius)
        {
            return Err(DomainError::ExcludedPoint {
                point: x.to_f64_vec(),
                excluded: e.to_f64_vec(),
            });
        }
        Ok(())
    }

    /// Axis-aligned bounding box when every bound is finite.
    pub fn bounding_box(&self) -> Option<Vec<(T, T)>> {
        match self.kind {
            DomainKind::FullSpace => None,
            DomainKind::Annulus => {
                let r = self.bounds[0].upper.value()?;
                Some(vec![(-r, r); self.dim])
            }
            _ => self.bounds.iter().map(AxisBounds::finite).collect(),
        }
    }

    /// Node grid over the bounding box (`n` nodes per axis, endpoints
    /// included), keeping only member points. Row-major, last axis fastest.
    pub fn grid(&self, n: usize) -> Result<Vec<StatePoint<T>>, DynamicsError> {
        let bb = self
            .bounding_box()
            .ok_or_else(|| DynamicsError::InvalidDomain("grid needs a bounded domain".into()))?;
        let axes: Vec<Vec<T>> = bb.iter().map(|&(lo, hi)| linspace(lo, hi, n)).collect();
        Ok(cartesian(&axes)
            .into_iter()
            .filter_map(|c| StatePoint::new(c).ok())
            .filter(|p| self.contains(p))
            .collect())
    }

    /// Uniform random member points (rejection sampling; annuli sample the
    /// radius uniformly).
    pub fn sample_uniform<R: Rng + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<StatePoint<T>>, DynamicsError> {
        let bb = self
            .bounding_box()
            .ok_or_else(|| DynamicsError::InvalidDomain("sampling needs a bounded domain".into()))?;
        let mut out = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while out.len() < n {
            attempts += 1;
            if attempts > 1000 * n.max(1) {
                return Err(DynamicsError::InvalidDomain(
                    "rejection sampling found too few member points".into(),
                ));
            }
            let coords: Vec<T> = if self.kind == DomainKind::Annulus && self.dim == 2 {
                let (r0, r1) = (self.bounds[0].lower.value().unwrap_or(T::zero()), bb[0].1);
                let r = r0 + (r1 - r0) * T::lit(rng.gen::<f64>());
                let phi = T::two_pi() * T::lit(rng.gen::<f64>());
                vec![r * phi.cos(), r * phi.sin()]
            } else {
                bb.iter().map(|&(lo, hi)| lo + (hi - lo) * T::lit(rng.gen::<f64>())).collect()
            };
            if let Ok(p) = StatePoint::new(coords) {
                if self.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }
}

impl<T: Real> fmt::Display for DomainRegion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn axis<T: Real>(b: &AxisBounds<T>) -> String {
            let lo = match b.lower {
                Endpoint::Unbounded => "(-inf".to_string(),
                Endpoint::Closed(v) => format!("[{v}"),
                Endpoint::Open(v) => format!("({v}"),
            };
            let hi = match b.upper {
                Endpoint::Unbounded => "inf)".to_string(),
                Endpoint::Closed(v) => format!("{v}]"),
                Endpoint::Open(v) => format!("{v})"),
            };
            format!("{lo}, {hi}")
        }
        match self.kind {
            DomainKind::FullSpace => write!(f, "R^{}", self.dim)?,
            DomainKind::Annulus => write!(f, "{{x in R^{} : |x| in {}}}", self.dim, axis(&self.bounds[0]))?,
            _ => {
                let parts: Vec<String> = self.bounds.iter().map(axis).collect();
                write!(f, "{}", parts.join(" x "))?
            }
        }
        if !self.excluded.is_empty() {
            let pts: Vec<String> = self.excluded.iter().map(|p| format!("{:?}", p.to_f64_vec())).collect();
            write!(f, " minus {}", pts.join(", "))?;
        }
        Ok(())
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / T::lit(2.0)],
        _ => {
            let last = T::from_usize_lossy(n - 1);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * T::from_usize_lossy(i) / last
                    }
                })
                .collect()
        }
    }
}

pub(crate) fn cartesian<T: Real>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}
