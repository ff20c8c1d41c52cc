use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};

use super::{DiscreteMap, DomainError, DynamicsError, StatePoint};

/// Default divergence guard on the Euclidean norm of the state.
pub const DEFAULT_DIVERGENCE_RADIUS: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    LeftDomain,
    Singular,
    Diverged,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Completed => "completed",
            Termination::LeftDomain => "left-domain",
            Termination::Singular => "singular",
            Termination::Diverged => "diverged",
        })
    }
}

/// A computed orbit segment. Early termination is recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct Trajectory<T: Real> {
    pub points: Vec<StatePoint<T>>,
    pub direction: Direction,
    pub termination: Termination,
    pub steps_taken: usize,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &StatePoint<T> {
        self.points.last().expect("trajectory holds its initial point")
    }

    /// CSV with header `k,x1,...,xd`, one row per point, and a trailing
    /// `# termination=<cause>` line.
    pub fn to_csv(&self) -> String {
        let dim = self.points.first().map_or(0, StatePoint::dim);
        let mut out = String::from("k");
        for i in 1..=dim {
            let _ = write!(out, ",x{i}");
        }
        out.push('\n');
        for (k, p) in self.points.iter().enumerate() {
            let _ = write!(out, "{k}");
            for c in p.coords() {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "# termination={}", self.termination);
        out
    }
}

/// Step-by-step orbit generator shared by every iteration routine.
pub struct Orbit<'a, T: Real> {
    map: &'a DiscreteMap<T>,
    direction: Direction,
    current: StatePoint<T>,
    divergence_radius: T,
    stopped: Option<Termination>,
    diverged: bool,
    steps: usize,
}

impl<'a, T: Real> Orbit<'a, T> {
    pub fn new(map: &'a DiscreteMap<T>, x0: StatePoint<T>, direction: Direction, divergence_radius: T) -> Self {
        Self {
            map,
            direction,
            current: x0,
            divergence_radius,
            stopped: None,
            diverged: false,
            steps: 0,
        }
    }

    pub fn current(&self) -> &StatePoint<T> {
        &self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// True once the current point is beyond the divergence guard.
    pub fn has_diverged(&self) -> bool {
        self.diverged
    }

    /// Advances one step. The image is accepted even when it lies outside the
    /// domain; the failure surfaces on the next call, when it must be mapped.
    pub fn advance(&mut self) -> Result<&StatePoint<T>, Termination> {
        if let Some(t) = self.stopped {
            return Err(t);
        }
        if self.diverged {
            self.stopped = Some(Termination::Diverged);
            return Err(Termination::Diverged);
        }
        let image = match self.direction {
            Direction::Forward => self.map.evaluate(&self.current),
            Direction::Backward => self.map.evaluate_inverse(&self.current).map_err(|e| match e {
                DynamicsError::Domain(d) => d,
                _ => DomainError::NonFiniteImage { point: self.current.to_f64_vec() },
            }),
        };
        match image {
            Ok(next) => {
                self.diverged = next.norm() > self.divergence_radius;
                self.current = next;
                self.steps += 1;
                Ok(&self.current)
            }
            Err(e) => {
                let t = termination_for(&e);
                self.stopped = Some(t);
                Err(t)
            }
        }
    }
}

fn termination_for(e: &DomainError) -> Termination {
    match e {
        DomainError::OutsideDomain { .. } | DomainError::DimensionMismatch { .. } => Termination::LeftDomain,
        DomainError::ExcludedPoint { .. } | DomainError::NonFiniteImage { .. } => Termination::Singular,
    }
}

/// Points sampled after a burn-in, with the reason sampling stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail<T: Real> {
    pub points: Vec<StatePoint<T>>,
    pub termination: Termination,
    /// Largest state norm seen over burn-in and tail.
    pub max_norm: T,
}

impl<T: Real> DiscreteMap<T> {
    /// `[x0, f(x0), ..., f^k(x0)]`, stopping early on singularity, domain exit
    /// or divergence beyond `DEFAULT_DIVERGENCE_RADIUS`.
    pub fn iterate(&self, x0: &StatePoint<T>, k: usize) -> Trajectory<T> {
        self.iterate_guarded(x0, k, Direction::Forward, T::lit(DEFAULT_DIVERGENCE_RADIUS))
    }

    pub fn iterate_back(&self, x0: &StatePoint<T>, k: usize) -> Result<Trajectory<T>, DynamicsError> {
        if !self.has_inverse() {
            return Err(DynamicsError::NoInverse(self.name().to_string()));
        }
        Ok(self.iterate_guarded(x0, k, Direction::Backward, T::lit(DEFAULT_DIVERGENCE_RADIUS)))
    }

    /// Iteration with an explicit direction and divergence guard. A guard
    /// crossing on the final requested step still counts as completed.
    pub fn iterate_guarded(
        &self,
        x0: &StatePoint<T>,
        k: usize,
        direction: Direction,
        divergence_radius: T,
    ) -> Trajectory<T> {
        let mut orbit = Orbit::new(self, x0.clone(), direction, divergence_radius);
        let mut points = Vec::with_capacity(k + 1);
        points.push(x0.clone());
        let mut termination = Termination::Completed;
        for step in 1..=k {
            match orbit.advance() {
                Ok(p) => points.push(p.clone()),
                Err(t) => {
                    termination = t;
                    break;
                }
            }
            if orbit.has_diverged() && step < k {
                termination = Termination::Diverged;
                break;
            }
        }
        Trajectory { steps_taken: points.len() - 1, points, direction, termination }
    }

    /// `f^burn(x0), ..., f^(burn+n-1)(x0)`, or fewer points with the cause.
    pub fn orbit_tail(&self, x0: &StatePoint<T>, burn: usize, n: usize) -> Tail<T> {
        self.orbit_tail_guarded(x0, burn, n, Direction::Forward, T::lit(DEFAULT_DIVERGENCE_RADIUS))
    }

    pub fn orbit_tail_guarded(
        &self,
        x0: &StatePoint<T>,
        burn: usize,
        n: usize,
        direction: Direction,
        divergence_radius: T,
    ) -> Tail<T> {
        let mut orbit = Orbit::new(self, x0.clone(), direction, divergence_radius);
        let mut max_norm = x0.norm();
        let mut points = Vec::with_capacity(n);
        let total = burn + n;
        for k in 0..total {
            if k > 0 {
                match orbit.advance() {
                    Ok(p) => max_norm = max_norm.max(p.norm()),
                    Err(t) => return Tail { points, termination: t, max_norm },
                }
            }
            if k >= burn {
                points.push(orbit.current().clone());
            }
            if orbit.has_diverged() && k + 1 < total {
                return Tail { points, termination: Termination::Diverged, max_norm };
            }
        }
        Tail { points, termination: Termination::Completed, max_norm }
    }
}
