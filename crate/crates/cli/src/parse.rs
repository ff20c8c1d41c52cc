//! Text formats accepted on the command line.

use crate::error::CliError;
use limitlab_core::dynamics::{AxisBounds, DomainRegion, Endpoint};
use limitlab_core::lift::DictionarySpec;
use limitlab_core::StatePoint;
use std::collections::BTreeMap;

fn bad_domain(s: &str, why: &str) -> CliError {
    CliError::validation("invalid_domain", format!("cannot parse domain '{s}': {why}"))
}

fn number(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// One interval such as `[-1,1]`, `(-inf,1)` or `[0,3.5)`.
fn axis(s: &str, whole: &str) -> Result<AxisBounds<f64>, CliError> {
    let s = s.trim();
    let (open, close) = (s.chars().next(), s.chars().last());
    let inner = s.get(1..s.len().saturating_sub(1)).ok_or_else(|| bad_domain(whole, "empty interval"))?;
    let (lo, hi) = inner.split_once(',').ok_or_else(|| bad_domain(whole, "interval needs two bounds"))?;
    let (lo, hi) = match (number(lo), number(hi)) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(bad_domain(whole, "bounds must be numbers or +-inf")),
    };
    let lower = match open {
        _ if lo == f64::NEG_INFINITY => Endpoint::Unbounded,
        Some('[') => Endpoint::Closed(lo),
        Some('(') => Endpoint::Open(lo),
        _ => return Err(bad_domain(whole, "intervals open with '[' or '('")),
    };
    let upper = match close {
        _ if hi == f64::INFINITY => Endpoint::Unbounded,
        Some(']') => Endpoint::Closed(hi),
        Some(')') => Endpoint::Open(hi),
        _ => return Err(bad_domain(whole, "intervals close with ']' or ')'")),
    };
    Ok(AxisBounds { lower, upper })
}

/// Domains: `R^n`, a product of intervals `[a,b]x(c,d]`, or
/// `annulus[r0,r1]` (radii, in the dimension of the system).
pub fn domain(s: &str, dim: usize) -> Result<DomainRegion<f64>, CliError> {
    let t = s.trim();
    let region = if let Some(n) = t.strip_prefix("R^") {
        let n: usize = n.parse().map_err(|_| bad_domain(s, "expected R^<dim>"))?;
        DomainRegion::full_space(n)
    } else if t == "R" {
        DomainRegion::full_space(1)
    } else if let Some(radii) = t.strip_prefix("annulus") {
        let b = axis(radii, s)?;
        DomainRegion::annulus(dim, b.lower, b.upper)?
    } else {
        let axes = t.split(['x', '×']).map(|a| axis(a, s)).collect::<Result<Vec<_>, _>>()?;
        if axes.len() == 1 {
            DomainRegion::interval(axes[0].lower, axes[0].upper)?
        } else {
            DomainRegion::boxed(axes)?
        }
    };
    if region.dim() != dim {
        return Err(bad_domain(s, &format!("has dimension {}, the system has {dim}", region.dim())));
    }
    Ok(region)
}

/// Comma-separated coordinates, e.g. `2,0`.
pub fn point(s: &str, dim: usize) -> Result<StatePoint, CliError> {
    let bad = |why: &str| CliError::validation("invalid_point", format!("cannot parse point '{s}': {why}"));
    let coords = s.split(',').map(|c| c.trim().parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("not a number"))?;
    if coords.len() != dim {
        return Err(bad(&format!("expected {dim} coordinates")));
    }
    StatePoint::new(coords).map_err(|e| bad(&e.to_string()))
}

/// Semicolon-separated points.
pub fn points(s: &str, dim: usize) -> Result<Vec<StatePoint>, CliError> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(|p| point(p, dim)).collect()
}

/// `key=value` pairs with numeric values.
pub fn key_values(pairs: &[String], code: &'static str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::validation(code, format!("expected key=value, got '{pair}'")))?;
        let v: f64 = number(v).ok_or_else(|| CliError::validation(code, format!("'{v}' is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn range(s: &str, whole: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::validation("invalid_dictionary", format!("cannot parse dictionary '{whole}'"));
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let v = s.parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Dictionaries: comma-separated `fourier:N`, `monomial:N`,
/// `rational-pole:POLE:N`, where `N` may be a range `a-b`.
pub fn dictionaries(s: &str) -> Result<Vec<DictionarySpec<f64>>, CliError> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            ["fourier", n] => out.extend(range(n, item)?.into_iter().map(|j| DictionarySpec::Fourier { max_frequency: j })),
            ["monomial", n] => out.extend(range(n, item)?.into_iter().map(|d| DictionarySpec::Monomial { max_degree: d })),
            ["rational-pole", pole, n] => {
                let pole = number(pole)
                    .filter(|p| p.is_finite())
                    .ok_or_else(|| CliError::validation("invalid_dictionary", format!("bad pole in '{item}'")))?;
                out.extend(range(n, item)?.into_iter().map(|p| DictionarySpec::RationalPole { pole, max_power: p }));
            }
            _ => {
                return Err(CliError::validation(
                    "invalid_dictionary",
                    format!("unknown dictionary '{item}'; use fourier:N, monomial:N or rational-pole:POLE:N"),
                ))
            }
        }
    }
    Ok(out)
}

/// Comma-separated ridge values.
pub fn ridges(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|r| {
            number(r)
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| CliError::validation("invalid_ridge", format!("ridge '{r}' must be a finite number >= 0")))
        })
        .collect()
}
