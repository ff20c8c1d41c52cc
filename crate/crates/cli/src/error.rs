use limitlab_core::catalog::CatalogError;
use limitlab_core::dynamics::{DomainError, DynamicsError};
use limitlab_core::immersion::ImmersionError;
use limitlab_core::lift::LiftError;
use limitlab_core::limits::LimitError;
use serde::Serialize;
use std::fmt;

/// Exit status for bad input: arguments, names, domains, missing files.
pub const EXIT_VALIDATION: i32 = 2;
/// Exit status for numeric failures: singular fits, undefined immersions,
/// failed golden checks.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Validation,
    Numeric,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: Kind,
    pub code: &'static str,
    pub message: String,
    pub point: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    schema: &'static str,
    error: &'a str,
    message: &'a str,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<&'a [f64]>,
}

impl CliError {
    pub fn validation(code: &'static str, message: impl Into<String>) -> Self {
        Self { kind: Kind::Validation, code, message: message.into(), point: None }
    }

    pub fn numeric(code: &'static str, message: impl Into<String>) -> Self {
        Self { kind: Kind::Numeric, code, message: message.into(), point: None }
    }

    /// `F` has no value at `point`.
    pub fn undefined_at(point: &[f64], why: impl fmt::Display) -> Self {
        let coords: Vec<String> = point.iter().map(|v| format!("{v:?}")).collect();
        Self {
            kind: Kind::Numeric,
            code: "immersion_undefined",
            message: format!("immersion_undefined_at={} ({why})", coords.join(",")),
            point: Some(point.to_vec()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Validation => EXIT_VALIDATION,
            Kind::Numeric => EXIT_NUMERIC,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson {
            schema: "limitlab/error/v1",
            error: self.code,
            message: &self.message,
            exit_code: self.exit_code(),
            point: self.point.as_deref(),
        })
        .expect("error JSON serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        let code = match e {
            CatalogError::UnknownSystem(_) => "unknown_system",
            CatalogError::InvalidParam { .. } => "invalid_param",
            CatalogError::NoExactImmersion(_) => "no_exact_immersion",
        };
        Self::validation(code, e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Domain(d) => d.into(),
            DynamicsError::NoInverse(_) => Self::validation("no_inverse", e.to_string()),
            other => Self::validation("invalid_domain", other.to_string()),
        }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        Self::numeric("domain_error", e.to_string())
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::InvalidGrid(_) => Self::validation("invalid_grid", e.to_string()),
            _ => Self::numeric("limit_estimation", e.to_string()),
        }
    }
}

impl From<ImmersionError> for CliError {
    fn from(e: ImmersionError) -> Self {
        match &e {
            ImmersionError::ImmersionUndefined { point, .. } => Self::undefined_at(point, &e),
            ImmersionError::Domain(d) => match d.point() {
                Some(p) => Self::undefined_at(p, d),
                None => Self::validation("dimension_mismatch", e.to_string()),
            },
            ImmersionError::DimensionMismatch(_) => Self::validation("dimension_mismatch", e.to_string()),
            ImmersionError::NoInverse(_) => Self::validation("no_inverse", e.to_string()),
            ImmersionError::NoValidSamples | ImmersionError::Unconverged => {
                Self::numeric("immersion_check", e.to_string())
            }
        }
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        let (kind, code) = match e {
            LiftError::InvalidDictionary(_) => (Kind::Validation, "invalid_dictionary"),
            LiftError::InvalidRidge(_) => (Kind::Validation, "invalid_ridge"),
            LiftError::InvalidDomain(_) => (Kind::Validation, "invalid_domain"),
            LiftError::DimensionMismatch { .. } => (Kind::Validation, "dimension_mismatch"),
            LiftError::InsufficientSamples { .. } => (Kind::Numeric, "insufficient_samples"),
            LiftError::NonFiniteFeatures { .. } => (Kind::Numeric, "non_finite_features"),
            LiftError::SingularGram { .. } => (Kind::Numeric, "singular_gram"),
            LiftError::CountableCatalogExceeded { .. } => (Kind::Numeric, "countable_catalog_exceeded"),
            LiftError::Numeric(_) => (Kind::Numeric, "numeric"),
        };
        Self { kind, code, message: e.to_string(), point: None }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::validation("io", e.to_string())
    }
}
