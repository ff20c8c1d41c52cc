use crate::scalar::Real;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

use super::LiftError;

/// Largest accepted monomial degree or Fourier frequency.
pub const MAX_ORDER: usize = 32;

pub type BasisFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// A named scalar feature for custom dictionaries.
#[derive(Clone)]
pub struct BasisFunction<T: Real> {
    pub name: String,
    pub eval: BasisFn<T>,
}

impl<T: Real> BasisFunction<T> {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
    {
        Self { name: name.into(), eval: Arc::new(eval) }
    }
}

#[derive(Clone)]
pub enum DictionarySpec<T: Real> {
    Monomial { max_degree: usize },
    Fourier { max_frequency: usize },
    /// Powers `r, r^2, ...` of `r = (x + pole) / (x - pole)` on every axis.
    RationalPole { pole: T, max_power: usize },
    Custom(Vec<BasisFunction<T>>),
}

impl<T: Real> fmt::Debug for DictionarySpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Monomial { max_degree } => write!(f, "Monomial({max_degree})"),
            Self::Fourier { max_frequency } => write!(f, "Fourier({max_frequency})"),
            Self::RationalPole { pole, max_power } => write!(f, "RationalPole({pole}, {max_power})"),
            Self::Custom(fns) => write!(f, "Custom({})", fns.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictionaryKind {
    Monomial,
    Fourier,
    RationalPole,
    Custom,
}

impl fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Monomial => "monomial",
            Self::Fourier => "fourier",
            Self::RationalPole => "rational-pole",
            Self::Custom => "custom",
        })
    }
}

#[derive(Clone)]
enum Feature<T: Real> {
    Constant,
    Monomial(Vec<u32>),
    Cos { axis: usize, freq: u32 },
    Sin { axis: usize, freq: u32 },
    PolePower { axis: usize, pole: T, power: i32 },
    Custom(BasisFn<T>),
}

impl<T: Real> Feature<T> {
    fn eval(&self, x: &[T]) -> T {
        match self {
            Self::Constant => T::one(),
            Self::Monomial(exps) => exps.iter().zip(x).fold(T::one(), |acc, (&e, &v)| acc * v.powi(e as i32)),
            Self::Cos { axis, freq } => (x[*axis] * T::from_u32(*freq).expect("small integer")).cos(),
            Self::Sin { axis, freq } => (x[*axis] * T::from_u32(*freq).expect("small integer")).sin(),
            Self::PolePower { axis, pole, power } => ((x[*axis] + *pole) / (x[*axis] - *pole)).powi(*power),
            Self::Custom(f) => f(x),
        }
    }
}

/// Ordered list of scalar features `Psi(x)`.
#[derive(Clone)]
pub struct Dictionary<T: Real> {
    kind: DictionaryKind,
    dim_in: usize,
    include_constant: bool,
    names: Vec<String>,
    features: Vec<Feature<T>>,
}

impl<T: Real> fmt::Debug for Dictionary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dictionary").field("kind", &self.kind).field("names", &self.names).finish()
    }
}

impl<T: Real> Dictionary<T> {
    pub fn kind(&self) -> DictionaryKind {
        self.kind
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.features.len()
    }

    pub fn include_constant(&self) -> bool {
        self.include_constant
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn eval(&self, x: &[T]) -> Vec<T> {
        self.features.iter().map(|f| f.eval(x)).collect()
    }
}

fn axis_name(dim_in: usize, axis: usize) -> String {
    if dim_in == 1 {
        "x".into()
    } else {
        format!("x{}", axis + 1)
    }
}

/// Exponent vectors of total degree `d`, in descending lexicographic order.
fn exponents(dim: usize, d: u32) -> Vec<Vec<u32>> {
    if dim == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|first| {
            exponents(dim - 1, d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Builds the ordered feature list: monomials by total degree then
/// lexicographically, Fourier terms `cos(jx), sin(jx)` by ascending `j` per
/// axis, rational-pole powers ascending per axis. The constant, when
/// included, comes first.
pub fn build_dictionary<T: Real>(
    spec: &DictionarySpec<T>,
    dim_in: usize,
    include_constant: bool,
) -> Result<Dictionary<T>, LiftError> {
    if dim_in == 0 {
        return Err(LiftError::InvalidDictionary("input dimension must be positive".into()));
    }
    let mut names = Vec::new();
    let mut features = Vec::new();
    if include_constant {
        names.push("1".to_string());
        features.push(Feature::Constant);
    }
    let kind = match spec {
        DictionarySpec::Monomial { max_degree } => {
            check_order("max degree", *max_degree)?;
            for d in 1..=*max_degree as u32 {
                for e in exponents(dim_in, d) {
                    let name: Vec<String> = e
                        .iter()
                        .enumerate()
                        .filter(|&(_, &p)| p > 0)
                        .map(|(a, &p)| if p == 1 { axis_name(dim_in, a) } else { format!("{}^{p}", axis_name(dim_in, a)) })
                        .collect();
                    names.push(name.join("*"));
                    features.push(Feature::Monomial(e));
                }
            }
            DictionaryKind::Monomial
        }
        DictionarySpec::Fourier { max_frequency } => {
            check_order("max frequency", *max_frequency)?;
            for axis in 0..dim_in {
                let x = axis_name(dim_in, axis);
                for j in 1..=*max_frequency as u32 {
                    let arg = if j == 1 { x.clone() } else { format!("{j}{x}") };
                    names.push(format!("cos({arg})"));
                    features.push(Feature::Cos { axis, freq: j });
                    names.push(format!("sin({arg})"));
                    features.push(Feature::Sin { axis, freq: j });
                }
            }
            DictionaryKind::Fourier
        }
        DictionarySpec::RationalPole { pole, max_power } => {
            check_order("max power", *max_power)?;
            if !pole.is_finite() {
                return Err(LiftError::InvalidDictionary("pole must be finite".into()));
            }
            for axis in 0..dim_in {
                let x = axis_name(dim_in, axis);
                for power in 1..=*max_power as i32 {
                    let base = format!("(({x}+{pole})/({x}-{pole}))");
                    names.push(if power == 1 { base } else { format!("{base}^{power}") });
                    features.push(Feature::PolePower { axis, pole: *pole, power });
                }
            }
            DictionaryKind::RationalPole
        }
        DictionarySpec::Custom(fns) => {
            for f in fns {
                names.push(f.name.clone());
                features.push(Feature::Custom(f.eval.clone()));
            }
            DictionaryKind::Custom
        }
    };
    if features.is_empty() {
        return Err(LiftError::InvalidDictionary("dictionary has no functions".into()));
    }
    Ok(Dictionary { kind, dim_in, include_constant, names, features })
}

fn check_order(what: &str, order: usize) -> Result<(), LiftError> {
    if order > MAX_ORDER {
        return Err(LiftError::InvalidDictionary(format!("{what} {order} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order() {
        let d = build_dictionary::<f64>(&DictionarySpec::Monomial { max_degree: 2 }, 1, true).unwrap();
        assert_eq!(d.names(), &["1", "x", "x^2"]);
        assert_eq!(d.eval(&[3.0]), vec![1.0, 3.0, 9.0]);
        let d = build_dictionary::<f64>(&DictionarySpec::Monomial { max_degree: 2 }, 2, false).unwrap();
        assert_eq!(d.names(), &["x1", "x2", "x1^2", "x1*x2", "x2^2"]);
    }

    #[test]
    fn fourier_order() {
        let d = build_dictionary::<f64>(&DictionarySpec::Fourier { max_frequency: 2 }, 1, false).unwrap();
        assert_eq!(d.names(), &["cos(x)", "sin(x)", "cos(2x)", "sin(2x)"]);
        assert_eq!(d.dim_out(), 4);
    }

    #[test]
    fn rational_pole_contains_the_mobius_lift() {
        let d = build_dictionary(&DictionarySpec::RationalPole { pole: 1.0, max_power: 1 }, 1, false).unwrap();
        assert_eq!(d.eval(&[0.0]), vec![-1.0]);
        assert_eq!(d.names(), &["((x+1)/(x-1))"]);
    }

    #[test]
    fn rejects_high_orders() {
        assert!(build_dictionary::<f64>(&DictionarySpec::Fourier { max_frequency: 33 }, 1, false).is_err());
        assert!(build_dictionary::<f64>(&DictionarySpec::Custom(vec![]), 1, false).is_err());
    }
}
