//! JSON problem descriptors.

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use poisson_forge::bracket::{PoissonStructure, SkewParamMatrix};
use poisson_forge::groebner::MonomialOrder;
use poisson_forge::poly::{parse_scalar, LaurentPoly, Scalar, VarContext};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bracket,
    Simple,
    Center,
    MorphismCheck,
    Classify,
    DixmierAssert,
    Singular,
    Grading,
    Valuation,
    AdClosure,
    Closure,
    GrCheck,
    AutBound,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDescriptor {
    pub command: Command,
    #[serde(default)]
    pub structure: Option<StructureDescriptor>,
    #[serde(default)]
    pub operands: Option<Value>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub degree_bound: Option<u32>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub order: Option<String>,
}

impl Options {
    /// Fields set in `other` win.
    pub fn overridden_by(&self, other: &Options) -> Options {
        Options {
            degree_bound: other.degree_bound.or(self.degree_bound),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            order: other.order.clone().or_else(|| self.order.clone()),
        }
    }
}

/// A matrix entry: an integer, or a string such as `"1/2"` or `"q"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn scalar(&self, params: &[String]) -> Result<Scalar, CliError> {
        match self {
            Entry::Int(k) => Ok(Scalar::from(*k)),
            Entry::Text(s) => {
                parse_scalar(s, params).map_err(|e| CliError::input(format!("entry {s:?}: {e}")))
            }
        }
    }

    fn rational(&self) -> Result<BigRational, CliError> {
        self.scalar(&[])?
            .as_rational()
            .cloned()
            .ok_or_else(|| CliError::input("expected a rational number"))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StructureDescriptor {
    Torus {
        n: usize,
        lambda: Vec<Vec<Entry>>,
        #[serde(default)]
        params: Vec<String>,
    },
    SkewPoly {
        n: usize,
        lambda: Vec<Vec<Entry>>,
        #[serde(default)]
        params: Vec<String>,
    },
    Potential {
        omega: String,
    },
    PotentialQuotient {
        omega: String,
        xi: Entry,
        #[serde(default)]
        order: Option<String>,
    },
    Weyl {
        n: usize,
        #[serde(default)]
        laurent_x: bool,
    },
    Tensor {
        factors: Vec<StructureDescriptor>,
    },
}

fn skew(n: usize, lambda: &[Vec<Entry>], params: &[String]) -> Result<SkewParamMatrix, CliError> {
    if lambda.len() != n || lambda.iter().any(|r| r.len() != n) {
        return Err(CliError::input(format!("lambda must be a {n}x{n} matrix")));
    }
    let rows = lambda
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| e.scalar(params))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SkewParamMatrix::new(rows)?)
}

fn potential_omega(src: &str) -> Result<LaurentPoly, CliError> {
    VarContext::named(&["x", "y", "z"])
        .parse(src)
        .map_err(|e| CliError::input(format!("omega {src:?}: {e}")))
}

pub fn parse_order(name: &str) -> Result<MonomialOrder, CliError> {
    MonomialOrder::parse(name).map_err(|e| CliError::input(e.to_string()))
}

impl StructureDescriptor {
    /// Validated structure; `default_order` applies to quotients without
    /// an explicit order.
    pub fn build(&self, default_order: &MonomialOrder) -> Result<PoissonStructure, CliError> {
        Ok(match self {
            StructureDescriptor::Torus { n, lambda, params } => {
                PoissonStructure::torus(skew(*n, lambda, params)?)?
            }
            StructureDescriptor::SkewPoly { n, lambda, params } => {
                PoissonStructure::skew_poly(skew(*n, lambda, params)?)?
            }
            StructureDescriptor::Potential { omega } => {
                PoissonStructure::potential(potential_omega(omega)?)?
            }
            StructureDescriptor::PotentialQuotient { omega, xi, order } => {
                let order = match order {
                    Some(o) => parse_order(o)?,
                    None => default_order.clone(),
                };
                PoissonStructure::potential_quotient(
                    potential_omega(omega)?,
                    xi.rational()?,
                    order,
                )?
            }
            StructureDescriptor::Weyl {
                n,
                laurent_x: false,
            } => PoissonStructure::weyl(*n)?,
            StructureDescriptor::Weyl { n, laurent_x: true } => {
                PoissonStructure::weyl_laurent_x(*n)?
            }
            StructureDescriptor::Tensor { factors } => PoissonStructure::tensor(
                factors
                    .iter()
                    .map(|f| f.build(default_order))
                    .collect::<Result<_, _>>()?,
            )?,
        })
    }
}

pub fn parse_descriptor(src: &str) -> Result<ProblemDescriptor, CliError> {
    let de = &mut serde_json::Deserializer::from_str(src);
    serde_path_to_error::deserialize(de).map_err(|e| schema_error("", e))
}

/// Deserializes a command's operands, reporting the JSON path on failure.
pub fn operands<T: DeserializeOwned>(v: Option<&Value>) -> Result<T, CliError> {
    let v = v
        .cloned()
        .unwrap_or_else(|| Value::Object(Default::default()));
    serde_path_to_error::deserialize(v).map_err(|e| schema_error("operands", e))
}

fn schema_error<E: std::fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> CliError {
    let path = e.path().to_string();
    let path = match (prefix, path.as_str()) {
        ("", p) => p.to_string(),
        (pre, ".") => pre.to_string(),
        (pre, p) => format!("{pre}.{p}"),
    };
    CliError::input(format!("schema error at {path}: {}", e.inner()))
}
