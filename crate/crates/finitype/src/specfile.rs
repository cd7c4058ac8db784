//! JSON description of an IFS with probabilities and analysis options.
//!
//! ```json
//! {
//!   "field": {"minpoly": ["-1", "1", "1"], "root_interval": ["3/5", "2/3"]},
//!   "maps": [{"r": ["0", "1"], "d": ["0"]}, {"r": ["0", "1"], "d": ["1", "-1"]}],
//!   "probs": ["param", "one_minus_sum"],
//!   "options": {"max_cycle_len": 8}
//! }
//! ```
//!
//! Coefficients are listed lowest degree first; a bare string is accepted
//! for a rational constant. One probability may be the token `"param"`, and
//! one may be `"one_minus_sum"`, the complement of the others.

use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{AffineMap, Ifs};
use crate::numberfield::{parse_rational, FieldElement, NumberField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub minpoly: Vec<String>,
    pub root_interval: (String, String),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
}

/// A field element written as a coefficient list or a single rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeffs {
    List(Vec<String>),
    Scalar(String),
}

impl Coeffs {
    fn parse(&self, field: &NumberField) -> Result<FieldElement> {
        match self {
            Coeffs::List(c) => Ok(field.parse_element(c)?),
            Coeffs::Scalar(s) => Ok(field.rational(parse_rational(s)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub r: Coeffs,
    pub d: Coeffs,
}

/// Probability slot: a value, `"param"` or `"one_minus_sum"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbSpec {
    List(Vec<String>),
    Token(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_max_vectors")]
    pub max_vectors: usize,
    #[serde(default = "default_max_cycle_len")]
    pub max_cycle_len: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    /// Value used for the `"param"` slot when none is given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_value: Option<String>,
}

fn default_max_vectors() -> usize {
    10_000
}
fn default_max_cycle_len() -> usize {
    8
}
fn default_tolerance() -> f64 {
    1e-12
}
fn default_n_max() -> usize {
    6
}
fn default_m_max() -> usize {
    4
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_vectors: default_max_vectors(),
            max_cycle_len: default_max_cycle_len(),
            tolerance: default_tolerance(),
            n_max: default_n_max(),
            m_max: default_m_max(),
            param_value: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub field: FieldSpec,
    pub maps: Vec<MapSpec>,
    pub probs: Vec<ProbSpec>,
    #[serde(default)]
    pub options: Options,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<SpecFile> {
        let spec: SpecFile = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        spec.check_tokens()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec(format!("cannot read {}: {e}", path.display())))?;
        SpecFile::from_json(&text)
    }

    fn check_tokens(&self) -> Result<()> {
        let mut params = 0;
        let mut rest = 0;
        for p in &self.probs {
            if let ProbSpec::Token(t) = p {
                match t.as_str() {
                    "param" => params += 1,
                    "one_minus_sum" => rest += 1,
                    _ => {
                        // a bare rational is allowed too
                        parse_rational(t).map_err(|_| {
                            Error::Spec(format!(
                                "probability entry {t:?} is neither a number, \"param\" nor \"one_minus_sum\""
                            ))
                        })?;
                    }
                }
            }
        }
        if params > 1 {
            return Err(Error::Spec("at most one probability may be \"param\"".into()));
        }
        if rest > 1 {
            return Err(Error::Spec("at most one probability may be \"one_minus_sum\"".into()));
        }
        Ok(())
    }

    pub fn has_param(&self) -> bool {
        self.probs
            .iter()
            .any(|p| matches!(p, ProbSpec::Token(t) if t == "param"))
    }

    pub fn number_field(&self) -> Result<NumberField> {
        let f = &self.field;
        let field = NumberField::from_strings(&f.minpoly, (&f.root_interval.0, &f.root_interval.1))?;
        Ok(match &f.symbol {
            Some(s) => field.with_symbol(s),
            None if field.degree() > 1 => field.with_symbol("r"),
            None => field,
        })
    }

    /// The parameter value to use: the explicit one, else `options.param_value`.
    pub fn resolve_param(&self, explicit: Option<&BigRational>) -> Result<Option<BigRational>> {
        if !self.has_param() {
            return Ok(None);
        }
        if let Some(p) = explicit {
            return Ok(Some(p.clone()));
        }
        match &self.options.param_value {
            Some(s) => Ok(Some(parse_rational(s)?)),
            None => Err(Error::Spec(
                "the spec has a \"param\" probability; pass --param or set options.param_value".into(),
            )),
        }
    }

    /// Builds the IFS, substituting `param` for the `"param"` slot.
    pub fn ifs(&self, param: Option<&BigRational>) -> Result<Ifs> {
        let field = self.number_field()?;
        let maps = self
            .maps
            .iter()
            .map(|m| {
                Ok(AffineMap {
                    r: m.r.parse(&field)?,
                    t: m.d.parse(&field)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let param = self.resolve_param(param)?;
        let mut probs: Vec<Option<FieldElement>> = Vec::with_capacity(self.probs.len());
        for p in &self.probs {
            probs.push(match p {
                ProbSpec::List(c) => Some(field.parse_element(c)?),
                ProbSpec::Token(t) if t == "param" => {
                    Some(field.rational(param.clone().expect("resolved above")))
                }
                ProbSpec::Token(t) if t == "one_minus_sum" => None,
                ProbSpec::Token(t) => Some(field.rational(parse_rational(t)?)),
            });
        }
        let known = probs
            .iter()
            .flatten()
            .fold(field.zero(), |acc, p| acc + p);
        let probs: Vec<FieldElement> = probs
            .into_iter()
            .map(|p| p.unwrap_or_else(|| field.one() - &known))
            .collect();
        Ok(Ifs::new(field, maps, probs)?)
    }
}
