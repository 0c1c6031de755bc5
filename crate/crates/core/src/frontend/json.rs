//! The JSON system document.
//!
//! ```json
//! {
//!   "m": 1,
//!   "n": 1,
//!   "base": { "generators": ["t"], "derivations": [{ "t": "1" }, { "t": "0" }] },
//!   "polys": ["x1 - t"],
//!   "matrix": [["0", "1"], ["1", "0"]],
//!   "point": ["t"],
//!   "companion": ["1"],
//!   "w": ["x1 - t", "y1 - 1"]
//! }
//! ```
//!
//! `derivations` lists the `m + 1` basis derivations, `D` last, each as a
//! map from generator name to its image. Missing entries are zero and an
//! empty list means every derivation is zero. Every exact value is a string.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rational::{format_rational, parse_rational};
use crate::arith::Coeff;
use crate::base_field::{BaseElem, BaseField, BaseFieldError};
use crate::delta::{DeltaPoly, DeltaRing};
use crate::transform::{RationalMatrix, TransformError};

use super::parse::{parse_base_elem, parse_poly, ParseContext, ParseError};
use super::print::{print_base_elem, print_poly};

/// Largest `m` or `n` a document may declare.
pub const MAX_DIMENSION: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFieldSpec {
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub derivations: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub base: BaseFieldSpec,
    #[serde(default)]
    pub polys: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub companion: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w: Vec<String>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {error}")]
    Parse { field: String, error: ParseError },
    #[error("base field: {0}")]
    Field(#[from] BaseFieldError),
    #[error("matrix: {0}")]
    Matrix(#[from] TransformError),
    #[error("{0}")]
    Shape(String),
}

/// A document resolved against its base field.
#[derive(Clone, Debug)]
pub struct System {
    pub field: Arc<BaseField>,
    pub ring: DeltaRing,
    pub polys: Vec<DeltaPoly>,
    pub matrix: Option<RationalMatrix>,
    pub point: Option<Vec<BaseElem>>,
    pub companion: Option<Vec<BaseElem>>,
    pub w: Vec<DeltaPoly>,
}

impl System {
    pub fn generators(&self) -> &[String] {
        self.field.generators()
    }

    pub fn parse_context(&self) -> ParseContext<'_> {
        ParseContext::new(self.field.generators(), self.ring.n(), self.ring.m())
    }

    pub fn parse_poly(&self, text: &str) -> Result<DeltaPoly, ParseError> {
        parse_poly(text, self.parse_context())
    }

    pub fn print(&self, f: &DeltaPoly) -> String {
        print_poly(f, self.generators())
    }

    pub fn print_elem(&self, e: &BaseElem) -> String {
        print_base_elem(e, self.generators())
    }
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn base_field(&self) -> Result<BaseField, DocumentError> {
        let names = &self.base.generators;
        let count = self.m + 1;
        let tables = if self.base.derivations.is_empty() {
            vec![vec![BaseElem::zero(); names.len()]; count]
        } else {
            if self.base.derivations.len() != count {
                return Err(DocumentError::Shape(format!(
                    "base.derivations has {} entries, expected m + 1 = {count}",
                    self.base.derivations.len()
                )));
            }
            let mut tables = Vec::with_capacity(count);
            for (d, map) in self.base.derivations.iter().enumerate() {
                if let Some(unknown) = map.keys().find(|k| !names.contains(k)) {
                    return Err(DocumentError::Shape(format!("base.derivations[{d}]: unknown generator {unknown:?}")));
                }
                let row = names
                    .iter()
                    .map(|g| match map.get(g) {
                        Some(text) => parse_base_elem(text, names)
                            .map_err(|error| DocumentError::Parse { field: format!("base.derivations[{d}].{g}"), error }),
                        None => Ok(BaseElem::zero()),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                tables.push(row);
            }
            tables
        };
        Ok(BaseField::new(names.clone(), tables)?)
    }

    pub fn resolve(&self) -> Result<System, DocumentError> {
        if self.m > MAX_DIMENSION || self.n > MAX_DIMENSION {
            return Err(DocumentError::Shape(format!("m and n must not exceed {MAX_DIMENSION}")));
        }
        let field = Arc::new(self.base_field()?);
        let ring = DeltaRing::new(field.clone(), self.n);
        let names = field.generators();
        let ctx = ParseContext::new(names, self.n, self.m);
        let polys = parse_list("polys", &self.polys, |t| parse_poly(t, ctx))?;
        let w = parse_list("w", &self.w, |t| parse_poly(t, ctx))?;
        let elems = |field: &str, list: &Option<Vec<String>>| -> Result<Option<Vec<BaseElem>>, DocumentError> {
            let Some(list) = list else { return Ok(None) };
            if list.len() != self.n {
                return Err(DocumentError::Shape(format!("{field} has {} entries, expected n = {}", list.len(), self.n)));
            }
            parse_list(field, list, |t| parse_base_elem(t, names)).map(Some)
        };
        let point = elems("point", &self.point)?;
        let companion = elems("companion", &self.companion)?;
        let matrix = match &self.matrix {
            Some(rows) => Some(matrix_from_strings(rows)?),
            None => None,
        };
        Ok(System { field: field.clone(), ring, polys, matrix, point, companion, w })
    }
}

fn parse_list<T>(
    field: &str,
    items: &[String],
    parse: impl Fn(&str) -> Result<T, ParseError>,
) -> Result<Vec<T>, DocumentError> {
    items
        .iter()
        .enumerate()
        .map(|(i, t)| parse(t).map_err(|error| DocumentError::Parse { field: format!("{field}[{i}]"), error }))
        .collect()
}

pub fn matrix_from_strings(rows: &[Vec<String>]) -> Result<RationalMatrix, DocumentError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| {
                    parse_rational(s.trim())
                        .ok_or_else(|| DocumentError::Shape(format!("matrix[{i}][{j}]: not a rational: {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RationalMatrix::new(parsed)?)
}

pub fn matrix_to_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect()
}

/// Reads the compact form `a,b;c,d`.
pub fn parse_matrix(text: &str) -> Result<RationalMatrix, DocumentError> {
    let rows: Vec<Vec<String>> =
        text.split(';').map(|r| r.split(',').map(|s| s.trim().to_string()).collect()).collect();
    matrix_from_strings(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::prolong::tau;

    const SAMPLE: &str = r#"{
        "m": 1, "n": 1,
        "base": { "generators": ["t"], "derivations": [{ "t": "1" }, { "t": "1" }] },
        "polys": ["x1 - t", "d1 x1 - 1"],
        "matrix": [["1", "0"], ["1/2", "1"]],
        "point": ["t"]
    }"#;

    #[test]
    fn resolve_sample() {
        let doc = SystemDocument::from_json(SAMPLE).unwrap();
        let sys = doc.resolve().unwrap();
        assert_eq!(sys.polys.len(), 2);
        assert_eq!(sys.print(&tau(&sys.ring, &sys.polys[0])), "-1 + y1");
        assert_eq!(sys.matrix.as_ref().unwrap().to_string(), "1,0;1/2,1");
        assert_eq!(sys.point.as_ref().unwrap()[0], BaseElem::generator(0));
        let back = SystemDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn defaults_and_errors() {
        let sys = SystemDocument::from_json(r#"{"m": 2, "n": 1, "polys": ["d2 x1"]}"#).unwrap().resolve().unwrap();
        assert_eq!(sys.field.num_derivations(), 3);
        assert!(SystemDocument::from_json(r#"{"m": 1, "n": 1, "extra": 1}"#).is_err());
        let bad = SystemDocument::from_json(r#"{"m": 1, "n": 1, "polys": ["d2 x1"]}"#).unwrap();
        assert!(matches!(bad.resolve(), Err(DocumentError::Parse { .. })));
        let bad = SystemDocument::from_json(r#"{"m": 1, "n": 1, "point": ["1", "2"]}"#).unwrap();
        assert!(matches!(bad.resolve(), Err(DocumentError::Shape(_))));
        let noncommuting = r#"{"m": 1, "n": 1, "base": {"generators": ["a", "b"],
            "derivations": [{"a": "b"}, {"b": "a"}]}}"#;
        assert!(matches!(SystemDocument::from_json(noncommuting).unwrap().resolve(), Err(DocumentError::Field(_))));
    }

    #[test]
    fn compact_matrix() {
        let m = parse_matrix("1, 2; -3/4, 0").unwrap();
        assert_eq!(m.get(1, 0), &(int(-3) / int(4)));
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x").is_err());
        assert_eq!(matrix_to_strings(&m), vec![vec!["1", "2"], vec!["-3/4", "0"]]);
    }
}
