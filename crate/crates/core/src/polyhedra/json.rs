//! JSON encoding of constructible sets:
//! `{"n": 2, "cells": [{"constraints": [{"coeffs": ["1/2", "0"], "const": "0", "rel": "GE"}]}]}`.

use serde::{Deserialize, Serialize};

use super::types::{AffineForm, BasicCell, Constraint, ConstructibleSet, Relation};
use crate::error::{Error, Result};
use crate::rat::{serde_rat, serde_rat_vec, Rat};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintJson {
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(rename = "const", with = "serde_rat", default = "zero")]
    pub constant: Rat,
    pub rel: Relation,
}

fn zero() -> Rat {
    Rat::from_integer(0.into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellJson {
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetJson {
    pub n: usize,
    pub cells: Vec<CellJson>,
}

impl From<&ConstructibleSet> for SetJson {
    fn from(s: &ConstructibleSet) -> Self {
        SetJson {
            n: s.ambient_dim,
            cells: s
                .cells
                .iter()
                .map(|c| CellJson {
                    constraints: c
                        .constraints
                        .iter()
                        .map(|k| ConstraintJson {
                            coeffs: k.form.coeffs.clone(),
                            constant: k.form.constant.clone(),
                            rel: k.rel,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl SetJson {
    /// Validates dimensions; errors carry a JSON-pointer to the offending field
    /// relative to `base`.
    pub fn to_set_at(&self, base: &str) -> Result<ConstructibleSet> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, cell) in self.cells.iter().enumerate() {
            let mut constraints = Vec::with_capacity(cell.constraints.len());
            for (j, c) in cell.constraints.iter().enumerate() {
                if c.coeffs.len() != self.n {
                    return Err(Error::Invalid(format!(
                        "{base}/cells/{i}/constraints/{j}/coeffs: expected {} coefficients, found {}",
                        self.n,
                        c.coeffs.len()
                    )));
                }
                constraints.push(Constraint::new(AffineForm::new(c.coeffs.clone(), c.constant.clone()), c.rel));
            }
            cells.push(BasicCell { ambient_dim: self.n, constraints });
        }
        Ok(ConstructibleSet { ambient_dim: self.n, cells })
    }

    pub fn to_set(&self) -> Result<ConstructibleSet> {
        self.to_set_at("")
    }
}

pub fn set_to_json(s: &ConstructibleSet) -> String {
    serde_json::to_string(&SetJson::from(s)).expect("sets always serialize")
}

pub fn set_from_json(v: &str) -> Result<ConstructibleSet> {
    let raw: SetJson = serde_json::from_str(v).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_set()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let text = r#"{"n":2,"cells":[{"constraints":[{"coeffs":["1/2","-3"],"const":"7/9","rel":"GT"},{"coeffs":["0","1"],"const":"0","rel":"EQ"}]}]}"#;
        let set = set_from_json(text).unwrap();
        assert_eq!(set_to_json(&set), text);
    }

    #[test]
    fn wrong_arity_names_the_field() {
        let text = r#"{"n":2,"cells":[{"constraints":[{"coeffs":["1"],"const":"0","rel":"GE"}]}]}"#;
        let err = set_from_json(text).unwrap_err().to_string();
        assert!(err.contains("/cells/0/constraints/0/coeffs"), "{err}");
    }
}
