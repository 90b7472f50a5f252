//! JSON interchange format for algebras.
//!
//! ```json
//! {"field": "Q", "arity": 2, "dimension": 2, "basis": ["1", "b"],
//!  "symmetry": "total",
//!  "products": [{"args": [0, 0], "value": {"0": "1"}}, {"args": [0, 1], "value": {"1": "1"}}]}
//! ```
//!
//! Scalars are strings in canonical form; unlisted products are zero. With
//! `"total"` symmetry one representative per orbit suffices and only sorted
//! index tuples are emitted.

use std::collections::BTreeMap;

use nalg_core::{FieldKind, FieldSpec, NAryAlgebra, SymmetryHint};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDesc {
    /// Only `"Q"` is accepted.
    Named(String),
    Prime {
        prime: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        i: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryDesc {
    None,
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub args: Vec<usize>,
    pub value: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub field: FieldDesc,
    pub arity: usize,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub symmetry: SymmetryDesc,
    pub products: Vec<ProductEntry>,
}

impl FieldDesc {
    pub fn from_field(field: &FieldSpec) -> Self {
        match field.kind() {
            FieldKind::Rationals => FieldDesc::Named("Q".into()),
            FieldKind::Prime(p) => FieldDesc::Prime {
                prime: p,
                i: field.sqrt_minus_one().map(|r| r.to_string()),
            },
        }
    }

    pub fn to_field(&self) -> Result<FieldSpec, CliError> {
        match self {
            FieldDesc::Named(name) if name == "Q" => Ok(FieldSpec::rationals()),
            FieldDesc::Named(name) => Err(CliError::Input(format!("unknown field {name:?}"))),
            FieldDesc::Prime { prime, i } => {
                let f = FieldSpec::prime(*prime)?;
                match i {
                    None => Ok(f),
                    Some(root) => {
                        let r = f.parse_scalar(root)?;
                        Ok(f.with_sqrt_minus_one(r)?)
                    }
                }
            }
        }
    }
}

impl AlgebraFile {
    pub fn from_algebra(alg: &NAryAlgebra) -> Self {
        let total = alg.symmetry() == SymmetryHint::Total;
        let products = alg
            .entries()
            .into_iter()
            .filter(|(t, _)| !total || t.windows(2).all(|w| w[0] <= w[1]))
            .map(|(args, value)| ProductEntry {
                args,
                value: value.into_iter().map(|(k, c)| (k, c.to_string())).collect(),
            })
            .collect();
        AlgebraFile {
            field: FieldDesc::from_field(alg.field()),
            arity: alg.arity(),
            dimension: alg.dim(),
            basis: alg.labels().to_vec(),
            symmetry: if total { SymmetryDesc::Total } else { SymmetryDesc::None },
            products,
        }
    }

    pub fn to_algebra(&self) -> Result<NAryAlgebra, CliError> {
        let field = self.field.to_field()?;
        let entries = self
            .products
            .iter()
            .map(|p| {
                let value = p
                    .value
                    .iter()
                    .map(|(k, s)| Ok((*k, field.parse_scalar(s)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok((p.args.clone(), value))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let hint = match self.symmetry {
            SymmetryDesc::None => SymmetryHint::None,
            SymmetryDesc::Total => SymmetryHint::Total,
        };
        Ok(NAryAlgebra::build(
            &field,
            self.arity,
            self.dimension,
            self.basis.clone(),
            &entries,
            hint,
        )?)
    }

    /// Pretty JSON with one product entry per line.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"field\": {},\n", compact(&self.field)));
        out.push_str(&format!("  \"arity\": {},\n", self.arity));
        out.push_str(&format!("  \"dimension\": {},\n", self.dimension));
        out.push_str(&format!("  \"basis\": {},\n", compact(&self.basis)));
        out.push_str(&format!("  \"symmetry\": {},\n", compact(&self.symmetry)));
        if self.products.is_empty() {
            out.push_str("  \"products\": []\n}");
            return out;
        }
        out.push_str("  \"products\": [\n");
        let lines: Vec<String> = self.products.iter().map(|p| format!("    {}", compact(p))).collect();
        out.push_str(&lines.join(",\n"));
        out.push_str("\n  ]\n}");
        out
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn emit(alg: &NAryAlgebra) -> String {
    AlgebraFile::from_algebra(alg).to_json()
}

pub fn parse(text: &str) -> Result<NAryAlgebra, CliError> {
    AlgebraFile::parse(text)?.to_algebra()
}
