//! The JSON text format for fusion data.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{CategorySpec, IrrId, TableRules};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QdimValue {
    Number(serde_json::Number),
    /// Fractions such as `"5/2"` (exact mode) or decimals written as strings.
    Text(String),
}

impl QdimValue {
    pub fn parse<S: Scalar>(&self) -> Option<S> {
        match self {
            QdimValue::Number(n) => S::parse_scalar(&n.to_string()),
            QdimValue::Text(t) => S::parse_scalar(t),
        }
    }

    pub fn from_scalar<S: Scalar>(x: &S) -> QdimValue {
        if S::EXACT {
            let text = x.render();
            match text.parse::<i64>() {
                Ok(n) => QdimValue::Number(n.into()),
                Err(_) => QdimValue::Text(text),
            }
        } else {
            serde_json::Number::from_f64(x.to_f64_lossy())
                .map(QdimValue::Number)
                .unwrap_or_else(|| QdimValue::Text(x.render()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrrEntry {
    pub label: String,
    pub source: String,
    pub target: String,
    pub dual: String,
    pub qdim: QdimValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, u64>,
}

/// Fusion data as a single document. Omitted fusion entries mean all-zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecDocument {
    #[serde(default)]
    pub exact: bool,
    pub zero_cells: Vec<String>,
    pub irreducibles: Vec<IrrEntry>,
    pub units: BTreeMap<String, String>,
    #[serde(default)]
    pub fusion: Vec<FusionEntry>,
    /// Set when the document is a finite window of an infinite category.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_at_depth: Option<usize>,
}

impl SpecDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec documents always serialize")
    }
}

/// A spec read from a document, in whichever scalar mode it declared.
#[derive(Debug, Clone)]
pub enum AnySpec {
    Exact(CategorySpec<Rational64>),
    Float(CategorySpec<f64>),
}

impl AnySpec {
    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        Ok(if doc.exact {
            AnySpec::Exact(CategorySpec::new(TableRules::<Rational64>::from_document(doc)?))
        } else {
            AnySpec::Float(CategorySpec::new(TableRules::<f64>::from_document(doc)?))
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnySpec::Exact(_))
    }

    pub fn to_float(&self) -> CategorySpec<f64> {
        match self {
            AnySpec::Exact(s) => s.convert(),
            AnySpec::Float(s) => s.clone(),
        }
    }
}

pub(super) fn snapshot<S: Scalar>(spec: &CategorySpec<S>, depth: usize) -> Result<SpecDocument> {
    let window = spec.window(depth);
    let mut fusion = Vec::new();
    let mut mentioned: Vec<IrrId> = window.clone();
    for a in &window {
        for b in &window {
            if a.target() != b.source() {
                continue;
            }
            let row = spec.fuse_pair(a, b)?;
            if row.is_zero() {
                continue;
            }
            let mut result = BTreeMap::new();
            for (c, m) in row.terms() {
                result.insert(c.label().to_string(), m);
                mentioned.push(c.clone());
            }
            fusion.push(FusionEntry { left: a.label().into(), right: b.label().into(), result });
        }
    }
    // Duals of everything mentioned must resolve too.
    let mut closed: BTreeSet<IrrId> = BTreeSet::new();
    while let Some(x) = mentioned.pop() {
        if closed.insert(x.clone()) {
            mentioned.push(spec.dual(&x)?);
        }
    }

    let mut units = BTreeMap::new();
    for cell in spec.zero_cells() {
        units.insert(cell.label().to_string(), spec.unit(&cell)?.label().to_string());
    }
    let mut irreducibles = Vec::new();
    for x in &closed {
        irreducibles.push(IrrEntry {
            label: x.label().into(),
            source: x.source().label().into(),
            target: x.target().label().into(),
            dual: spec.dual(x)?.label().into(),
            qdim: QdimValue::from_scalar(&spec.qdim(x)?),
        });
    }
    Ok(SpecDocument {
        exact: S::EXACT,
        zero_cells: spec.zero_cells().iter().map(|c| c.label().to_string()).collect(),
        irreducibles,
        units,
        fusion,
        truncated_at_depth: (!spec.is_finite()).then_some(depth),
    })
}
