use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Bundle, FusionRules, IrrId, SpecDocument, ZeroCell};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite fusion data given by explicit tables.
#[derive(Debug, Clone)]
pub struct TableRules<S> {
    name: String,
    cells: Vec<ZeroCell>,
    irrs: BTreeMap<String, IrrId>,
    duals: HashMap<IrrId, IrrId>,
    qdims: HashMap<IrrId, S>,
    units: BTreeMap<ZeroCell, IrrId>,
    fusion: HashMap<(IrrId, IrrId), Bundle>,
}

/// One irreducible row for [`TableRules::new`].
#[derive(Debug, Clone)]
pub struct IrrRow<S> {
    pub label: String,
    pub source: String,
    pub target: String,
    pub dual: String,
    pub qdim: S,
}

impl<S: Scalar> TableRules<S> {
    /// Assembles tables, rejecting dangling labels, duplicates and missing units.
    ///
    /// Axioms (Frobenius reciprocity, associativity, ...) are not checked here;
    /// that is what [`super::CategorySpec::validate`] is for.
    pub fn new(
        name: impl Into<String>,
        cells: &[String],
        irreducibles: Vec<IrrRow<S>>,
        units: &BTreeMap<String, String>,
        fusion: &[(String, String, BTreeMap<String, u64>)],
    ) -> Result<Self> {
        let mut cell_set = BTreeSet::new();
        for c in cells {
            if !cell_set.insert(c.as_str()) {
                return Err(Error::Structural(format!("duplicate 0-cell `{c}`")));
            }
        }
        let cell = |label: &str| -> Result<ZeroCell> {
            if cell_set.contains(label) {
                Ok(ZeroCell::new(label))
            } else {
                Err(Error::Structural(format!("reference to undeclared 0-cell `{label}`")))
            }
        };

        let mut irrs = BTreeMap::new();
        for row in &irreducibles {
            let id = IrrId::new(&row.label, cell(&row.source)?, cell(&row.target)?);
            if irrs.insert(row.label.clone(), id).is_some() {
                return Err(Error::Structural(format!("duplicate irreducible `{}`", row.label)));
            }
        }
        let irr = |label: &str, role: &str| -> Result<IrrId> {
            irrs.get(label).cloned().ok_or_else(|| {
                Error::Structural(format!("{role} refers to unknown irreducible `{label}`"))
            })
        };

        let mut duals = HashMap::new();
        let mut qdims = HashMap::new();
        for row in irreducibles {
            let id = irrs[&row.label].clone();
            duals.insert(id.clone(), irr(&row.dual, &format!("dual of `{}`", row.label))?);
            qdims.insert(id, row.qdim);
        }

        let mut unit_map = BTreeMap::new();
        for c in cells {
            let label = units
                .get(c)
                .ok_or_else(|| Error::Structural(format!("0-cell `{c}` has no unit")))?;
            let u = irr(label, &format!("unit of `{c}`"))?;
            if u.source().label() != c || u.target().label() != c {
                return Err(Error::Structural(format!(
                    "unit `{label}` of `{c}` has endpoints ({}, {})",
                    u.source(),
                    u.target()
                )));
            }
            unit_map.insert(ZeroCell::new(c), u);
        }
        for c in units.keys() {
            cell(c)?;
        }

        let mut table = HashMap::new();
        for (left, right, result) in fusion {
            let a = irr(left, "fusion entry")?;
            let b = irr(right, "fusion entry")?;
            let mut row = Bundle::zero(a.source().clone(), b.target().clone());
            for (label, m) in result {
                row.add(irr(label, "fusion result")?, *m);
            }
            if table.insert((a, b), row).is_some() {
                return Err(Error::Structural(format!("duplicate fusion entry ({left}, {right})")));
            }
        }

        Ok(TableRules {
            name: name.into(),
            cells: cells.iter().map(ZeroCell::new).collect(),
            irrs,
            duals,
            qdims,
            units: unit_map,
            fusion: table,
        })
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        let mut rows = Vec::with_capacity(doc.irreducibles.len());
        for e in &doc.irreducibles {
            let qdim = e.qdim.parse::<S>().ok_or_else(|| {
                Error::Parse(format!("irreducible `{}`: unreadable qdim {:?}", e.label, e.qdim))
            })?;
            rows.push(IrrRow {
                label: e.label.clone(),
                source: e.source.clone(),
                target: e.target.clone(),
                dual: e.dual.clone(),
                qdim,
            });
        }
        let fusion: Vec<_> = doc
            .fusion
            .iter()
            .map(|f| (f.left.clone(), f.right.clone(), f.result.clone()))
            .collect();
        Self::new("table", &doc.zero_cells, rows, &doc.units, &fusion)
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = &IrrId> {
        self.irrs.values()
    }
}

impl<S: Scalar> FusionRules<S> for TableRules<S> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        self.cells.clone()
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        self.units.get(cell).cloned()
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        self.irrs.get(label).cloned()
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        self.duals.get(irr).cloned().ok_or_else(|| Error::lookup("irreducible", irr.label()))
    }

    fn qdim(&self, irr: &IrrId) -> Result<S> {
        self.qdims.get(irr).cloned().ok_or_else(|| Error::lookup("irreducible", irr.label()))
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        for x in [a, b] {
            if !self.duals.contains_key(x) {
                return Err(Error::lookup("irreducible", x.label()));
            }
        }
        Ok(self
            .fusion
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(|| Bundle::zero(a.source().clone(), b.target().clone())))
    }

    fn window(&self, _depth: usize) -> Vec<IrrId> {
        self.irrs.values().cloned().collect()
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("{} with {} irreducibles", self.name, self.irrs.len())
    }
}
