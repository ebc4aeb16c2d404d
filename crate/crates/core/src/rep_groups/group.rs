use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, deviation, identity, CMat, C64};

const TOL: f64 = 1e-10;

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// `table[g * n + h]` is the index of `gh`.
    pub fn new(name: impl Into<String>, labels: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Validation("a group needs at least one element".into()));
        }
        if table.len() != n * n {
            return Err(Error::Validation(format!(
                "multiplication table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= n) {
            return Err(Error::Validation(format!("table entry {bad} out of range 0..{n}")));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(j) = seen.insert(l.as_str(), i) {
                return Err(Error::Validation(format!("element label `{l}` used twice ({j} and {i})")));
            }
        }
        let mul = |g: usize, h: usize| table[g * n + h];
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::Validation("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::Validation(format!("`{}` has no inverse", labels[g])))?;
            inverse.push(inv);
        }
        // Exhaustive below 25 elements, otherwise a stride through the triples.
        let step = if n <= 24 { 1 } else { 7 };
        for a in (0..n).step_by(step) {
            for b in 0..n {
                for d in (0..n).step_by(step) {
                    if mul(mul(a, b), d) != mul(a, mul(b, d)) {
                        return Err(Error::Validation(format!(
                            "not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[d]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), labels, table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("cyclic group of order 0".into()));
        }
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "r".to_string(),
                _ => format!("r{k}"),
            })
            .collect();
        let table = (0..n * n).map(|x| (x / n + x % n) % n).collect();
        Self::new(format!("Z{n}"), labels, table)
    }

    /// Elements r^a s^b, index a + 3b, with s r s = r⁻¹.
    pub fn symmetric3() -> Self {
        let labels = ["e", "r", "r2", "s", "rs", "r2s"].map(String::from).to_vec();
        let mut table = Vec::with_capacity(36);
        for g in 0..6 {
            for h in 0..6 {
                let (a, b) = (g % 3, g / 3);
                let (c, d) = (h % 3, h / 3);
                let rot = if b == 0 { a + c } else { a + 3 - c };
                table.push(rot % 3 + 3 * ((b + d) % 2));
            }
        }
        Self::new("S3", labels, table).expect("S3 table is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order() + h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }
}

/// A unitary representation, one matrix per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRep {
    pub label: String,
    pub matrices: Vec<CMat>,
}

impl UnitaryRep {
    pub fn new(label: impl Into<String>, matrices: Vec<CMat>) -> Self {
        UnitaryRep { label: label.into(), matrices }
    }

    pub fn trivial(group: &FiniteGroup, label: impl Into<String>) -> Self {
        Self::new(label, vec![identity(1); group.order()])
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.nrows())
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self::new(format!("conj({})", self.label), self.matrices.iter().map(|m| m.conjugate()).collect())
    }

    /// Shape, homomorphism and unitarity checks. Irreducibility needs the
    /// averaging machinery and is checked by the category builder.
    pub fn check(&self, group: &FiniteGroup) -> Result<()> {
        let err = |msg: String| Err(Error::Validation(format!("rep `{}`: {msg}", self.label)));
        if self.matrices.len() != group.order() {
            return err(format!("{} matrices for a group of order {}", self.matrices.len(), group.order()));
        }
        let d = self.dim();
        if d == 0 || self.matrices.iter().any(|m| m.shape() != (d, d)) {
            return err("matrices must be square of one common positive size".into());
        }
        let id = identity(d);
        for (g, m) in self.matrices.iter().enumerate() {
            if deviation(&(m * m.adjoint()), &id) > TOL {
                return err(format!("matrix of `{}` is not unitary", group.labels()[g]));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let prod = &self.matrices[g] * &self.matrices[h];
                if deviation(&prod, &self.matrices[group.mul(g, h)]) > TOL {
                    return err(format!(
                        "not a homomorphism at ({}, {})",
                        group.labels()[g],
                        group.labels()[h]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Characters of Z/n. Labels are `1, g` for n = 2 and `1, w, w2, ...` otherwise.
pub fn cyclic_irreps(group: &FiniteGroup) -> Vec<UnitaryRep> {
    let n = group.order();
    (0..n)
        .map(|k| {
            let label = match (n, k) {
                (_, 0) => "1".to_string(),
                (2, _) => "g".to_string(),
                (_, 1) => "w".to_string(),
                _ => format!("w{k}"),
            };
            let mats = (0..n)
                .map(|j| {
                    let angle = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    CMat::from_element(1, 1, C64::from_polar(1.0, angle))
                })
                .collect();
            UnitaryRep::new(label, mats)
        })
        .collect()
}

/// `1`, `sgn` and the two-dimensional `std` of S3 (rotation by 120° and a
/// reflection), for the element order of [`FiniteGroup::symmetric3`].
pub fn symmetric3_irreps() -> Vec<UnitaryRep> {
    let (cs, sn) = ((2.0 * PI / 3.0).cos(), (2.0 * PI / 3.0).sin());
    let r = CMat::from_row_slice(2, 2, &[c(cs), c(-sn), c(sn), c(cs)]);
    let s = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let mut std = Vec::with_capacity(6);
    for g in 0..6 {
        let (a, b) = (g % 3, g / 3);
        let mut m = identity(2);
        for _ in 0..a {
            m = &m * &r;
        }
        if b == 1 {
            m = &m * &s;
        }
        std.push(m);
    }
    let sgn = (0..6).map(|g| CMat::from_element(1, 1, c(if g < 3 { 1.0 } else { -1.0 }))).collect();
    vec![
        UnitaryRep::new("1", vec![identity(1); 6]),
        UnitaryRep::new("sgn", sgn),
        UnitaryRep::new("std", std),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub labels: Vec<String>,
    /// Row-major: entry `g * order + h` is the index of `gh`.
    pub table: Vec<usize>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))
    }

    pub fn into_group(self) -> Result<FiniteGroup> {
        if self.labels.len() != self.order {
            return Err(Error::Validation(format!(
                "order is {} but {} labels are given",
                self.order,
                self.labels.len()
            )));
        }
        FiniteGroup::new(self.name.unwrap_or_else(|| "G".into()), self.labels, self.table)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepEntry {
    pub label: String,
    /// One matrix per element, each a list of rows of `[re, im]` pairs.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepsFile {
    pub irreps: Vec<RepEntry>,
}

impl RepsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("representation file: {e}")))
    }

    pub fn into_reps(self) -> Result<Vec<UnitaryRep>> {
        self.irreps
            .into_iter()
            .map(|entry| {
                let mats = entry
                    .matrices
                    .iter()
                    .enumerate()
                    .map(|(g, rows)| {
                        let r = rows.len();
                        if rows.iter().any(|row| row.len() != r) {
                            return Err(Error::Parse(format!(
                                "irrep `{}`: matrix {g} is not square",
                                entry.label
                            )));
                        }
                        Ok(CMat::from_fn(r, r, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(UnitaryRep::new(entry.label, mats))
            })
            .collect()
    }
}
