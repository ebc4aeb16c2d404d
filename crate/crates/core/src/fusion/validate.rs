use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Bundle, CategorySpec, IrrId};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DualInvolution,
    DualEndpoints,
    UnitNotSelfDual,
    UnitDimension,
    DualDimension,
    NonPositiveDimension,
    Endpoints,
    UnitLaw,
    Frobenius,
    Associativity,
    DimensionConsistency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Labels of the irreducibles involved.
    pub witness: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at ({}): {}", self.kind, self.witness.join(", "), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub search_depth: usize,
    pub explored: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

struct Checker<'a, S: Scalar> {
    spec: &'a CategorySpec<S>,
    out: Vec<Violation>,
}

impl<S: Scalar> Checker<'_, S> {
    fn report(&mut self, kind: ViolationKind, witness: &[&IrrId], detail: String) {
        let witness = witness.iter().map(|x| x.label().to_string()).collect();
        self.out.push(Violation { kind, witness, detail });
    }

    fn single(&mut self, a: &IrrId) -> Result<()> {
        let spec = self.spec;
        let d = spec.dual(a)?;
        if d.source() != a.target() || d.target() != a.source() {
            self.report(
                ViolationKind::DualEndpoints,
                &[a, &d],
                format!("dual of {a:?} is {d:?}"),
            );
        }
        let dd = spec.dual(&d)?;
        if &dd != a {
            self.report(ViolationKind::DualInvolution, &[a, &d], format!("dual of dual is {dd}"));
        }
        let qa = spec.qdim(a)?;
        if qa <= S::zero() {
            self.report(ViolationKind::NonPositiveDimension, &[a], format!("qdim {qa:?}"));
        }
        if !spec.approx_eq(&qa, &spec.qdim(&d)?) {
            self.report(ViolationKind::DualDimension, &[a, &d], "qdim differs from dual".into());
        }
        if spec.is_unit(a) {
            if &d != a {
                self.report(ViolationKind::UnitNotSelfDual, &[a], format!("dual is {d}"));
            }
            if !spec.approx_eq(&qa, &S::one()) {
                self.report(ViolationKind::UnitDimension, &[a], format!("qdim {qa:?}"));
            }
        }
        Ok(())
    }

    fn pair(&mut self, a: &IrrId, b: &IrrId, window: &[IrrId]) -> Result<()> {
        let spec = self.spec;
        let row = spec.fuse_pair(a, b)?;
        let mut clean_endpoints = true;
        for (c, _) in row.terms() {
            if c.source() != a.source() || c.target() != b.target() {
                clean_endpoints = false;
                self.report(
                    ViolationKind::Endpoints,
                    &[a, b, c],
                    format!("term {c:?} in a product of type ({}, {})", a.source(), b.target()),
                );
            }
        }
        if spec.is_unit(a) && row != Bundle::single(b) {
            self.report(ViolationKind::UnitLaw, &[a, b], format!("unit times {b} gives {row}"));
        }
        if spec.is_unit(b) && row != Bundle::single(a) {
            self.report(ViolationKind::UnitLaw, &[a, b], format!("{a} times unit gives {row}"));
        }

        let lhs = spec.qdim(a)? * spec.qdim(b)?;
        let mut rhs = S::zero();
        for (c, m) in row.terms() {
            rhs = rhs + S::from_count(m) * spec.qdim(c)?;
        }
        if !spec.approx_eq(&lhs, &rhs) {
            self.report(
                ViolationKind::DimensionConsistency,
                &[a, b],
                format!("d({a})d({b}) = {} but the product has dimension {}", lhs.render(), rhs.render()),
            );
        }

        if !clean_endpoints {
            return Ok(());
        }
        let ad = spec.dual(a)?;
        let bd = spec.dual(b)?;
        let mut candidates: BTreeSet<IrrId> = row.terms().map(|(c, _)| c.clone()).collect();
        candidates.extend(
            window.iter().filter(|c| c.source() == a.source() && c.target() == b.target()).cloned(),
        );
        for c in &candidates {
            let n = row.mult(c);
            let left = safe_mult(spec, &ad, c, b)?;
            let right = safe_mult(spec, c, &bd, a)?;
            if left != Some(n) || right != Some(n) {
                self.report(
                    ViolationKind::Frobenius,
                    &[a, b, c],
                    format!(
                        "N_ab^c = {n}, N_(dual a)c^b = {}, N_c(dual b)^a = {}",
                        show(left),
                        show(right)
                    ),
                );
            }
        }
        Ok(())
    }

    fn triple(&mut self, a: &IrrId, b: &IrrId, c: &IrrId) -> Result<()> {
        let spec = self.spec;
        let (Some(lhs), Some(rhs)) = (
            lenient_product(spec, &spec.fuse_pair(a, b)?, &Bundle::single(c))?,
            lenient_product(spec, &Bundle::single(a), &spec.fuse_pair(b, c)?)?,
        ) else {
            return Ok(());
        };
        if lhs != rhs {
            let first = lhs
                .terms()
                .chain(rhs.terms())
                .map(|(e, _)| e.clone())
                .find(|e| lhs.mult(e) != rhs.mult(e))
                .expect("unequal bundles differ somewhere");
            self.report(
                ViolationKind::Associativity,
                &[a, b, c, &first],
                format!(
                    "multiplicity of {first} is {} in ({a}{b}){c} but {} in {a}({b}{c})",
                    lhs.mult(&first),
                    rhs.mult(&first)
                ),
            );
        }
        Ok(())
    }
}

fn show(x: Option<u64>) -> String {
    x.map_or_else(|| "undefined".into(), |n| n.to_string())
}

fn safe_mult<S: Scalar>(
    spec: &CategorySpec<S>,
    x: &IrrId,
    y: &IrrId,
    z: &IrrId,
) -> Result<Option<u64>> {
    match spec.fuse_pair(x, y) {
        Ok(row) => Ok(Some(row.mult(z))),
        Err(Error::Composition(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Bundle product that gives up (returns `None`) on ill-typed terms, which are
/// reported separately as endpoint violations.
fn lenient_product<S: Scalar>(
    spec: &CategorySpec<S>,
    x: &Bundle,
    y: &Bundle,
) -> Result<Option<Bundle>> {
    let mut out = Bundle::zero(x.source().clone(), y.target().clone());
    for (a, m) in x.terms() {
        for (b, n) in y.terms() {
            match spec.fuse_pair(a, b) {
                Ok(row) => out.add_bundle(&row, m * n),
                Err(Error::Composition(_)) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Some(out))
}

pub(super) fn validate<S: Scalar>(spec: &CategorySpec<S>, depth: usize) -> Result<ValidationReport> {
    for cell in spec.zero_cells() {
        let u = spec.unit(&cell).map_err(|_| {
            Error::Structural(format!("0-cell `{cell}` has no unit"))
        })?;
        if u.source() != &cell || u.target() != &cell {
            return Err(Error::Structural(format!("unit of `{cell}` is not an endomorphism")));
        }
    }
    let window = spec.window(depth);
    for a in &window {
        for end in [a.source(), a.target()] {
            if !spec.has_cell(end) {
                return Err(Error::Structural(format!("`{a}` touches undeclared 0-cell `{end}`")));
            }
        }
    }

    let mut ck = Checker { spec, out: Vec::new() };
    for a in &window {
        ck.single(a)?;
    }
    for a in &window {
        for b in window.iter().filter(|b| b.source() == a.target()) {
            ck.pair(a, b, &window)?;
        }
    }
    for a in &window {
        for b in window.iter().filter(|b| b.source() == a.target()) {
            for c in window.iter().filter(|c| c.source() == b.target()) {
                ck.triple(a, b, c)?;
            }
        }
    }
    Ok(ValidationReport { search_depth: depth, explored: window.len(), violations: ck.out })
}
