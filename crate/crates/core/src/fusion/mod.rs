//! Fusion data of a rigid C*-2-category at the Grothendieck level.
//!
//! A [`CategorySpec`] wraps a [`FusionRules`] implementation (a finite table,
//! a lazily generated family such as Temperley–Lieb–Jones, or a free product)
//! behind a memoizing front end. All queries are pure; the memo is shared
//! between clones and safe to hit from several threads.

mod document;
mod table;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use document::{AnySpec, FusionEntry, IrrEntry, QdimValue, SpecDocument};
pub use table::{IrrRow, TableRules};
pub use validate::{ValidationReport, Violation, ViolationKind};

/// Default relative tolerance for float-valued dimension checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZeroCell(Arc<str>);

impl ZeroCell {
    pub fn new(label: impl AsRef<str>) -> Self {
        ZeroCell(Arc::from(label.as_ref()))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ZeroCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ZeroCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An irreducible 1-cell: a label together with its endpoints.
///
/// Ordering is by label first, which is the canonical order used everywhere
/// downstream (bundle serialization, word order, basis layouts).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrId {
    label: Arc<str>,
    source: ZeroCell,
    target: ZeroCell,
}

impl IrrId {
    pub fn new(label: impl AsRef<str>, source: ZeroCell, target: ZeroCell) -> Self {
        IrrId { label: Arc::from(label.as_ref()), source, target }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &ZeroCell {
        &self.source
    }

    pub fn target(&self) -> &ZeroCell {
        &self.target
    }
}

impl fmt::Debug for IrrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}->{}", self.label, self.source, self.target)
    }
}

impl fmt::Display for IrrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A formal direct sum of irreducibles sharing a pair of endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bundle {
    source: ZeroCell,
    target: ZeroCell,
    terms: BTreeMap<IrrId, u64>,
}

impl Bundle {
    pub fn zero(source: ZeroCell, target: ZeroCell) -> Self {
        Bundle { source, target, terms: BTreeMap::new() }
    }

    pub fn single(irr: &IrrId) -> Self {
        let mut b = Bundle::zero(irr.source.clone(), irr.target.clone());
        b.add(irr.clone(), 1);
        b
    }

    pub fn from_terms(
        source: ZeroCell,
        target: ZeroCell,
        terms: impl IntoIterator<Item = (IrrId, u64)>,
    ) -> Self {
        let mut b = Bundle::zero(source, target);
        for (irr, m) in terms {
            b.add(irr, m);
        }
        b
    }

    pub fn add(&mut self, irr: IrrId, mult: u64) {
        if mult > 0 {
            *self.terms.entry(irr).or_insert(0) += mult;
        }
    }

    pub fn add_bundle(&mut self, other: &Bundle, scale: u64) {
        for (irr, m) in &other.terms {
            self.add(irr.clone(), m * scale);
        }
    }

    pub fn source(&self) -> &ZeroCell {
        &self.source
    }

    pub fn target(&self) -> &ZeroCell {
        &self.target
    }

    pub fn endpoints(&self) -> (&ZeroCell, &ZeroCell) {
        (&self.source, &self.target)
    }

    pub fn mult(&self, irr: &IrrId) -> u64 {
        self.terms.get(irr).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IrrId, u64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn distinct_terms(&self) -> usize {
        self.terms.len()
    }

    /// Σ of multiplicities.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0[{}->{}]", self.source, self.target);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, m)| if *m == 1 { k.to_string() } else { format!("{m}·{k}") })
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Raw fusion data behind a [`CategorySpec`].
///
/// Implementations never need to check composability of `fuse` arguments;
/// the wrapper does that before calling in.
pub trait FusionRules<S: Scalar>: Send + Sync {
    fn zero_cells(&self) -> Vec<ZeroCell>;

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId>;

    /// Resolves a label to an irreducible.
    fn irreducible(&self, label: &str) -> Option<IrrId>;

    fn dual(&self, irr: &IrrId) -> Result<IrrId>;

    fn qdim(&self, irr: &IrrId) -> Result<S>;

    /// The row γ ↦ N_{ab}^γ.
    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle>;

    /// Irreducibles visible at enumeration depth `depth`. Finite rules return
    /// everything regardless of depth.
    fn window(&self, depth: usize) -> Vec<IrrId>;

    fn is_finite(&self) -> bool;

    /// Smallest window depth at which `irr` is visible.
    fn depth_of(&self, _irr: &IrrId) -> usize {
        0
    }

    fn describe(&self) -> String;
}

/// Fusion data of a rigid C*-2-category, with memoized fusion queries.
pub struct CategorySpec<S: Scalar> {
    rules: Arc<dyn FusionRules<S>>,
    memo: Arc<RwLock<HashMap<(IrrId, IrrId), Bundle>>>,
    tolerance: f64,
}

impl<S: Scalar> Clone for CategorySpec<S> {
    fn clone(&self) -> Self {
        CategorySpec { rules: self.rules.clone(), memo: self.memo.clone(), tolerance: self.tolerance }
    }
}

impl<S: Scalar> fmt::Debug for CategorySpec<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CategorySpec({})", self.rules.describe())
    }
}

impl<S: Scalar> CategorySpec<S> {
    pub fn new(rules: impl FusionRules<S> + 'static) -> Self {
        Self::from_arc(Arc::new(rules))
    }

    pub fn from_arc(rules: Arc<dyn FusionRules<S>>) -> Self {
        CategorySpec { rules, memo: Arc::default(), tolerance: DEFAULT_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn rules(&self) -> &Arc<dyn FusionRules<S>> {
        &self.rules
    }

    pub fn describe(&self) -> String {
        self.rules.describe()
    }

    pub fn zero_cells(&self) -> Vec<ZeroCell> {
        self.rules.zero_cells()
    }

    pub fn has_cell(&self, cell: &ZeroCell) -> bool {
        self.rules.zero_cells().contains(cell)
    }

    pub fn unit(&self, cell: &ZeroCell) -> Result<IrrId> {
        self.rules.unit(cell).ok_or_else(|| Error::lookup("unit for 0-cell", cell.label()))
    }

    pub fn is_unit(&self, irr: &IrrId) -> bool {
        irr.source == irr.target && self.rules.unit(&irr.source).as_ref() == Some(irr)
    }

    pub fn irreducible(&self, label: &str) -> Result<IrrId> {
        self.rules.irreducible(label).ok_or_else(|| Error::lookup("irreducible", label))
    }

    pub fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        self.rules.dual(irr)
    }

    pub fn qdim(&self, irr: &IrrId) -> Result<S> {
        self.rules.qdim(irr)
    }

    pub fn window(&self, depth: usize) -> Vec<IrrId> {
        let mut w = self.rules.window(depth);
        w.sort();
        w.dedup();
        w
    }

    pub fn is_finite(&self) -> bool {
        self.rules.is_finite()
    }

    pub fn depth_of(&self, irr: &IrrId) -> usize {
        self.rules.depth_of(irr)
    }

    /// Decomposition of `a ⊗ b` into irreducibles.
    pub fn fuse_pair(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        if a.target != b.source {
            return Err(Error::Composition(format!(
                "{a} ends at {} but {b} starts at {}",
                a.target, b.source
            )));
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let row = self.rules.fuse(a, b)?;
        self.memo.write().expect("memo lock").insert(key, row.clone());
        Ok(row)
    }

    /// Fusion multiplicity N_{ab}^c.
    pub fn multiplicity(&self, a: &IrrId, b: &IrrId, c: &IrrId) -> Result<u64> {
        Ok(self.fuse_pair(a, b)?.mult(c))
    }

    /// dim of the 2-cell space between two bundles.
    pub fn hom_dim(&self, x: &Bundle, y: &Bundle) -> Result<u64> {
        if x.endpoints() != y.endpoints() {
            return Err(Error::Composition(format!(
                "hom between bundles of types ({}, {}) and ({}, {})",
                x.source, x.target, y.source, y.target
            )));
        }
        Ok(x.terms().map(|(irr, m)| m * y.mult(irr)).sum())
    }

    /// Bilinear extension of [`CategorySpec::fuse_pair`].
    pub fn bundle_product(&self, x: &Bundle, y: &Bundle) -> Result<Bundle> {
        if x.target != y.source {
            return Err(Error::Composition(format!(
                "bundle ending at {} composed with bundle starting at {}",
                x.target, y.source
            )));
        }
        let mut out = Bundle::zero(x.source.clone(), y.target.clone());
        for (a, m) in x.terms() {
            for (b, n) in y.terms() {
                out.add_bundle(&self.fuse_pair(a, b)?, m * n);
            }
        }
        Ok(out)
    }

    /// Full decomposition of the tensor product of a composable sequence.
    ///
    /// An empty sequence yields the unit at `cell`, which must then be given.
    pub fn decompose_tensor(&self, seq: &[IrrId], cell: Option<&ZeroCell>) -> Result<Bundle> {
        let Some(first) = seq.first() else {
            let cell = cell.ok_or_else(|| {
                Error::Argument("empty tensor sequence needs a 0-cell".into())
            })?;
            return Ok(Bundle::single(&self.unit(cell)?));
        };
        let mut acc = Bundle::single(first);
        for irr in &seq[1..] {
            acc = self.bundle_product(&acc, &Bundle::single(irr))?;
        }
        Ok(acc)
    }

    /// Same as [`CategorySpec::decompose_tensor`] but folding from the right.
    pub fn decompose_tensor_rfold(&self, seq: &[IrrId], cell: Option<&ZeroCell>) -> Result<Bundle> {
        let Some(last) = seq.last() else {
            return self.decompose_tensor(seq, cell);
        };
        let mut acc = Bundle::single(last);
        for irr in seq[..seq.len() - 1].iter().rev() {
            acc = self.bundle_product(&Bundle::single(irr), &acc)?;
        }
        Ok(acc)
    }

    pub fn bundle_qdim(&self, x: &Bundle) -> Result<S> {
        let mut total = S::zero();
        for (irr, m) in x.terms() {
            total = total + S::from_count(m) * self.qdim(irr)?;
        }
        Ok(total)
    }

    pub fn dual_bundle(&self, x: &Bundle) -> Result<Bundle> {
        let mut out = Bundle::zero(x.target.clone(), x.source.clone());
        for (irr, m) in x.terms() {
            out.add(self.dual(irr)?, m);
        }
        Ok(out)
    }

    pub fn approx_eq(&self, a: &S, b: &S) -> bool {
        a.approx_eq(b, self.tolerance)
    }

    /// Checks every axiom on the irreducibles visible at `search_depth`.
    pub fn validate(&self, search_depth: usize) -> Result<ValidationReport> {
        validate::validate(self, search_depth)
    }

    /// Restriction to a subset of 0-cells (the full sub-2-category on them).
    pub fn restrict(&self, cells: &[ZeroCell]) -> Result<CategorySpec<S>> {
        for c in cells {
            if !self.has_cell(c) {
                return Err(Error::lookup("0-cell", c.label()));
            }
        }
        Ok(CategorySpec::new(Restricted { inner: self.clone(), cells: cells.to_vec() })
            .with_tolerance(self.tolerance))
    }

    /// Re-expresses the quantum dimensions in another scalar type.
    pub fn convert<T: Scalar>(&self) -> CategorySpec<T> {
        CategorySpec::new(Converted::<S, T> { inner: self.clone(), _t: std::marker::PhantomData })
            .with_tolerance(self.tolerance)
    }

    /// Finite snapshot of the irreducibles visible at `depth`, in the text format.
    pub fn to_document(&self, depth: usize) -> Result<SpecDocument> {
        document::snapshot(self, depth)
    }
}

struct Restricted<S: Scalar> {
    inner: CategorySpec<S>,
    cells: Vec<ZeroCell>,
}

impl<S: Scalar> Restricted<S> {
    fn inside(&self, irr: &IrrId) -> bool {
        self.cells.contains(&irr.source) && self.cells.contains(&irr.target)
    }
}

impl<S: Scalar> FusionRules<S> for Restricted<S> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        self.cells.clone()
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        if self.cells.contains(cell) {
            self.inner.rules.unit(cell)
        } else {
            None
        }
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        self.inner.rules.irreducible(label).filter(|x| self.inside(x))
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        self.inner.dual(irr)
    }

    fn qdim(&self, irr: &IrrId) -> Result<S> {
        self.inner.qdim(irr)
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        self.inner.fuse_pair(a, b)
    }

    fn window(&self, depth: usize) -> Vec<IrrId> {
        self.inner.window(depth).into_iter().filter(|x| self.inside(x)).collect()
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    fn depth_of(&self, irr: &IrrId) -> usize {
        self.inner.depth_of(irr)
    }

    fn describe(&self) -> String {
        let cells: Vec<&str> = self.cells.iter().map(|c| c.label()).collect();
        format!("{} restricted to {{{}}}", self.inner.describe(), cells.join(", "))
    }
}

struct Converted<S: Scalar, T: Scalar> {
    inner: CategorySpec<S>,
    _t: std::marker::PhantomData<fn() -> T>,
}

impl<S: Scalar, T: Scalar> FusionRules<T> for Converted<S, T> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        self.inner.zero_cells()
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        self.inner.rules.unit(cell)
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        self.inner.rules.irreducible(label)
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        self.inner.dual(irr)
    }

    fn qdim(&self, irr: &IrrId) -> Result<T> {
        let d = self.inner.qdim(irr)?;
        T::from_f64(d.to_f64_lossy())
            .ok_or_else(|| Error::Argument(format!("quantum dimension of {irr} not representable")))
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        self.inner.fuse_pair(a, b)
    }

    fn window(&self, depth: usize) -> Vec<IrrId> {
        self.inner.window(depth)
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    fn depth_of(&self, irr: &IrrId) -> usize {
        self.inner.depth_of(irr)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}
