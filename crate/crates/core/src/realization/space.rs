use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fusion::ZeroCell;
use crate::linalg::{c, deviation, identity, max_abs, CMat, C64};
use crate::words::ReducedWord;

/// A finite-dimensional Hilbert space graded by reduced words of one type.
/// Components are laid out in canonical word order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    source: ZeroCell,
    target: ZeroCell,
    dims: BTreeMap<ReducedWord, usize>,
}

impl GradedSpace {
    pub fn zero(source: ZeroCell, target: ZeroCell) -> Self {
        GradedSpace { source, target, dims: BTreeMap::new() }
    }

    /// The vacuum: one dimension at the empty word.
    pub fn star(cell: &ZeroCell) -> Self {
        Self::line(ReducedWord::empty(cell.clone()))
    }

    /// One dimension at `w`.
    pub fn line(w: ReducedWord) -> Self {
        let mut s = Self::zero(w.source().clone(), w.target().clone());
        s.dims.insert(w, 1);
        s
    }

    pub fn from_dims(
        source: ZeroCell,
        target: ZeroCell,
        dims: impl IntoIterator<Item = (ReducedWord, usize)>,
    ) -> Result<Self> {
        let mut s = Self::zero(source, target);
        for (w, d) in dims {
            s.add(w, d)?;
        }
        Ok(s)
    }

    pub fn add(&mut self, w: ReducedWord, d: usize) -> Result<()> {
        if w.source() != &self.source || w.target() != &self.target {
            return Err(Error::Layout(format!(
                "{w} does not have type ({}, {})",
                self.source, self.target
            )));
        }
        if d > 0 {
            *self.dims.entry(w).or_insert(0) += d;
        }
        Ok(())
    }

    pub fn source(&self) -> &ZeroCell {
        &self.source
    }

    pub fn target(&self) -> &ZeroCell {
        &self.target
    }

    pub fn dim(&self, w: &ReducedWord) -> usize {
        self.dims.get(w).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&ReducedWord, usize)> {
        self.dims.iter().map(|(w, &d)| (w, d))
    }

    pub fn dims(&self) -> &BTreeMap<ReducedWord, usize> {
        &self.dims
    }

    /// Start of each component in the concatenated basis.
    pub fn offsets(&self) -> BTreeMap<ReducedWord, usize> {
        let mut at = 0;
        self.dims
            .iter()
            .map(|(w, &d)| {
                let o = at;
                at += d;
                (w.clone(), o)
            })
            .collect()
    }
}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(w, d)| format!("{w}:{d}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A grading-preserving linear map, stored as one block per word in both
/// supports. Block shape is (codomain dim, domain dim).
#[derive(Clone, PartialEq)]
pub struct GradedMap {
    domain: GradedSpace,
    codomain: GradedSpace,
    blocks: BTreeMap<ReducedWord, CMat>,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap({:?} -> {:?})", self.domain, self.codomain)
    }
}

impl GradedMap {
    pub fn zero(domain: GradedSpace, codomain: GradedSpace) -> Self {
        let blocks = domain
            .components()
            .filter_map(|(w, d)| {
                let e = codomain.dim(w);
                (e > 0).then(|| (w.clone(), CMat::zeros(e, d)))
            })
            .collect();
        GradedMap { domain, codomain, blocks }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let blocks = space.components().map(|(w, d)| (w.clone(), identity(d))).collect();
        GradedMap { domain: space.clone(), codomain: space.clone(), blocks }
    }

    /// Builds a map from explicit blocks; missing blocks are zero.
    pub fn from_blocks(
        domain: GradedSpace,
        codomain: GradedSpace,
        blocks: impl IntoIterator<Item = (ReducedWord, CMat)>,
    ) -> Result<Self> {
        let mut m = Self::zero(domain, codomain);
        for (w, b) in blocks {
            m.set_block(&w, b)?;
        }
        Ok(m)
    }

    pub fn domain(&self) -> &GradedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &GradedSpace {
        &self.codomain
    }

    pub fn blocks(&self) -> &BTreeMap<ReducedWord, CMat> {
        &self.blocks
    }

    /// The block at `w`, zero-sized or zero if absent.
    pub fn block(&self, w: &ReducedWord) -> CMat {
        self.blocks
            .get(w)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.codomain.dim(w), self.domain.dim(w)))
    }

    pub fn block_mut(&mut self, w: &ReducedWord) -> Option<&mut CMat> {
        self.blocks.get_mut(w)
    }

    pub fn set_block(&mut self, w: &ReducedWord, b: CMat) -> Result<()> {
        let shape = (self.codomain.dim(w), self.domain.dim(w));
        if b.shape() != shape {
            return Err(Error::Layout(format!(
                "block at {w} has shape {:?}, expected {shape:?}",
                b.shape()
            )));
        }
        if shape.0 > 0 && shape.1 > 0 {
            self.blocks.insert(w.clone(), b);
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.codomain != self.domain {
            return Err(Error::Layout(format!(
                "cannot compose: {:?} vs {:?}",
                other.codomain, self.domain
            )));
        }
        let mut out = Self::zero(other.domain.clone(), self.codomain.clone());
        for (w, b) in out.blocks.iter_mut() {
            if let (Some(x), Some(y)) = (self.blocks.get(w), other.blocks.get(w)) {
                *b = x * y;
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> GradedMap {
        GradedMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            blocks: self.blocks.iter().map(|(w, b)| (w.clone(), b.adjoint())).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> GradedMap {
        let mut out = self.clone();
        for b in out.blocks.values_mut() {
            *b *= s;
        }
        out
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (w, b) in out.blocks.iter_mut() {
            *b += &other.blocks[w];
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.scale(c(-1.0)))
    }

    fn check_parallel(&self, other: &GradedMap) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Layout("maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.values().map(max_abs).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; non-parallel maps are infinitely far apart.
    pub fn deviation(&self, other: &GradedMap) -> f64 {
        if self.check_parallel(other).is_err() {
            return f64::INFINITY;
        }
        self.blocks.iter().map(|(w, b)| deviation(b, &other.blocks[w])).fold(0.0, f64::max)
    }

    /// max |U*U − 1| and |UU* − 1|; infinite when the gradings differ.
    pub fn unitarity_defect(&self) -> f64 {
        if self.domain.dims != self.codomain.dims {
            return f64::INFINITY;
        }
        self.blocks.values().map(crate::linalg::unitarity_defect).fold(0.0, f64::max)
    }

    /// All entries in block order, for rank computations.
    pub fn entries(&self) -> Vec<C64> {
        self.blocks.values().flat_map(|b| b.iter().cloned().collect::<Vec<_>>()).collect()
    }

    /// Number of free parameters of a map with this domain and codomain.
    pub fn parameter_count(domain: &GradedSpace, codomain: &GradedSpace) -> usize {
        domain.components().map(|(w, d)| d * codomain.dim(w)).sum()
    }

    /// The `k`-th matrix unit in block order.
    pub fn matrix_unit(domain: &GradedSpace, codomain: &GradedSpace, mut k: usize) -> Option<GradedMap> {
        let mut m = Self::zero(domain.clone(), codomain.clone());
        for b in m.blocks.values_mut() {
            let n = b.len();
            if k < n {
                // column-major like the storage
                let rows = b.nrows();
                b[(k % rows, k / rows)] = c(1.0);
                return Some(m);
            }
            k -= n;
        }
        None
    }

    /// Linear combination of matrix units.
    pub fn from_entries(domain: &GradedSpace, codomain: &GradedSpace, entries: &[C64]) -> Result<GradedMap> {
        let mut m = Self::zero(domain.clone(), codomain.clone());
        let mut it = entries.iter();
        for b in m.blocks.values_mut() {
            for x in b.iter_mut() {
                *x = *it.next().ok_or_else(|| Error::Argument("too few entries".into()))?;
            }
        }
        if it.next().is_some() {
            return Err(Error::Argument("too many entries".into()));
        }
        Ok(m)
    }
}
