//! The free product at the level of fusion rings.
//!
//! Everything here is driven by one dynamic program: the graded dimensions
//! of `v ▷ ⋆`, obtained by letting the letters of `v` act on the vacuum
//! grading from right to left. A letter α of factor i sends a grade
//! `[γ]_i : w'` (γ the unit when the grade does not start in factor i) to
//! `Σ_π N_{αγ}^π [π]_i : w'`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fusion::{Bundle, CategorySpec, FusionRules, IrrId, ZeroCell};
use crate::scalar::Scalar;
use crate::words::{Amalgam, Letter, ReducedWord, Word};

/// Limits on the reduced words considered by bounded operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub max_len: usize,
    /// Window depth for lazy factors; ignored by finite ones.
    pub irr_depth: usize,
}

impl Bound {
    pub const UNBOUNDED: Bound = Bound { max_len: usize::MAX, irr_depth: usize::MAX };

    pub fn new(max_len: usize, irr_depth: usize) -> Self {
        Bound { max_len, irr_depth }
    }

    pub fn admits<S: Scalar>(&self, am: &Amalgam<S>, w: &ReducedWord) -> bool {
        w.len() <= self.max_len
            && w.letters().iter().all(|l| am.factor(l.factor).depth_of(&l.irr) <= self.irr_depth)
    }
}

pub type Grading = BTreeMap<ReducedWord, u64>;

/// Graded dimensions of `v ▷ ⋆`.
pub fn star_grading<S: Scalar>(am: &Amalgam<S>, v: &Word) -> Result<Grading> {
    let mut state: Grading = Grading::new();
    state.insert(am.empty_word(v.target())?, 1);
    for l in v.letters().iter().rev() {
        state = act_on_grading(am, l, &state)?;
    }
    Ok(state)
}

/// One step of the dynamic program: the grading of `α ▷ᵢ H` from that of `H`.
pub fn act_on_grading<S: Scalar>(am: &Amalgam<S>, l: &Letter, h: &Grading) -> Result<Grading> {
    let spec = am.factor(l.factor);
    let mut out = Grading::new();
    for (x, &m) in h {
        let (gamma, rest) = peel(am, l.factor, x)?;
        for (pi, n) in spec.fuse_pair(&l.irr, &gamma)?.terms() {
            *out.entry(am.left_cons(l.factor, pi, &rest)?).or_insert(0) += m * n;
        }
    }
    Ok(out)
}

/// Writes `x = [γ]_i : w'` with γ the unit when `x` does not start in factor i.
pub fn peel<S: Scalar>(am: &Amalgam<S>, factor: usize, x: &ReducedWord) -> Result<(IrrId, ReducedWord)> {
    if x.first_factor() == Some(factor) {
        let (first, rest) = x.split_first().expect("nonempty");
        return Ok((first.irr, rest));
    }
    let unit = am.unit_at(factor, x.source()).ok_or_else(|| {
        Error::Composition(format!("factor {} has no 0-cell over {}", factor + 1, x.source()))
    })?;
    Ok((unit, x.clone()))
}

/// Mirror of [`peel`] on the right end.
pub fn peel_right<S: Scalar>(am: &Amalgam<S>, x: &ReducedWord, factor: usize) -> Result<(ReducedWord, IrrId)> {
    if x.last_factor() == Some(factor) {
        let (rest, last) = x.split_last().expect("nonempty");
        return Ok((rest, last.irr));
    }
    let unit = am.unit_at(factor, x.target()).ok_or_else(|| {
        Error::Composition(format!("factor {} has no 0-cell over {}", factor + 1, x.target()))
    })?;
    Ok((x.clone(), unit))
}

/// dim (v ▷ ⋆)_w, the multiplicity of the irreducible `w` in `v`.
pub fn mult_in_word<S: Scalar>(am: &Amalgam<S>, w: &ReducedWord, v: &Word) -> Result<u64> {
    check_same_type(w, v)?;
    Ok(star_grading(am, v)?.get(w).copied().unwrap_or(0))
}

fn check_same_type(a: &Word, b: &Word) -> Result<()> {
    if a.source() != b.source() || a.target() != b.target() {
        return Err(Error::Composition(format!(
            "{a} has type ({}, {}) but {b} has type ({}, {})",
            a.source(),
            a.target(),
            b.source(),
            b.target()
        )));
    }
    Ok(())
}

/// Product of the letter dimensions.
pub fn word_qdim<S: Scalar>(am: &Amalgam<S>, v: &Word) -> Result<S> {
    let mut d = S::one();
    for l in v.letters() {
        d = d * am.factor(l.factor).qdim(&l.irr)?;
    }
    Ok(d)
}

/// A general word written as a sum of reduced words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDecomposition {
    pub source: ZeroCell,
    pub target: ZeroCell,
    pub terms: Grading,
}

impl FreeDecomposition {
    pub fn mult(&self, w: &ReducedWord) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn total_qdim<S: Scalar>(&self, am: &Amalgam<S>) -> Result<S> {
        let mut d = S::zero();
        for (w, &m) in &self.terms {
            d = d + S::from_count(m) * word_qdim(am, w)?;
        }
        Ok(d)
    }

    pub fn entries(&self) -> Vec<(String, u64)> {
        self.terms.iter().map(|(w, m)| (w.to_string(), *m)).collect()
    }
}

impl Serialize for FreeDecomposition {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.entries().serialize(s)
    }
}

/// Decomposes `v` into reduced words within `bound`.
///
/// Terms outside the bound are dropped; the loss shows up as a failure of
/// quantum-dimension conservation, reported as a bound error.
pub fn decompose_word<S: Scalar>(am: &Amalgam<S>, v: &Word, bound: Bound) -> Result<FreeDecomposition> {
    let grading = star_grading(am, v)?;
    let kept: Grading = grading.into_iter().filter(|(w, _)| bound.admits(am, w)).collect();
    let dec = FreeDecomposition { source: v.source().clone(), target: v.target().clone(), terms: kept };
    let expected = word_qdim(am, v)?;
    let got = dec.total_qdim(am)?;
    let tol = am.factors().iter().map(|f| f.tolerance()).fold(0.0, f64::max);
    if !got.approx_eq(&expected, tol) {
        return Err(Error::Bound(format!(
            "decomposition of {v} within max_len={}, irr_depth={} has total dimension {} instead of {}",
            bound.max_len,
            bound.irr_depth,
            got.render(),
            expected.render()
        )));
    }
    Ok(dec)
}

/// dim of the 2-cell space between two general words.
pub fn hom_dim_words<S: Scalar>(am: &Amalgam<S>, v1: &Word, v2: &Word) -> Result<u64> {
    check_same_type(v1, v2)?;
    let g1 = star_grading(am, v1)?;
    let g2 = star_grading(am, v2)?;
    Ok(g1.iter().map(|(w, m)| m * g2.get(w).copied().unwrap_or(0)).sum())
}

/// The free product as fusion data: irreducibles are reduced words, labelled
/// by their literals.
pub struct FreeProductRules<S: Scalar> {
    am: Amalgam<S>,
    bound: Bound,
    words: RwLock<HashMap<IrrId, ReducedWord>>,
}

impl<S: Scalar> FreeProductRules<S> {
    pub fn new(am: Amalgam<S>, bound: Bound) -> Self {
        FreeProductRules { am, bound, words: RwLock::default() }
    }

    pub fn amalgam(&self) -> &Amalgam<S> {
        &self.am
    }

    fn id_of(&self, w: &ReducedWord) -> IrrId {
        let id = IrrId::new(w.to_string(), w.source().clone(), w.target().clone());
        self.words.write().expect("word cache").entry(id.clone()).or_insert_with(|| w.clone());
        id
    }

    fn word_of(&self, id: &IrrId) -> Result<ReducedWord> {
        if let Some(w) = self.words.read().expect("word cache").get(id) {
            return Ok(w.clone());
        }
        let w = self.am.parse_reduced(id.label())?;
        if w.source() != id.source() || w.target() != id.target() {
            return Err(Error::lookup("irreducible", format!("{id:?}")));
        }
        self.words.write().expect("word cache").insert(id.clone(), w.clone());
        Ok(w)
    }
}

impl<S: Scalar> FusionRules<S> for FreeProductRules<S> {
    fn zero_cells(&self) -> Vec<ZeroCell> {
        self.am.cells()
    }

    fn unit(&self, cell: &ZeroCell) -> Option<IrrId> {
        self.am.empty_word(cell).ok().map(|w| self.id_of(&w))
    }

    fn irreducible(&self, label: &str) -> Option<IrrId> {
        let w = self.am.parse_reduced(label).ok()?;
        Some(self.id_of(&w))
    }

    fn dual(&self, irr: &IrrId) -> Result<IrrId> {
        let w = self.word_of(irr)?;
        Ok(self.id_of(&self.am.dual_reduced(&w)?))
    }

    fn qdim(&self, irr: &IrrId) -> Result<S> {
        word_qdim(&self.am, self.word_of(irr)?.as_word())
    }

    fn fuse(&self, a: &IrrId, b: &IrrId) -> Result<Bundle> {
        let v = self.word_of(a)?.as_word().concat(self.word_of(b)?.as_word())?;
        let bound = Bound { max_len: v.len(), irr_depth: self.bound.irr_depth };
        let dec = decompose_word(&self.am, &v, bound)?;
        Ok(Bundle::from_terms(
            dec.source.clone(),
            dec.target.clone(),
            dec.terms.iter().map(|(w, &m)| (self.id_of(w), m)),
        ))
    }

    fn window(&self, depth: usize) -> Vec<IrrId> {
        let irr_depth = depth.min(self.bound.irr_depth);
        let mut out = Vec::new();
        for a in self.am.cells() {
            for b in self.am.cells() {
                let words = self
                    .am
                    .enumerate_reduced(&a, &b, depth.min(self.bound.max_len), irr_depth)
                    .expect("cells come from the amalgam");
                out.extend(words.iter().map(|w| self.id_of(w)));
            }
        }
        out
    }

    fn is_finite(&self) -> bool {
        false
    }

    fn depth_of(&self, irr: &IrrId) -> usize {
        let Ok(w) = self.word_of(irr) else { return usize::MAX };
        w.letters()
            .iter()
            .map(|l| self.am.factor(l.factor).depth_of(&l.irr))
            .chain([w.len()])
            .max()
            .unwrap_or(0)
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.am.factors().iter().map(|f| format!("({})", f.describe())).collect();
        format!("free product {}", parts.join(" * "))
    }
}

pub fn free_product_spec<S: Scalar>(am: &Amalgam<S>, bound: Bound) -> CategorySpec<S> {
    let tol = am.factors().iter().map(|f| f.tolerance()).fold(0.0, f64::max);
    CategorySpec::from_arc(Arc::new(FreeProductRules::new(am.clone(), bound))).with_tolerance(tol)
}

/// Two designated 0-cells and a distinguished 1-cell between them.
#[derive(Debug, Clone)]
pub struct PointedSpec<S: Scalar> {
    pub ambient: CategorySpec<S>,
    pub a: ZeroCell,
    pub b: ZeroCell,
    pub point: Bundle,
}

impl<S: Scalar> PointedSpec<S> {
    /// Restricts `ambient` to {a, b} and checks the point.
    pub fn new(ambient: &CategorySpec<S>, a: ZeroCell, b: ZeroCell, point: Bundle) -> Result<Self> {
        if a == b {
            return Err(Error::Argument(format!("a pointed spec needs two distinct 0-cells, got {a} twice")));
        }
        if point.is_zero() {
            return Err(Error::Argument("the point must be a nonzero 1-cell".into()));
        }
        if point.source() != &a || point.target() != &b {
            return Err(Error::Composition(format!(
                "point has type ({}, {}) instead of ({a}, {b})",
                point.source(),
                point.target()
            )));
        }
        let ambient = if ambient.zero_cells().len() == 2 && ambient.has_cell(&a) && ambient.has_cell(&b) {
            ambient.clone()
        } else {
            ambient.restrict(&[a.clone(), b.clone()])?
        };
        Ok(PointedSpec { ambient, a, b, point })
    }

    pub fn point_qdim(&self) -> Result<S> {
        self.ambient.bundle_qdim(&self.point)
    }

    pub fn point_dual(&self) -> Result<Bundle> {
        self.ambient.dual_bundle(&self.point)
    }
}

/// Glues the second cell of `p1` to the first cell of `p2` and points the
/// free product at `u₁u₂`, forgetting the middle cell.
pub fn free_compose<S: Scalar>(p1: &PointedSpec<S>, p2: &PointedSpec<S>) -> Result<PointedSpec<S>> {
    for p in [p1, p2] {
        if p.point.is_zero() {
            return Err(Error::Argument("cannot compose with a zero point".into()));
        }
    }
    let shared = BTreeMap::from([("*".to_string(), vec![p1.b.clone(), p2.a.clone()])]);
    let am = Amalgam::new(vec![p1.ambient.clone(), p2.ambient.clone()], shared)?;
    let a = am.glued(0, &p1.a)?;
    let c = am.glued(1, &p2.b)?;
    let free = free_product_spec(&am, Bound::UNBOUNDED);
    let mut point = Bundle::zero(a.clone(), c.clone());
    for (x, m) in p1.point.terms() {
        for (y, n) in p2.point.terms() {
            let w = am.word(vec![Letter::new(0, x.clone()), Letter::new(1, y.clone())], None)?;
            let w = am.reduced(w)?;
            point.add(free.irreducible(&w.to_string())?, m * n);
        }
    }
    PointedSpec::new(&free, a, c, point)
}

/// Dimensions of End(u ⊗ ū ⊗ u ⊗ ⋯) with `n` alternating factors, n = 0..=n_max.
pub fn box_dims<S: Scalar>(p: &PointedSpec<S>, n_max: usize) -> Result<Vec<u64>> {
    let spec = &p.ambient;
    let u = &p.point;
    let ubar = p.point_dual()?;
    let mut dims = vec![1];
    let mut acc: Option<Bundle> = None;
    for n in 1..=n_max {
        let step = if n % 2 == 1 { u } else { &ubar };
        let next = match &acc {
            None => step.clone(),
            Some(b) => spec.bundle_product(b, step)?,
        };
        dims.push(spec.hom_dim(&next, &next)?);
        acc = Some(next);
    }
    Ok(dims)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nondegeneracy {
    pub depth: usize,
    pub checked: usize,
    /// Irreducibles of type (a, a) in the window that no power reached.
    pub missing: Vec<String>,
}

impl Nondegeneracy {
    pub fn holds(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Whether every irreducible of type (a, a) visible at `depth` occurs in
/// some `(u ū)^k` with k ≤ depth.
pub fn nondegenerate<S: Scalar>(p: &PointedSpec<S>, depth: usize) -> Result<Nondegeneracy> {
    let spec = &p.ambient;
    let uu = spec.bundle_product(&p.point, &p.point_dual()?)?;
    let mut power = Bundle::single(&spec.unit(&p.a)?);
    let mut reached: HashSet<IrrId> = power.terms().map(|(x, _)| x.clone()).collect();
    for _ in 0..depth {
        power = spec.bundle_product(&power, &uu)?;
        reached.extend(power.terms().map(|(x, _)| x.clone()));
    }
    let targets: Vec<IrrId> = spec
        .window(depth)
        .into_iter()
        .filter(|x| x.source() == &p.a && x.target() == &p.a)
        .collect();
    let missing = targets.iter().filter(|x| !reached.contains(*x)).map(|x| x.label().to_string()).collect();
    Ok(Nondegeneracy { depth, checked: targets.len(), missing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep_groups::builtin_spec;

    #[test]
    fn vacuum_and_single_letters() {
        let z2 = builtin_spec("Z2").unwrap();
        let am = Amalgam::over_single_cell(vec![z2.clone(), z2]).unwrap();
        let a = ZeroCell::new("a");
        let e = am.empty_word(&a).unwrap();
        assert_eq!(mult_in_word(&am, &e, &e).unwrap(), 1);
        let g1 = am.parse_reduced("[g@1]").unwrap();
        assert_eq!(mult_in_word(&am, &g1, &g1).unwrap(), 1);
        let gg = am.parse_word("[g@1][g@1]").unwrap();
        let dec = decompose_word(&am, &gg, Bound::new(2, 0)).unwrap();
        assert_eq!(dec.entries(), [("()@a".to_string(), 1)]);
    }

    #[test]
    fn truncated_bound_is_detected() {
        let s3 = builtin_spec("S3").unwrap();
        let z2 = builtin_spec("Z2").unwrap();
        let am = Amalgam::over_single_cell(vec![s3, z2]).unwrap();
        let v = am.parse_word("[std@1][g@2][std@1]").unwrap();
        assert!(decompose_word(&am, &v, Bound::new(3, 0)).is_ok());
        assert!(matches!(decompose_word(&am, &v, Bound::new(2, 0)), Err(Error::Bound(_))));
    }
}
