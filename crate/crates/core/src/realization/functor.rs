//! Word functors ℒ_v, their swap data and 2-cells between them.

use std::collections::HashMap;
use std::sync::Arc;

use super::actions::ActionResult;
use super::{ConcreteAmalgam, GradedMap, GradedSpace, RLetter};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron_all, nullspace, rank, CMat, C64};
use crate::words::ReducedWord;

/// ℒ_v applied to a graded space, letter by letter from the right.
#[derive(Debug, Clone)]
pub struct WordAction {
    pub word: Vec<RLetter>,
    pub input: GradedSpace,
    /// `stages[k]` is the action of letter k on the output of stage k+1.
    pub stages: Vec<Arc<ActionResult>>,
}

impl WordAction {
    pub fn space(&self) -> &GradedSpace {
        self.stages.first().map_or(&self.input, |s| &s.space)
    }
}

/// A 2-cell ℒ_v → ℒ_{v'}, stored through its vacuum component.
#[derive(Debug, Clone)]
pub struct CWrMorphism {
    pub source: Vec<RLetter>,
    pub target: Vec<RLetter>,
    /// η_⋆: v▷⋆ → v'▷⋆.
    pub star: GradedMap,
}

impl CWrMorphism {
    pub fn new(ca: &ConcreteAmalgam, source: Vec<RLetter>, target: Vec<RLetter>, star: GradedMap) -> Result<Self> {
        let vacuum = ca.star();
        let dom = ca.word_action(&source, &vacuum)?;
        let cod = ca.word_action(&target, &vacuum)?;
        if star.domain() != dom.space() || star.codomain() != cod.space() {
            return Err(Error::Layout("star component does not match the word functors".into()));
        }
        Ok(CWrMorphism { source, target, star })
    }

    pub fn identity(ca: &ConcreteAmalgam, v: &[RLetter]) -> Result<Self> {
        let space = ca.word_action(v, &ca.star())?.space().clone();
        Ok(CWrMorphism { source: v.to_vec(), target: v.to_vec(), star: GradedMap::identity(&space) })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CWrMorphism) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::Layout("2-cells are not composable".into()));
        }
        Ok(CWrMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            star: self.star.compose(&other.star)?,
        })
    }

    pub fn adjoint(&self) -> Self {
        CWrMorphism { source: self.target.clone(), target: self.source.clone(), star: self.star.adjoint() }
    }

    /// 1_{[α]} ⊗̂ η: ℒ_{αv} → ℒ_{αv'}.
    pub fn whisker_left(&self, ca: &ConcreteAmalgam, alpha: RLetter) -> Result<Self> {
        let star = ca.act_left_map(alpha.0, &[alpha.1], &self.star)?;
        let mut s = vec![alpha];
        s.extend(&self.source);
        let mut t = vec![alpha];
        t.extend(&self.target);
        Ok(CWrMorphism { source: s, target: t, star })
    }

    /// η ⊗̂ 1_{[α]}: ℒ_{vα} → ℒ_{v'α}, whose vacuum component is η at α▷⋆.
    pub fn whisker_right(&self, ca: &ConcreteAmalgam, alpha: RLetter) -> Result<Self> {
        let h = ca.act_left(alpha.0, &[alpha.1], &ca.star())?.space.clone();
        let star = ca.extend_morphism(self, &h)?;
        let mut s = self.source.clone();
        s.push(alpha);
        let mut t = self.target.clone();
        t.push(alpha);
        Ok(CWrMorphism { source: s, target: t, star })
    }
}

impl ConcreteAmalgam {
    /// ℒ_v(H). Layouts depend only on the gradings, so ℒ_{vw}(H) and
    /// ℒ_v(ℒ_w(H)) share their stages.
    pub fn word_action(&self, v: &[RLetter], h: &GradedSpace) -> Result<WordAction> {
        let mut stages = Vec::with_capacity(v.len());
        let mut cur = h.clone();
        for &(i, k) in v.iter().rev() {
            let res = self.act_left(i, &[k], &cur)?;
            cur = res.space.clone();
            stages.push(res);
        }
        stages.reverse();
        Ok(WordAction { word: v.to_vec(), input: h.clone(), stages })
    }

    /// ℒ_v(f).
    pub fn word_map(&self, v: &[RLetter], f: &GradedMap) -> Result<GradedMap> {
        let mut cur = f.clone();
        for &(i, k) in v.iter().rev() {
            cur = self.act_left_map(i, &[k], &cur)?;
        }
        Ok(cur)
    }

    /// c^j_v(H, Y): ℒ_v(H) ◁ⱼ Y → ℒ_v(H ◁ⱼ Y), assembled from swap maps.
    pub fn word_swap(&self, v: &[RLetter], h: &GradedSpace, j: usize, y: &[usize]) -> Result<GradedMap> {
        let Some((&(i, k), rest)) = v.split_first() else {
            let hy = self.act_right(j, h, y)?;
            return Ok(GradedMap::identity(&hy.space));
        };
        let inner_space = self.word_action(rest, h)?.space().clone();
        let s = self.sigma(i, &[k], &inner_space, j, y)?;
        let inner = self.word_swap(rest, h, j, y)?;
        self.act_left_map(i, &[k], &inner)?.compose(&s)
    }

    /// Σ̃_{v,α} = (v ▷ T_α) ∘ (c^i_v)_{⋆,α}: (v▷⋆) ◁ α → (vα)▷⋆.
    pub fn vacuum_rearrange(&self, v: &[RLetter], alpha: RLetter) -> Result<GradedMap> {
        let c_v = self.word_swap(v, &self.star(), alpha.0, &[alpha.1])?;
        let t = self.vacuum_swap(alpha.0, &[alpha.1])?;
        self.word_map(v, &t)?.compose(&c_v)
    }

    /// η_H for the 2-cell determined by `eta`, via unrolling along ⋆◁w and
    /// summing over the embeddings of the lines ⋆◁w into H.
    pub fn extend_morphism(&self, eta: &CWrMorphism, h: &GradedSpace) -> Result<GradedMap> {
        let mut memo = HashMap::new();
        self.extend_with(eta, h, &mut memo)
    }

    fn extend_with(
        &self,
        eta: &CWrMorphism,
        h: &GradedSpace,
        memo: &mut HashMap<ReducedWord, GradedMap>,
    ) -> Result<GradedMap> {
        let dom = self.word_action(&eta.source, h)?.space().clone();
        let cod = self.word_action(&eta.target, h)?.space().clone();
        let mut out = GradedMap::zero(dom, cod);
        for (w, d) in h.components() {
            let line = GradedSpace::line(w.clone());
            let e = self.unroll(eta, w, memo)?;
            for k in 0..d {
                let mut u = CMat::zeros(d, 1);
                u[(k, 0)] = c(1.0);
                let embed = GradedMap::from_blocks(line.clone(), h.clone(), [(w.clone(), u)])?;
                let lift_v = self.word_map(&eta.source, &embed)?;
                let lift_v2 = self.word_map(&eta.target, &embed)?;
                let term = lift_v2.compose(&e)?.compose(&lift_v.adjoint())?;
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// η at the line ⋆◁w.
    fn unroll(&self, eta: &CWrMorphism, w: &ReducedWord, memo: &mut HashMap<ReducedWord, GradedMap>) -> Result<GradedMap> {
        if let Some(hit) = memo.get(w) {
            return Ok(hit.clone());
        }
        let result = match w.split_last() {
            None => eta.star.clone(),
            Some((prefix, last)) => {
                let (i, k) = self.rletter(&last)?;
                let prev = self.unroll(eta, &prefix, memo)?;
                let line = GradedSpace::line(prefix);
                let c_src = self.word_swap(&eta.source, &line, i, &[k])?;
                let c_dst = self.word_swap(&eta.target, &line, i, &[k])?;
                let moved = self.act_right_map(i, &prev, &[k])?;
                let e = c_dst.compose(&moved)?.compose(&c_src.adjoint())?;
                if e.domain() != &self.word_action(&eta.source, &GradedSpace::line(w.clone()))?.space().clone() {
                    return Err(Error::Layout(format!("unrolling along {w} left the line")));
                }
                e
            }
        };
        memo.insert(w.clone(), result.clone());
        Ok(result)
    }

    /// Defect of the square η_{H◁Y} ∘ c_v(H,Y) = c_{v'}(H,Y) ∘ (η_H ◁ 1_Y).
    pub fn naturality_defect(&self, eta: &CWrMorphism, h: &GradedSpace, j: usize, y: &[usize]) -> Result<GradedMap> {
        let mut memo = HashMap::new();
        self.naturality_defect_with(eta, h, j, y, &mut memo)
    }

    fn naturality_defect_with(
        &self,
        eta: &CWrMorphism,
        h: &GradedSpace,
        j: usize,
        y: &[usize],
        memo: &mut HashMap<ReducedWord, GradedMap>,
    ) -> Result<GradedMap> {
        let hy = self.act_right(j, h, y)?.space.clone();
        let lhs = self.extend_with(eta, &hy, memo)?.compose(&self.word_swap(&eta.source, h, j, y)?)?;
        let moved = self.act_right_map(j, &self.extend_with(eta, h, memo)?, y)?;
        let rhs = self.word_swap(&eta.target, h, j, y)?.compose(&moved)?;
        lhs.sub(&rhs)
    }

    /// Lines ⋆◁[x]_j together with letters y of the same factor: the squares
    /// where the right action merges letters.
    fn merging_squares(&self) -> Vec<(GradedSpace, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.num_factors() {
            let cat = self.cat(j);
            let u = cat.unit_index();
            for x in (0..cat.len()).filter(|&x| x != u) {
                let line = GradedSpace::line(self.cons(j, x, &self.empty_word()).expect("single cell"));
                for y in (0..cat.len()).filter(|&y| y != u) {
                    out.push((line.clone(), j, y));
                }
            }
        }
        out
    }

    /// Checks that the vacuum component extends naturally on the merging
    /// squares, then returns η_H.
    pub fn extend_checked(&self, eta: &CWrMorphism, h: &GradedSpace, tol: f64) -> Result<GradedMap> {
        let mut memo = HashMap::new();
        for (line, j, y) in self.merging_squares() {
            let d = self.naturality_defect_with(eta, &line, j, &[y], &mut memo)?.max_abs();
            if d > tol {
                return Err(Error::NonExtendable(format!(
                    "square at {line:?} with letter {} of factor {} is off by {d:e}",
                    self.cat(j).irr(y),
                    j + 1
                )));
            }
        }
        self.extend_with(eta, h, &mut memo)
    }

    /// Matrix of the linear map η_⋆ ↦ (naturality defects at lines ⋆◁w with
    /// |w| < depth, every factor and every letter), in matrix-unit coordinates.
    fn constraint_matrix(&self, v: &[RLetter], v2: &[RLetter], depth: usize) -> Result<(GradedSpace, GradedSpace, CMat)> {
        let star = self.star();
        let dom = self.word_action(v, &star)?.space().clone();
        let cod = self.word_action(v2, &star)?.space().clone();
        let n = GradedMap::parameter_count(&dom, &cod);
        let lines: Vec<GradedSpace> = self
            .am
            .enumerate_reduced(&self.cell, &self.cell, depth.saturating_sub(1), 8)?
            .into_iter()
            .map(GradedSpace::line)
            .collect();
        let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
        for p in 0..n {
            let unit = GradedMap::matrix_unit(&dom, &cod, p).expect("in range");
            let eta = CWrMorphism { source: v.to_vec(), target: v2.to_vec(), star: unit };
            let mut memo = HashMap::new();
            let mut col = Vec::new();
            for line in &lines {
                for j in 0..self.num_factors() {
                    for y in 0..self.cat(j).len() {
                        col.extend(self.naturality_defect_with(&eta, line, j, &[y], &mut memo)?.entries());
                    }
                }
            }
            columns.push(col);
        }
        let rows = columns.first().map_or(0, Vec::len);
        Ok((dom, cod, CMat::from_fn(rows, n, |r, p| columns[p][r])))
    }

    /// Dimension of the space of vacuum components between ℒ_v and ℒ_{v'}
    /// that satisfy every naturality square at lines ⋆◁w with |w| < depth
    /// and every letter, computed as parameters minus the defect rank.
    pub fn extendable_dimension(&self, v: &[RLetter], v2: &[RLetter], depth: usize) -> Result<usize> {
        let (_, _, m) = self.constraint_matrix(v, v2, depth)?;
        Ok(m.ncols() - rank(&m, 1e-8))
    }

    /// An orthonormal basis (in matrix-unit coordinates) of the extendable
    /// vacuum components counted by [`ConcreteAmalgam::extendable_dimension`].
    pub fn extendable_basis(&self, v: &[RLetter], v2: &[RLetter], depth: usize) -> Result<Vec<CWrMorphism>> {
        let (dom, cod, m) = self.constraint_matrix(v, v2, depth)?;
        nullspace(&m, 1e-8)
            .into_iter()
            .map(|x| {
                let star = GradedMap::from_entries(&dom, &cod, x.as_slice())?;
                Ok(CWrMorphism { source: v.to_vec(), target: v2.to_vec(), star })
            })
            .collect()
    }

    /// μ_v: ℒ_v(⋆) → X▷⋆ for a word of letters from factor i, X their product.
    pub fn merge_letters(&self, i: usize, v: &[usize]) -> Result<GradedMap> {
        let star = self.star();
        match v.split_first() {
            None => Ok(self.unitor_left(i, &star)?.adjoint()),
            Some((_, [])) => Ok(GradedMap::identity(self.word_action(&[(i, v[0])], &star)?.space())),
            Some((&x, rest)) => {
                let inner = self.merge_letters(i, rest)?;
                let lifted = self.act_left_map(i, &[x], &inner)?;
                self.assoc_left(i, &[x], rest, &star)?.compose(&lifted)
            }
        }
    }

    /// Φ_i(φ) for φ: X → Y in factor i, as a 2-cell between the word
    /// functors of the letters of X and Y.
    pub fn factor_morphism(&self, i: usize, phi: &CMat, x: &[usize], y: &[usize]) -> Result<CWrMorphism> {
        let (x, y) = (self.object(i, x), self.object(i, y));
        let mx = self.merge_letters(i, &x)?;
        let my = self.merge_letters(i, &y)?;
        let star = my.adjoint().compose(&self.factor_image(i, phi, &x, &y)?)?.compose(&mx)?;
        let letters = |o: &[usize]| o.iter().map(|&k| (i, k)).collect::<Vec<_>>();
        CWrMorphism::new(self, letters(&x), letters(&y), star)
    }

    /// The action of group element `g` of factor `i` on the carrier of a
    /// general word: the factor's representation on each of its letters and
    /// the identity on the others.
    pub fn group_action(&self, v: &[RLetter], i: usize, g: usize) -> CMat {
        let mats: Vec<CMat> = v
            .iter()
            .map(|&(j, k)| {
                let cat = self.cat(j);
                if j == i { cat.object_matrix(&[k], g) } else { identity(cat.dim(k)) }
            })
            .collect();
        kron_all(&mats)
    }

    /// Φ_i(φ) for φ: X → Y in factor i, where X and Y are read as words of
    /// single letters; only its vacuum component φ▷1_⋆ on objects is needed.
    pub fn factor_image(&self, i: usize, phi: &CMat, x: &[usize], y: &[usize]) -> Result<GradedMap> {
        self.left_object_morphism(i, phi, x, y, &self.star())
    }

    /// Rank of φ ↦ φ▷1_⋆ on Hom(X, Y), together with dim Hom(X, Y).
    pub fn factor_image_rank(&self, i: usize, x: &[usize], y: &[usize]) -> Result<(usize, usize)> {
        let basis = self.cat(i).hom_space(&self.object(i, x), &self.object(i, y));
        if basis.is_empty() {
            return Ok((0, 0));
        }
        let cols: Vec<Vec<C64>> = basis
            .iter()
            .map(|phi| self.factor_image(i, phi, x, y).map(|m| m.entries()))
            .collect::<Result<_>>()?;
        let m = CMat::from_fn(cols[0].len(), cols.len(), |r, p| cols[p][r]);
        Ok((rank(&m, 1e-8), basis.len()))
    }
}
