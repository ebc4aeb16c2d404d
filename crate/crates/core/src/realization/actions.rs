use std::collections::BTreeMap;
use std::sync::Arc;

use super::{ConcreteAmalgam, GradedMap, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{identity, kron, CMat};
use crate::words::ReducedWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One summand `(Xγ, π) ⊗ H_y` (left) or `H_y ⊗ (γX, π)` (right) of a
/// component of an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// Irrep index of γ in the acting factor.
    pub gamma: usize,
    /// The component `y` of the input space.
    pub inner: ReducedWord,
    pub offset: usize,
    /// Number of intertwiner basis vectors.
    pub n_v: usize,
    pub dim_h: usize,
}

impl Block {
    /// Position of (intertwiner k, input vector j) within the component.
    pub fn index(&self, side: Side, k: usize, j: usize) -> usize {
        match side {
            Side::Left => self.offset + k * self.dim_h + j,
            Side::Right => self.offset + j * self.n_v + k,
        }
    }

    pub fn len(&self) -> usize {
        self.n_v * self.dim_h
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `X ▷ᵢ H` or `H ◁ᵢ X` with its explicit direct-sum layout.
#[derive(Debug, Clone)]
pub struct ActionResult {
    pub side: Side,
    pub factor: usize,
    /// The acting object (irrep indices, units removed).
    pub object: Vec<usize>,
    pub input: GradedSpace,
    pub space: GradedSpace,
    pub layout: BTreeMap<ReducedWord, Vec<Block>>,
}

impl ActionResult {
    pub fn blocks(&self, z: &ReducedWord) -> &[Block] {
        self.layout.get(z).map_or(&[], |v| v.as_slice())
    }

    pub fn block(&self, z: &ReducedWord, gamma: usize) -> Option<&Block> {
        self.blocks(z).iter().find(|b| b.gamma == gamma)
    }

    /// The object whose intertwiners label the summand γ: Xγ or γX.
    pub fn summand_object(&self, gamma: usize) -> Vec<usize> {
        let mut obj = self.object.clone();
        match self.side {
            Side::Left => obj.push(gamma),
            Side::Right => obj.insert(0, gamma),
        }
        obj
    }
}

impl ConcreteAmalgam {
    pub fn act_left(&self, i: usize, obj: &[usize], h: &GradedSpace) -> Result<Arc<ActionResult>> {
        self.act(Side::Left, i, obj, h)
    }

    pub fn act_right(&self, i: usize, h: &GradedSpace, obj: &[usize]) -> Result<Arc<ActionResult>> {
        self.act(Side::Right, i, obj, h)
    }

    fn act(&self, side: Side, i: usize, obj: &[usize], h: &GradedSpace) -> Result<Arc<ActionResult>> {
        if i >= self.num_factors() {
            return Err(Error::lookup("factor", (i + 1).to_string()));
        }
        if let Some(&bad) = obj.iter().find(|&&k| k >= self.cat(i).len()) {
            return Err(Error::lookup("irreducible", format!("#{bad} of factor {}", i + 1)));
        }
        let obj = self.object(i, obj);
        let key = (side, i, obj.clone(), h.clone());
        if let Some(hit) = self.cache.actions.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let res = Arc::new(self.build_action(side, i, obj, h)?);
        self.cache.actions.lock().expect("cache poisoned").insert(key, res.clone());
        Ok(res)
    }

    fn build_action(&self, side: Side, i: usize, obj: Vec<usize>, h: &GradedSpace) -> Result<ActionResult> {
        let cat = self.cat(i);
        let mut pending: BTreeMap<ReducedWord, Vec<Block>> = BTreeMap::new();
        let mut res = ActionResult {
            side,
            factor: i,
            object: obj,
            input: h.clone(),
            space: GradedSpace::zero(h.source().clone(), h.target().clone()),
            layout: BTreeMap::new(),
        };
        for (y, dim_h) in h.components() {
            let (gamma, rest) = match side {
                Side::Left => self.head(i, y)?,
                Side::Right => {
                    let (rest, g) = self.tail(y, i)?;
                    (g, rest)
                }
            };
            let summand = res.summand_object(gamma);
            for pi in 0..cat.len() {
                let n_v = self.basis(i, &summand, pi).len();
                if n_v == 0 {
                    continue;
                }
                let z = match side {
                    Side::Left => self.cons(i, pi, &rest)?,
                    Side::Right => self.snoc(&rest, i, pi)?,
                };
                pending.entry(z).or_default().push(Block { gamma, inner: y.clone(), offset: 0, n_v, dim_h });
            }
        }
        for (z, mut blocks) in pending {
            blocks.sort_by(|a, b| cat.irr(a.gamma).cmp(cat.irr(b.gamma)));
            let mut at = 0;
            for b in &mut blocks {
                b.offset = at;
                at += b.len();
            }
            res.space.add(z.clone(), at)?;
            res.layout.insert(z, blocks);
        }
        Ok(res)
    }

    /// `T ▷ 1_H` for a morphism T: X → X' of factor-i objects, as a map
    /// X▷H → X'▷H.
    pub fn left_object_morphism(
        &self,
        i: usize,
        t: &CMat,
        x: &[usize],
        x2: &[usize],
        h: &GradedSpace,
    ) -> Result<GradedMap> {
        self.object_morphism(Side::Left, i, t, x, x2, h)
    }

    /// `1_H ◁ T`, the mirror of [`ConcreteAmalgam::left_object_morphism`].
    pub fn right_object_morphism(
        &self,
        i: usize,
        h: &GradedSpace,
        t: &CMat,
        x: &[usize],
        x2: &[usize],
    ) -> Result<GradedMap> {
        self.object_morphism(Side::Right, i, t, x, x2, h)
    }

    fn object_morphism(
        &self,
        side: Side,
        i: usize,
        t: &CMat,
        x: &[usize],
        x2: &[usize],
        h: &GradedSpace,
    ) -> Result<GradedMap> {
        let cat = self.cat(i);
        if t.shape() != (cat.carrier_dim(x2), cat.carrier_dim(x)) {
            return Err(Error::Layout(format!("morphism has shape {:?}", t.shape())));
        }
        let src = self.act(side, i, x, h)?;
        let dst = self.act(side, i, x2, h)?;
        let mut out = GradedMap::zero(src.space.clone(), dst.space.clone());
        for (z, blocks) in &src.layout {
            let Some(target) = out.block_mut(z) else { continue };
            let pi = match side {
                Side::Left => self.head(i, z)?.0,
                Side::Right => self.tail(z, i)?.1,
            };
            for b in blocks {
                let Some(b2) = dst.block(z, b.gamma) else { continue };
                let dg = identity(cat.dim(b.gamma));
                let lifted = match side {
                    Side::Left => kron(t, &dg),
                    Side::Right => kron(&dg, t),
                };
                let vs = self.basis(i, &src.summand_object(b.gamma), pi);
                let obj2 = dst.summand_object(b.gamma);
                let mut m = CMat::zeros(b2.n_v, b.n_v);
                for (k, v) in vs.iter().enumerate() {
                    for (k2, coeff) in self.expand(i, &obj2, pi, &(&lifted * v)).into_iter().enumerate() {
                        m[(k2, k)] = coeff;
                    }
                }
                let block = match side {
                    Side::Left => kron(&m, &identity(b.dim_h)),
                    Side::Right => kron(&identity(b.dim_h), &m),
                };
                target.view_mut((b2.offset, b.offset), block.shape()).copy_from(&block);
            }
        }
        Ok(out)
    }

    /// `X ▷ f` for a graded map f: H → H'.
    pub fn act_left_map(&self, i: usize, obj: &[usize], f: &GradedMap) -> Result<GradedMap> {
        self.act_map(Side::Left, i, obj, f)
    }

    /// `f ◁ X`.
    pub fn act_right_map(&self, i: usize, f: &GradedMap, obj: &[usize]) -> Result<GradedMap> {
        self.act_map(Side::Right, i, obj, f)
    }

    fn act_map(&self, side: Side, i: usize, obj: &[usize], f: &GradedMap) -> Result<GradedMap> {
        let src = self.act(side, i, obj, f.domain())?;
        let dst = self.act(side, i, obj, f.codomain())?;
        let mut out = GradedMap::zero(src.space.clone(), dst.space.clone());
        for (z, blocks) in &src.layout {
            let Some(target) = out.block_mut(z) else { continue };
            for b in blocks {
                let Some(b2) = dst.block(z, b.gamma) else { continue };
                debug_assert_eq!(b.inner, b2.inner);
                let fb = f.block(&b.inner);
                let block = match side {
                    Side::Left => kron(&identity(b.n_v), &fb),
                    Side::Right => kron(&fb, &identity(b.n_v)),
                };
                target.view_mut((b2.offset, b.offset), block.shape()).copy_from(&block);
            }
        }
        Ok(out)
    }
}
