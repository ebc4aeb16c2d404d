//! Associators, unitors, swap maps and the vacuum identification.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::actions::{ActionResult, Side};
use super::{ConcreteAmalgam, GradedMap, GradedSpace, Mutation};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, kron, CMat};
use crate::words::ReducedWord;

type ActionKey = (Side, usize, Vec<usize>, GradedSpace);
type SigmaKey = (usize, usize, Vec<usize>, GradedSpace, Vec<usize>);
type AssemblyKey = (Vec<super::RLetter>, ReducedWord);

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) actions: Mutex<HashMap<ActionKey, Arc<ActionResult>>>,
    pub(crate) sigmas: Mutex<HashMap<SigmaKey, Arc<GradedMap>>>,
    pub(crate) assembly: Mutex<HashMap<AssemblyKey, Arc<Vec<CMat>>>>,
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// Label of a basis vector of a doubly acted space, independent of the order
/// in which the two actions were applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SwapLabel {
    left: (usize, usize, usize),
    right: (usize, usize, usize),
    inner: ReducedWord,
    h: usize,
}

impl ConcreteAmalgam {
    /// μ^ℓ_{X,Y,H}: X ▷ (Y ▷ H) → (XY) ▷ H.
    pub fn assoc_left(&self, i: usize, x: &[usize], y: &[usize], h: &GradedSpace) -> Result<GradedMap> {
        let (x, y) = (self.object(i, x), self.object(i, y));
        let a = self.act_left(i, &y, h)?;
        let b = self.act_left(i, &x, &a.space)?;
        let target = self.act_left(i, &concat(&x, &y), h)?;
        let cat = self.cat(i);
        let id_x = identity(cat.carrier_dim(&x));
        let mut out = GradedMap::zero(b.space.clone(), target.space.clone());
        for (z, blocks) in &b.layout {
            let (pi, _) = self.head(i, z)?;
            let Some(dst) = out.block_mut(z) else {
                return Err(Error::Layout(format!("μ^ℓ: no target component at {z}")));
            };
            for bb in blocks {
                let gamma = bb.gamma;
                let vs = self.basis(i, &b.summand_object(gamma), pi);
                let scale = if self.mutated(Mutation::DropMuGammaSqrt) { 1.0 } else { self.sqrt_qdim(i, gamma) };
                for ab in a.blocks(&bb.inner) {
                    let g2 = ab.gamma;
                    let ws = self.basis(i, &a.summand_object(g2), gamma);
                    let tb = target.block(z, g2);
                    let tobj = target.summand_object(g2);
                    for (k, v) in vs.iter().enumerate() {
                        for (k2, w) in ws.iter().enumerate() {
                            let comp = kron(&id_x, w) * v;
                            let coeffs = self.expand(i, &tobj, pi, &comp);
                            if coeffs.iter().all(|x| x.norm() < 1e-14) {
                                continue;
                            }
                            let tb = tb.ok_or_else(|| Error::Layout(format!("μ^ℓ: missing summand at {z}")))?;
                            for j in 0..ab.dim_h {
                                let col = bb.index(Side::Left, k, ab.index(Side::Left, k2, j));
                                for (m, coeff) in coeffs.iter().enumerate() {
                                    dst[(tb.index(Side::Left, m, j), col)] += coeff * c(scale);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// μ^r_{H,X,Y}: (H ◁ X) ◁ Y → H ◁ (XY).
    pub fn assoc_right(&self, i: usize, h: &GradedSpace, x: &[usize], y: &[usize]) -> Result<GradedMap> {
        let (x, y) = (self.object(i, x), self.object(i, y));
        let a = self.act_right(i, h, &x)?;
        let b = self.act_right(i, &a.space, &y)?;
        let target = self.act_right(i, h, &concat(&x, &y))?;
        let cat = self.cat(i);
        let id_y = identity(cat.carrier_dim(&y));
        let mut out = GradedMap::zero(b.space.clone(), target.space.clone());
        for (z, blocks) in &b.layout {
            let (_, pi) = self.tail(z, i)?;
            let Some(dst) = out.block_mut(z) else {
                return Err(Error::Layout(format!("μ^r: no target component at {z}")));
            };
            for bb in blocks {
                let gamma = bb.gamma;
                let vs = self.basis(i, &b.summand_object(gamma), pi);
                let scale = if self.mutated(Mutation::DropMuGammaSqrt) { 1.0 } else { self.sqrt_qdim(i, gamma) };
                for ab in a.blocks(&bb.inner) {
                    let g2 = ab.gamma;
                    let ws = self.basis(i, &a.summand_object(g2), gamma);
                    let tb = target.block(z, g2);
                    let tobj = target.summand_object(g2);
                    for (k, v) in vs.iter().enumerate() {
                        for (k2, w) in ws.iter().enumerate() {
                            let comp = kron(w, &id_y) * v;
                            let coeffs = self.expand(i, &tobj, pi, &comp);
                            if coeffs.iter().all(|x| x.norm() < 1e-14) {
                                continue;
                            }
                            let tb = tb.ok_or_else(|| Error::Layout(format!("μ^r: missing summand at {z}")))?;
                            for j in 0..ab.dim_h {
                                let col = bb.index(Side::Right, k, ab.index(Side::Right, k2, j));
                                for (m, coeff) in coeffs.iter().enumerate() {
                                    dst[(tb.index(Side::Right, m, j), col)] += coeff * c(scale);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// υ^ℓ_H: ε ▷ H → H.
    pub fn unitor_left(&self, i: usize, h: &GradedSpace) -> Result<GradedMap> {
        self.unitor(Side::Left, i, h)
    }

    /// υ^r_H: H ◁ ε → H.
    pub fn unitor_right(&self, i: usize, h: &GradedSpace) -> Result<GradedMap> {
        self.unitor(Side::Right, i, h)
    }

    fn unitor(&self, side: Side, i: usize, h: &GradedSpace) -> Result<GradedMap> {
        let a = match side {
            Side::Left => self.act_left(i, &[], h)?,
            Side::Right => self.act_right(i, h, &[])?,
        };
        let mut out = GradedMap::zero(a.space.clone(), h.clone());
        for (z, blocks) in &a.layout {
            let Some(dst) = out.block_mut(z) else {
                return Err(Error::Layout(format!("unitor: {z} is not a component of H")));
            };
            for b in blocks {
                // (επ, π) is spanned by λ·1.
                let v = &self.basis(i, &[b.gamma], b.gamma)[0];
                let lambda = v[(0, 0)] * c(self.sqrt_qdim(i, b.gamma));
                for j in 0..b.dim_h {
                    dst[(j, b.index(side, 0, j))] += lambda;
                }
            }
        }
        Ok(out)
    }

    /// Σ^{ij}_{X,H,Y}: (X ▷ᵢ H) ◁ⱼ Y → X ▷ᵢ (H ◁ⱼ Y).
    pub fn sigma(&self, i: usize, x: &[usize], h: &GradedSpace, j: usize, y: &[usize]) -> Result<Arc<GradedMap>> {
        let (x, y) = (self.object(i, x), self.object(j, y));
        let key = (i, j, x.clone(), h.clone(), {
            let mut k = y.clone();
            k.insert(0, j);
            k
        });
        if let Some(hit) = self.cache.sigmas.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let m = Arc::new(self.build_sigma(i, &x, h, j, &y)?);
        self.cache.sigmas.lock().expect("cache poisoned").insert(key, m.clone());
        Ok(m)
    }

    pub(crate) fn is_edge(&self, i: usize, j: usize, z: &ReducedWord) -> bool {
        i == j && (z.is_empty() || (z.len() == 1 && z.first_factor() == Some(i)))
    }

    fn build_sigma(&self, i: usize, x: &[usize], h: &GradedSpace, j: usize, y: &[usize]) -> Result<GradedMap> {
        let a = self.act_left(i, x, h)?;
        let d = self.act_right(j, &a.space, y)?;
        let r = self.act_right(j, h, y)?;
        let e = self.act_left(i, x, &r.space)?;
        if d.space != e.space {
            return Err(Error::Layout(format!("Σ: gradings differ, {:?} vs {:?}", d.space, e.space)));
        }
        let mut out = GradedMap::zero(d.space.clone(), e.space.clone());
        for (z, _) in d.space.components() {
            let block = if self.is_edge(i, j, z) {
                self.sigma_edge(i, x, y, &a, &d, &r, &e, z)?
            } else {
                self.sigma_generic(i, j, &a, &d, &r, &e, z)?
            };
            out.set_block(z, block)?;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn sigma_generic(
        &self,
        i: usize,
        j: usize,
        a: &ActionResult,
        d: &ActionResult,
        r: &ActionResult,
        e: &ActionResult,
        z: &ReducedWord,
    ) -> Result<CMat> {
        let n = d.space.dim(z);
        let mut dom: BTreeMap<SwapLabel, usize> = BTreeMap::new();
        let (_, pr) = self.tail(z, j)?;
        for db in d.blocks(z) {
            let (pl, _) = self.head(i, &db.inner)?;
            for ab in a.blocks(&db.inner) {
                for k2 in 0..db.n_v {
                    for k1 in 0..ab.n_v {
                        for hh in 0..ab.dim_h {
                            let label = SwapLabel {
                                left: (ab.gamma, pl, k1),
                                right: (db.gamma, pr, k2),
                                inner: ab.inner.clone(),
                                h: hh,
                            };
                            dom.insert(label, db.index(Side::Right, k2, ab.index(Side::Left, k1, hh)));
                        }
                    }
                }
            }
        }
        let mut m = CMat::zeros(n, n);
        let (pl, _) = self.head(i, z)?;
        let mut seen = 0;
        for eb in e.blocks(z) {
            let (_, pr) = self.tail(&eb.inner, j)?;
            for rb in r.blocks(&eb.inner) {
                for k1 in 0..eb.n_v {
                    for k2 in 0..rb.n_v {
                        for hh in 0..rb.dim_h {
                            let label = SwapLabel {
                                left: (eb.gamma, pl, k1),
                                right: (rb.gamma, pr, k2),
                                inner: rb.inner.clone(),
                                h: hh,
                            };
                            let col = *dom.get(&label).ok_or_else(|| {
                                Error::Layout(format!("Σ: no domain vector for {label:?} at {z}"))
                            })?;
                            m[(eb.index(Side::Left, k1, rb.index(Side::Right, k2, hh)), col)] = c(1.0);
                            seen += 1;
                        }
                    }
                }
            }
        }
        if seen != dom.len() || seen != n {
            return Err(Error::Layout(format!("Σ: layouts at {z} do not match")));
        }
        Ok(m)
    }

    #[allow(clippy::too_many_arguments)]
    fn sigma_edge(
        &self,
        i: usize,
        x: &[usize],
        y: &[usize],
        a: &ActionResult,
        d: &ActionResult,
        r: &ActionResult,
        e: &ActionResult,
        z: &ReducedWord,
    ) -> Result<CMat> {
        let cat = self.cat(i);
        let n = d.space.dim(z);
        let (_, pi) = self.tail(z, i)?;
        let id_x = identity(cat.carrier_dim(x));
        let id_y = identity(cat.carrier_dim(y));
        let mut m = CMat::zeros(n, n);
        for db in d.blocks(z) {
            let g1 = db.gamma;
            let v1s = self.basis(i, &d.summand_object(g1), pi);
            let drop_g1 = self.mutated(Mutation::DropSigmaGammaPrimeSqrt);
            let s1 = if drop_g1 { 1.0 } else { self.sqrt_qdim(i, g1) };
            for ab in a.blocks(&db.inner) {
                let g = ab.gamma;
                let vs = self.basis(i, &a.summand_object(g), g1);
                for eb in e.blocks(z) {
                    let sigma = eb.gamma;
                    let Some(rb) = r.block(&eb.inner, g) else { continue };
                    if rb.inner != ab.inner {
                        continue;
                    }
                    let drop_s = self.mutated(Mutation::DropSigmaSigmaSqrt);
                    let s2 = if drop_s { 1.0 } else { self.sqrt_qdim(i, sigma) };
                    let ws = self.basis(i, &r.summand_object(g), sigma);
                    let bobj = e.summand_object(sigma);
                    for (k1, v) in vs.iter().enumerate() {
                        let v_lift = kron(v, &id_y);
                        for (k2, v1) in v1s.iter().enumerate() {
                            let base = &v_lift * v1;
                            for (kw, w) in ws.iter().enumerate() {
                                let comp = kron(&id_x, &w.adjoint()) * &base;
                                let coeffs = self.expand(i, &bobj, pi, &comp);
                                for hh in 0..ab.dim_h {
                                    let col = db.index(Side::Right, k2, ab.index(Side::Left, k1, hh));
                                    for (mm, coeff) in coeffs.iter().enumerate() {
                                        let row = eb.index(Side::Left, mm, rb.index(Side::Right, kw, hh));
                                        m[(row, col)] += coeff * c(s1 * s2);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// T_X: ⋆ ◁ᵢ X → X ▷ᵢ ⋆, identifying the two decompositions of X.
    pub fn vacuum_swap(&self, i: usize, x: &[usize]) -> Result<GradedMap> {
        let star = self.star();
        let r = self.act_right(i, &star, x)?;
        let l = self.act_left(i, x, &star)?;
        if r.space != l.space {
            return Err(Error::Layout("T: gradings differ".into()));
        }
        let mut out = GradedMap::zero(r.space.clone(), l.space.clone());
        for (z, blocks) in &r.layout {
            let (_, pi) = self.tail(z, i)?;
            let dst = out.block_mut(z).expect("same grading");
            for rb in blocks {
                let lb = l.block(z, rb.gamma).ok_or_else(|| Error::Layout(format!("T: no summand at {z}")))?;
                let vs = self.basis(i, &r.summand_object(rb.gamma), pi);
                let lobj = l.summand_object(lb.gamma);
                for (k, v) in vs.iter().enumerate() {
                    for (m, coeff) in self.expand(i, &lobj, pi, v).into_iter().enumerate() {
                        dst[(lb.index(Side::Left, m, 0), rb.index(Side::Right, k, 0))] = coeff;
                    }
                }
            }
        }
        Ok(out)
    }
}
