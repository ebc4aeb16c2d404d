//! Assembly maps Ψ_{v,w} into plain Hilbert spaces and the induced map on
//! 2-cells. The fibre functor of each factor is the identity on carriers.

use std::sync::Arc;

use super::actions::Side;
use super::functor::CWrMorphism;
use super::{ConcreteAmalgam, Mutation, RLetter};
use crate::error::{Error, Result};
use crate::linalg::{c, deviation, identity, kron, CMat, C64};
use crate::words::ReducedWord;

impl ConcreteAmalgam {
    /// Ψ_{v,w}(e_k) for every basis vector e_k of (v▷⋆)_w. Each matrix maps
    /// the carrier of w into the carrier of v.
    pub fn assembly_basis(&self, v: &[RLetter], w: &ReducedWord) -> Result<Arc<Vec<CMat>>> {
        let key = (v.to_vec(), w.clone());
        if let Some(hit) = self.cache.assembly.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let out = Arc::new(self.build_assembly(v, w)?);
        self.cache.assembly.lock().expect("cache poisoned").insert(key, out.clone());
        Ok(out)
    }

    fn build_assembly(&self, v: &[RLetter], w: &ReducedWord) -> Result<Vec<CMat>> {
        let Some((&(i, a), rest)) = v.split_first() else {
            return Ok(if w.is_empty() { vec![identity(1)] } else { Vec::new() });
        };
        let inner = self.word_action(rest, &self.star())?;
        let res = self.act_left(i, &[a], inner.space())?;
        let n = res.space.dim(w);
        let mut out = vec![CMat::zeros(self.carrier_dim(v), self.word_carrier(w)?); n];
        if n == 0 {
            return Ok(out);
        }
        let (pi, tail) = self.head(i, w)?;
        let id_a = identity(self.cat(i).dim(a));
        let id_tail = identity(self.word_carrier(&tail)?);
        for b in res.blocks(w) {
            let sub = self.assembly_basis(rest, &b.inner)?;
            let vs = self.basis(i, &res.summand_object(b.gamma), pi);
            let s = c(self.sqrt_qdim(i, b.gamma));
            for (k, vk) in vs.iter().enumerate() {
                let right = kron(vk, &id_tail);
                for (j, psi) in sub.iter().enumerate() {
                    out[b.index(Side::Left, k, j)] = kron(&id_a, psi) * &right * s;
                }
            }
        }
        Ok(out)
    }

    /// Carrier dimension of a reduced word.
    pub fn word_carrier(&self, w: &ReducedWord) -> Result<usize> {
        Ok(self.carrier_dim(&self.rletters(w.as_word())?))
    }

    /// Ψ_{v,w}(ζ) for a coordinate vector ζ of (v▷⋆)_w.
    pub fn assembly(&self, v: &[RLetter], w: &ReducedWord, zeta: &[C64]) -> Result<CMat> {
        let basis = self.assembly_basis(v, w)?;
        if zeta.len() != basis.len() {
            return Err(Error::Layout(format!(
                "vector of length {} in a component of dimension {}",
                zeta.len(),
                basis.len()
            )));
        }
        let mut out = CMat::zeros(self.carrier_dim(v), self.word_carrier(w)?);
        for (z, b) in zeta.iter().zip(basis.iter()) {
            out += b * *z;
        }
        Ok(out)
    }

    /// Ψ(η) = Σ_w Σ_ξ d(w) Ψ_{v',w}(η_⋆ξ) (Ψ_{v,w}ξ)*.
    pub fn universal_functor(&self, eta: &CWrMorphism) -> Result<CMat> {
        let mut out = CMat::zeros(self.carrier_dim(&eta.target), self.carrier_dim(&eta.source));
        for (w, d) in eta.star.domain().components() {
            let dw = if self.mutated(Mutation::DropPsiEtaDw) { 1.0 } else { self.word_qdim(w.as_word())? };
            let src = self.assembly_basis(&eta.source, w)?;
            let block = eta.star.block(w);
            for k in 0..d {
                let image: Vec<C64> = block.column(k).iter().cloned().collect();
                if image.is_empty() {
                    continue;
                }
                let lhs = self.assembly(&eta.target, w, &image)?;
                out += lhs * src[k].adjoint() * c(dw);
            }
        }
        Ok(out)
    }
}

/// Largest deviation in (Ψζ)*(Ψζ′) = δ_{ww′} d(w)⁻¹ ⟨ζ′,ζ⟩ over basis vectors
/// of every component of v▷⋆.
pub fn check_assembly_orthogonality(ca: &ConcreteAmalgam, v: &[RLetter]) -> Result<f64> {
    let space = ca.word_action(v, &ca.star())?.space().clone();
    let comps: Vec<(ReducedWord, Arc<Vec<CMat>>)> = space
        .components()
        .map(|(w, _)| ca.assembly_basis(v, w).map(|b| (w.clone(), b)))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (w, bw) in &comps {
        let dw = ca.word_qdim(w.as_word())?;
        for (w2, bw2) in &comps {
            for (a, x) in bw.iter().enumerate() {
                for (b, y) in bw2.iter().enumerate() {
                    let prod = x.adjoint() * y;
                    let expected = if w == w2 && a == b {
                        identity(prod.nrows()) * c(1.0 / dw)
                    } else {
                        CMat::zeros(prod.nrows(), prod.ncols())
                    };
                    worst = worst.max(deviation(&prod, &expected));
                }
            }
        }
    }
    Ok(worst)
}

/// Σ_{π,V} d(π) Ψ(δ(V⊗ξ)) Ψ(δ(V⊗ξ′))* = d(γ) 1_α ⊗ (Ψξ)(Ψξ′)* for all
/// components [γ]_i:w of v▷⋆ and v′▷⋆ and all basis vectors ξ, ξ′.
pub fn check_assembly_left_identity(ca: &ConcreteAmalgam, alpha: RLetter, v: &[RLetter], v2: &[RLetter]) -> Result<f64> {
    let (i, a) = alpha;
    let star = ca.star();
    let h1 = ca.word_action(v, &star)?.space().clone();
    let h2 = ca.word_action(v2, &star)?.space().clone();
    let r1 = ca.act_left(i, &[a], &h1)?;
    let r2 = ca.act_left(i, &[a], &h2)?;
    let av: Vec<RLetter> = std::iter::once(alpha).chain(v.iter().copied()).collect();
    let av2: Vec<RLetter> = std::iter::once(alpha).chain(v2.iter().copied()).collect();
    let cat = ca.cat(i);
    let mut worst: f64 = 0.0;
    for (y, d1) in h1.components() {
        let d2 = h2.dim(y);
        if d2 == 0 {
            continue;
        }
        let (gamma, w) = ca.head(i, y)?;
        let p1 = ca.assembly_basis(v, y)?;
        let p2 = ca.assembly_basis(v2, y)?;
        for x1 in 0..d1 {
            for x2 in 0..d2 {
                let rhs = kron(&identity(cat.dim(a)), &(&p1[x1] * p2[x2].adjoint())) * c(ca.qdim(i, gamma));
                let mut lhs = CMat::zeros(rhs.nrows(), rhs.ncols());
                for pi in 0..cat.len() {
                    let z = ca.cons(i, pi, &w)?;
                    let (Some(b1), Some(b2)) = (r1.block(&z, gamma), r2.block(&z, gamma)) else { continue };
                    let q1 = ca.assembly_basis(&av, &z)?;
                    let q2 = ca.assembly_basis(&av2, &z)?;
                    for k in 0..b1.n_v {
                        let m1 = &q1[b1.index(Side::Left, k, x1)];
                        let m2 = &q2[b2.index(Side::Left, k, x2)];
                        lhs += m1 * m2.adjoint() * c(ca.qdim(i, pi));
                    }
                }
                worst = worst.max(deviation(&lhs, &rhs));
            }
        }
    }
    Ok(worst)
}

fn appended(v: &[RLetter], alpha: RLetter) -> Vec<RLetter> {
    v.iter().copied().chain(std::iter::once(alpha)).collect()
}

/// The right identity, with δ replaced by Σ̃_{v,α} ∘ δ_◁.
pub fn check_assembly_right_identity(ca: &ConcreteAmalgam, v: &[RLetter], v2: &[RLetter], alpha: RLetter) -> Result<f64> {
    let (i, a) = alpha;
    let star = ca.star();
    let h1 = ca.word_action(v, &star)?.space().clone();
    let h2 = ca.word_action(v2, &star)?.space().clone();
    let r1 = ca.act_right(i, &h1, &[a])?;
    let r2 = ca.act_right(i, &h2, &[a])?;
    let s1 = ca.vacuum_rearrange(v, alpha)?;
    let s2 = ca.vacuum_rearrange(v2, alpha)?;
    let (va, va2) = (appended(v, alpha), appended(v2, alpha));
    let cat = ca.cat(i);
    let mut worst: f64 = 0.0;
    for (y, d1) in h1.components() {
        let d2 = h2.dim(y);
        if d2 == 0 {
            continue;
        }
        let (w, gamma) = ca.tail(y, i)?;
        let p1 = ca.assembly_basis(v, y)?;
        let p2 = ca.assembly_basis(v2, y)?;
        for x1 in 0..d1 {
            for x2 in 0..d2 {
                let rhs = kron(&(&p1[x1] * p2[x2].adjoint()), &identity(cat.dim(a))) * c(ca.qdim(i, gamma));
                let mut lhs = CMat::zeros(rhs.nrows(), rhs.ncols());
                for pi in 0..cat.len() {
                    let z = ca.snoc(&w, i, pi)?;
                    let (Some(b1), Some(b2)) = (r1.block(&z, gamma), r2.block(&z, gamma)) else { continue };
                    let (t1, t2) = (s1.block(&z), s2.block(&z));
                    for k in 0..b1.n_v {
                        let m1 = ca.assembly(&va, &z, &column(&t1, b1.index(Side::Right, k, x1)))?;
                        let m2 = ca.assembly(&va2, &z, &column(&t2, b2.index(Side::Right, k, x2)))?;
                        lhs += m1 * m2.adjoint() * c(ca.qdim(i, pi));
                    }
                }
                worst = worst.max(deviation(&lhs, &rhs));
            }
        }
    }
    Ok(worst)
}

fn column(m: &CMat, k: usize) -> Vec<C64> {
    m.column(k).iter().cloned().collect()
}

/// Ψ_{vα, w:[π]}(Σ̃ δ_◁(ξ⊗V)) = d(γ)^{1/2} (Ψ_{v,w:[γ]}ξ ⊗ 1_α)(1_{Ψ(w)} ⊗ V).
pub fn check_assembly_right_version(ca: &ConcreteAmalgam, v: &[RLetter], alpha: RLetter) -> Result<f64> {
    let (i, a) = alpha;
    let h = ca.word_action(v, &ca.star())?.space().clone();
    let r = ca.act_right(i, &h, &[a])?;
    let s = ca.vacuum_rearrange(v, alpha)?;
    let va = appended(v, alpha);
    let cat = ca.cat(i);
    let mut worst: f64 = 0.0;
    for (z, blocks) in &r.layout {
        let (_, pi) = ca.tail(z, i)?;
        let t = s.block(z);
        for b in blocks {
            let (w, gamma) = ca.tail(&b.inner, i)?;
            let id_w = identity(ca.word_carrier(&w)?);
            let p = ca.assembly_basis(v, &b.inner)?;
            let vs = ca.basis(i, &r.summand_object(gamma), pi);
            for (k, vk) in vs.iter().enumerate() {
                for (x, px) in p.iter().enumerate() {
                    let lhs = ca.assembly(&va, z, &column(&t, b.index(Side::Right, k, x)))?;
                    let rhs = kron(px, &identity(cat.dim(a))) * kron(&id_w, vk) * c(ca.sqrt_qdim(i, gamma));
                    worst = worst.max(deviation(&lhs, &rhs));
                }
            }
        }
    }
    Ok(worst)
}
