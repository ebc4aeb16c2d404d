//! Numerical realization of the free product on word-graded Hilbert spaces.
//!
//! Factor categories are concrete representation categories of finite groups
//! (see [`crate::rep_groups`]). A factor-i object is a list of irreducible
//! indices. Every direct sum `⊕_γ (Xγ, π) ⊗ H_{[γ]:w}` is laid out by
//! canonical irreducible order, then intertwiner index, then H index (left
//! actions) or H index, then intertwiner index (right actions).

mod actions;
mod assembly;
mod functor;
mod space;
mod structure;
mod verify;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;

pub use actions::{ActionResult, Block, Side};
pub use assembly::{
    check_assembly_left_identity, check_assembly_orthogonality, check_assembly_right_identity,
    check_assembly_right_version,
};
pub use functor::{CWrMorphism, WordAction};
pub use space::{GradedMap, GradedSpace};
pub use verify::{verify_suite, CheckResult, TagSummary, VerificationReport, VerifyOptions};

use crate::error::{Error, Result};
use crate::fusion::{IrrId, ZeroCell};
use crate::linalg::{c, frobenius, CMat, C64};
use crate::rep_groups::ConcreteCategory;
use crate::words::{Amalgam, Letter, ReducedWord, Word};

/// Normalization of the chosen intertwiner bases of (X, π).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnbNormalization {
    /// Orthonormal for Tr_π(W*V); basis vectors satisfy V*V = d(π)⁻¹.
    #[default]
    TraceOrthonormal,
    /// Plain isometries, V*V = 1. Breaks unitarity in non-pointed factors.
    Isometric,
}

/// Deliberate corruptions of single scalar prefactors, for mutation testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    DropMuGammaSqrt,
    DropSigmaGammaPrimeSqrt,
    DropSigmaSigmaSqrt,
    DropPsiEtaDw,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RealizationConfig {
    pub normalization: OnbNormalization,
    pub mutation: Option<Mutation>,
}

/// A letter of a general word in realization form: factor and irrep index.
pub type RLetter = (usize, usize);

type BasisKey = (usize, Vec<usize>, usize);

/// Concrete factors glued over their single 0-cell.
pub struct ConcreteAmalgam {
    cats: Vec<Arc<ConcreteCategory>>,
    am: Amalgam<Rational64>,
    cell: ZeroCell,
    config: RealizationConfig,
    bases: Mutex<HashMap<BasisKey, Arc<Vec<CMat>>>>,
    pub(crate) cache: structure::Caches,
}

impl std::fmt::Debug for ConcreteAmalgam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConcreteAmalgam").field("factors", &self.cats).field("config", &self.config).finish()
    }
}

impl ConcreteAmalgam {
    pub fn new(cats: Vec<Arc<ConcreteCategory>>) -> Result<Self> {
        Self::with_config(cats, RealizationConfig::default())
    }

    pub fn with_config(cats: Vec<Arc<ConcreteCategory>>, config: RealizationConfig) -> Result<Self> {
        let am = Amalgam::over_single_cell(cats.iter().map(|c| c.spec().clone()).collect())?;
        let cell = am.cells().into_iter().next().expect("one glued cell");
        Ok(ConcreteAmalgam {
            cats,
            am,
            cell,
            config,
            bases: Mutex::new(HashMap::new()),
            cache: structure::Caches::default(),
        })
    }

    /// Same factors, different configuration, fresh caches.
    pub fn reconfigured(&self, config: RealizationConfig) -> Self {
        ConcreteAmalgam {
            cats: self.cats.clone(),
            am: self.am.clone(),
            cell: self.cell.clone(),
            config,
            bases: Mutex::new(HashMap::new()),
            cache: structure::Caches::default(),
        }
    }

    pub fn config(&self) -> RealizationConfig {
        self.config
    }

    pub fn amalgam(&self) -> &Amalgam<Rational64> {
        &self.am
    }

    pub fn cell(&self) -> &ZeroCell {
        &self.cell
    }

    pub fn cat(&self, i: usize) -> &ConcreteCategory {
        &self.cats[i]
    }

    pub fn num_factors(&self) -> usize {
        self.cats.len()
    }

    pub fn star(&self) -> GradedSpace {
        GradedSpace::star(&self.cell)
    }

    pub fn empty_word(&self) -> ReducedWord {
        ReducedWord::empty(self.cell.clone())
    }

    /// Irrep index of an irreducible of factor `i`.
    pub fn index_of(&self, i: usize, irr: &IrrId) -> Result<usize> {
        self.cats
            .get(i)
            .ok_or_else(|| Error::lookup("factor", (i + 1).to_string()))?
            .index_of(irr)
    }

    pub fn rletter(&self, l: &Letter) -> Result<RLetter> {
        Ok((l.factor, self.index_of(l.factor, &l.irr)?))
    }

    pub fn rletters(&self, v: &Word) -> Result<Vec<RLetter>> {
        v.letters().iter().map(|l| self.rletter(l)).collect()
    }

    pub fn letter_of(&self, (i, k): RLetter) -> Letter {
        Letter::new(i, self.cats[i].irr(k).clone())
    }

    pub fn word_of(&self, v: &[RLetter]) -> Word {
        let letters = v.iter().map(|&l| self.letter_of(l)).collect();
        self.am.word(letters, Some(&self.cell)).expect("single-cell words always compose")
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<RLetter>> {
        self.rletters(&self.am.parse_word(text)?)
    }

    /// The object of factor `i` made of the given irreps, units removed.
    pub fn object(&self, i: usize, irreps: &[usize]) -> Vec<usize> {
        let u = self.cats[i].unit_index();
        irreps.iter().copied().filter(|&k| k != u).collect()
    }

    pub fn qdim(&self, i: usize, k: usize) -> f64 {
        self.cats[i].qdim(k)
    }

    pub fn sqrt_qdim(&self, i: usize, k: usize) -> f64 {
        self.qdim(i, k).sqrt()
    }

    /// d(w), the product of the letter dimensions.
    pub fn word_qdim(&self, w: &Word) -> Result<f64> {
        let mut d = 1.0;
        for l in w.letters() {
            let (i, k) = self.rletter(l)?;
            d *= self.qdim(i, k);
        }
        Ok(d)
    }

    /// Carrier dimension of a general word under the fibre functor.
    pub fn carrier_dim(&self, v: &[RLetter]) -> usize {
        v.iter().map(|&(i, k)| self.cats[i].dim(k)).product()
    }

    /// Chosen basis of (X, π) for the object `obj` of factor `i`.
    pub fn basis(&self, i: usize, obj: &[usize], pi: usize) -> Arc<Vec<CMat>> {
        let obj = self.object(i, obj);
        let key = (i, obj.clone(), pi);
        if let Some(b) = self.bases.lock().expect("cache poisoned").get(&key) {
            return b.clone();
        }
        let raw = self.cats[i].intertwiners(&obj, pi);
        let b = match self.config.normalization {
            OnbNormalization::TraceOrthonormal => raw,
            OnbNormalization::Isometric => {
                let s = c(self.sqrt_qdim(i, pi));
                Arc::new(raw.iter().map(|v| v * s).collect())
            }
        };
        self.bases.lock().expect("cache poisoned").insert(key, b.clone());
        b
    }

    /// Coefficients of `x` in the chosen basis of (X, π), valid for any
    /// orthogonal basis.
    pub fn expand(&self, i: usize, obj: &[usize], pi: usize, x: &CMat) -> Vec<C64> {
        self.basis(i, obj, pi).iter().map(|b| frobenius(x, b) / frobenius(b, b)).collect()
    }

    /// Splits `z = [π]_i : w'` (π the unit if z does not start in factor i).
    pub fn head(&self, i: usize, z: &ReducedWord) -> Result<(usize, ReducedWord)> {
        let (pi, rest) = crate::free_fusion::peel(&self.am, i, z)?;
        Ok((self.index_of(i, &pi)?, rest))
    }

    /// Splits `z = w' : [π]_i`.
    pub fn tail(&self, z: &ReducedWord, i: usize) -> Result<(ReducedWord, usize)> {
        let (rest, pi) = crate::free_fusion::peel_right(&self.am, z, i)?;
        Ok((rest, self.index_of(i, &pi)?))
    }

    pub fn cons(&self, i: usize, pi: usize, w: &ReducedWord) -> Result<ReducedWord> {
        self.am.left_cons(i, self.cats[i].irr(pi), w)
    }

    pub fn snoc(&self, w: &ReducedWord, i: usize, pi: usize) -> Result<ReducedWord> {
        self.am.right_cons(w, i, self.cats[i].irr(pi))
    }

    pub(crate) fn mutated(&self, m: Mutation) -> bool {
        self.config.mutation == Some(m)
    }
}

/// Built-in concrete amalgam from group names such as `["S3", "Z2"]`.
pub fn builtin_amalgam(names: &[&str]) -> Result<ConcreteAmalgam> {
    let cats = names
        .iter()
        .map(|n| crate::rep_groups::builtin_category(n).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    ConcreteAmalgam::new(cats)
}
