//! Independent oracles shared by the integration tests. None of them call the
//! grading DP: they work from factor fusion tables, closed formulas or group
//! characters only.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use freeprod::linalg::C64;
use freeprod::realization::{builtin_amalgam, ConcreteAmalgam};
use freeprod::rep_groups::{builtin_category, builtin_spec, ConcreteCategory};
use freeprod::scalar::Scalar;
use freeprod::tlj::{pointed_tlj, TljParams};
use num_rational::Rational64;
use freeprod::words::{Amalgam, Letter, Word};
use freeprod::ExactAmalgam;

/// Decomposes a general word by repeatedly deleting unit letters and merging
/// the leftmost pair of adjacent same-factor letters with the factor's own
/// fusion table. Keys are word literals.
pub fn rewrite<S: Scalar>(am: &Amalgam<S>, v: &Word) -> BTreeMap<String, u64> {
    let mut memo = BTreeMap::new();
    rewrite_memo(am, v, &mut memo)
}

fn rewrite_memo<S: Scalar>(
    am: &Amalgam<S>,
    v: &Word,
    memo: &mut BTreeMap<String, BTreeMap<String, u64>>,
) -> BTreeMap<String, u64> {
    let key = v.to_string();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let letters = v.letters();
    let rebuild = |ls: Vec<Letter>| am.word(ls, Some(v.source())).expect("rewriting keeps words composable");
    let out = if let Some(k) = letters.iter().position(|l| am.is_unit_letter(l)) {
        let mut ls = letters.to_vec();
        ls.remove(k);
        rewrite_memo(am, &rebuild(ls), memo)
    } else if let Some(k) = (0..letters.len().saturating_sub(1)).find(|&k| letters[k].factor == letters[k + 1].factor) {
        let i = letters[k].factor;
        let fused = am.factor(i).fuse_pair(&letters[k].irr, &letters[k + 1].irr).expect("composable pair");
        let mut acc = BTreeMap::new();
        for (gamma, m) in fused.terms() {
            let mut ls = letters[..k].to_vec();
            ls.push(Letter::new(i, gamma.clone()));
            ls.extend_from_slice(&letters[k + 2..]);
            for (w, n) in rewrite_memo(am, &rebuild(ls), memo) {
                *acc.entry(w).or_insert(0) += m * n;
            }
        }
        acc
    } else {
        BTreeMap::from([(key.clone(), 1)])
    };
    memo.insert(key, out.clone());
    out
}

/// Σ mult² over a rewriting decomposition: dim End(v).
pub fn rewrite_end_dim<S: Scalar>(am: &Amalgam<S>, v: &Word) -> u64 {
    rewrite(am, v).values().map(|m| m * m).sum()
}

/// The glued pair of pointed TLJs (b₁ = a₂) in exact arithmetic.
pub fn glued_pointed_tlj(d1: Rational64, d2: Rational64) -> Amalgam<Rational64> {
    let p1 = pointed_tlj(&TljParams::new(d1).unwrap()).unwrap();
    let p2 = pointed_tlj(&TljParams::new(d2).unwrap()).unwrap();
    let shared = BTreeMap::from([("*".to_string(), vec![p1.b.clone(), p2.a.clone()])]);
    Amalgam::new(vec![p1.ambient.clone(), p2.ambient.clone()], shared).unwrap()
}

/// u ū u ⋯ with n alternating factors, u = [f1]₁[f1]₂, over the glued pair.
pub fn composed_box_word(am: &Amalgam<Rational64>, n: usize) -> Word {
    let (u, ubar) = ("[f1_ab@1][f1_ab@2]", "[f1_ba@2][f1_ba@1]");
    let text: String = (1..=n).map(|k| if k % 2 == 1 { u } else { ubar }).collect();
    am.parse_word(&text).unwrap()
}

/// Box dimensions of the free composition of two pointed TLJs by exact rewriting.
pub fn rewritten_box_dims(d1: Rational64, d2: Rational64, n_max: usize) -> Vec<u64> {
    let am = glued_pointed_tlj(d1, d2);
    let mut out = vec![1];
    for n in 1..=n_max {
        out.push(rewrite_end_dim(&am, &composed_box_word(&am, n)));
    }
    out
}

/// Dyck paths with 2n steps, counted by a height DP.
pub fn ballot_catalan(n: usize) -> u64 {
    let mut heights = vec![0u64; 2 * n + 2];
    heights[0] = 1;
    for _ in 0..2 * n {
        let mut next = vec![0u64; heights.len()];
        for (h, &c) in heights.iter().enumerate() {
            if c == 0 {
                continue;
            }
            next[h + 1] += c;
            if h > 0 {
                next[h - 1] += c;
            }
        }
        heights = next;
    }
    heights[0]
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128) as u64
}

/// (3n choose n) / (2n + 1).
pub fn fuss_catalan(n: u64) -> u64 {
    binomial(3 * n, n) / (2 * n + 1)
}

/// ⟨χ_a χ_b, χ_c⟩ over the group.
pub fn character_multiplicity(cat: &ConcreteCategory, a: usize, b: usize, c: usize) -> u64 {
    let g = cat.group();
    let chi = |k: usize, x: usize| -> C64 { cat.rep(k).matrices[x].trace() };
    let sum: C64 = (0..g.order()).map(|x| chi(a, x) * chi(b, x) * chi(c, x).conj()).sum();
    let m = sum.re / g.order() as f64;
    assert!((m - m.round()).abs() < 1e-9 && sum.im.abs() < 1e-9, "non-integral character product {sum}");
    m.round() as u64
}

pub fn exact_amalgam(names: &[&str]) -> ExactAmalgam {
    Amalgam::over_single_cell(names.iter().map(|n| builtin_spec(n).unwrap()).collect()).unwrap()
}

pub fn concrete(names: &[&str]) -> ConcreteAmalgam {
    builtin_amalgam(names).unwrap()
}

pub fn category(name: &str) -> Arc<ConcreteCategory> {
    Arc::new(builtin_category(name).unwrap())
}

/// Every general word over the given letters with at most `n` letters.
pub fn general_words<S: Scalar>(am: &Amalgam<S>, letters: &[Letter], n: usize) -> Vec<Word> {
    let cell = am.cells().into_iter().next().expect("a 0-cell");
    let mut out = vec![Word::empty(cell.clone())];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                let mut x = w.clone();
                x.push(l.clone());
                next.push(x);
            }
        }
        out.extend(next.iter().map(|ls| am.word(ls.clone(), Some(&cell)).unwrap()));
        layer = next;
    }
    out
}

/// All letters (units included) of every factor within `depth`.
pub fn all_letters<S: Scalar>(am: &Amalgam<S>, depth: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    for i in 0..am.num_factors() {
        let mut irrs = am.factor(i).window(depth);
        irrs.sort();
        out.extend(irrs.into_iter().map(|x| Letter::new(i, x)));
    }
    out
}
