mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::exact_amalgam;
use freeprod::tlj::{pointed_tlj, TljParams};
use freeprod::words::{Amalgam, Letter, ReducedWord};
use freeprod::{Error, ZeroCell};
use proptest::prelude::*;

fn strings(ws: &[ReducedWord]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

#[test]
fn left_cons_examples() {
    let am = exact_amalgam(&["S3", "Z2"]);
    let a = am.cells()[0].clone();
    let empty = am.empty_word(&a).unwrap();
    let one = am.factor(0).irreducible("1").unwrap();
    let std = am.factor(0).irreducible("std").unwrap();
    assert_eq!(am.left_cons(0, &one, &empty).unwrap(), empty);
    let single = am.left_cons(0, &std, &empty).unwrap();
    assert_eq!(single.to_string(), "[std@1]");
    let tail = am.parse_reduced("[g@2][sgn@1]").unwrap();
    assert_eq!(am.left_cons(0, &std, &tail).unwrap().to_string(), "[std@1][g@2][sgn@1]");
    assert!(matches!(am.left_cons(0, &std, &single), Err(Error::Precondition(_))));
}

#[test]
fn z2_z2_words_up_to_three() {
    let am = exact_amalgam(&["Z2", "Z2"]);
    let a = am.cells()[0].clone();
    assert_eq!(strings(&am.enumerate_reduced(&a, &a, 0, 1).unwrap()), vec!["()@a"]);
    let ws = am.enumerate_reduced(&a, &a, 3, 1).unwrap();
    assert_eq!(
        strings(&ws),
        vec![
            "()@a",
            "[g@1]",
            "[g@2]",
            "[g@1][g@2]",
            "[g@2][g@1]",
            "[g@1][g@2][g@1]",
            "[g@2][g@1][g@2]",
        ]
    );
}

/// Every composable letter sequence of length ≤ n over the factor windows,
/// filtered by hand to the reduced ones of type (a, b).
fn brute_force<S: freeprod::Scalar>(am: &Amalgam<S>, a: &ZeroCell, b: &ZeroCell, n: usize, depth: usize) -> BTreeSet<String> {
    let letters = common::all_letters(am, depth);
    let mut out = BTreeSet::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=n {
        for ls in &layer {
            let Ok(w) = am.word(ls.clone(), Some(a)) else { continue };
            let alternating = ls.windows(2).all(|p| p[0].factor != p[1].factor);
            let no_units = ls.iter().all(|l| !am.factor(l.factor).is_unit(&l.irr));
            if w.source() == a && w.target() == b && alternating && no_units {
                out.insert(w.to_string());
            }
        }
        if len == n {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|ls| {
                letters.iter().map(move |l| {
                    let mut x = ls.clone();
                    x.push(l.clone());
                    x
                })
            })
            .collect();
    }
    out
}

#[test]
fn pointed_tlj_gluing_matches_brute_force() {
    let p = pointed_tlj(&TljParams::new(2.5f64).unwrap()).unwrap();
    let shared = BTreeMap::from([("*".to_string(), vec![p.b.clone(), p.a.clone()])]);
    let am = Amalgam::new(vec![p.ambient.clone(), p.ambient.clone()], shared).unwrap();
    let a = am.glued(0, &p.a).unwrap();
    let c = am.glued(1, &p.b).unwrap();
    for depth in 1..=3 {
        let ws = am.enumerate_reduced(&a, &c, 2, depth).unwrap();
        let got: BTreeSet<String> = strings(&ws).into_iter().collect();
        assert_eq!(got.len(), ws.len(), "duplicates at depth {depth}");
        assert_eq!(got, brute_force(&am, &a, &c, 2, depth), "depth {depth}");
        assert!(!got.is_empty());
    }
}

#[test]
fn is_reduced_examples() {
    let am = exact_amalgam(&["S3", "Z2"]);
    assert!(am.is_reduced(&am.parse_word("()@a").unwrap()));
    assert!(!am.is_reduced(&am.parse_word("[1@1]").unwrap()));
    assert!(!am.is_reduced(&am.parse_word("[std@1][sgn@1]").unwrap()));
    assert!(am.is_reduced(&am.parse_word("[std@1][g@2][sgn@1]").unwrap()));
}

#[test]
fn word_literals_round_trip() {
    let am = exact_amalgam(&["S3", "Z2"]);
    for text in ["()@a", "[std@1]", "[std@1][g@2][std@1]", "[g@2][g@2][1@1]"] {
        assert_eq!(am.parse_word(text).unwrap().to_string(), text);
    }
    assert!(am.parse_word("[std@3]").is_err());
    assert!(am.parse_word("[nope@1]").is_err());
    assert!(am.parse_word("()").is_err());
}

#[test]
fn left_cons_exhausts_each_factor() {
    let am = exact_amalgam(&["S3", "Z2"]);
    let a = am.cells()[0].clone();
    let all = am.enumerate_reduced(&a, &a, 3, 1).unwrap();
    for i in 0..2 {
        let mut hits: BTreeMap<String, usize> = BTreeMap::new();
        for alpha in am.factor(i).window(1) {
            for w in all.iter().filter(|w| w.first_factor() != Some(i)) {
                let z = am.left_cons(i, &alpha, w).unwrap();
                if z.len() <= 3 {
                    *hits.entry(z.to_string()).or_insert(0) += 1;
                }
            }
        }
        for w in &all {
            assert_eq!(hits.get(&w.to_string()), Some(&1), "{w} via factor {}", i + 1);
        }
        assert_eq!(hits.len(), all.len());
    }
}

#[test]
fn enumeration_is_stable_and_sorted() {
    let am = exact_amalgam(&["S3", "Z2", "Z3"]);
    let a = am.cells()[0].clone();
    let first = am.enumerate_reduced(&a, &a, 3, 1).unwrap();
    let second = am.enumerate_reduced(&a, &a, 3, 1).unwrap();
    assert_eq!(first, second);
    assert!(first.windows(2).all(|p| p[0] < p[1]));
    // words ending in factor i: non-unit letters of i times words not ending in i
    let per_factor = [2usize, 1, 2];
    let mut by_last = per_factor.to_vec();
    let mut total = 1 + by_last.iter().sum::<usize>();
    for _ in 1..3 {
        let sum: usize = by_last.iter().sum();
        by_last = (0..3).map(|i| per_factor[i] * (sum - by_last[i])).collect();
        total += by_last.iter().sum::<usize>();
    }
    assert_eq!(first.len(), total);
}

fn pick(am: &Amalgam<num_rational::Rational64>, seed: usize) -> ReducedWord {
    let a = am.cells()[0].clone();
    let all = am.enumerate_reduced(&a, &a, 4, 1).unwrap();
    all[seed % all.len()].clone()
}

proptest! {
    #[test]
    fn left_cons_stays_reduced(seed in 0usize..1000, k in 0usize..3) {
        let am = exact_amalgam(&["S3", "Z2"]);
        let w = pick(&am, seed);
        let i = if w.first_factor() == Some(0) { 1 } else { 0 };
        let window = am.factor(i).window(1);
        let alpha = &window[k % window.len()];
        let z = am.left_cons(i, alpha, &w).unwrap();
        prop_assert!(am.is_reduced(z.as_word()));
        prop_assert!(z.len() == w.len() || z.len() == w.len() + 1);
    }

    #[test]
    fn dual_is_an_involution(seed in 0usize..1000) {
        let am = exact_amalgam(&["S3", "Z3"]);
        let w = pick(&am, seed);
        let d = am.dual_reduced(&w).unwrap();
        prop_assert_eq!(d.len(), w.len());
        prop_assert_eq!(am.dual_reduced(&d).unwrap(), w);
    }
}
