mod common;

use std::collections::BTreeMap;

use common::{all_letters, ballot_catalan, exact_amalgam, fuss_catalan, rewrite, rewritten_box_dims};
use freeprod::free_fusion::{
    box_dims, decompose_word, free_compose, free_product_spec, hom_dim_words, mult_in_word, nondegenerate, word_qdim,
    Bound, PointedSpec,
};
use freeprod::fusion::{AnySpec, SpecDocument};
use freeprod::tlj::{pointed_tlj, tlj_spec, TljParams};
use freeprod::words::{Amalgam, Word};
use freeprod::{Bundle, FloatAmalgam, ZeroCell};
use num_rational::Rational64;
use proptest::prelude::*;

fn tlj_pair(d1: f64, d2: f64) -> FloatAmalgam {
    let f = |d| tlj_spec(&TljParams::new(d).unwrap()).unwrap();
    Amalgam::over_single_cell(vec![f(d1), f(d2)]).unwrap()
}

fn entries(am: &freeprod::ExactAmalgam, text: &str) -> Vec<(String, u64)> {
    decompose_word(am, &am.parse_word(text).unwrap(), Bound::new(6, 1)).unwrap().entries()
}

#[test]
fn mult_in_word_examples() {
    let am = tlj_pair(2.5, 3.0);
    let e = am.parse_reduced("()@a").unwrap();
    assert_eq!(mult_in_word(&am, &e, e.as_word()).unwrap(), 1);
    let f1 = am.parse_reduced("[f1@1]").unwrap();
    assert_eq!(mult_in_word(&am, &f1, f1.as_word()).unwrap(), 1);
    let v = am.parse_word("[f1@1][f1@1]").unwrap();
    assert_eq!(mult_in_word(&am, &e, &v).unwrap(), 1);
    assert_eq!(mult_in_word(&am, &am.parse_reduced("[f2@1]").unwrap(), &v).unwrap(), 1);
    assert_eq!(mult_in_word(&am, &f1, &v).unwrap(), 0);
}

#[test]
fn decompose_word_examples() {
    assert_eq!(entries(&exact_amalgam(&["S3", "Z2"]), "()@a"), vec![("()@a".to_string(), 1)]);
    assert_eq!(entries(&exact_amalgam(&["Z2", "Z2"]), "[g@1][g@1]"), vec![("()@a".to_string(), 1)]);
    assert_eq!(
        entries(&exact_amalgam(&["S3", "Z2"]), "[std@1][std@1]"),
        vec![("()@a".to_string(), 1), ("[sgn@1]".to_string(), 1), ("[std@1]".to_string(), 1)]
    );
}

#[test]
fn hom_dim_and_qdim_examples() {
    let am = exact_amalgam(&["S3", "Z2"]);
    let v = am.parse_word("[std@1][g@2]").unwrap();
    let v2 = am.parse_word("[sgn@1][g@2]").unwrap();
    assert_eq!(hom_dim_words(&am, &v, &v).unwrap(), 1);
    assert_eq!(hom_dim_words(&am, &v, &v2).unwrap(), 0);
    assert_eq!(word_qdim(&am, &v).unwrap(), Rational64::from_integer(2));
    assert_eq!(word_qdim(&am, &am.parse_word("()@a").unwrap()).unwrap(), Rational64::from_integer(1));

    let tt = tlj_pair(2.5, 3.0);
    let d = word_qdim(&tt, &tt.parse_word("[f1@1][f1@2]").unwrap()).unwrap();
    assert!((d - 7.5).abs() < 1e-12);
}

#[test]
fn free_product_spec_examples() {
    let am = exact_amalgam(&["S3", "Z2"]);
    let spec = free_product_spec(&am, Bound::new(4, 1));
    assert!(spec.validate(3).unwrap().is_clean());
    let x = spec.irreducible("[std@1][g@2]").unwrap();
    let xd = spec.dual(&x).unwrap();
    assert_eq!(xd.label(), "[g@2][std@1]");
    let unit = spec.unit(&ZeroCell::new("a")).unwrap();
    assert_eq!(spec.fuse_pair(&x, &xd).unwrap().mult(&unit), 1);

    let zz = exact_amalgam(&["Z2", "Z2"]);
    let spec = free_product_spec(&zz, Bound::new(6, 1));
    let irrs = spec.window(3);
    assert!(irrs.len() > 4);
    for x in &irrs {
        assert_eq!(spec.qdim(x).unwrap(), Rational64::from_integer(1));
        for y in &irrs {
            let p = spec.fuse_pair(x, y).unwrap();
            assert_eq!((p.distinct_terms(), p.total()), (1, 1), "{x} ⊗ {y}");
        }
    }
}

#[test]
fn free_compose_of_pointed_tlj() {
    let (d1, d2) = (2.5f64, 3.0f64);
    let p = free_compose(
        &pointed_tlj(&TljParams::new(d1).unwrap()).unwrap(),
        &pointed_tlj(&TljParams::new(d2).unwrap()).unwrap(),
    )
    .unwrap();
    assert!((p.point_qdim().unwrap() - d1 * d2).abs() < 1e-12);
    assert_eq!(p.ambient.hom_dim(&p.point, &p.point).unwrap(), 1);
    assert!(nondegenerate(&p, 4).unwrap().holds());
}

#[test]
fn single_pointed_tlj_boxes_are_catalan() {
    for delta in [2.0f64, 2.5, 3.0] {
        let p = pointed_tlj(&TljParams::new(delta).unwrap()).unwrap();
        let expected: Vec<u64> = (0..=6).map(ballot_catalan).collect();
        assert_eq!(box_dims(&p, 6).unwrap(), expected);
        assert_eq!(box_dims(&p, 0).unwrap(), vec![1]);
        for depth in 1..=4 {
            assert!(nondegenerate(&p, depth).unwrap().holds());
        }
    }
}

#[test]
fn composed_boxes_are_fuss_catalan() {
    let expected: Vec<u64> = (0..=5).map(fuss_catalan).collect();
    assert_eq!(expected, vec![1, 1, 3, 12, 55, 273]);
    for (d1, d2) in [(2.0, 2.0), (2.5, 3.0)] {
        let p = free_compose(
            &pointed_tlj(&TljParams::new(d1).unwrap()).unwrap(),
            &pointed_tlj(&TljParams::new(d2).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(box_dims(&p, 5).unwrap(), expected, "({d1}, {d2})");
    }
    let r = |n, d| Rational64::new(n, d);
    assert_eq!(rewritten_box_dims(r(2, 1), r(2, 1), 5), expected);
    assert_eq!(rewritten_box_dims(r(5, 2), r(3, 1), 5), expected);
}

const INVERTIBLE: &str = r#"{
  "exact": true,
  "zero_cells": ["a", "b"],
  "irreducibles": [
    {"label": "1a", "source": "a", "target": "a", "dual": "1a", "qdim": 1},
    {"label": "1b", "source": "b", "target": "b", "dual": "1b", "qdim": 1},
    {"label": "x", "source": "a", "target": "b", "dual": "xd", "qdim": 1},
    {"label": "xd", "source": "b", "target": "a", "dual": "x", "qdim": 1}
  ],
  "units": {"a": "1a", "b": "1b"},
  "fusion": [
    {"left": "1a", "right": "1a", "result": {"1a": 1}},
    {"left": "1a", "right": "x", "result": {"x": 1}},
    {"left": "1b", "right": "1b", "result": {"1b": 1}},
    {"left": "1b", "right": "xd", "result": {"xd": 1}},
    {"left": "x", "right": "1b", "result": {"x": 1}},
    {"left": "x", "right": "xd", "result": {"1a": 1}},
    {"left": "xd", "right": "1a", "result": {"xd": 1}},
    {"left": "xd", "right": "x", "result": {"1b": 1}}
  ]
}"#;

fn invertible_pointed(extra: bool) -> PointedSpec<Rational64> {
    let mut doc = SpecDocument::from_json(INVERTIBLE).unwrap();
    if extra {
        let mut z = doc.irreducibles[0].clone();
        z.label = "z".into();
        z.dual = "z".into();
        doc.irreducibles.push(z);
        let mut zz = doc.fusion[0].clone();
        zz.left = "z".into();
        zz.right = "z".into();
        doc.fusion.push(zz);
    }
    let AnySpec::Exact(spec) = AnySpec::from_document(&doc).unwrap() else { panic!("exact document") };
    let x = spec.irreducible("x").unwrap();
    PointedSpec::new(&spec, ZeroCell::new("a"), ZeroCell::new("b"), Bundle::single(&x)).unwrap()
}

#[test]
fn invertible_point_has_trivial_boxes() {
    let p = invertible_pointed(false);
    assert!(p.ambient.validate(2).unwrap().is_clean());
    assert_eq!(box_dims(&p, 6).unwrap(), vec![1; 7]);
    assert!(nondegenerate(&p, 3).unwrap().holds());
}

#[test]
fn disconnected_irreducible_is_degenerate() {
    let p = invertible_pointed(true);
    let report = nondegenerate(&p, 3).unwrap();
    assert!(!report.holds());
    assert_eq!(report.missing, vec!["z".to_string()]);
}

#[test]
fn zero_point_is_rejected() {
    let p = invertible_pointed(false);
    let zero = Bundle::zero(ZeroCell::new("a"), ZeroCell::new("b"));
    assert!(PointedSpec::new(&p.ambient, p.a.clone(), p.b.clone(), zero).is_err());
}

#[test]
fn three_factors_agree_with_rewriting() {
    let am = exact_amalgam(&["S3", "Z2", "Z3"]);
    let letters = all_letters(&am, 1);
    for v in common::general_words(&am, &letters, 3) {
        let d = decompose_word(&am, &v, Bound::new(3, 1)).unwrap();
        assert_eq!(d.entries().into_iter().collect::<BTreeMap<_, _>>(), rewrite(&am, &v), "{v}");
    }
}

fn s3_z2_word(len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..5, 0..=len)
}

fn build(am: &freeprod::ExactAmalgam, idx: &[usize]) -> Word {
    let letters = all_letters(am, 1);
    let cell = am.cells()[0].clone();
    am.word(idx.iter().map(|&k| letters[k].clone()).collect(), Some(&cell)).unwrap()
}

/// Σ_x mult(x, left)·decompose(x · right), keyed by word literal.
fn fold(am: &freeprod::ExactAmalgam, left: &Word, right: &Word, split_left: bool) -> BTreeMap<String, u64> {
    let bound = Bound::new(8, 1);
    let mut out = BTreeMap::new();
    let (outer, inner) = if split_left { (left, right) } else { (right, left) };
    for (x, m) in decompose_word(am, outer, bound).unwrap().terms {
        let joined = if split_left { x.as_word().concat(inner) } else { inner.concat(x.as_word()) }.unwrap();
        for (w, n) in decompose_word(am, &joined, bound).unwrap().entries() {
            *out.entry(w).or_insert(0) += m * n;
        }
    }
    out
}

proptest! {
    #[test]
    fn rewriting_agrees_with_grading(idx in s3_z2_word(5)) {
        let am = exact_amalgam(&["S3", "Z2"]);
        let v = build(&am, &idx);
        let d = decompose_word(&am, &v, Bound::new(5, 1)).unwrap();
        prop_assert_eq!(d.entries().into_iter().collect::<BTreeMap<_, _>>(), rewrite(&am, &v));
        prop_assert_eq!(d.total_qdim(&am).unwrap(), word_qdim(&am, &v).unwrap());
        for w in d.terms.keys() {
            prop_assert!(am.is_reduced(w.as_word()));
        }
    }

    #[test]
    fn decomposition_is_associative(a in s3_z2_word(2), b in s3_z2_word(2), c in s3_z2_word(2)) {
        let am = exact_amalgam(&["S3", "Z2"]);
        let (u, v, w) = (build(&am, &a), build(&am, &b), build(&am, &c));
        let uv = u.concat(&v).unwrap();
        let vw = v.concat(&w).unwrap();
        prop_assert_eq!(fold(&am, &uv, &w, true), fold(&am, &u, &vw, false));
    }

    #[test]
    fn duals_have_dual_multiplicities(idx in s3_z2_word(4)) {
        let am = exact_amalgam(&["S3", "Z3"]);
        let v = build(&am, &idx.iter().map(|k| k % 6).collect::<Vec<_>>());
        let vd = am.dual_word(&v).unwrap();
        for (w, m) in decompose_word(&am, &v, Bound::new(4, 1)).unwrap().terms {
            prop_assert_eq!(mult_in_word(&am, &am.dual_reduced(&w).unwrap(), &vd).unwrap(), m);
        }
    }

    #[test]
    fn tlj_words_conserve_qdim(idx in prop::collection::vec((0usize..2, 0usize..4), 0..5)) {
        let am = tlj_pair(2.5, 3.0);
        let text: String = idx.iter().map(|(i, n)| format!("[f{n}@{}]", i + 1)).collect();
        let v = if text.is_empty() { am.parse_word("()@a").unwrap() } else { am.parse_word(&text).unwrap() };
        let d = decompose_word(&am, &v, Bound::new(5, 16)).unwrap();
        let q = word_qdim(&am, &v).unwrap();
        prop_assert!((d.total_qdim(&am).unwrap() - q).abs() < 1e-9 * q.max(1.0));
        prop_assert_eq!(d.entries().into_iter().collect::<BTreeMap<_, _>>(), rewrite(&am, &v));
    }
}
