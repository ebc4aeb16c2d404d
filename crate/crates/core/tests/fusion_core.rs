mod common;

use common::{ballot_catalan, category, character_multiplicity};
use freeprod::fusion::{AnySpec, SpecDocument, ViolationKind};
use freeprod::rep_groups::builtin_spec;
use freeprod::tlj::{tlj_spec, TljParams};
use freeprod::{Bundle, IrrId};
use num_rational::Rational64;
use proptest::prelude::*;

fn terms(b: &Bundle) -> Vec<(String, u64)> {
    b.terms().map(|(x, m)| (x.label().to_string(), m)).collect()
}

#[test]
fn z2_table_is_clean() {
    let spec = builtin_spec("Z2").unwrap();
    let report = spec.validate(4).unwrap();
    assert!(report.is_clean(), "{:?}", report.violations);
}

#[test]
fn corrupted_z2_table_is_caught() {
    let mut doc = builtin_spec("Z2").unwrap().to_document(2).unwrap();
    let gg = doc.fusion.iter_mut().find(|e| e.left == "g" && e.right == "g").unwrap();
    gg.result.insert("g".into(), 1);
    let AnySpec::Exact(spec) = AnySpec::from_document(&doc).unwrap() else { panic!("exact mode lost") };
    let report = spec.validate(3).unwrap();
    // g² = 1 + g is still an associative unital ring; only the dimensions break
    assert!(report.has(ViolationKind::DimensionConsistency), "{:?}", report.violations);
    let v = report.violations.iter().find(|v| v.kind == ViolationKind::DimensionConsistency).unwrap();
    assert_eq!(v.witness, vec!["g".to_string(), "g".to_string()]);
}

#[test]
fn tlj_at_two_is_clean_with_integer_dims() {
    let spec = tlj_spec(&TljParams::new(Rational64::from_integer(2)).unwrap()).unwrap();
    assert!(spec.validate(5).unwrap().is_clean());
    let f = |n: usize| spec.irreducible(&format!("f{n}")).unwrap();
    let d = |n| spec.qdim(&f(n)).unwrap();
    assert_eq!(d(1) * d(1), d(0) + d(2));
    assert_eq!(d(1) * d(1), Rational64::from_integer(4));
}

#[test]
fn fuse_pair_examples() {
    let s3 = builtin_spec("S3").unwrap();
    let one = s3.irreducible("1").unwrap();
    let std = s3.irreducible("std").unwrap();
    assert_eq!(terms(&s3.fuse_pair(&one, &std).unwrap()), vec![("std".into(), 1)]);
    let sq = s3.fuse_pair(&std, &std).unwrap();
    let cat = category("S3");
    let s = cat.index_of(&std).unwrap();
    for (k, irr) in cat.irrs().iter().enumerate() {
        assert_eq!(sq.mult(irr), character_multiplicity(&cat, s, s, k), "{irr}");
    }
    assert_eq!(sq.distinct_terms(), 3);

    let tlj = tlj_spec(&TljParams::new(2.5f64).unwrap()).unwrap();
    let f1 = tlj.irreducible("f1").unwrap();
    assert_eq!(terms(&tlj.fuse_pair(&f1, &f1).unwrap()), vec![("f0".into(), 1), ("f2".into(), 1)]);
}

#[test]
fn hom_dim_examples() {
    let s3 = builtin_spec("S3").unwrap();
    let std = s3.irreducible("std").unwrap();
    let sgn = s3.irreducible("sgn").unwrap();
    let single = Bundle::single(&std);
    assert_eq!(s3.hom_dim(&single, &single).unwrap(), 1);
    let mut x = Bundle::zero(std.source().clone(), std.target().clone());
    x.add(std.clone(), 2);
    x.add(sgn.clone(), 3);
    let mut y = Bundle::single(&std);
    y.add(sgn, 1);
    assert_eq!(s3.hom_dim(&x, &y).unwrap(), 5);
    let sq = s3.fuse_pair(&std, &std).unwrap();
    assert_eq!(s3.hom_dim(&sq, &sq).unwrap(), 3);
}

#[test]
fn decompose_tensor_examples() {
    let tlj = tlj_spec(&TljParams::new(2.0f64).unwrap()).unwrap();
    let f1 = tlj.irreducible("f1").unwrap();
    assert_eq!(terms(&tlj.decompose_tensor(std::slice::from_ref(&f1), None).unwrap()), vec![("f1".into(), 1)]);
    let cube = tlj.decompose_tensor(&[f1.clone(), f1.clone(), f1.clone()], None).unwrap();
    assert_eq!(terms(&cube), vec![("f1".into(), 2), ("f3".into(), 1)]);
    for n in 1..=6 {
        let b = tlj.decompose_tensor(&vec![f1.clone(); n], None).unwrap();
        assert_eq!(tlj.hom_dim(&b, &b).unwrap(), ballot_catalan(n), "n = {n}");
    }
}

#[test]
fn empty_sequence_needs_a_cell() {
    let s3 = builtin_spec("S3").unwrap();
    assert!(s3.decompose_tensor(&[], None).is_err());
    let cell = s3.zero_cells()[0].clone();
    let unit = s3.decompose_tensor(&[], Some(&cell)).unwrap();
    assert_eq!(terms(&unit), vec![("1".into(), 1)]);
}

#[test]
fn document_round_trip() {
    for name in ["Z2", "Z3", "S3"] {
        let spec = builtin_spec(name).unwrap();
        let doc = spec.to_document(3).unwrap();
        let text = doc.to_json();
        let back = SpecDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        let AnySpec::Exact(again) = AnySpec::from_document(&back).unwrap() else { panic!("{name} lost exact mode") };
        assert!(again.validate(3).unwrap().is_clean());
    }
}

#[test]
fn dangling_label_is_structural() {
    let mut doc = builtin_spec("Z2").unwrap().to_document(2).unwrap();
    doc.irreducibles[1].dual = "nope".into();
    assert!(AnySpec::from_document(&doc).is_err());
}

fn tlj_seq(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..=max, 0..5)
}

proptest! {
    #[test]
    fn tensor_folds_agree(seq in tlj_seq(4), delta in 2.0f64..4.0) {
        let tlj = tlj_spec(&TljParams::new(delta).unwrap()).unwrap();
        let irrs: Vec<IrrId> = seq.iter().map(|n| tlj.irreducible(&format!("f{n}")).unwrap()).collect();
        let cell = tlj.zero_cells()[0].clone();
        let l = tlj.decompose_tensor(&irrs, Some(&cell)).unwrap();
        let r = tlj.decompose_tensor_rfold(&irrs, Some(&cell)).unwrap();
        prop_assert_eq!(&l, &r);
        let product: f64 = irrs.iter().map(|x| tlj.qdim(x).unwrap()).product();
        prop_assert!((tlj.bundle_qdim(&l).unwrap() - product).abs() < 1e-9 * product.max(1.0));
    }

    #[test]
    fn s3_folds_agree_and_hom_dim_is_symmetric(a in prop::collection::vec(0usize..3, 0..5), b in prop::collection::vec(0usize..3, 0..5)) {
        let s3 = builtin_spec("S3").unwrap();
        let cat = category("S3");
        let cell = s3.zero_cells()[0].clone();
        let pick = |v: &[usize]| v.iter().map(|&k| cat.irr(k).clone()).collect::<Vec<_>>();
        let x = s3.decompose_tensor(&pick(&a), Some(&cell)).unwrap();
        let y = s3.decompose_tensor(&pick(&b), Some(&cell)).unwrap();
        prop_assert_eq!(&x, &s3.decompose_tensor_rfold(&pick(&a), Some(&cell)).unwrap());
        prop_assert_eq!(s3.hom_dim(&x, &y).unwrap(), s3.hom_dim(&y, &x).unwrap());
        prop_assert!(s3.hom_dim(&x, &x).unwrap() >= x.distinct_terms() as u64);
        let product: Rational64 = pick(&a).iter().map(|k| s3.qdim(k).unwrap()).product();
        prop_assert_eq!(s3.bundle_qdim(&x).unwrap(), product);
    }
}
