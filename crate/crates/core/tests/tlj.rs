mod common;

use common::ballot_catalan;
use freeprod::free_fusion::{box_dims, nondegenerate};
use freeprod::tlj::{chebyshev_dims, fusion_channels, pointed_tlj, tlj_spec, TljParams};
use freeprod::Error;
use num_rational::Rational64;
use proptest::prelude::*;

const DELTAS: [f64; 4] = [2.0, 2.5, 3.0, std::f64::consts::SQRT_2 + 1.7320508075688772];

#[test]
fn small_delta_is_rejected() {
    assert!(matches!(TljParams::new(1.5f64), Err(Error::Parameter(_))));
    assert!(matches!(TljParams::new(Rational64::new(3, 2)), Err(Error::Parameter(_))));
}

#[test]
fn first_dims() {
    for delta in DELTAS {
        let spec = tlj_spec(&TljParams::new(delta).unwrap()).unwrap();
        assert_eq!(spec.qdim(&spec.irreducible("f0").unwrap()).unwrap(), 1.0);
        assert_eq!(spec.qdim(&spec.irreducible("f1").unwrap()).unwrap(), delta);
    }
}

#[test]
fn dims_at_two_are_integers() {
    let spec = tlj_spec(&TljParams::new(Rational64::from_integer(2)).unwrap()).unwrap();
    for n in 0..=6i64 {
        let f = spec.irreducible(&format!("f{n}")).unwrap();
        assert_eq!(spec.qdim(&f).unwrap(), Rational64::from_integer(n + 1));
    }
}

#[test]
fn powers_of_f1_have_catalan_endomorphisms() {
    for delta in DELTAS {
        let spec = tlj_spec(&TljParams::new(delta).unwrap()).unwrap();
        let f1 = spec.irreducible("f1").unwrap();
        for n in 1..=6 {
            let b = spec.decompose_tensor(&vec![f1.clone(); n], None).unwrap();
            assert_eq!(spec.hom_dim(&b, &b).unwrap(), ballot_catalan(n));
        }
    }
}

#[test]
fn pointed_examples() {
    for delta in [2.0f64, 2.5, 3.0] {
        let p = pointed_tlj(&TljParams::new(delta).unwrap()).unwrap();
        assert_eq!(p.point_qdim().unwrap(), delta);
        assert!(nondegenerate(&p, 4).unwrap().holds());
        let expected: Vec<u64> = (0..=6).map(ballot_catalan).collect();
        assert_eq!(box_dims(&p, 6).unwrap(), expected);
    }
}

#[test]
fn pointed_fusion_respects_parity() {
    let p = pointed_tlj(&TljParams::new(2.5f64).unwrap()).unwrap();
    let irrs = p.ambient.window(5);
    for x in &irrs {
        for y in irrs.iter().filter(|y| y.source() == x.target()) {
            let prod = p.ambient.fuse_pair(x, y).unwrap();
            assert!(!prod.is_zero(), "{x} ⊗ {y}");
            for (z, _) in prod.terms() {
                assert_eq!((z.source(), z.target()), (x.source(), y.target()), "{x} ⊗ {y} ∋ {z}");
            }
        }
    }
}

#[test]
fn pointed_spec_is_valid() {
    let p = pointed_tlj(&TljParams::new(Rational64::new(5, 2)).unwrap()).unwrap();
    assert!(p.ambient.validate(4).unwrap().is_clean());
}

proptest! {
    #[test]
    fn fusion_is_symmetric_and_dimension_consistent(m in 0usize..9, n in 0usize..9, k in 0usize..4) {
        let delta = DELTAS[k];
        let spec = tlj_spec(&TljParams::new(delta).unwrap()).unwrap();
        let f = |j: usize| spec.irreducible(&format!("f{j}")).unwrap();
        let mn = spec.fuse_pair(&f(m), &f(n)).unwrap();
        prop_assert_eq!(&mn, &spec.fuse_pair(&f(n), &f(m)).unwrap());
        let channels: Vec<usize> = fusion_channels(m, n).collect();
        prop_assert_eq!(mn.distinct_terms(), channels.len());
        let s = chebyshev_dims(&delta, m + n);
        let rhs: f64 = channels.iter().map(|&j| s[j]).sum();
        prop_assert!((s[m] * s[n] - rhs).abs() <= 1e-9 * rhs.max(1.0));
        prop_assert_eq!(f(m), spec.dual(&f(m)).unwrap());
    }

    #[test]
    fn exact_dimension_consistency_at_two(m in 0usize..12, n in 0usize..12) {
        let two = Rational64::from_integer(2);
        let s = chebyshev_dims(&two, m + n);
        let rhs: Rational64 = fusion_channels(m, n).map(|j| s[j]).sum();
        prop_assert_eq!(s[m] * s[n], rhs);
    }
}
