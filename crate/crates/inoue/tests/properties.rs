//! Property-based invariants for the algebraic layers.

use num::bigint::BigInt;
use num::rational::BigRational;
use proptest::prelude::*;

use inoue::exact::{IntMat, QuadExt};
use inoue::gamma_r::{GammaRElem, GammaREnd};
use inoue::groups::GroupDescriptor;
use inoue::Kind;

fn rat() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=7)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn quad(d: i64) -> impl Strategy<Value = QuadExt> {
    (rat(), rat()).prop_map(move |(q, s)| QuadExt::new(q, s, BigInt::from(d)))
}

proptest! {
    #[test]
    fn quadext_field_axioms(a in quad(5), b in quad(5), c in quad(5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv(), QuadExt::one(&BigInt::from(5)));
        }
    }

    #[test]
    fn quadext_order_matches_embedding(a in quad(13), b in quad(13)) {
        let diff = (&a - &b).embed();
        if diff.abs() > 1e-7 {
            prop_assert_eq!((&a - &b).signum() > 0, diff > 0.0);
        }
    }

    #[test]
    fn gamma_group_axioms(
        r in prop::sample::select(vec![1i64, 2, 3, -2]),
        l in prop::array::uniform3(-8i64..=8),
        m in prop::array::uniform3(-8i64..=8),
        k in prop::array::uniform3(-8i64..=8),
    ) {
        let a = GammaRElem::mu(r, l[0], l[1], l[2]).unwrap();
        let b = GammaRElem::mu(r, m[0], m[1], m[2]).unwrap();
        let c = GammaRElem::mu(r, k[0], k[1], k[2]).unwrap();
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&a.inverse()).unwrap(), GammaRElem::identity(r));
        // the mu-image is a subgroup
        prop_assert!(a.mul(&b).unwrap().in_mu_image());
        prop_assert!(a.inverse().in_mu_image());
    }

    #[test]
    fn endomorphisms_are_homomorphisms(
        r in prop::sample::select(vec![1i64, 2, 3]),
        rows in prop::array::uniform2(prop::array::uniform3(-3i64..=3)),
        l in prop::array::uniform3(-5i64..=5),
        m in prop::array::uniform3(-5i64..=5),
    ) {
        let phi = GammaREnd::lift_hom(r, rows).unwrap();
        prop_assert!(phi.is_induced());
        let a = GammaRElem::mu(r, l[0], l[1], l[2]).unwrap();
        let b = GammaRElem::mu(r, m[0], m[1], m[2]).unwrap();
        prop_assert_eq!(
            phi.apply(&a.mul(&b).unwrap()).unwrap(),
            phi.apply(&a).unwrap().mul(&phi.apply(&b).unwrap()).unwrap()
        );
    }

    #[test]
    fn snf_structure(entries in prop::collection::vec(-6i64..=6, 6)) {
        let m = IntMat::from_fn(2, 3, |i, j| BigInt::from(entries[i * 3 + j]));
        let snf = m.snf();
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.s.clone());
        prop_assert!(snf.u.is_unimodular());
        prop_assert!(snf.v.is_unimodular());
        let (d1, d2) = (snf.s.at(0, 0).clone(), snf.s.at(1, 1).clone());
        if d1 != BigInt::from(0) {
            prop_assert_eq!(&d2 % &d1, BigInt::from(0));
        }
    }

    #[test]
    fn free_reduction_preserves_normal_form(
        word in prop::collection::vec((0usize..4, -3i64..=3), 0..6),
        gen in 0usize..4,
        e in 1i64..=3,
        cut_seed in 0usize..32,
    ) {
        let g = GroupDescriptor::new(
            Kind::SPlus,
            IntMat::from_i64(&[&[2, 1], &[1, 1]]),
            1,
            -1,
            2,
        )
        .unwrap();
        let base = g.from_word(&word).unwrap();
        let cut = cut_seed % (word.len() + 1);
        let mut w2 = word[..cut].to_vec();
        w2.push((gen, e));
        w2.push((gen, -e));
        w2.extend_from_slice(&word[cut..]);
        prop_assert_eq!(g.from_word(&w2).unwrap(), base);
    }
}
