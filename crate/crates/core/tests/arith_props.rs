use proptest::prelude::*;

use oqdm_core::arith::{HLaurent, Mat, QPoly, Rat};

fn rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=8).prop_map(|(a, b)| Rat::new(a, b))
}

fn qpoly() -> impl Strategy<Value = QPoly> {
    (
        prop::sample::select(vec![1u64, 2, 3, 6]),
        prop::collection::vec((-3i64..9, rat()), 0..4),
    )
        .prop_map(|(root, terms)| QPoly::from_terms(root, terms))
}

fn hlaurent() -> impl Strategy<Value = HLaurent> {
    prop::collection::vec((-3i32..=3, qpoly()), 0..3).prop_map(HLaurent::from_terms)
}

/// `c q^{k/root} ħ^m` with `c ≠ 0`.
fn monomial() -> impl Strategy<Value = (HLaurent, Rat)> {
    (1i64..=9, (-5i64..=5, 1u64..=6), -3i32..=3).prop_map(|(c, (k, root), m)| {
        let e = Rat::new(k, root as i64);
        let x = HLaurent::term(m, QPoly::monomial(Rat::integer(c), &e));
        let q_weight = Rat::integer(6);
        let deg = &(&e * &q_weight) + &Rat::integer(2 * i64::from(m));
        (x, deg)
    })
}

fn unitriangular() -> impl Strategy<Value = Mat<QPoly>> {
    prop::collection::vec(qpoly(), 6).prop_map(|v| {
        let mut m = Mat::identity(4);
        let mut it = v.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                m[(i, j)] = it.next().expect("six entries");
            }
        }
        m
    })
}

proptest! {
    #[test]
    fn rat_canonical(a in -50i64..50, b in 1i64..30, k in 1i64..10) {
        let x = Rat::new(a * k, b * k);
        prop_assert_eq!(&x, &Rat::new(a, b));
        prop_assert!(x.denom() > &0.into());
        prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
    }

    #[test]
    fn qpoly_ring_axioms(a in qpoly(), b in qpoly(), c in qpoly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn qpoly_canonical_form(a in qpoly()) {
        let rebuilt = a
            .terms()
            .fold(QPoly::zero(), |acc, (e, c)| &acc + &QPoly::monomial(c.clone(), &e));
        prop_assert_eq!(&rebuilt, &a);
        let n = a.root_order();
        let again = QPoly::from_terms(
            n * 2,
            a.terms().map(|(e, c)| ((&e * &Rat::from(n * 2)).to_i64().unwrap(), c.clone())),
        );
        prop_assert_eq!(again, a);
    }

    #[test]
    fn hlaurent_ring_axioms(a in hlaurent(), b in hlaurent(), c in hlaurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn hbar_negation(a in hlaurent(), b in hlaurent()) {
        prop_assert_eq!(a.negate_hbar().negate_hbar(), a.clone());
        prop_assert_eq!((&a * &b).negate_hbar(), &a.negate_hbar() * &b.negate_hbar());
        prop_assert_eq!((&a + &b).negate_hbar(), &a.negate_hbar() + &b.negate_hbar());
    }

    #[test]
    fn theta_is_a_derivation(a in hlaurent(), b in hlaurent(), x in qpoly(), y in qpoly()) {
        prop_assert_eq!((&a * &b).theta(), &(&a.theta() * &b) + &(&a * &b.theta()));
        prop_assert_eq!((&x * &y).theta(), &(&x.theta() * &y) + &(&x * &y.theta()));
    }

    #[test]
    fn degrees_add((a, da) in monomial(), (b, db) in monomial()) {
        let w = Rat::integer(6);
        prop_assert_eq!(a.degree(&w), Some(da.clone()));
        prop_assert_eq!((&a * &b).degree(&w), Some(&da + &db));
    }

    #[test]
    fn matrix_inverse_and_product(a in unitriangular(), b in unitriangular(), c in unitriangular()) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(a.matmul(&inv), Mat::identity(4));
        prop_assert_eq!(a.matmul(&b).matmul(&c), a.matmul(&b.matmul(&c)));
    }
}
