//! Randomized invariants for the exact layer, driven by proptest.

use proptest::prelude::*;

use alwp_core::arith::{gcd, kronecker};
use alwp_core::quadforms::{equivalent, QuadForm, UnimodularMatrix};

fn pos_def_form() -> impl Strategy<Value = QuadForm> {
    (1i64..200, -200i64..=200, 0i64..200).prop_filter_map("positive definite", |(a, b, c)| {
        let c = b * b / (4 * a) + 1 + c;
        let f = QuadForm::new(a, b, c);
        f.is_positive_definite().then_some(f)
    })
}

fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    // words in the two generators of the modular group
    proptest::collection::vec((any::<bool>(), -3i64..=3), 0..6).prop_map(|word| {
        let swap = UnimodularMatrix::new(0, -1, 1, 0);
        let mut m = UnimodularMatrix::IDENTITY;
        for (use_swap, t) in word {
            m = if use_swap {
                m.mul(&swap)
            } else {
                m.mul(&UnimodularMatrix::translation(t))
            };
        }
        m
    })
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_preserves_discriminant(f in pos_def_form()) {
        let (r, m) = f.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.discriminant(), f.discriminant());
        prop_assert_eq!(f.apply(&m), r);
        prop_assert_eq!(r.reduce().0, r);
        prop_assert_eq!(r.content(), f.content());
    }

    #[test]
    fn substitution_respects_composition(f in pos_def_form(), g in unimodular(), h in unimodular()) {
        prop_assert_eq!(f.apply(&g).apply(&h), f.apply(&g.mul(&h)));
        prop_assert_eq!(f.apply(&g).apply(&g.inverse()), f);
    }

    #[test]
    fn equivalence_certificates_check_out(f in pos_def_form(), g in unimodular()) {
        let moved = f.apply(&g);
        let cert = equivalent(&f, &moved).expect("forms related by a substitution");
        prop_assert_eq!(f.apply(&cert), moved);
    }

    #[test]
    fn kronecker_is_multiplicative(a in -300i64..=300, m in 1i64..=300, n in 1i64..=300) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn kronecker_vanishes_exactly_on_common_factors(a in -300i64..=300, n in 1i64..=300) {
        let coprime = gcd(a.abs(), n) == 1;
        prop_assert_eq!(kronecker(a, n) != 0, coprime);
    }
}
