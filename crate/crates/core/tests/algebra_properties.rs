//! Property tests for the algebraic laws: convolution ring structure, Weyl
//! inversion and index laws, duality, norm axioms, homomorphism identities.
//! Everything runs in exact rational arithmetic, so each property is an
//! identity check, not an approximation.

use cesaro_core::scalar::{Rational, RealScalar, Scalar};
use cesaro_core::seq::{
    cesaro_sum, duality_pairing, duality_pairing_window, weyl, weyl_difference,
    weyl_product_identity_defect, weyl_sum, FiniteSeq,
};
use cesaro_core::special::z_transform;
use cesaro_core::weights::q_alpha_norm;
use cesaro_core::{instances, opcalc};
use num::Zero;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn rat_strategy() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn seq_strategy(max_len: usize) -> impl Strategy<Value = FiniteSeq<Rational>> {
    proptest::collection::vec(rat_strategy(), 0..=max_len).prop_map(FiniteSeq::from_coeffs)
}

fn order_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(1, 4)),
        Just(rat(1, 2)),
        Just(rat(3, 4)),
        Just(rat(1, 1)),
        Just(rat(3, 2)),
        Just(rat(2, 1)),
        Just(rat(5, 2)),
        Just(rat(3, 1)),
    ]
}

fn signed_order_strategy() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(-3, 2)),
        Just(rat(-1, 1)),
        Just(rat(-1, 2)),
        Just(rat(1, 2)),
        Just(rat(1, 1)),
        Just(rat(3, 2)),
    ]
}

proptest! {
    #[test]
    fn convolution_commutes(f in seq_strategy(10), g in seq_strategy(10)) {
        prop_assert_eq!(f.convolve(&g), g.convolve(&f));
    }

    #[test]
    fn convolution_associates(
        f in seq_strategy(6),
        g in seq_strategy(6),
        h in seq_strategy(6),
    ) {
        prop_assert_eq!(f.convolve(&g).convolve(&h), f.convolve(&g.convolve(&h)));
    }

    #[test]
    fn convolution_unit(f in seq_strategy(10)) {
        let e0 = FiniteSeq::<Rational>::unit(0);
        prop_assert_eq!(e0.convolve(&f), f);
    }

    #[test]
    fn weyl_sum_and_difference_invert(f in seq_strategy(12), a in order_strategy()) {
        let round = weyl_difference(&weyl_sum(&f, &a).unwrap(), &a).unwrap();
        prop_assert_eq!(&round, &f);
        let round = weyl_sum(&weyl_difference(&f, &a).unwrap(), &a).unwrap();
        prop_assert_eq!(&round, &f);
    }

    #[test]
    fn weyl_signed_index_law(
        f in seq_strategy(8),
        a in signed_order_strategy(),
        b in signed_order_strategy(),
    ) {
        let lhs = weyl(&weyl(&f, &b).unwrap(), &a).unwrap();
        let rhs = weyl(&f, &(a.clone() + b.clone())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_sums_commute(
        f in seq_strategy(8),
        a in order_strategy(),
        b in order_strategy(),
    ) {
        let ab = weyl_sum(&weyl_sum(&f, &b).unwrap(), &a).unwrap();
        let ba = weyl_sum(&weyl_sum(&f, &a).unwrap(), &b).unwrap();
        let joint = weyl_sum(&f, &(a.clone() + b.clone())).unwrap();
        prop_assert_eq!(&ab, &joint);
        prop_assert_eq!(&ba, &joint);
    }

    #[test]
    fn duality_adjoint_relation(
        f in seq_strategy(8),
        g in seq_strategy(8),
        a in order_strategy(),
    ) {
        prop_assume!(!f.is_zero());
        let lhs = duality_pairing(&weyl_sum(&f, &a).unwrap(), &g);
        let window = cesaro_sum(&g, &a, f.support_end().unwrap()).unwrap();
        let rhs = duality_pairing_window(&f, &window).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_identity_has_zero_defect(
        f in seq_strategy(5),
        g in seq_strategy(5),
        a in order_strategy(),
    ) {
        prop_assert!(weyl_product_identity_defect(&f, &g, &a).unwrap().is_zero());
    }

    #[test]
    fn q_norm_axioms(
        f in seq_strategy(8),
        g in seq_strategy(8),
        c in rat_strategy(),
        a in order_strategy(),
    ) {
        let qf = q_alpha_norm(&f, &a).unwrap();
        let qg = q_alpha_norm(&g, &a).unwrap();
        prop_assert_eq!(
            q_alpha_norm(&f.scale(&c), &a).unwrap(),
            RealScalar::abs(&c) * qf.clone()
        );
        prop_assert!(q_alpha_norm(&f.add(&g), &a).unwrap() <= qf.clone() + qg);
        prop_assert_eq!(qf.is_zero(), f.is_zero());
    }

    #[test]
    fn z_transform_multiplies_convolutions(
        f in seq_strategy(8),
        g in seq_strategy(8),
        z in (1i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n * 7, d)),
    ) {
        let lhs = z_transform(&f.convolve(&g), &z).unwrap();
        let rhs = z_transform(&f, &z).unwrap() * z_transform(&g, &z).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homomorphism_laws_on_random_operators(
        seed in 0u64..1024,
        f in seq_strategy(4),
        g in seq_strategy(4),
        a in prop_oneof![Just(rat(1, 2)), Just(rat(1, 1)), Just(rat(2, 1))],
    ) {
        let mut rng = instances::seeded_rng(seed);
        let t = instances::rational_matrix(&mut rng, 2, 3, 2);
        let horizon = 10;
        let orbit = opcalc::cesaro_orbit(&t, &a, horizon).unwrap();
        prop_assert!(opcalc::theta_multiplicativity_defect(&f, &g, &orbit)
            .unwrap()
            .is_zero());
        prop_assert!(opcalc::theta_difference_identity_defect(&f, &orbit)
            .unwrap()
            .is_zero());
        prop_assert!(opcalc::functional_equation_max_defect(&orbit, horizon)
            .unwrap()
            .is_zero());
    }
}
