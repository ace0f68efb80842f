use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use verlab_core::char_ring::weyl_char;
use verlab_core::frobenius_limit::{be_equivalence_check, n_min, stabilization_check};
use verlab_core::sl2_modp::{
    decompose_simples, is_tilting_char, simple_char, steinberg_char, tensor_power_simple_mults,
};
use verlab_core::verlinde_ring::{
    embed_label, fpdim_estimate, shared_table, tilting_image_class, FusionTable, VerLevel,
};
use verlab_core::Prime;

const LEVELS: &[(u64, u32)] = &[
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 1),
    (3, 2),
    (3, 3),
    (5, 1),
    (5, 2),
    (7, 1),
    (7, 2),
];

fn table(q: u64, n: u32) -> std::sync::Arc<FusionTable> {
    shared_table(VerLevel::from_raw(q, n).unwrap()).unwrap()
}

fn p(q: u64) -> Prime {
    Prime::new(q).unwrap()
}

// a level from LEVELS together with three labels in it
fn level_and_labels() -> impl Strategy<Value = (u64, u32, u64, u64, u64)> {
    proptest::sample::select(LEVELS).prop_flat_map(|(q, n)| {
        let len = VerLevel::from_raw(q, n).unwrap().lambda_bound();
        (Just(q), Just(n), 0..len, 0..len, 0..len)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fusion_is_commutative_and_associative((q, n, a, b, c) in level_and_labels()) {
        let t = table(q, n);
        prop_assert_eq!(t.product(a, b), t.product(b, a));
        prop_assert_eq!(t.triple_left(a, b, c), t.triple_right(a, b, c));
        prop_assert!(t.product(a, b).values().all(|m| m > &BigInt::from(0)));
    }

    #[test]
    fn embedded_products_stay_embedded((q, n, a, b, _c) in level_and_labels()) {
        prop_assume!(n < 5 || q == 2);
        let low = table(q, n);
        let high = table(q, n + 1);
        let e = |x| embed_label(low.level(), x).unwrap();
        let scaled: BTreeMap<u64, BigInt> = low.product(a, b).iter().map(|(c, m)| (e(*c), m.clone())).collect();
        prop_assert_eq!(high.product(e(a), e(b)), &scaled);
    }

    #[test]
    fn fpdim_is_multiplicative((q, n, a, b, _c) in level_and_labels()) {
        let t = table(q, n);
        let d = |x| fpdim_estimate(&t, x).unwrap();
        let rhs: f64 = t.product(a, b).iter().map(|(c, m)| m.to_f64().unwrap() * d(*c)).sum();
        prop_assert!((d(a) * d(b) - rhs).abs() < 1e-6);
        prop_assert!(d(a) >= 1.0 - 1e-9);
    }

    #[test]
    fn tilting_images_are_actual_classes((q, n, _a, _b, _c) in level_and_labels(), m in 0u64..40) {
        prop_assert!(tilting_image_class(VerLevel::from_raw(q, n).unwrap(), m).is_ok());
    }

    #[test]
    fn frobenius_character_identity(q in proptest::sample::select(vec![2u64, 3, 5, 7]), i in 0u32..12) {
        let twisted = weyl_char(1).pow(i).frobenius(q);
        let lhs = decompose_simples(twisted.poly(), p(q)).unwrap();
        let rhs: BTreeMap<u64, BigInt> = tensor_power_simple_mults(p(q), i)
            .unwrap()
            .into_iter()
            .map(|(a, m)| (a * q, m))
            .collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn steinberg_twist_makes_simples_tilting(q in proptest::sample::select(vec![2u64, 3, 5]), r in 1u32..=2, seed in 0u64..1000) {
        let bound = 2 * q.pow(r) - 1;
        let a = seed % (bound + 1);
        let product = &simple_char(p(q), a) * &steinberg_char(p(q), r).unwrap();
        prop_assert!(is_tilting_char(product.poly(), p(q)).unwrap());
    }

    #[test]
    fn be_equivalence_holds(q in proptest::sample::select(vec![2u64, 3, 5, 7]), i in 0u32..=10) {
        let c = be_equivalence_check(p(q), i).unwrap();
        prop_assert!(c.passed(), "witness {:?}", c.witness());
    }

    #[test]
    fn stabilization_holds_in_window(q in proptest::sample::select(vec![2u64, 3, 5]), r in 1u32..=10, extra in 0u32..3) {
        let n = n_min(p(q), r).unwrap() + extra;
        prop_assert_eq!(stabilization_check(p(q), n, r, false).unwrap(), None);
    }
}
