//! Property tests for the algebraic laws of scalars, truncated series and
//! forms. Forms are drawn through the seeded samplers so every case stays
//! within the models' degree budgets.

use formal_dolbeault::coeff::{MultiIndex, Scalar, TruncatedFormalCoeff};
use formal_dolbeault::model::sample::random_form;
use formal_dolbeault::model::{dbar, taylor_map, wedge, ModelConfig, Space, TruncatedForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9).prop_map(|(a, b, c, d)| {
        Scalar::from_ratio(a, b).unwrap() + Scalar::from_ratio(c, d).unwrap() * Scalar::i()
    })
}

fn series(n: usize, r: u32) -> impl Strategy<Value = TruncatedFormalCoeff> {
    let alphas = MultiIndex::all_up_to(n, r);
    proptest::collection::vec((0..alphas.len(), scalar()), 0..5).prop_map(move |terms| {
        TruncatedFormalCoeff::from_terms(
            n,
            r,
            terms.into_iter().map(|(i, c)| (alphas[i].clone(), c)),
        )
        .unwrap()
    })
}

fn model() -> impl Strategy<Value = (ModelConfig, u32)> {
    prop_oneof![
        (1usize..=2, 1u32..=3).prop_map(|(n, r)| (ModelConfig::point(n, r), 0)),
        (1usize..=2, 1u32..=2).prop_map(|(n, r)| (ModelConfig::disc(n, r, 4), 2)),
    ]
}

fn sign(k: usize) -> Scalar {
    Scalar::from(if k.is_multiple_of(2) { 1 } else { -1 })
}

proptest! {
    #[test]
    fn scalars_form_a_field(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn scalar_json_round_trips(a in scalar()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&text).unwrap(), a);
    }

    #[test]
    fn truncated_series_form_a_commutative_ring(
        (a, b, c) in (1usize..=3, 0u32..=3).prop_flat_map(|(n, r)| (series(n, r), series(n, r), series(n, r)))
    ) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&TruncatedFormalCoeff::one(a.n(), a.r())).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(seed in any::<u64>(), (cfg, budget) in model(), quotient in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = if quotient { Space::Quotient } else { Space::Ambient };
        let third = budget / 2;
        let (ka, kb) = (seed as usize % 2, (seed >> 1) as usize % 2);
        let a = random_form(&mut rng, &cfg, space, third, Some(ka), 3);
        let b = random_form(&mut rng, &cfg, space, third, Some(kb), 3);
        let c = random_form(&mut rng, &cfg, space, third, None, 3);
        prop_assert_eq!(
            wedge(&wedge(&a, &b).unwrap(), &c).unwrap(),
            wedge(&a, &wedge(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(wedge(&a, &b).unwrap(), wedge(&b, &a).unwrap().scale(&sign(ka * kb)));
        let one = TruncatedForm::one(cfg, space);
        prop_assert_eq!(wedge(&one, &c).unwrap(), c);
    }

    #[test]
    fn dbar_is_a_square_zero_derivation(seed in any::<u64>(), (cfg, budget) in model()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = seed as usize % 2;
        let a = random_form(&mut rng, &cfg, Space::Ambient, budget, Some(k), 3);
        let b = random_form(&mut rng, &cfg, Space::Ambient, budget, None, 3);
        prop_assert!(dbar(&dbar(&a)).is_zero());
        let rhs = wedge(&dbar(&a), &b).unwrap().add(&wedge(&a, &dbar(&b)).unwrap().scale(&sign(k))).unwrap();
        prop_assert_eq!(dbar(&wedge(&a, &b).unwrap()), rhs);
    }

    #[test]
    fn taylor_map_is_a_dga_morphism(seed in any::<u64>(), (cfg, budget) in model()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(&mut rng, &cfg, Space::Ambient, budget, None, 3);
        let b = random_form(&mut rng, &cfg, Space::Ambient, budget, None, 3);
        for r in 0..=cfg.r {
            let t = |x: &TruncatedForm| taylor_map(x, r).unwrap();
            prop_assert_eq!(t(&wedge(&a, &b).unwrap()), wedge(&t(&a), &t(&b)).unwrap());
            prop_assert_eq!(t(&dbar(&a)), dbar(&t(&a)));
        }
    }

    #[test]
    fn form_json_round_trips(seed in any::<u64>(), (cfg, budget) in model(), quotient in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = if quotient { Space::Quotient } else { Space::Ambient };
        let a = random_form(&mut rng, &cfg, space, budget, None, 4);
        let doc = a.to_doc(true);
        let back = TruncatedForm::from_doc(&serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap(), None).unwrap();
        prop_assert_eq!(back, a);
    }
}
