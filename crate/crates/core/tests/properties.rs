use fkradial::freegroup::{format_word, parse_word, Letter, ReducedWord};
use fkradial::freeproduct::{fp_reduce, FPConfig, FPWord, Syllable};
use fkradial::radial;
use fkradial::{Element, Radial, Rational, DEFAULT_CAP};
use num_bigint::BigInt;
use proptest::prelude::*;

const K: u32 = 2;

fn letter() -> impl Strategy<Value = Letter> {
    (1..=K, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

fn word(max: usize) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec(letter(), 0..max).prop_map(|ls| ReducedWord::reduce(ls, K).unwrap())
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec((word(5), -4i64..=4, 1i64..=3), 0..5).prop_map(|terms| {
        Element::from_terms(
            K,
            terms
                .into_iter()
                .map(|(w, n, d)| (w, Rational::new(BigInt::from(n), BigInt::from(d)))),
        )
        .unwrap()
    })
}

fn radial_el() -> impl Strategy<Value = Radial> {
    prop::collection::vec(-3i64..=3, 0..4).prop_map(|cs| {
        Radial::from_coeffs(K, cs.into_iter().map(|c| Rational::from_integer(c.into())).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent(ls in prop::collection::vec(letter(), 0..12)) {
        let w = ReducedWord::reduce(ls, K).unwrap();
        let again = ReducedWord::reduce(w.letters().to_vec(), K).unwrap();
        prop_assert_eq!(&again, &w);
        prop_assert!(w.letters().windows(2).all(|p| p[1] != p[0].inverse()));
    }

    #[test]
    fn format_parse_round_trip(w in word(10), letters in any::<bool>()) {
        prop_assert_eq!(parse_word(&format_word(&w, letters), K, letters).unwrap(), w);
    }

    #[test]
    fn inverse_cancels(w in word(10)) {
        prop_assert!(w.mul(&w.inverse()).unwrap().is_identity());
        let (_, c) = w.concat(&w.inverse()).unwrap();
        prop_assert_eq!(c, w.len());
    }

    #[test]
    fn convolution_associates(a in element(), b in element(), c in element()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn trace_is_symmetric(a in element(), b in element()) {
        prop_assert_eq!(a.mul(&b).unwrap().trace(), b.mul(&a).unwrap().trace());
    }

    #[test]
    fn adjoint_reverses_products(a in element(), b in element()) {
        prop_assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
        prop_assert_eq!(a.inner(&a).unwrap(), a.l2_norm_sq());
    }

    #[test]
    fn expectation_projects_and_keeps_trace(a in element()) {
        let e = radial::expect(&a);
        prop_assert_eq!(radial::expect(&e.embed(DEFAULT_CAP).unwrap()), e.clone());
        prop_assert_eq!(a.trace(), e.coeff(0));
    }

    #[test]
    fn expectation_is_modular(b in radial_el(), a in element(), c in radial_el()) {
        let (be, ce) = (b.embed(DEFAULT_CAP).unwrap(), c.embed(DEFAULT_CAP).unwrap());
        let lhs = radial::expect(&be.mul(&a).unwrap().mul(&ce).unwrap());
        let rhs = b.mul(&radial::expect(&a)).unwrap().mul(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn radial_product_matches_convolution(a in radial_el(), b in radial_el()) {
        let fast = a.mul(&b).unwrap().embed(DEFAULT_CAP).unwrap();
        let slow = a.embed(DEFAULT_CAP).unwrap().mul(&b.embed(DEFAULT_CAP).unwrap()).unwrap();
        prop_assert_eq!(fast, slow);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn radial_norm_matches_embedding(a in radial_el()) {
        prop_assert_eq!(a.norm_sq(), a.embed(DEFAULT_CAP).unwrap().l2_norm_sq());
    }

    #[test]
    fn text_form_round_trips(a in element(), letters in any::<bool>()) {
        prop_assert_eq!(Element::parse_text(&a.to_text(letters), K, letters).unwrap(), a);
    }

    #[test]
    fn fp_reduce_idempotent_and_shrinking(seq in prop::collection::vec((1usize..=2, -2i64..=2, -2i64..=2), 0..8)) {
        let cfg = FPConfig::z2_star_z((1, 1));
        let syllables: Vec<Syllable> = seq
            .into_iter()
            .map(|(f, a, b)| {
                let free = if f == 1 { vec![a, b] } else { vec![a] };
                Syllable { factor: f, element: fkradial::freeproduct::AbelianElement { free, torsion: vec![] } }
            })
            .collect();
        let once = fp_reduce(syllables.clone(), &cfg.factors).unwrap();
        prop_assert!(once.len() <= syllables.len());
        let twice = fp_reduce(once.syllables().to_vec(), &cfg.factors).unwrap();
        prop_assert_eq!(&twice, &once);
        let inv = once.inverse(&cfg.factors);
        prop_assert_eq!(once.concat(&[&inv], &cfg.factors).unwrap(), FPWord::identity());
    }

    #[test]
    fn embedding_round_trips(u in word(8), t1 in 1i64..=3, t2 in -3i64..=-1) {
        let cfg = FPConfig::z2_star_z((t1, t2));
        prop_assert_eq!(cfg.is_in_fk(&cfg.embed_fk_word(&u).unwrap()), Some(u));
    }
}
