use std::collections::BTreeSet;

use proptest::prelude::*;

use compposets::genfun::{coefficient_sum, f_width, kappa_op};
use compposets::ncgen::{f_recurrence, labeled_oracle};
use compposets::operators::{admissible_letters, apply_word};
use compposets::polyfrac::{FactoredRational, Monomial, MultiPoly, Rat};
use compposets::poset::{chain_to_tableau, covers, covers_via_descent_oracle, tableau_to_chain, Chain};
use compposets::qsym::{default_vars, verify_product_rule};
use compposets::{Alphabet, Composition, Letter, Word};

fn composition(max_parts: usize, max_part: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(1..=max_part, 0..=max_parts).prop_map(|v| Composition::new(v).unwrap())
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        Just(Letter::L),
        Just(Letter::R),
        (1..8usize).prop_map(Letter::U),
        (2..8usize, 1..6usize).prop_map(|(i, r)| Letter::V(i, r)),
    ]
}

fn alphabet() -> impl Strategy<Value = Alphabet> {
    prop_oneof![
        Just(Alphabet::N),
        Just(Alphabet::Bbd),
        (3..6usize).prop_map(Alphabet::S),
        Just(Alphabet::SInf),
    ]
}

fn int(c: i64) -> Rat {
    Rat::from_integer(c.into())
}

/// Small polynomials in `x1, x2` with integer coefficients.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0..4u32, 0..4u32), -3..=3i64), 0..6).prop_map(|terms| {
        MultiPoly::from_terms(
            terms
                .into_iter()
                .map(|((a, b), c)| (Monomial::new(vec![a, b]), int(c))),
        )
    })
}

/// `p / ∏ (1 − Σ_{i∈S} x_i)^e` over nonempty `S ⊆ {1, 2}`.
fn rational() -> impl Strategy<Value = FactoredRational> {
    (poly(), prop::collection::vec((1..4u32, 1..3u32), 0..3)).prop_map(|(p, den)| {
        let factors = den
            .into_iter()
            .map(|(mask, e)| {
                let mut g = MultiPoly::one();
                for i in 1..=2 {
                    if mask & (1 << (i - 1)) != 0 {
                        g = &g - &MultiPoly::var(i);
                    }
                }
                (g, e)
            })
            .collect();
        FactoredRational::new(p, factors).unwrap()
    })
}

/// Follows `choices` through the cover relation, picking covers by index.
fn walk(a: Alphabet, start: &Composition, choices: &[usize]) -> Chain {
    let mut chain = Chain::trivial(start.clone());
    for &c in choices {
        let cs = covers(a, chain.end());
        let (t, q) = cs[c % cs.len()].clone();
        chain.steps.push(q);
        chain.labels.push(t);
    }
    chain
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiweight_is_a_partition(p in composition(6, 5)) {
        let mw = p.multiweight();
        prop_assert!(mw.parts().windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(mw.conjugate(), p.mw_star());
        prop_assert_eq!(mw.weight(), p.weight());
    }

    #[test]
    fn descents_round_trip(p in composition(7, 4)) {
        prop_assert_eq!(Composition::from_descents(&p.descent_set()), p);
    }

    #[test]
    fn letters_add_one_box(p in composition(6, 5), t in letter()) {
        if let Some(q) = t.apply(&p) {
            prop_assert_eq!(q.weight(), p.weight() + 1);
        }
    }

    #[test]
    fn covers_have_distinct_results(p in composition(5, 4), a in alphabet()) {
        let cs = admissible_letters(&p, a);
        let results: BTreeSet<&Composition> = cs.iter().map(|(_, q)| q).collect();
        prop_assert_eq!(results.len(), cs.len());
    }

    #[test]
    fn s_infinity_cover_count(p in composition(5, 4)) {
        prop_assert_eq!(admissible_letters(&p, Alphabet::SInf).len(), p.weight() + 1);
        let ends: BTreeSet<Composition> = covers(Alphabet::SInf, &p).into_iter().map(|(_, q)| q).collect();
        prop_assert_eq!(ends, covers_via_descent_oracle(&p));
    }

    #[test]
    fn s_d_stabilizes(p in composition(5, 5), extra in 1..3usize) {
        let d = (p.height() + extra).max(3);
        prop_assert_eq!(admissible_letters(&p, Alphabet::S(d)), admissible_letters(&p, Alphabet::SInf));
    }

    #[test]
    fn chains_are_ranked_and_relabel(
        a in prop_oneof![Just(Alphabet::N), Just(Alphabet::Bbd), Just(Alphabet::S(3))],
        p in composition(3, 3),
        choices in prop::collection::vec(0..50usize, 0..7),
    ) {
        let chain = walk(a, &p, &choices);
        for (i, s) in chain.steps.iter().enumerate() {
            prop_assert_eq!(s.weight(), p.weight() + i);
        }
        prop_assert_eq!(&apply_word(&chain.word(), &p, a).unwrap(), chain.end());
        prop_assert_eq!(&Chain::from_word(a, &p, &chain.word()).unwrap(), &chain);
        prop_assert_eq!(&Chain::from_steps(a, chain.steps.clone()).unwrap(), &chain);
    }

    #[test]
    fn tableaux_round_trip(
        a in prop_oneof![Just(Alphabet::N), Just(Alphabet::Bbd)],
        p in composition(3, 3),
        choices in prop::collection::vec(0..50usize, 0..7),
    ) {
        let chain = walk(a, &p, &choices);
        let t = chain_to_tableau(&chain).unwrap();
        prop_assert_eq!(t.shape(), chain.end().clone());
        prop_assert_eq!(tableau_to_chain(&t, a).unwrap(), chain);
    }

    #[test]
    fn delta_projections(f in rational(), i in 1..=2usize, d in 0..4u32, e in 0..4u32) {
        let twice = f.delta_op(i, e).delta_op(i, d);
        if d == e {
            prop_assert!(twice.same_function(&f.delta_op(i, d)));
        } else {
            prop_assert!(twice.is_zero());
        }
    }

    #[test]
    fn deltas_sum_to_the_function(p in poly(), i in 1..=2usize) {
        let f = FactoredRational::from_poly(p.clone());
        let mut sum = FactoredRational::zero();
        for d in 0..4 {
            sum = sum.add(&f.delta_op(i, d));
        }
        prop_assert!(sum.same_function(&f));
    }

    #[test]
    fn exact_division_round_trip(f in rational(), i in 1..=3usize, e in 0..4u32) {
        let g = f.mul_monomial(&Monomial::var_pow(i, e));
        prop_assert!(g.divide_by_monomial_exact(i, e).unwrap().same_function(&f));
    }

    #[test]
    fn arithmetic_commutes_with_taylor(f in rational(), g in rational()) {
        prop_assert_eq!(f.add(&g).taylor(8), &f.taylor(8) + &g.taylor(8));
        prop_assert_eq!(f.mul(&g).taylor(8), f.taylor(8).mul_trunc(&g.taylor(8), 8));
    }

    #[test]
    fn kappa_idempotent_and_sum_preserving(p in poly()) {
        let k = kappa_op(&p);
        prop_assert_eq!(kappa_op(&k), k.clone());
        prop_assert_eq!(coefficient_sum(&k), coefficient_sum(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_rule(p in composition(4, 3)) {
        prop_assume!(p.weight() <= 5);
        prop_assert!(verify_product_rule(&p, default_vars(&p)).unwrap());
    }

    #[test]
    fn labeled_recurrence_matches_oracle(p in composition(2, 3), extra in 0..3usize, bbd in any::<bool>()) {
        let a = if bbd { Alphabet::Bbd } else { Alphabet::N };
        prop_assume!(!(bbd && p.is_empty()));
        let k = p.width() + extra;
        let oracle = labeled_oracle(a, &p, Some(k), 5);
        prop_assert!(oracle.is_single_monomial());
        let rec = f_recurrence(a, &p, k, 5).unwrap();
        prop_assert!(oracle.first_mismatch(&rec).is_none());
        let f = f_width(a, &p, k).unwrap();
        prop_assert_eq!(oracle.collapse_letters(), f.taylor(p.weight() as u32 + 5));
    }

    #[test]
    fn words_reapply_to_their_endpoints(p in composition(2, 3), k in 1..4usize) {
        let oracle = labeled_oracle(Alphabet::N, &p, Some(k), 4);
        for (w, m, _) in oracle.iter() {
            let end = apply_word(w, &p, Alphabet::N).unwrap();
            let expected: Vec<u32> = end.parts().iter().map(|&x| x as u32).collect();
            prop_assert_eq!(m, &Monomial::new(expected));
            prop_assert_eq!(w.clone(), w.to_string().parse::<Word>().unwrap());
        }
    }
}
