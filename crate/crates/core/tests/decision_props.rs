mod common;

use common::{ab, explore_sums, random_automaton, random_pair_automaton, rng, small, Small};
use mwmso::automata::behavior;
use mwmso::decision::{ratio_emptiness_geq, twocost_emptiness_leq, Decision};
use mwmso::num::{int, rat, ExtRational, Rational};
use mwmso::structures::{RatioStructure, TwoCostStructure, Weight};
use proptest::prelude::*;
use rand::Rng;

fn nonneg_threshold() -> impl Strategy<Value = Rational> {
    (0i64..=12, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratio_witness_is_valid_and_least(seed in any::<u64>(), states in 1usize..=3, nu in nonneg_threshold()) {
        let a = random_pair_automaton(&mut rng(seed), states, 0.3, 8);
        let bound = 3 * states;
        let target = ExtRational::Finite(nu.clone());
        let d = ratio_emptiness_geq(&a, &nu).unwrap();
        let nu_small = small(&nu);
        let oracle = explore_sums(&a, bound, |p, o| p.0 >= o.0 && p.1 <= o.1, |_, sums| {
            sums.iter().any(|(x, y)| *y == Small::default() || *x >= nu_small * *y)
        });
        if let Decision::Yes { witness, value } = &d {
            prop_assert_eq!(&behavior(&a, witness, &RatioStructure).unwrap(), value);
            prop_assert!(*value >= target);
            if witness.len() <= bound {
                prop_assert_eq!(Some(witness.clone()), oracle);
            }
        } else {
            prop_assert_eq!(oracle, None);
        }
    }

    #[test]
    fn ratio_answer_is_monotone(seed in any::<u64>(), states in 1usize..=5, nu in nonneg_threshold()) {
        let a = random_pair_automaton(&mut rng(seed), states, 0.3, 12);
        let hi = ratio_emptiness_geq(&a, &(&nu + int(1))).unwrap();
        let lo = ratio_emptiness_geq(&a, &nu).unwrap();
        if let Some(w) = hi.witness() {
            prop_assert!(lo.witness().is_some_and(|v| v.len() <= w.len()));
        }
    }

    #[test]
    fn twocost_witness_is_valid_and_shortest(seed in any::<u64>(), states in 1usize..=3, bound in 1i64..=6, nu in 0i64..=8) {
        let mut r = rng(seed);
        let a = random_automaton(&mut r, states, &ab(), 0.3, 8, |r| {
            Weight(vec![rat(r.gen_range(0..=4), 1), rat(r.gen_range(0..=3), 1)])
        });
        let s = TwoCostStructure::new(int(bound));
        let nu = int(nu);
        let d = twocost_emptiness_leq(&a, &s, &nu).unwrap();
        let (cap, top) = (small(&s.bound), small(&nu));
        let oracle = explore_sums(&a, 3 * states + 4, |p, o| p.0 <= o.0 && p.1 <= o.1, |_, sums| {
            sums.iter().any(|(p, c)| *c <= cap && *p <= top)
        });
        match (&d, &oracle) {
            (Decision::Yes { witness, value }, Some(w)) => {
                prop_assert_eq!(witness.len(), w.len());
                prop_assert_eq!(&behavior(&a, witness, &s).unwrap(), value);
                prop_assert!(*value <= ExtRational::Finite(nu.clone()));
            }
            (Decision::No, None) => {}
            _ => prop_assert!(false, "procedure {} against exhaustive {:?}", d, oracle),
        }
    }
}
