mod common;

use common::{random_lasso, random_muller, rng};
use mwmso::num::{rat, ExtRational};
use mwmso::omega::{accepting_lasso_exists, accepting_run, energy_behavior, energy_run, prefix_minimum, ratio_sup, ratio_sup_behavior, LassoWord, MullerMwa};
use mwmso::structures::{EnergyStructure, IntVector, OmegaStructure, RatioPair};
use mwmso::Budget;
use proptest::prelude::*;
use rand::Rng;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Nodes `(state, phase)` of the run graph on `w`, reachable from an initial state.
fn successors<W: Clone>(a: &MullerMwa<W>, w: &LassoWord, (q, p): (usize, usize)) -> Vec<(usize, usize)> {
    a.automaton()
        .outgoing(q)
        .iter()
        .filter(|t| t.letter == w.letter_at(p))
        .map(|t| (t.to, w.next_phase(p)))
        .collect()
}

/// Some reachable node lies on a closed walk that visits exactly a Muller set.
fn lasso_oracle<W: Clone>(a: &MullerMwa<W>, w: &LassoWord) -> bool {
    let mut seen: HashSet<(usize, usize)> = a.automaton().initial().iter().map(|&q| (q, 0)).collect();
    let mut queue: VecDeque<_> = seen.iter().copied().collect();
    while let Some(n) = queue.pop_front() {
        for m in successors(a, w, n) {
            if seen.insert(m) {
                queue.push_back(m);
            }
        }
    }
    let sets: HashSet<u32> = a.muller().iter().map(|s| s.iter().map(|q| 1u32 << q).sum()).collect();
    seen.iter().any(|&start| {
        let mut visited: HashSet<((usize, usize), u32)> = HashSet::new();
        let mut queue = VecDeque::from([(start, 1u32 << start.0)]);
        while let Some((n, mask)) = queue.pop_front() {
            for m in successors(a, w, n) {
                let mask = mask | 1 << m.0;
                if m == start && sets.contains(&mask) {
                    return true;
                }
                if visited.insert((m, mask)) {
                    queue.push_back((m, mask));
                }
            }
        }
        false
    })
}

fn ratio_muller(seed: u64) -> MullerMwa<RatioPair> {
    random_muller(&mut rng(seed), 3, |r| RatioPair::new(rat(r.gen_range(-3..=5), 1), rat(r.gen_range(1..=3), 1)))
}

fn energy_muller(seed: u64) -> MullerMwa<IntVector> {
    random_muller(&mut rng(seed), 3, |r| IntVector(vec![r.gen_range(-2..=2), r.gen_range(-1..=1)]))
}

fn lasso(seed: u64) -> LassoWord {
    random_lasso(&mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lasso_acceptance_matches_closed_walks(seed in any::<u64>(), wseed in any::<u64>()) {
        let a = ratio_muller(seed);
        let w = lasso(wseed);
        let expect = lasso_oracle(&a, &w);
        prop_assert_eq!(accepting_lasso_exists(&a, &w).unwrap(), expect);
        let run = accepting_run(&a, &w, &Budget::default()).unwrap();
        prop_assert_eq!(run.is_some(), expect);
        if let Some(run) = run {
            prop_assert!(run.is_accepting_on(&a, &w));
        }
    }

    #[test]
    fn values_ignore_the_lasso_presentation(seed in any::<u64>(), wseed in any::<u64>()) {
        let w = lasso(wseed);
        let doubled = LassoWord::new(w.prefix.clone(), [w.period.clone(), w.period.clone()].concat()).unwrap();
        let a = ratio_muller(seed);
        let v = ratio_sup_behavior(&a, &w).unwrap();
        prop_assert_eq!(&ratio_sup_behavior(&a, &w.rotated()).unwrap(), &v);
        prop_assert_eq!(&ratio_sup_behavior(&a, &doubled).unwrap(), &v);
        let e = energy_muller(seed);
        let s = EnergyStructure::new(vec![3, 2]).unwrap();
        let b = energy_behavior(&e, &s, &w).unwrap();
        prop_assert_eq!(energy_behavior(&e, &s, &w.rotated()).unwrap(), b);
        prop_assert_eq!(energy_behavior(&e, &s, &doubled).unwrap(), b);
    }

    #[test]
    fn larger_capacity_never_hurts(seed in any::<u64>(), wseed in any::<u64>(), e1 in 2i64..=4, e2 in 1i64..=3) {
        let a = energy_muller(seed);
        let w = lasso(wseed);
        let small = EnergyStructure::new(vec![e1, e2]).unwrap();
        let large = EnergyStructure::new(vec![e1 + 1, e2 + 1]).unwrap();
        if energy_behavior(&a, &small, &w).unwrap() {
            prop_assert!(energy_behavior(&a, &large, &w).unwrap());
        }
    }

    #[test]
    fn energy_run_stays_nonnegative(seed in any::<u64>(), wseed in any::<u64>()) {
        let a = energy_muller(seed);
        let w = lasso(wseed);
        let s = EnergyStructure::new(vec![2, 2]).unwrap();
        let run = energy_run(&a, &s, &w, &Budget::default()).unwrap();
        prop_assert_eq!(run.is_some(), energy_behavior(&a, &s, &w).unwrap());
        if let Some(run) = run {
            prop_assert!(run.is_accepting_on(&a, &w));
            let (stem, cycle) = run.weights(a.automaton());
            let exact = s.val_omega(&stem, &cycle).unwrap();
            prop_assert!(exact.is_nonnegative());
            prop_assert_eq!(prefix_minimum(&s, &stem, &cycle, stem.len() + 4 * cycle.len()), exact);
        }
    }

    #[test]
    fn ratio_run_realizes_the_value(seed in any::<u64>(), wseed in any::<u64>()) {
        let a = ratio_muller(seed);
        let w = lasso(wseed);
        let sup = ratio_sup(&a, &w, &Budget::default()).unwrap();
        prop_assert_eq!(sup.run.is_some(), sup.value != ExtRational::NegInf);
        if let Some(run) = sup.run {
            let (_, cycle) = run.weights(a.automaton());
            let reward = cycle.iter().fold(rat(0, 1), |acc, p| match &p.reward {
                ExtRational::Finite(x) => acc + x,
                other => panic!("unexpected reward {other}"),
            });
            let cost = cycle.iter().fold(rat(0, 1), |acc, p| acc + &p.cost);
            prop_assert_eq!(ExtRational::Finite(reward / cost), sup.value);
        }
    }
}

#[test]
fn muller_sets_are_exact() {
    // the loop on 0 alone is not enough when the set is {0, 1}
    let t = |from, to| mwmso::automata::Transition { from, letter: 0, to, weight: RatioPair::new(rat(1, 1), rat(1, 1)) };
    let alphabet = mwmso::automata::Alphabet::new(["a"]).unwrap();
    let aut = mwmso::automata::Automaton::new(alphabet, 2, vec![0], vec![], vec![t(0, 0), t(0, 1)]).unwrap();
    let w = LassoWord::new(vec![], vec![0]).unwrap();
    let only_both = MullerMwa::new(aut.clone(), vec![BTreeSet::from([0, 1])]).unwrap();
    assert!(!accepting_lasso_exists(&only_both, &w).unwrap());
    let only_zero = MullerMwa::new(aut, vec![BTreeSet::from([0])]).unwrap();
    assert!(accepting_lasso_exists(&only_zero, &w).unwrap());
}
