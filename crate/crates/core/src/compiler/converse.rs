//! Automata as formulas: a sentence whose multiset semantics equals the
//! multiset behavior of a given automaton.

use crate::automata::Automaton;
use crate::logic::{Formula, Var};

type F<M> = Formula<M>;

fn var(name: &str) -> Var {
    Var::new(name)
}

fn set(i: usize) -> Var {
    Var(format!("X{i}"))
}

fn falsum<M: Clone>() -> F<M> {
    F::not(F::forall(var("x"), F::leq(var("x"), var("x"))))
}

/// `∀y. x <= y`
fn first<M: Clone>(x: &str, y: &str) -> F<M> {
    F::forall(var(y), F::leq(var(x), var(y)))
}

/// `∀y. y <= x`
fn last<M: Clone>(x: &str, y: &str) -> F<M> {
    F::forall(var(y), F::leq(var(y), var(x)))
}

/// `y` is the successor of `x`.
fn succ<M: Clone>(x: &str, y: &str, z: &str) -> F<M> {
    let between = F::and(F::negate(F::leq(var(z), var(x))), F::negate(F::leq(var(y), var(z))));
    F::and(F::negate(F::leq(var(y), var(x))), F::forall(var(z), F::negate(between)))
}

fn member<M: Clone>(x: &str, i: usize) -> F<M> {
    F::member(var(x), set(i))
}

/// `∀x. x ∈ X_i → β(x)`
fn inside<M: Clone>(i: usize, beta: F<M>) -> F<M> {
    F::forall(var("x"), F::bool_implies(member("x", i), beta))
}

/// Encodes accepting runs by sets `X0, X1, ...`, one per transition, with
/// position `p` in `X_i` when the run takes transition `i` at `p`. The
/// sentence has the shape
///
/// ```text
/// exists X0. (G0 & exists X1. (G1 & ... & (Cover & forall x. Dispatch)))
/// ```
///
/// where `G_i` checks what can be checked once `X0..X_i` are known (labels,
/// disjointness, first and last positions, successor compatibility),
/// `Cover` requires every position to be in some `X_i`, and `Dispatch` is
/// `(x in X0 & m0) | (x in X1 & m1) | ...`.
pub fn automaton_to_formula<M: Clone>(a: &Automaton<M>) -> Formula<M> {
    let ts = a.transitions();
    let k = ts.len();
    if k == 0 {
        return falsum();
    }
    let initial: Vec<bool> = (0..a.num_states()).map(|q| a.initial().contains(&q)).collect();
    let mut guards: Vec<F<M>> = Vec::with_capacity(k);
    for (i, t) in ts.iter().enumerate() {
        let mut parts: Vec<F<M>> = vec![inside(i, F::label(a.alphabet().name(t.letter), var("x")))];
        for j in 0..i {
            parts.push(inside(i, F::not(member("x", j))));
        }
        if !initial[t.from] {
            parts.push(inside(i, F::not(first("x", "y"))));
        }
        if !a.is_final(t.to) {
            parts.push(inside(i, F::not(last("x", "y"))));
        }
        for j in 0..=i {
            let pairs: &[(usize, usize)] = if j == i { &[(i, i)] } else { &[(j, i), (i, j)] };
            for &(p, q) in pairs {
                if ts[p].to != ts[q].from {
                    let pair = F::and(F::and(succ("x", "y", "z"), member("x", p)), member("y", q));
                    parts.push(F::forall(var("x"), F::forall(var("y"), F::not(pair))));
                }
            }
        }
        guards.push(parts.into_iter().reduce(F::and).expect("the label guard is always present"));
    }
    let cover = F::forall(var("x"), F::bool_any((0..k).map(|i| member("x", i)).collect(), falsum()));
    let dispatch = (0..k)
        .map(|i| F::and(member("x", i), F::constant(ts[i].weight.clone())))
        .reduce(F::or)
        .expect("at least one transition");
    let mut body = F::and(cover, F::forall(var("x"), dispatch));
    for i in (0..k).rev() {
        body = F::exists(set(i), F::and(guards.pop().expect("one guard per transition"), body));
    }
    body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{multiset_behavior, Alphabet, Transition};
    use crate::logic::{classify, eval_multiset, AssignedWord};
    use crate::structures::{RatioStructure, Weight};

    fn w(x: i64, y: i64) -> Weight {
        Weight::from_ints(&[x, y])
    }

    fn all_words(k: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max {
            layer = layer
                .iter()
                .flat_map(|v| (0..k).map(move |a| [v.clone(), vec![a]].concat()))
                .collect();
            out.extend(layer.clone());
        }
        out
    }

    fn check(a: &Automaton<Weight>, max: usize) {
        let f = automaton_to_formula(a);
        assert!(f.is_sentence());
        assert!(classify(&f).is_restricted());
        for word in all_words(a.alphabet().len(), max) {
            let expect = multiset_behavior(a, &word, &RatioStructure).unwrap();
            let got = eval_multiset(&f, a.alphabet(), &AssignedWord::new(word.clone()), &RatioStructure).unwrap();
            assert_eq!(got, expect, "{word:?}");
        }
    }

    #[test]
    fn single_loop() {
        let a = Automaton::new(
            Alphabet::new(["a"]).unwrap(),
            1,
            vec![0],
            vec![0],
            vec![Transition { from: 0, letter: 0, to: 0, weight: w(2, 1) }],
        )
        .unwrap();
        check(&a, 4);
    }

    #[test]
    fn empty_language() {
        let a: Automaton<Weight> = Automaton::empty(Alphabet::new(["a", "b"]).unwrap());
        check(&a, 3);
    }

    #[test]
    fn branching_paths() {
        let a = Automaton::new(
            Alphabet::new(["a", "b"]).unwrap(),
            2,
            vec![0],
            vec![1],
            vec![
                Transition { from: 0, letter: 0, to: 0, weight: w(1, 1) },
                Transition { from: 0, letter: 0, to: 1, weight: w(2, 1) },
                Transition { from: 0, letter: 1, to: 1, weight: w(0, 3) },
                Transition { from: 1, letter: 1, to: 0, weight: w(5, 2) },
                Transition { from: 1, letter: 0, to: 1, weight: w(1, 0) },
            ],
        )
        .unwrap();
        check(&a, 4);
    }
}
