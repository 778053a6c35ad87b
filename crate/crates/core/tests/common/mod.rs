//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use mwmso::automata::{Alphabet, Automaton, MultisetAutomaton, Transition};
use mwmso::logic::{Formula, Kind, Var, VarValue};
use mwmso::omega::{LassoWord, MullerMwa};
use mwmso::num::{rat, Rational};
use mwmso::structures::Weight;
use mwmso::FiniteMultiset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

/// All words of length `1..=max` over `k` letters.
pub fn words(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |a| [w.as_slice(), &[a]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn small_rational(r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    rat(r.gen_range(lo..=hi), r.gen_range(1..=3))
}

/// Each `(from, letter, to)` triple present with probability `density`;
/// at least one initial and one final state.
pub fn random_automaton<W: Clone, F: FnMut(&mut ChaCha8Rng) -> W>(
    r: &mut ChaCha8Rng,
    states: usize,
    alphabet: &Alphabet,
    density: f64,
    max_transitions: usize,
    mut weight: F,
) -> Automaton<W> {
    let mut ts = Vec::new();
    for from in 0..states {
        for letter in 0..alphabet.len() {
            for to in 0..states {
                if ts.len() < max_transitions && r.gen_bool(density) {
                    ts.push(Transition { from, letter, to, weight: weight(r) });
                }
            }
        }
    }
    let mut initial: Vec<usize> = (0..states).filter(|_| r.gen_bool(0.3)).collect();
    if initial.is_empty() {
        initial.push(0);
    }
    let mut finals: Vec<usize> = (0..states).filter(|_| r.gen_bool(0.4)).collect();
    if finals.is_empty() {
        finals.push(states - 1);
    }
    Automaton::new(alphabet.clone(), states, initial, finals, ts).unwrap()
}

pub fn random_pair_automaton(r: &mut ChaCha8Rng, states: usize, density: f64, max_t: usize) -> Automaton<Weight> {
    random_automaton(r, states, &ab(), density, max_t, |r| {
        Weight(vec![small_rational(r, -3, 4), rat(r.gen_range(0..=3), 1)])
    })
}

pub fn random_multiset_automaton(r: &mut ChaCha8Rng, states: usize) -> MultisetAutomaton<Weight> {
    random_automaton(r, states, &ab(), 0.35, 10, |r| {
        let mut m = FiniteMultiset::empty();
        for _ in 0..r.gen_range(0..=3) {
            let w = Weight(vec![rat(r.gen_range(-2..=3), 1), rat(r.gen_range(0..=2), 1)]);
            m.insert(w, r.gen_range(1u32..=3).into());
        }
        m
    })
}

/// Direct satisfaction of a boolean formula, by recursion on the syntax
/// with quantifiers ranging over positions and sets of positions.
pub fn satisfies<M>(f: &Formula<M>, alphabet: &Alphabet, word: &[usize], env: &BTreeMap<Var, VarValue>) -> bool {
    let pos = |v: &Var| match env.get(v) {
        Some(VarValue::Pos(i)) => *i,
        other => panic!("{v} is not bound to a position: {other:?}"),
    };
    match f.kind() {
        Kind::Label { letter, var } => alphabet.name(word[pos(var)]) == letter,
        Kind::Leq(x, y) => pos(x) <= pos(y),
        Kind::Member(x, set) => match env.get(set) {
            Some(VarValue::Set(s)) => s.contains(&pos(x)),
            other => panic!("{set} is not bound to a set: {other:?}"),
        },
        Kind::Const(_) => panic!("constants are not boolean"),
        Kind::Not(g) => !satisfies(g, alphabet, word, env),
        Kind::And(g, h) => satisfies(g, alphabet, word, env) && satisfies(h, alphabet, word, env),
        Kind::Or(g, h) => satisfies(g, alphabet, word, env) || satisfies(h, alphabet, word, env),
        Kind::Exists(v, g) => values(v, word.len()).into_iter().any(|x| {
            let mut e = env.clone();
            e.insert(v.clone(), x);
            satisfies(g, alphabet, word, &e)
        }),
        Kind::Forall(v, g) => values(v, word.len()).into_iter().all(|x| {
            let mut e = env.clone();
            e.insert(v.clone(), x);
            satisfies(g, alphabet, word, &e)
        }),
    }
}

fn values(v: &Var, n: usize) -> Vec<VarValue> {
    if v.is_second_order() {
        (0..1u32 << n)
            .map(|mask| VarValue::Set((0..n).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>()))
            .collect()
    } else {
        (0..n).map(VarValue::Pos).collect()
    }
}

/// Machine-word rationals, enough for the small weights of the test suites.
pub type Small = num_rational::Ratio<i64>;
pub type Sums = BTreeSet<(Small, Small)>;

pub fn small(q: &Rational) -> Small {
    use num_traits::ToPrimitive;
    Small::new(q.numer().to_i64().expect("small numerator"), q.denom().to_i64().expect("small denominator"))
}

/// Accumulated `(first, second)` component sums of accepting paths, per word,
/// for all words up to `max_len`. Returns the shortest, then lexicographically
/// least, word whose sums satisfy `visit`. Sums dominated by another sum at the
/// same state (per `dominates`) are dropped, so `visit` must be monotone for it.
pub fn explore_sums<F, D>(a: &Automaton<Weight>, max_len: usize, dominates: D, mut visit: F) -> Option<Vec<usize>>
where
    F: FnMut(&[usize], &Sums) -> bool,
    D: Fn(&(Small, Small), &(Small, Small)) -> bool,
{
    type Layer = BTreeMap<usize, Sums>;
    struct Search<'a, F, D> {
        a: &'a Automaton<Weight>,
        depth: usize,
        visit: F,
        dominates: D,
    }
    impl<F, D> Search<'_, F, D>
    where
        F: FnMut(&[usize], &Sums) -> bool,
        D: Fn(&(Small, Small), &(Small, Small)) -> bool,
    {
        fn go(&mut self, word: &mut Vec<usize>, layer: &Layer) -> bool {
            for letter in 0..self.a.alphabet().len() {
                let mut next: Layer = BTreeMap::new();
                for (&q, sums) in layer {
                    for t in self.a.outgoing(q).iter().filter(|t| t.letter == letter) {
                        let entry = next.entry(t.to).or_default();
                        let (dx, dy) = (small(&t.weight.0[0]), small(&t.weight.0[1]));
                        for (x, y) in sums {
                            entry.insert((x + dx, y + dy));
                        }
                    }
                }
                if next.is_empty() {
                    continue;
                }
                for sums in next.values_mut() {
                    let all: Vec<_> = sums.iter().cloned().collect();
                    sums.retain(|p| !all.iter().any(|o| o != p && (self.dominates)(o, p)));
                }
                word.push(letter);
                let found = if word.len() == self.depth {
                    let at_final: Sums = next
                        .iter()
                        .filter(|(q, _)| self.a.is_final(**q))
                        .flat_map(|(_, s)| s.iter().cloned())
                        .collect();
                    (self.visit)(word, &at_final)
                } else {
                    self.go(word, &next)
                };
                if found {
                    return true;
                }
                word.pop();
            }
            false
        }
    }
    let mut start: Layer = BTreeMap::new();
    for &q in a.initial() {
        start.entry(q).or_default().insert((Small::default(), Small::default()));
    }
    let mut search = Search { a, depth: 0, visit: &mut visit, dominates };
    for depth in 1..=max_len {
        search.depth = depth;
        let mut word = Vec::new();
        if search.go(&mut word, &start) {
            return Some(word);
        }
    }
    None
}

pub fn single_loop<W: Clone>(alphabet: &[&str], weights: Vec<W>) -> MullerMwa<W> {
    let ts = weights.into_iter().enumerate().map(|(l, weight)| Transition { from: 0, letter: l, to: 0, weight }).collect();
    let a = Automaton::new(Alphabet::new(alphabet.iter().copied()).unwrap(), 1, vec![0], vec![], ts).unwrap();
    MullerMwa::new(a, vec![[0].into_iter().collect()]).unwrap()
}

pub fn random_muller<W: Clone>(
    r: &mut ChaCha8Rng,
    n: usize,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> W,
) -> MullerMwa<W> {
    let a = random_automaton(r, n, &ab(), 0.35, 4 * n, &mut weight);
    let mut sets = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let set: BTreeSet<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
        if !set.is_empty() {
            sets.push(set);
        }
    }
    MullerMwa::new(a, sets).unwrap()
}

pub fn random_lasso(r: &mut ChaCha8Rng) -> LassoWord {
    let u = (0..r.gen_range(0..=2)).map(|_| r.gen_range(0..2)).collect();
    let v = (0..r.gen_range(1..=3)).map(|_| r.gen_range(0..2)).collect();
    LassoWord::new(u, v).unwrap()
}
