use super::{check_alphabets, Alphabet, Automaton, Nfa, Transition};
use crate::budget::Budget;
use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// A complete deterministic automaton.
///
/// Languages of DFAs are read as subsets of Σ⁺: whether the start state is
/// accepting only matters for the empty word and is ignored by the `_plus`
/// queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    /// `delta[q * |Σ| + a]` is the successor of `q` on `a`.
    pub fn new(alphabet: Alphabet, start: usize, accepting: Vec<bool>, delta: Vec<usize>) -> Result<Self> {
        let n = accepting.len();
        if start >= n || delta.len() != n * alphabet.len() || delta.iter().any(|&q| q >= n) {
            return Err(Error::InvalidAutomaton("DFA transition table is not complete".into()));
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting,
            delta,
        })
    }

    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(alphabet, 0, vec![true], vec![0; k]).unwrap()
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa::new(alphabet, 0, vec![false], vec![0; k]).unwrap()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn next(&self, q: usize, letter: usize) -> usize {
        self.delta[q * self.alphabet.len() + letter]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn run(&self, w: &[usize]) -> usize {
        w.iter().fold(self.start, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            alphabet: self.alphabet.clone(),
            start: self.start,
            accepting: self.accepting.iter().map(|b| !b).collect(),
            delta: self.delta.clone(),
        }
    }

    /// Reachable product with acceptance `op(accept1, accept2)`.
    pub fn product<F: Fn(bool, bool) -> bool>(&self, other: &Dfa, op: F, budget: &Budget) -> Result<Dfa> {
        check_alphabets(&self.alphabet, &other.alphabet)?;
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let t = (self.next(p, a), other.next(q, a));
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        pairs.push(t);
                        budget.check_states(pairs.len(), "DFA product")?;
                        index.insert(t, pairs.len() - 1);
                        pairs.len() - 1
                    }
                };
                delta.push(j);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op(self.accepting[p], other.accepting[q]))
            .collect();
        Dfa::new(self.alphabet.clone(), 0, accepting, delta)
    }

    pub fn intersect(&self, other: &Dfa, budget: &Budget) -> Result<Dfa> {
        self.product(other, |a, b| a && b, budget)
    }

    pub fn union(&self, other: &Dfa, budget: &Budget) -> Result<Dfa> {
        self.product(other, |a, b| a || b, budget)
    }

    fn reachable(&self) -> Vec<bool> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.num_states()];
        seen[self.start] = true;
        let mut queue = VecDeque::from([self.start]);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// The minimal complete DFA, with states numbered in breadth-first order
    /// from the start state (letters in alphabet order). Two DFAs accept the
    /// same language over Σ* iff their minimizations are equal.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reach = self.reachable();
        let states: Vec<usize> = (0..self.num_states()).filter(|&q| reach[q]).collect();
        let mut class = vec![0usize; self.num_states()];
        for &q in &states {
            class[q] = usize::from(self.accepting[q]);
        }
        let mut count = {
            let mut v: Vec<usize> = states.iter().map(|&q| class[q]).collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        loop {
            let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_class = vec![0usize; self.num_states()];
            for &q in &states {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q]);
                for a in 0..k {
                    sig.push(class[self.next(q, a)]);
                }
                let n = sigs.len();
                next_class[q] = *sigs.entry(sig).or_insert(n);
            }
            let new_count = sigs.len();
            class = next_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut order: Vec<Option<usize>> = vec![None; count];
        let mut repr = Vec::new();
        order[class[self.start]] = Some(0);
        repr.push(self.start);
        let mut i = 0;
        while i < repr.len() {
            let q = repr[i];
            for a in 0..k {
                let c = class[self.next(q, a)];
                if order[c].is_none() {
                    order[c] = Some(repr.len());
                    repr.push(self.next(q, a));
                }
            }
            i += 1;
        }
        let mut delta = Vec::with_capacity(repr.len() * k);
        for &q in &repr {
            for a in 0..k {
                delta.push(order[class[self.next(q, a)]].unwrap());
            }
        }
        let accepting = repr.iter().map(|&q| self.accepting[q]).collect();
        Dfa::new(self.alphabet.clone(), 0, accepting, delta).unwrap()
    }

    /// Shortest nonempty accepted word, least in letter order among the shortest.
    pub fn shortest_accepted_plus(&self) -> Option<Vec<usize>> {
        let k = self.alphabet.len();
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for a in 0..k {
            let r = self.next(self.start, a);
            if !seen[r] {
                seen[r] = true;
                parent[r] = Some((usize::MAX, a));
                queue.push_back(r);
            }
        }
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    if p == usize::MAX {
                        break;
                    }
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..k {
                let r = self.next(q, a);
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// No nonempty word is accepted.
    pub fn is_empty_plus(&self) -> bool {
        self.shortest_accepted_plus().is_none()
    }

    /// Every nonempty word is accepted.
    pub fn is_universal_plus(&self) -> bool {
        self.complement().is_empty_plus()
    }

    /// Same language over Σ⁺.
    pub fn equivalent_plus(&self, other: &Dfa) -> Result<bool> {
        let x = self.product(other, |a, b| a != b, &Budget { max_states: usize::MAX, ..Budget::default() })?;
        Ok(x.is_empty_plus())
    }

    /// The preimage `{w : h(w) ∈ L}` over `target`, where `h` maps each
    /// letter of `target` to a letter of this DFA's alphabet.
    pub fn inverse_image<H: Fn(usize) -> usize>(&self, target: &Alphabet, h: H) -> Dfa {
        let k = target.len();
        let images: Vec<usize> = (0..k).map(&h).collect();
        let mut delta = Vec::with_capacity(self.num_states() * k);
        for q in 0..self.num_states() {
            for &b in &images {
                delta.push(self.next(q, b));
            }
        }
        Dfa::new(target.clone(), self.start, self.accepting.clone(), delta).unwrap()
    }

    pub fn to_nfa(&self) -> Nfa {
        let k = self.alphabet.len();
        let mut transitions = Vec::with_capacity(self.delta.len());
        for q in 0..self.num_states() {
            for a in 0..k {
                transitions.push(Transition {
                    from: q,
                    letter: a,
                    to: self.next(q, a),
                    weight: (),
                });
            }
        }
        let finals = (0..self.num_states()).filter(|&q| self.accepting[q]).collect();
        Automaton::new(self.alphabet.clone(), self.num_states(), vec![self.start], finals, transitions).unwrap()
    }
}

/// Subset construction. The result is complete; the empty subset is the sink.
pub fn determinize<W: Clone>(n: &Automaton<W>, budget: &Budget) -> Result<Dfa> {
    let k = n.alphabet().len();
    let start: Vec<usize> = n.initial().to_vec();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    let mut mark = vec![false; n.num_states()];
    while i < subsets.len() {
        let current = subsets[i].clone();
        for a in 0..k {
            let mut next = Vec::new();
            for &q in &current {
                for (_, t) in n.outgoing_on(q, a) {
                    if !mark[t.to] {
                        mark[t.to] = true;
                        next.push(t.to);
                    }
                }
            }
            for &q in &next {
                mark[q] = false;
            }
            next.sort_unstable();
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    subsets.push(next.clone());
                    budget.check_states(subsets.len(), "subset construction")?;
                    index.insert(next, subsets.len() - 1);
                    subsets.len() - 1
                }
            };
            delta.push(j);
        }
        i += 1;
    }
    let accepting = subsets.iter().map(|s| s.iter().any(|&q| n.is_final(q))).collect();
    Dfa::new(n.alphabet().clone(), 0, accepting, delta)
}

pub fn complement(d: &Dfa) -> Dfa {
    d.complement()
}

pub fn intersect(d1: &Dfa, d2: &Dfa, budget: &Budget) -> Result<Dfa> {
    d1.intersect(d2, budget)
}

pub fn minimize(d: &Dfa) -> Dfa {
    d.minimize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    /// Words ending in `a`.
    fn ends_a() -> Dfa {
        Dfa::new(ab(), 0, vec![false, true], vec![1, 0, 1, 0]).unwrap()
    }

    #[test]
    fn minimize_merges_equivalent_states() {
        let redundant = Dfa::new(ab(), 0, vec![false, true, true], vec![1, 0, 2, 0, 1, 0]).unwrap();
        assert_eq!(redundant.minimize(), ends_a().minimize());
        assert_eq!(redundant.minimize().num_states(), 2);
    }

    #[test]
    fn shortest_word() {
        assert_eq!(ends_a().shortest_accepted_plus(), Some(vec![0]));
        assert!(Dfa::empty(ab()).is_empty_plus());
        assert!(Dfa::universal(ab()).is_universal_plus());
    }

    #[test]
    fn determinize_nfa() {
        // second-to-last letter is `a`
        let t = |from, letter, to| Transition { from, letter, to, weight: () };
        let n = Automaton::new(ab(), 3, vec![0], vec![2], vec![t(0, 0, 0), t(0, 1, 0), t(0, 0, 1), t(1, 0, 2), t(1, 1, 2)])
            .unwrap();
        let d = determinize(&n, &Budget::default()).unwrap();
        assert!(d.accepts(&[0, 1]));
        assert!(d.accepts(&[1, 0, 0]));
        assert!(!d.accepts(&[0, 1, 1]));
        assert_eq!(d.minimize().num_states(), 4);
    }

    #[test]
    fn subset_budget() {
        let t = |from, letter, to| Transition { from, letter, to, weight: () };
        let n = Automaton::new(ab(), 3, vec![0], vec![2], vec![t(0, 0, 0), t(0, 1, 0), t(0, 0, 1), t(1, 0, 2), t(1, 1, 2)])
            .unwrap();
        let tight = Budget { max_states: 2, ..Budget::default() };
        assert!(matches!(determinize(&n, &tight), Err(Error::Resource(_))));
    }
}
