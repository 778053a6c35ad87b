//! Automata on finite words: unweighted, multi-weighted, and
//! multiset-weighted, together with the constructions the compiler needs.
//!
//! States are numbered `0..n`, letters are indices into an [`Alphabet`], and
//! transitions are kept sorted by `(from, letter, to)`. That order is the
//! canonical path order used by [`Automaton::accepting_paths`].

mod dfa;
pub mod dot;
pub mod json;

pub use dfa::{complement, determinize, intersect, minimize, Dfa};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::multiset::{lift_val, FiniteMultiset};
use crate::structures::ValuationStructure;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

/// A nonempty list of distinct letter names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[String]>);

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::InvalidAutomaton("alphabet is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &letters {
            if l.is_empty() || !seen.insert(l.as_str()) {
                return Err(Error::InvalidAutomaton(format!("bad or repeated letter `{l}`")));
            }
        }
        Ok(Alphabet(letters.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, letter: usize) -> &str {
        &self.0[letter]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|l| l == name)
    }

    pub fn same_as(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    /// Splits `text` into letters by longest match. Whitespace and commas
    /// separate letters and are otherwise ignored; `aliases` map alternative
    /// spellings to letter names.
    pub fn parse_word(&self, text: &str, aliases: &BTreeMap<String, String>) -> Result<Vec<usize>> {
        let mut spellings: Vec<(&str, usize)> = Vec::new();
        for (i, l) in self.0.iter().enumerate() {
            spellings.push((l.as_str(), i));
        }
        for (alias, target) in aliases {
            let i = self
                .index_of(target)
                .ok_or_else(|| Error::UnknownLetter(target.clone()))?;
            spellings.push((alias.as_str(), i));
        }
        spellings.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
        let mut out = Vec::new();
        let mut rest = text;
        'outer: while !rest.is_empty() {
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() || c == ',' {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            for (s, i) in &spellings {
                if rest.starts_with(s) {
                    out.push(*i);
                    rest = &rest[s.len()..];
                    continue 'outer;
                }
            }
            let bad: String = rest.chars().take_while(|c| !c.is_whitespace()).collect();
            return Err(Error::UnknownLetter(bad));
        }
        if out.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        let single = self.0.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = w.iter().map(|&a| self.name(a)).collect();
        if single {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition<W> {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
    pub weight: W,
}

/// A nondeterministic automaton whose transitions carry payloads of type `W`.
///
/// `W = ()` gives a plain NFA, a domain element gives a multi-weighted
/// automaton, and a [`FiniteMultiset`] gives the compiler's intermediate form.
#[derive(Debug, Clone, PartialEq)]
pub struct Automaton<W> {
    alphabet: Alphabet,
    num_states: usize,
    initial: Vec<usize>,
    finals: Vec<bool>,
    transitions: Vec<Transition<W>>,
    offsets: Vec<usize>,
}

pub type Nfa = Automaton<()>;
pub type MultisetAutomaton<M> = Automaton<FiniteMultiset<M>>;

/// A path as a list of transition indices.
pub type Path = Vec<usize>;

impl<W: Clone> Automaton<W> {
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: Vec<usize>,
        finals: Vec<usize>,
        mut transitions: Vec<Transition<W>>,
    ) -> Result<Self> {
        let bad_state = |q: usize| q >= num_states;
        if initial.iter().chain(&finals).any(|&q| bad_state(q)) {
            return Err(Error::InvalidAutomaton("undeclared initial or final state".into()));
        }
        for t in &transitions {
            if bad_state(t.from) || bad_state(t.to) {
                return Err(Error::InvalidAutomaton(format!(
                    "transition {} -> {} uses an undeclared state",
                    t.from, t.to
                )));
            }
            if t.letter >= alphabet.len() {
                return Err(Error::InvalidAutomaton(format!("letter {} not in alphabet", t.letter)));
            }
        }
        transitions.sort_by_key(|t| (t.from, t.letter, t.to));
        if let Some(w) = transitions
            .windows(2)
            .find(|w| (w[0].from, w[0].letter, w[0].to) == (w[1].from, w[1].letter, w[1].to))
        {
            return Err(Error::InvalidAutomaton(format!(
                "repeated transition ({}, {}, {})",
                w[0].from,
                alphabet.name(w[0].letter),
                w[0].to
            )));
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        let mut fin = vec![false; num_states];
        for q in finals {
            fin[q] = true;
        }
        let mut offsets = vec![0usize; num_states + 1];
        for t in &transitions {
            offsets[t.from + 1] += 1;
        }
        for q in 0..num_states {
            offsets[q + 1] += offsets[q];
        }
        Ok(Automaton {
            alphabet,
            num_states,
            initial,
            finals: fin,
            transitions,
            offsets,
        })
    }

    /// The automaton with no states.
    pub fn empty(alphabet: Alphabet) -> Self {
        Automaton::new(alphabet, 0, vec![], vec![], vec![]).expect("empty automaton is valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<usize> {
        (0..self.num_states).filter(|&q| self.finals[q]).collect()
    }

    pub fn transitions(&self) -> &[Transition<W>] {
        &self.transitions
    }

    pub fn outgoing(&self, q: usize) -> &[Transition<W>] {
        &self.transitions[self.offsets[q]..self.offsets[q + 1]]
    }

    pub fn outgoing_offset(&self, q: usize) -> usize {
        self.offsets[q]
    }

    /// Transitions leaving `q` on `letter`, with their global indices.
    pub fn outgoing_on(&self, q: usize, letter: usize) -> impl Iterator<Item = (usize, &Transition<W>)> {
        let base = self.offsets[q];
        let out = self.outgoing(q);
        let lo = out.partition_point(|t| t.letter < letter);
        let hi = out.partition_point(|t| t.letter <= letter);
        (lo..hi).map(move |i| (base + i, &out[i]))
    }

    pub fn map_weights<V: Clone, F: FnMut(&W) -> V>(&self, mut f: F) -> Automaton<V> {
        Automaton {
            alphabet: self.alphabet.clone(),
            num_states: self.num_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    from: t.from,
                    letter: t.letter,
                    to: t.to,
                    weight: f(&t.weight),
                })
                .collect(),
            offsets: self.offsets.clone(),
        }
    }

    pub fn try_map_weights<V: Clone, F: FnMut(&W) -> Result<V>>(&self, mut f: F) -> Result<Automaton<V>> {
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            transitions.push(Transition {
                from: t.from,
                letter: t.letter,
                to: t.to,
                weight: f(&t.weight)?,
            });
        }
        Ok(Automaton {
            alphabet: self.alphabet.clone(),
            num_states: self.num_states,
            initial: self.initial.clone(),
            finals: self.finals.clone(),
            transitions,
            offsets: self.offsets.clone(),
        })
    }

    /// Drops payloads.
    pub fn to_nfa(&self) -> Nfa {
        self.map_weights(|_| ())
    }

    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&a) = w.iter().find(|&&a| a >= self.alphabet.len()) {
            return Err(Error::UnknownLetter(format!("#{a}")));
        }
        Ok(())
    }

    /// `alive[k][q]`: some path from `q` reads `w[k..]` and ends in a final state.
    fn suffix_alive(&self, w: &[usize]) -> Vec<Vec<bool>> {
        let n = w.len();
        let mut alive = vec![vec![false; self.num_states]; n + 1];
        alive[n] = self.finals.clone();
        for k in (0..n).rev() {
            for q in 0..self.num_states {
                alive[k][q] = self.outgoing_on(q, w[k]).any(|(_, t)| alive[k + 1][t.to]);
            }
        }
        alive
    }

    /// All accepting paths on `w`, in canonical order.
    pub fn accepting_paths(&self, w: &[usize]) -> Result<Vec<Path>> {
        self.check_word(w)?;
        let alive = self.suffix_alive(w);
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(w.len());
        for &q in &self.initial {
            if alive[0][q] {
                self.collect_paths(w, &alive, q, &mut path, &mut out);
            }
        }
        Ok(out)
    }

    fn collect_paths(&self, w: &[usize], alive: &[Vec<bool>], q: usize, path: &mut Path, out: &mut Vec<Path>) {
        let k = path.len();
        if k == w.len() {
            out.push(path.clone());
            return;
        }
        for (i, t) in self.outgoing_on(q, w[k]) {
            if alive[k + 1][t.to] {
                path.push(i);
                self.collect_paths(w, alive, t.to, path, out);
                path.pop();
            }
        }
    }

    pub fn accepts(&self, w: &[usize]) -> Result<bool> {
        self.check_word(w)?;
        let alive = self.suffix_alive(w);
        Ok(self.initial.iter().any(|&q| alive[0][q]))
    }

    /// States on some path from an initial state to a final state.
    pub fn useful_states(&self) -> Vec<bool> {
        let n = self.num_states;
        let mut fwd = vec![false; n];
        let mut queue: VecDeque<usize> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            fwd[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for t in self.outgoing(q) {
                if !fwd[t.to] {
                    fwd[t.to] = true;
                    queue.push_back(t.to);
                }
            }
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for t in &self.transitions {
            preds[t.to].push(t.from);
        }
        let mut bwd = self.finals.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| bwd[q]).collect();
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !bwd[p] {
                    bwd[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..n).map(|q| fwd[q] && bwd[q]).collect()
    }

    /// Removes states that lie on no initial-to-final path.
    pub fn trim(&self) -> Self {
        let keep = self.useful_states();
        self.restrict(&keep)
    }

    fn restrict(&self, keep: &[bool]) -> Self {
        let mut index = vec![usize::MAX; self.num_states];
        let mut n = 0;
        for q in 0..self.num_states {
            if keep[q] {
                index[q] = n;
                n += 1;
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter(|t| keep[t.from] && keep[t.to])
            .map(|t| Transition {
                from: index[t.from],
                letter: t.letter,
                to: index[t.to],
                weight: t.weight.clone(),
            })
            .collect();
        Automaton::new(
            self.alphabet.clone(),
            n,
            self.initial.iter().filter(|&&q| keep[q]).map(|&q| index[q]).collect(),
            (0..self.num_states)
                .filter(|&q| keep[q] && self.finals[q])
                .map(|q| index[q])
                .collect(),
            transitions,
        )
        .expect("restriction of a valid automaton is valid")
    }
}

/// Fails unless both alphabets are equal.
pub fn check_alphabets(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// `|A|(w)`: the multiset of path weights over accepting paths.
pub fn multiset_behavior<S>(a: &Automaton<S::Elem>, w: &[usize], s: &S) -> Result<FiniteMultiset<S::Elem>>
where
    S: ValuationStructure,
{
    a.check_word(w)?;
    if s.is_incremental() {
        let layer = forward_layers(a, w, |t| FiniteMultiset::singleton(t.weight.clone()), |acc, t| {
            acc.map(|m| s.val(&[m.clone(), t.weight.clone()]))
        });
        return Ok(layer);
    }
    let mut out = FiniteMultiset::empty();
    let mut seq = Vec::with_capacity(w.len());
    for p in a.accepting_paths(w)? {
        seq.clear();
        seq.extend(p.iter().map(|&i| a.transitions[i].weight.clone()));
        out.insert(s.val(&seq), 1u32.into());
    }
    Ok(out)
}

/// `||A||(w) = Φ(|A|(w))`.
pub fn behavior<S>(a: &Automaton<S::Elem>, w: &[usize], s: &S) -> Result<S::Value>
where
    S: ValuationStructure,
{
    Ok(s.phi(&multiset_behavior(a, w, s)?))
}

/// Behavior of a multiset-weighted automaton: the union over accepting paths
/// of the lifted valuation of the transition multisets.
pub fn lifted_behavior<S>(
    a: &MultisetAutomaton<S::Elem>,
    w: &[usize],
    s: &S,
) -> Result<FiniteMultiset<S::Elem>>
where
    S: ValuationStructure,
{
    a.check_word(w)?;
    if s.is_incremental() {
        return Ok(forward_layers(a, w, |t| t.weight.clone(), |acc, t| {
            lift_val(&[acc.clone(), t.weight.clone()], |xs| s.val(xs))
        }));
    }
    lifted_behavior_by_paths(a, w, s)
}

/// Reference implementation of [`lifted_behavior`] by explicit path enumeration.
pub fn lifted_behavior_by_paths<S>(
    a: &MultisetAutomaton<S::Elem>,
    w: &[usize],
    s: &S,
) -> Result<FiniteMultiset<S::Elem>>
where
    S: ValuationStructure,
{
    let mut out = FiniteMultiset::empty();
    for p in a.accepting_paths(w)? {
        let rs: Vec<_> = p.iter().map(|&i| a.transitions[i].weight.clone()).collect();
        out.union_in_place(&lift_val(&rs, |xs| s.val(xs)));
    }
    Ok(out)
}

fn forward_layers<W, M, F, G>(a: &Automaton<W>, w: &[usize], first: F, extend: G) -> FiniteMultiset<M>
where
    W: Clone,
    M: Ord + Clone,
    F: Fn(&Transition<W>) -> FiniteMultiset<M>,
    G: Fn(&FiniteMultiset<M>, &Transition<W>) -> FiniteMultiset<M>,
{
    let alive = a.suffix_alive(w);
    let mut layer: BTreeMap<usize, FiniteMultiset<M>> = BTreeMap::new();
    for &q in &a.initial {
        for (_, t) in a.outgoing_on(q, w[0]) {
            if alive[1][t.to] {
                layer.entry(t.to).or_default().union_in_place(&first(t));
            }
        }
    }
    for (k, &letter) in w.iter().enumerate().skip(1) {
        let mut next: BTreeMap<usize, FiniteMultiset<M>> = BTreeMap::new();
        for (q, r) in &layer {
            for (_, t) in a.outgoing_on(*q, letter) {
                if alive[k + 1][t.to] {
                    next.entry(t.to).or_default().union_in_place(&extend(r, t));
                }
            }
        }
        layer = next;
    }
    let mut out = FiniteMultiset::empty();
    for (q, r) in layer {
        if a.finals[q] {
            out.union_in_place(&r);
        }
    }
    out
}

/// Disjoint union; behaviors add up.
pub fn union_automata<W: Clone>(a1: &Automaton<W>, a2: &Automaton<W>) -> Result<Automaton<W>> {
    check_alphabets(&a1.alphabet, &a2.alphabet)?;
    let n1 = a1.num_states;
    let mut transitions = a1.transitions.clone();
    transitions.extend(a2.transitions.iter().map(|t| Transition {
        from: t.from + n1,
        letter: t.letter,
        to: t.to + n1,
        weight: t.weight.clone(),
    }));
    let mut initial = a1.initial.clone();
    initial.extend(a2.initial.iter().map(|q| q + n1));
    let mut finals = a1.finals();
    finals.extend(a2.finals().into_iter().map(|q| q + n1));
    Automaton::new(a1.alphabet.clone(), n1 + a2.num_states, initial, finals, transitions)
}

/// Synchronized product with a complete DFA: behavior on `w` is kept when
/// `w ∈ L(d)` and becomes ε otherwise. Only reachable pairs are built.
pub fn product_with_dfa<W: Clone>(a: &Automaton<W>, d: &Dfa, budget: &Budget) -> Result<Automaton<W>> {
    check_alphabets(&a.alphabet, d.alphabet())?;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |p: (usize, usize), pairs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| {
        *index.entry(p).or_insert_with(|| {
            pairs.push(p);
            queue.push_back(pairs.len() - 1);
            pairs.len() - 1
        })
    };
    let initial: Vec<usize> = a
        .initial
        .iter()
        .map(|&q| intern((q, d.start()), &mut pairs, &mut queue))
        .collect();
    let mut transitions = Vec::new();
    while let Some(i) = queue.pop_front() {
        budget.check_states(pairs.len(), "product automaton")?;
        let (q, s) = pairs[i];
        for t in a.outgoing(q) {
            let target = (t.to, d.next(s, t.letter));
            let j = intern(target, &mut pairs, &mut queue);
            transitions.push(Transition {
                from: i,
                letter: t.letter,
                to: j,
                weight: t.weight.clone(),
            });
        }
    }
    let finals = (0..pairs.len())
        .filter(|&i| a.finals[pairs[i].0] && d.is_accepting(pairs[i].1))
        .collect();
    Automaton::new(a.alphabet.clone(), pairs.len(), initial, finals, transitions)
}

/// Letter-to-letter image under `h`. Each state remembers the letter it was
/// entered by, so parallel images of distinct transitions stay distinct and
/// the multiset behavior on `v` is the union over all preimages of `v`.
pub fn relabel_project<W: Clone, H: Fn(usize) -> usize>(
    a: &Automaton<W>,
    target: &Alphabet,
    h: H,
) -> Result<Automaton<W>> {
    let mut index: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
    for &q in &a.initial {
        let n = index.len();
        index.entry((q, None)).or_insert(n);
    }
    for t in &a.transitions {
        let n = index.len();
        index.entry((t.to, Some(t.letter))).or_insert(n);
    }
    let mut by_state: Vec<Vec<usize>> = vec![Vec::new(); a.num_states];
    for (&(q, _), &i) in &index {
        by_state[q].push(i);
    }
    let mut transitions = Vec::new();
    for t in &a.transitions {
        let b = h(t.letter);
        if b >= target.len() {
            return Err(Error::AlphabetMismatch(format!("image letter {b} outside target alphabet")));
        }
        let to = index[&(t.to, Some(t.letter))];
        for &from in &by_state[t.from] {
            transitions.push(Transition {
                from,
                letter: b,
                to,
                weight: t.weight.clone(),
            });
        }
    }
    let initial = a.initial.iter().map(|&q| index[&(q, None)]).collect();
    let finals = index
        .iter()
        .filter(|((q, l), _)| l.is_some() && a.finals[*q])
        .map(|(_, &i)| i)
        .collect();
    Automaton::new(target.clone(), index.len(), initial, finals, transitions)
}

/// Letter-to-letter image of a multiset-weighted automaton that merges
/// parallel images by ⊕. Valid because the lifted valuation is additive in
/// each argument; keeps the state set unchanged.
pub fn project_merging<M: Ord + Clone, H: Fn(usize) -> usize>(
    a: &MultisetAutomaton<M>,
    target: &Alphabet,
    h: H,
) -> Result<MultisetAutomaton<M>> {
    let mut merged: BTreeMap<(usize, usize, usize), FiniteMultiset<M>> = BTreeMap::new();
    for t in &a.transitions {
        let b = h(t.letter);
        if b >= target.len() {
            return Err(Error::AlphabetMismatch(format!("image letter {b} outside target alphabet")));
        }
        merged.entry((t.from, b, t.to)).or_default().union_in_place(&t.weight);
    }
    let transitions = merged
        .into_iter()
        .filter(|(_, r)| !r.is_empty())
        .map(|((from, letter, to), weight)| Transition { from, letter, to, weight })
        .collect();
    Automaton::new(target.clone(), a.num_states, a.initial.clone(), a.finals(), transitions)
}

/// Language image under `h` as an NFA.
pub fn project_language<W: Clone, H: Fn(usize) -> usize>(a: &Automaton<W>, target: &Alphabet, h: H) -> Result<Nfa> {
    let mut triples: Vec<(usize, usize, usize)> = a.transitions.iter().map(|t| (t.from, h(t.letter), t.to)).collect();
    triples.sort_unstable();
    triples.dedup();
    let transitions = triples
        .into_iter()
        .map(|(from, letter, to)| Transition { from, letter, to, weight: () })
        .collect();
    Automaton::new(target.clone(), a.num_states, a.initial.clone(), a.finals(), transitions)
}

/// Splits every multiset payload into one transition per copy of each
/// element. The result carries simple multisets `[m]` and has the same
/// multiset behavior on every word.
pub fn unfold<M: Ord + Clone>(a: &MultisetAutomaton<M>, budget: &Budget) -> Result<MultisetAutomaton<M>> {
    let mut copies: BTreeMap<(usize, M), usize> = BTreeMap::new();
    for t in &a.transitions {
        for (m, c) in t.weight.iter() {
            let c = usize::try_from(c)
                .map_err(|_| Error::Resource(format!("multiplicity {c} too large to unfold")))?;
            let e = copies.entry((t.to, m.clone())).or_insert(0);
            *e = (*e).max(c);
        }
    }
    let total = a.initial.len() + copies.values().sum::<usize>();
    budget.check_states(total, "unfolded automaton")?;
    let mut first_copy: BTreeMap<(usize, M), usize> = BTreeMap::new();
    let mut underlying: Vec<usize> = a.initial.clone();
    let mut finals = Vec::new();
    for ((q, m), &c) in &copies {
        first_copy.insert((*q, m.clone()), underlying.len());
        for _ in 0..c {
            if a.finals[*q] {
                finals.push(underlying.len());
            }
            underlying.push(*q);
        }
    }
    let mut transitions = Vec::new();
    for (s, &q1) in underlying.iter().enumerate() {
        for t in a.outgoing(q1) {
            for (m, c) in t.weight.iter() {
                let base = first_copy[&(t.to, m.clone())];
                let c = usize::try_from(c).expect("checked above");
                for i in 0..c {
                    transitions.push(Transition {
                        from: s,
                        letter: t.letter,
                        to: base + i,
                        weight: FiniteMultiset::singleton(m.clone()),
                    });
                }
            }
        }
    }
    let initial = (0..a.initial.len()).collect();
    Automaton::new(a.alphabet.clone(), underlying.len(), initial, finals, transitions)
}

/// Replaces every payload `[m]` by `m`.
pub fn strip<M: Ord + Clone>(a: &MultisetAutomaton<M>) -> Result<Automaton<M>> {
    a.try_map_weights(|r| {
        r.as_simple()
            .cloned()
            .ok_or_else(|| Error::InvalidAutomaton("payload is not a simple multiset".into()))
    })
}

/// Replaces every payload `m` by `[m]`.
pub fn wrap<M: Ord + Clone>(a: &Automaton<M>) -> MultisetAutomaton<M> {
    a.map_weights(|m| FiniteMultiset::singleton(m.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{RatioStructure, Weight};

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(x: i64, y: i64) -> Weight {
        Weight::from_ints(&[x, y])
    }

    fn tr<W>(from: usize, letter: usize, to: usize, weight: W) -> Transition<W> {
        Transition { from, letter, to, weight }
    }

    #[test]
    fn loop_has_one_path() {
        let a = Automaton::new(ab(), 1, vec![0], vec![0], vec![tr(0, 0, 0, ())]).unwrap();
        assert_eq!(a.accepting_paths(&[0, 0]).unwrap().len(), 1);
        assert!(a.accepting_paths(&[1]).unwrap().is_empty());
        assert_eq!(a.accepting_paths(&[]), Err(Error::EmptyWord));
        assert!(matches!(a.accepting_paths(&[7]), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn branching_paths() {
        let a = Automaton::new(ab(), 3, vec![0], vec![1, 2], vec![tr(0, 0, 1, ()), tr(0, 0, 2, ())]).unwrap();
        assert_eq!(a.accepting_paths(&[0]).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn repeated_triples_rejected() {
        let r = Automaton::new(ab(), 1, vec![0], vec![0], vec![tr(0, 0, 0, 1), tr(0, 0, 0, 2)]);
        assert!(matches!(r, Err(Error::InvalidAutomaton(_))));
    }

    #[test]
    fn ratio_path_weight() {
        let a = Automaton::new(ab(), 3, vec![0], vec![2], vec![tr(0, 0, 1, w(1, 1)), tr(1, 1, 2, w(2, 0))]).unwrap();
        let r = multiset_behavior(&a, &[0, 1], &RatioStructure).unwrap();
        assert_eq!(r, FiniteMultiset::singleton(w(3, 1)));
        assert_eq!(
            behavior(&a, &[0, 1], &RatioStructure).unwrap(),
            crate::num::ExtRational::Finite(crate::num::int(3))
        );
        assert_eq!(
            behavior(&a, &[0, 0], &RatioStructure).unwrap(),
            crate::num::ExtRational::NegInf
        );
    }

    #[test]
    fn union_with_self_doubles() {
        let a = Automaton::new(ab(), 1, vec![0], vec![0], vec![tr(0, 0, 0, w(1, 1))]).unwrap();
        let u = union_automata(&a, &a).unwrap();
        let r = multiset_behavior(&u, &[0, 0], &RatioStructure).unwrap();
        assert_eq!(r.count(&w(2, 2)), 2u32.into());
    }

    #[test]
    fn unfold_copies() {
        let two = FiniteMultiset::from_counts([(w(1, 0), 2u32)]);
        let a = Automaton::new(
            ab(),
            2,
            vec![0],
            vec![1],
            vec![tr(0, 0, 1, two), tr(1, 1, 1, FiniteMultiset::singleton(w(0, 1)))],
        )
        .unwrap();
        let u = unfold(&a, &Budget::default()).unwrap();
        let s = strip(&u).unwrap();
        let r = multiset_behavior(&s, &[0, 1], &RatioStructure).unwrap();
        assert_eq!(r, FiniteMultiset::from_counts([(w(1, 1), 2u32)]));
    }

    #[test]
    fn parse_word_longest_match() {
        let al = Alphabet::new(["↔", "↕"]).unwrap();
        let mut aliases = BTreeMap::new();
        aliases.insert("<->".to_string(), "↔".to_string());
        aliases.insert("<|>".to_string(), "↕".to_string());
        assert_eq!(al.parse_word("<-><|>↔", &aliases).unwrap(), vec![0, 1, 0]);
        assert!(al.parse_word("x", &aliases).is_err());
        assert_eq!(al.format_word(&[0, 1]), "↔↕");
    }
}
