//! Multi-weighted Muller automata on ultimately periodic words.
//!
//! A run over `u·v^ω` is explored in the product of the automaton with the
//! positions of the lasso (`|u| + |v|` phases, the last one looping back to
//! `|u|`). A run is accepting when the set of states it visits infinitely
//! often is one of the declared Muller sets; in the product this means the
//! run eventually stays inside one strongly connected component whose
//! automaton states are exactly that set.

mod energy;
mod ratio;
mod simulate;

pub use energy::{energy_behavior, energy_run};
pub use ratio::{ratio_sup, ratio_sup_behavior, RatioSup};
pub use simulate::{prefix_minimum, prefix_ratio};

use crate::automata::json::RawAutomaton;
use crate::automata::{Alphabet, Automaton};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::structures::WeightDomain;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

/// A multi-weighted automaton with a Muller acceptance family in place of
/// final states.
#[derive(Debug, Clone, PartialEq)]
pub struct MullerMwa<W> {
    automaton: Automaton<W>,
    muller: Vec<BTreeSet<usize>>,
}

impl<W: Clone> MullerMwa<W> {
    pub fn new(automaton: Automaton<W>, muller: Vec<BTreeSet<usize>>) -> Result<Self> {
        let n = automaton.num_states();
        for set in &muller {
            if set.is_empty() {
                return Err(Error::InvalidAutomaton("Muller sets must be nonempty".into()));
            }
            if set.iter().any(|&q| q >= n) {
                return Err(Error::InvalidAutomaton("Muller set uses an undeclared state".into()));
            }
        }
        let mut muller = muller;
        muller.sort();
        muller.dedup();
        Ok(MullerMwa { automaton, muller })
    }

    /// The underlying automaton (its final states are ignored).
    pub fn automaton(&self) -> &Automaton<W> {
        &self.automaton
    }

    pub fn muller(&self) -> &[BTreeSet<usize>] {
        &self.muller
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.automaton.alphabet()
    }
}

impl RawAutomaton {
    /// Reads a Muller automaton; the file must carry a `muller` family.
    pub fn with_muller<D: WeightDomain>(&self, d: &D) -> Result<MullerMwa<D::Elem>> {
        let muller = self
            .muller
            .clone()
            .ok_or_else(|| Error::InvalidAutomaton("missing `muller` acceptance family".into()))?;
        MullerMwa::new(self.with_elements(d)?, muller)
    }
}

/// The infinite word `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<usize>,
    pub period: Vec<usize>,
}

impl LassoWord {
    pub fn new(prefix: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Usage("the period of a lasso word must be nonempty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    /// Parses `u(v)^w`; `^ω` is accepted as well and `u` may be empty.
    pub fn parse(text: &str, alphabet: &Alphabet, aliases: &BTreeMap<String, String>) -> Result<Self> {
        let text = text.trim();
        let body = text
            .strip_suffix(")^w")
            .or_else(|| text.strip_suffix(")^ω"))
            .ok_or_else(|| Error::Usage(format!("lasso word `{text}` must end in `(v)^w`")))?;
        let open = body
            .rfind('(')
            .ok_or_else(|| Error::Usage(format!("lasso word `{text}` has no `(`")))?;
        let (u, v) = (&body[..open], &body[open + 1..]);
        let prefix = if u.trim().is_empty() { Vec::new() } else { alphabet.parse_word(u, aliases)? };
        let period = alphabet.parse_word(v, aliases).map_err(|e| match e {
            Error::EmptyWord => Error::Usage("the period of a lasso word must be nonempty".into()),
            other => other,
        })?;
        LassoWord::new(prefix, period)
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        format!("{}({})^w", alphabet.format_word(&self.prefix), alphabet.format_word(&self.period))
    }

    /// Number of product phases, `|u| + |v|`.
    pub fn phases(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn letter_at(&self, phase: usize) -> usize {
        if phase < self.prefix.len() {
            self.prefix[phase]
        } else {
            self.period[(phase - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn next_phase(&self, phase: usize) -> usize {
        if phase + 1 < self.phases() {
            phase + 1
        } else {
            self.prefix.len()
        }
    }

    /// The same infinite word with the first period letter moved into the
    /// prefix.
    pub fn rotated(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.push(self.period[0]);
        let mut period = self.period[1..].to_vec();
        period.push(self.period[0]);
        LassoWord { prefix, period }
    }

    fn check(&self, alphabet: &Alphabet) -> Result<()> {
        if let Some(&l) = self.prefix.iter().chain(&self.period).find(|&&l| l >= alphabet.len()) {
            return Err(Error::UnknownLetter(format!("#{l}")));
        }
        Ok(())
    }
}

/// An ultimately periodic run, as transition indices into
/// [`Automaton::transitions`]: `stem · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaRun {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl OmegaRun {
    /// Weights along the stem and along one turn of the cycle.
    pub fn weights<W: Clone>(&self, a: &Automaton<W>) -> (Vec<W>, Vec<W>) {
        let ts = a.transitions();
        let pick = |ids: &[usize]| ids.iter().map(|&i| ts[i].weight.clone()).collect();
        (pick(&self.stem), pick(&self.cycle))
    }

    /// States visited infinitely often.
    pub fn recurrent_states<W: Clone>(&self, a: &Automaton<W>) -> BTreeSet<usize> {
        self.cycle.iter().map(|&i| a.transitions()[i].from).collect()
    }

    /// Whether the run reads `w` from an initial state and satisfies the
    /// Muller condition.
    pub fn is_accepting_on<W: Clone>(&self, a: &MullerMwa<W>, w: &LassoWord) -> bool {
        let ts = a.automaton().transitions();
        let mut phase = 0;
        let mut state = match self.stem.first().or(self.cycle.first()) {
            Some(&i) => ts[i].from,
            None => return false,
        };
        if !a.automaton().initial().contains(&state) {
            return false;
        }
        let walk = |ids: &[usize], phase: &mut usize, state: &mut usize| {
            ids.iter().all(|&i| {
                let t = &ts[i];
                let ok = t.from == *state && t.letter == w.letter_at(*phase);
                *state = t.to;
                *phase = w.next_phase(*phase);
                ok
            })
        };
        if !walk(&self.stem, &mut phase, &mut state) {
            return false;
        }
        let (entry_state, entry_phase) = (state, phase);
        if self.cycle.is_empty() || !walk(&self.cycle, &mut phase, &mut state) {
            return false;
        }
        (state, phase) == (entry_state, entry_phase) && a.muller().contains(&self.recurrent_states(a.automaton()))
    }
}

impl fmt::Display for OmegaRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^w", self.stem, self.cycle)
    }
}

/// Explored part of a product graph. Each edge remembers the automaton
/// transition it follows.
pub(crate) struct Product<N> {
    pub nodes: Vec<N>,
    pub edges: Vec<(usize, usize, usize)>,
    pub out: Vec<Vec<usize>>,
    pub starts: Vec<usize>,
}

impl<N: Clone + Eq + Hash> Product<N> {
    /// Forward exploration from `starts`; `succ` lists `(transition, node)`
    /// pairs.
    pub fn explore<F>(starts: Vec<N>, mut succ: F, budget: &Budget) -> Result<Self>
    where
        F: FnMut(&N) -> Vec<(usize, N)>,
    {
        let mut g = Product { nodes: Vec::new(), edges: Vec::new(), out: Vec::new(), starts: Vec::new() };
        let mut index: HashMap<N, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |n: N, g: &mut Product<N>, queue: &mut VecDeque<usize>| -> Result<usize> {
            if let Some(&i) = index.get(&n) {
                return Ok(i);
            }
            g.nodes.push(n.clone());
            g.out.push(Vec::new());
            budget.check_states(g.nodes.len(), "lasso product")?;
            let i = g.nodes.len() - 1;
            index.insert(n, i);
            queue.push_back(i);
            Ok(i)
        };
        for s in starts {
            let i = intern(s, &mut g, &mut queue)?;
            g.starts.push(i);
        }
        while let Some(i) = queue.pop_front() {
            let node = g.nodes[i].clone();
            for (t, m) in succ(&node) {
                let j = intern(m, &mut g, &mut queue)?;
                g.out[i].push(g.edges.len());
                g.edges.push((i, j, t));
            }
        }
        Ok(g)
    }

    /// Components inside which a run can satisfy some Muller set: for each
    /// set `S`, the nontrivial strongly connected components of the
    /// subgraph on nodes with automaton state in `S`, keeping those whose
    /// states are all of `S`.
    pub fn muller_components<F>(&self, muller: &[BTreeSet<usize>], state_of: F) -> Vec<Vec<usize>>
    where
        F: Fn(&N) -> usize,
    {
        let mut found = Vec::new();
        for set in muller {
            let mut sub: DiGraph<usize, ()> = DiGraph::new();
            let mut local: HashMap<usize, NodeIndex> = HashMap::new();
            for (i, n) in self.nodes.iter().enumerate() {
                if set.contains(&state_of(n)) {
                    local.insert(i, sub.add_node(i));
                }
            }
            for &(a, b, _) in &self.edges {
                if let (Some(&x), Some(&y)) = (local.get(&a), local.get(&b)) {
                    sub.add_edge(x, y, ());
                }
            }
            for comp in tarjan_scc(&sub) {
                let nontrivial = comp.len() > 1 || sub.contains_edge(comp[0], comp[0]);
                let states: BTreeSet<usize> = comp.iter().map(|&x| state_of(&self.nodes[sub[x]])).collect();
                if nontrivial && states == *set {
                    let mut ids: Vec<usize> = comp.iter().map(|&x| sub[x]).collect();
                    ids.sort_unstable();
                    found.push(ids);
                }
            }
        }
        found
    }

    /// Shortest edge path from `from` to `to` using only nodes allowed by
    /// `inside`, or from any start node when `from` is `None`.
    pub fn path<F>(&self, from: Option<usize>, to: usize, inside: F) -> Option<Vec<usize>>
    where
        F: Fn(usize) -> bool,
    {
        let mut pred: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::new();
        let sources: Vec<usize> = match from {
            Some(f) => vec![f],
            None => self.starts.clone(),
        };
        for s in sources {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            if i == to {
                let mut path = Vec::new();
                let mut cur = i;
                while let Some(e) = pred[cur] {
                    path.push(e);
                    cur = self.edges[e].0;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.out[i] {
                let j = self.edges[e].1;
                if !seen[j] && inside(j) {
                    seen[j] = true;
                    pred[j] = Some(e);
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// A closed walk through `root` inside `comp` that visits every node
    /// of the component.
    pub fn covering_cycle(&self, comp: &[usize], root: usize) -> Vec<usize> {
        let member: BTreeSet<usize> = comp.iter().copied().collect();
        let inside = |j: usize| member.contains(&j);
        let mut walk = Vec::new();
        let mut at = root;
        for &target in comp.iter().filter(|&&n| n != root).chain(std::iter::once(&root)) {
            if target == at && !walk.is_empty() {
                continue;
            }
            let leg = if target == at { self.loop_through(at, &inside) } else { self.path(Some(at), target, inside) };
            walk.extend(leg.expect("component is strongly connected"));
            at = target;
        }
        walk
    }

    /// Nonempty closed walk from `node` back to itself.
    pub fn loop_through<F: Fn(usize) -> bool>(&self, node: usize, inside: &F) -> Option<Vec<usize>> {
        self.out[node].iter().find_map(|&e| {
            let next = self.edges[e].1;
            if !inside(next) {
                return None;
            }
            if next == node {
                return Some(vec![e]);
            }
            self.path(Some(next), node, inside).map(|rest| [vec![e], rest].concat())
        })
    }

    /// Maps edge ids to automaton transitions.
    pub fn transitions(&self, edges: &[usize]) -> Vec<usize> {
        edges.iter().map(|&e| self.edges[e].2).collect()
    }
}

/// Successors of `(state, phase)` in the lasso product.
pub(crate) fn lasso_steps<'a, W>(a: &'a Automaton<W>, w: &LassoWord, q: usize, phase: usize) -> Vec<(usize, usize, &'a W)>
where
    W: Clone,
{
    a.outgoing_on(q, w.letter_at(phase))
        .map(|(i, t)| (i, t.to, &t.weight))
        .collect()
}

pub(crate) fn check_inputs<W: Clone>(a: &MullerMwa<W>, w: &LassoWord) -> Result<()> {
    w.check(a.alphabet())
}

/// Some accepting run of `a` on `w`, if one exists.
pub fn accepting_run<W: Clone>(a: &MullerMwa<W>, w: &LassoWord, budget: &Budget) -> Result<Option<OmegaRun>> {
    check_inputs(a, w)?;
    let aut = a.automaton();
    let starts = aut.initial().iter().map(|&q| (q, 0usize)).collect();
    let g = Product::explore(
        starts,
        |&(q, p)| {
            let next = w.next_phase(p);
            lasso_steps(aut, w, q, p).into_iter().map(|(t, to, _)| (t, (to, next))).collect()
        },
        budget,
    )?;
    let comps = g.muller_components(a.muller(), |&(q, _)| q);
    Ok(comps.first().map(|comp| {
        let root = comp[0];
        let stem = g.path(None, root, |_| true).expect("components are reachable");
        let cycle = g.covering_cycle(comp, root);
        OmegaRun { stem: g.transitions(&stem), cycle: g.transitions(&cycle) }
    }))
}

/// Whether `a` has an accepting run on `w`.
pub fn accepting_lasso_exists<W: Clone>(a: &MullerMwa<W>, w: &LassoWord) -> Result<bool> {
    Ok(accepting_run(a, w, &Budget::default())?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Transition;

    fn letters() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn tr(from: usize, letter: usize, to: usize) -> Transition<()> {
        Transition { from, letter, to, weight: () }
    }

    fn muller(n: usize, ts: Vec<Transition<()>>, sets: &[&[usize]]) -> MullerMwa<()> {
        let a = Automaton::new(letters(), n, vec![0], vec![], ts).unwrap();
        MullerMwa::new(a, sets.iter().map(|s| s.iter().copied().collect()).collect()).unwrap()
    }

    fn lasso(text: &str) -> LassoWord {
        LassoWord::parse(text, &letters(), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn lasso_syntax() {
        let w = lasso("ab(ba)^w");
        assert_eq!(w, LassoWord { prefix: vec![0, 1], period: vec![1, 0] });
        assert_eq!(w.format(&letters()), "ab(ba)^w");
        assert_eq!(lasso("(a)^ω").prefix, Vec::<usize>::new());
        assert!(LassoWord::parse("a()^w", &letters(), &BTreeMap::new()).is_err());
        assert!(LassoWord::parse("ab", &letters(), &BTreeMap::new()).is_err());
        let phases: Vec<usize> = (0..7).map(|p| w.letter_at(p)).collect();
        assert_eq!(phases, vec![0, 1, 1, 0, 1, 0, 1]);
        assert_eq!(w.next_phase(3), 2);
    }

    #[test]
    fn deterministic_loop() {
        let a = muller(1, vec![tr(0, 0, 0)], &[&[0]]);
        let w = lasso("(a)^w");
        assert!(accepting_lasso_exists(&a, &w).unwrap());
        let run = accepting_run(&a, &w, &Budget::default()).unwrap().unwrap();
        assert!(run.is_accepting_on(&a, &w));
        assert!(!accepting_lasso_exists(&a, &lasso("(ab)^w")).unwrap());
    }

    #[test]
    fn unreachable_muller_state() {
        let a = muller(2, vec![tr(0, 0, 0), tr(1, 0, 1)], &[&[0, 1]]);
        assert!(!accepting_lasso_exists(&a, &lasso("(a)^w")).unwrap());
    }

    #[test]
    fn muller_set_must_match_exactly() {
        // 0 -a-> 1 -b-> 0, and a b-loop on 1
        let ts = vec![tr(0, 0, 1), tr(1, 1, 0), tr(1, 1, 1)];
        let both = muller(2, ts.clone(), &[&[0, 1]]);
        let one = muller(2, ts.clone(), &[&[1]]);
        assert!(accepting_lasso_exists(&both, &lasso("(ab)^w")).unwrap());
        assert!(!accepting_lasso_exists(&one, &lasso("(ab)^w")).unwrap());
        assert!(accepting_lasso_exists(&one, &lasso("a(b)^w")).unwrap());
        assert!(!accepting_lasso_exists(&both, &lasso("a(b)^w")).unwrap());
        let run = accepting_run(&both, &lasso("b(ab)^w"), &Budget::default()).unwrap();
        assert!(run.is_none());
    }

    #[test]
    fn empty_family_rejects() {
        let a = muller(1, vec![tr(0, 0, 0)], &[]);
        assert!(!accepting_lasso_exists(&a, &lasso("(a)^w")).unwrap());
    }

    #[test]
    fn covering_cycle_visits_every_state() {
        let ts = vec![tr(0, 0, 1), tr(1, 0, 2), tr(2, 0, 0), tr(1, 0, 0)];
        let a = muller(3, ts, &[&[0, 1, 2]]);
        let w = lasso("(a)^w");
        let run = accepting_run(&a, &w, &Budget::default()).unwrap().unwrap();
        assert!(run.is_accepting_on(&a, &w));
        assert_eq!(run.recurrent_states(a.automaton()).len(), 3);
    }

    #[test]
    fn rejects_bad_muller_sets() {
        let a = Automaton::new(letters(), 1, vec![0], vec![], vec![tr(0, 0, 0)]).unwrap();
        assert!(MullerMwa::new(a.clone(), vec![BTreeSet::new()]).is_err());
        assert!(MullerMwa::new(a, vec![[3].into_iter().collect()]).is_err());
    }
}
