//! Compilation of syntactically restricted formulas into multi-weighted
//! automata with the same multiset semantics, and the converse encoding of
//! automata as formulas.

mod boolean;
mod converse;
mod step;

pub use boolean::{boolean_to_dfa, validity_dfa};
pub use converse::automaton_to_formula;
pub use step::{step_function, Block, StepFunction};

use crate::automata::{
    determinize, project_merging, product_with_dfa, strip, union_automata, unfold, Alphabet, Automaton, Dfa,
    MultisetAutomaton, Transition,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::logic::{classify, ExtAlphabet, Formula, Kind, Var};
use crate::multiset::FiniteMultiset;
use crate::structures::PvStructure;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;

/// A compiled automaton over `Σ_V` for the scope `ext`.
#[derive(Debug, Clone)]
pub struct Compiled<M: Ord> {
    pub ext: ExtAlphabet,
    pub automaton: Automaton<M>,
    pub trace: Vec<String>,
}

pub struct Compiler<'a, S: PvStructure> {
    s: &'a S,
    budget: Budget,
    tracing: bool,
    trace: Vec<String>,
}

impl<'a, S: PvStructure> Compiler<'a, S>
where
    S::Elem: Display,
{
    pub fn new(s: &'a S) -> Self {
        Compiler { s, budget: Budget::default(), tracing: false, trace: Vec::new() }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Records step-function blocks and intermediate sizes.
    pub fn tracing(mut self, on: bool) -> Self {
        self.tracing = on;
        self
    }

    fn note(&mut self, line: impl FnOnce() -> String) {
        if self.tracing {
            self.trace.push(line());
        }
    }

    /// Compiles over `Σ_V` with `V` the free variables of `f`.
    pub fn compile(&mut self, f: &Formula<S::Elem>, base: &Alphabet) -> Result<Compiled<S::Elem>> {
        let ext = ExtAlphabet::new(base.clone(), f.free_vars().iter().cloned())?;
        self.compile_in_scope(f, &ext)
    }

    pub fn compile_in_scope(&mut self, f: &Formula<S::Elem>, ext: &ExtAlphabet) -> Result<Compiled<S::Elem>> {
        let m = self.compile_multiset(f, ext)?;
        let unfolded = unfold(&m, &self.budget)?;
        let automaton = strip(&unfolded)?.trim();
        self.note(|| format!("unfolded: {} states, {} transitions", automaton.num_states(), automaton.transitions().len()));
        Ok(Compiled {
            ext: ext.clone(),
            automaton,
            trace: std::mem::take(&mut self.trace),
        })
    }

    /// The multiset-weighted automaton before unfolding.
    pub fn compile_multiset(&mut self, f: &Formula<S::Elem>, ext: &ExtAlphabet) -> Result<MultisetAutomaton<S::Elem>> {
        if let Some(v) = f.free_vars().iter().find(|v| ext.position(v).is_none()) {
            return Err(Error::Scope(format!("free variable {v} is outside the scope")));
        }
        let c = classify(f);
        if !c.is_restricted() {
            return Err(Error::NotRestricted(c.violations.join("; ")));
        }
        let taken: BTreeSet<Var> = ext.scope().iter().cloned().collect();
        let f = rename_apart(f, &taken);
        let a = self.rec(&f, ext)?.trim();
        self.note(|| format!("multiset automaton: {} states, {} transitions", a.num_states(), a.transitions().len()));
        Ok(a)
    }

    fn rec(&mut self, f: &Formula<S::Elem>, ext: &ExtAlphabet) -> Result<MultisetAutomaton<S::Elem>> {
        if f.is_almost_boolean() {
            let sf = step_function(f, ext, self.s, &self.budget)?;
            self.note_blocks(f, &sf);
            return self.step_automaton(&sf, ext);
        }
        match f.kind() {
            Kind::Or(a, b) => {
                let (x, y) = (self.rec(a, ext)?, self.rec(b, ext)?);
                let u = union_automata(&x, &y)?;
                self.budget.check_states(u.num_states(), "union")?;
                Ok(u)
            }
            Kind::And(a, b) => {
                let (beta, psi) = if a.is_boolean() {
                    (a, b)
                } else if b.is_boolean() {
                    (b, a)
                } else {
                    return Err(Error::NotRestricted(format!("conjunction of two weighted formulas: {f}")));
                };
                let d = boolean_to_dfa(beta, ext, &self.budget)?;
                let inner = self.rec(psi, ext)?;
                Ok(product_with_dfa(&inner, &d, &self.budget)?.trim())
            }
            Kind::Exists(v, body) => {
                let wide = widen(ext, v)?;
                let inner = self.rec(body, &wide)?;
                Ok(project_merging(&inner, ext.alphabet(), wide.restrict(ext))?.trim())
            }
            Kind::Forall(v, body) if !v.is_second_order() && body.is_almost_boolean() => self.forall(v, body, ext),
            _ => Err(Error::NotRestricted(format!("unsupported subformula {f}"))),
        }
    }

    fn note_blocks(&mut self, f: &Formula<S::Elem>, sf: &StepFunction<S::Elem>) {
        self.note(|| {
            let blocks: Vec<String> = sf
                .blocks
                .iter()
                .map(|b| format!("{} ({} states)", b.coeff, b.dfa.num_states()))
                .collect();
            format!("step function of {f}: {}", blocks.join(", "))
        });
    }

    /// Union over nonempty blocks of a constant automaton restricted to the
    /// block language.
    fn step_automaton(&mut self, sf: &StepFunction<S::Elem>, ext: &ExtAlphabet) -> Result<MultisetAutomaton<S::Elem>> {
        let mut out: Option<MultisetAutomaton<S::Elem>> = None;
        for b in sf.nonempty_blocks() {
            let c = constant_automaton(ext.alphabet(), &b.coeff, self.s);
            let a = product_with_dfa(&c, &b.dfa, &self.budget)?.trim();
            out = Some(match out {
                Some(acc) => union_automata(&acc, &a)?,
                None => a,
            });
            self.budget.check_states(out.as_ref().map_or(0, |a| a.num_states()), "step automaton")?;
        }
        Ok(out.unwrap_or_else(|| Automaton::empty(ext.alphabet().clone())))
    }

    /// `∀x φ` for almost boolean `φ`: every position claims the block of
    /// `φ` it falls in, a DFA checks all claims, and each position then
    /// carries the claimed coefficient. Claims are erased by projection.
    fn forall(&mut self, x: &Var, body: &Formula<S::Elem>, ext: &ExtAlphabet) -> Result<MultisetAutomaton<S::Elem>> {
        let wide = widen(ext, x)?;
        let sf = step_function(body, &wide, self.s, &self.budget)?;
        self.note_blocks(body, &sf);
        let blocks: Vec<&Block<S::Elem>> = sf.nonempty_blocks().collect();
        let k = blocks.len();
        if k == 0 {
            return Ok(Automaton::empty(ext.alphabet().clone()));
        }
        let claims = claim_alphabet(ext.alphabet(), k)?;
        let marked = marking_table(ext, &wide, x);
        let valid = validity_dfa(ext, &self.budget)?;
        let mut good = valid.inverse_image(&claims, |l| l / k);
        for (j, b) in blocks.iter().enumerate() {
            let viol = violation_nfa(&b.dfa, &claims, &marked, j, k)?;
            let ok = determinize(&viol, &self.budget)?.complement().minimize();
            good = good.intersect(&ok, &self.budget)?.minimize();
        }
        self.note(|| format!("claim automaton for forall {x}: {} claims, {} states", k, good.num_states()));
        let weighted = weighted_dfa(&good, |l| blocks[l % k].coeff.clone())?.trim();
        Ok(project_merging(&weighted, ext.alphabet(), |l| l / k)?.trim())
    }
}

/// Adds `v` to the scope.
fn widen(ext: &ExtAlphabet, v: &Var) -> Result<ExtAlphabet> {
    if ext.position(v).is_some() {
        return Err(Error::Scope(format!("variable {v} is rebound inside its own scope")));
    }
    ExtAlphabet::new(ext.base().clone(), ext.scope().iter().cloned().chain([v.clone()]))
}

/// `Σ_V × {0..k}`, letter `(l, j)` at index `l * k + j`.
fn claim_alphabet(alphabet: &Alphabet, k: usize) -> Result<Alphabet> {
    let mut names = Vec::with_capacity(alphabet.len() * k);
    for l in 0..alphabet.len() {
        for j in 0..k {
            names.push(format!("{}#{j}", alphabet.name(l)));
        }
    }
    Alphabet::new(names)
}

/// For each letter of `Σ_V`, its two extensions in `Σ_{V ∪ {x}}` with the
/// `x` row off and on.
fn marking_table(ext: &ExtAlphabet, wide: &ExtAlphabet, x: &Var) -> Vec<[usize; 2]> {
    let h = wide.restrict(ext);
    let jx = wide.position(x).expect("x is in the widened scope");
    let mut table = vec![[0; 2]; ext.len()];
    for l in 0..wide.len() {
        table[h(l)][usize::from(wide.row(l, jx))] = l;
    }
    table
}

/// Claim words in which some position claiming block `j` lies outside the
/// block language when `x` is placed there.
fn violation_nfa(block: &Dfa, claims: &Alphabet, marked: &[[usize; 2]], j: usize, k: usize) -> Result<Automaton<()>> {
    let n = block.num_states();
    let mut transitions = Vec::new();
    for l in 0..claims.len() {
        let (base, claim) = (l / k, l % k);
        for d in 0..n {
            transitions.push(Transition { from: d, letter: l, to: block.next(d, marked[base][0]), weight: () });
            transitions.push(Transition { from: n + d, letter: l, to: n + block.next(d, marked[base][0]), weight: () });
            if claim == j {
                transitions.push(Transition { from: d, letter: l, to: n + block.next(d, marked[base][1]), weight: () });
            }
        }
    }
    let finals = (0..n).filter(|&d| !block.is_accepting(d)).map(|d| n + d).collect();
    Automaton::new(claims.clone(), 2 * n, vec![block.start()], finals, transitions)
}

/// The DFA as a multiset automaton whose transitions on `l` carry `coeff(l)`.
fn weighted_dfa<M: Ord + Clone, F: Fn(usize) -> FiniteMultiset<M>>(d: &Dfa, coeff: F) -> Result<MultisetAutomaton<M>> {
    let k = d.alphabet().len();
    let mut transitions = Vec::with_capacity(d.num_states() * k);
    for q in 0..d.num_states() {
        for l in 0..k {
            transitions.push(Transition { from: q, letter: l, to: d.next(q, l), weight: coeff(l) });
        }
    }
    let finals = (0..d.num_states()).filter(|&q| d.is_accepting(q)).collect();
    Automaton::new(d.alphabet().clone(), d.num_states(), vec![d.start()], finals, transitions)
}

/// Two states: the first letter carries `r`, every later letter `[1]`.
/// By the padding law its behavior is `r` on every nonempty word.
pub fn constant_automaton<S: PvStructure>(alphabet: &Alphabet, r: &FiniteMultiset<S::Elem>, s: &S) -> MultisetAutomaton<S::Elem> {
    let unit = FiniteMultiset::singleton(s.unit());
    let mut transitions = Vec::new();
    for l in 0..alphabet.len() {
        transitions.push(Transition { from: 0, letter: l, to: 1, weight: r.clone() });
        transitions.push(Transition { from: 1, letter: l, to: 1, weight: unit.clone() });
    }
    Automaton::new(alphabet.clone(), 2, vec![0], vec![1], transitions).expect("constant automaton is well formed")
}

/// Renames bound variables that collide with `taken`.
pub fn rename_apart<M: Clone>(f: &Formula<M>, taken: &BTreeSet<Var>) -> Formula<M> {
    let mut used: BTreeSet<Var> = taken.clone();
    collect_vars(f, &mut used);
    rename(f, taken, &HashMap::new(), &mut used)
}

fn collect_vars<M>(f: &Formula<M>, out: &mut BTreeSet<Var>) {
    match f.kind() {
        Kind::Label { var, .. } => {
            out.insert(var.clone());
        }
        Kind::Leq(x, y) | Kind::Member(x, y) => {
            out.insert(x.clone());
            out.insert(y.clone());
        }
        Kind::Exists(v, _) | Kind::Forall(v, _) => {
            out.insert(v.clone());
        }
        _ => {}
    }
    for c in f.children() {
        collect_vars(c, out);
    }
}

fn rename<M: Clone>(f: &Formula<M>, taken: &BTreeSet<Var>, map: &HashMap<Var, Var>, used: &mut BTreeSet<Var>) -> Formula<M> {
    let sub = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match f.kind() {
        Kind::Label { letter, var } => Formula::label(letter.clone(), sub(var)),
        Kind::Leq(x, y) => Formula::leq(sub(x), sub(y)),
        Kind::Member(x, y) => Formula::member(sub(x), sub(y)),
        Kind::Const(m) => Formula::constant(m.clone()),
        Kind::Not(b) => Formula::not(rename(b, taken, map, used)),
        Kind::And(a, b) => Formula::and(rename(a, taken, map, used), rename(b, taken, map, used)),
        Kind::Or(a, b) => Formula::or(rename(a, taken, map, used), rename(b, taken, map, used)),
        Kind::Exists(v, b) | Kind::Forall(v, b) => {
            let mut inner = map.clone();
            let bound = if taken.contains(v) {
                let fresh = (1..)
                    .map(|i| Var(format!("{}_{i}", v.name())))
                    .find(|c| !used.contains(c))
                    .expect("unbounded supply of names");
                used.insert(fresh.clone());
                inner.insert(v.clone(), fresh.clone());
                fresh
            } else {
                inner.remove(v);
                v.clone()
            };
            let body = rename(b, taken, &inner, used);
            if matches!(f.kind(), Kind::Exists(..)) {
                Formula::exists(bound, body)
            } else {
                Formula::forall(bound, body)
            }
        }
    }
}

/// Compiles `f` over `Σ_V` with `V = Free(f)` and default budgets.
pub fn compile<S: PvStructure>(f: &Formula<S::Elem>, base: &Alphabet, s: &S) -> Result<Compiled<S::Elem>>
where
    S::Elem: Display,
{
    Compiler::new(s).compile(f, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{lifted_behavior, multiset_behavior};
    use crate::logic::{eval_encoded, parse, parse_with, Signature};
    use crate::structures::{DisplacementStructure, RatioStructure, ValuationStructure};

    fn words(k: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut layer = vec![Vec::new()];
        for _ in 0..max {
            layer = layer
                .into_iter()
                .flat_map(|w: Vec<usize>| {
                    (0..k).map(move |a| {
                        let mut v = w.clone();
                        v.push(a);
                        v
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    fn agree(text: &str, max: usize) {
        let s = RatioStructure;
        let f = parse(text, &s).unwrap();
        let base = Alphabet::new(["a", "b"]).unwrap();
        let c = compile(&f, &base, &s).unwrap();
        for w in words(c.ext.len(), max) {
            let expect = eval_encoded(&f, &c.ext, &w, &s).unwrap();
            let got = multiset_behavior(&c.automaton, &w, &s).unwrap();
            assert_eq!(got, expect, "{text} on {}", c.ext.alphabet().format_word(&w));
        }
    }

    #[test]
    fn constants_and_guards() {
        agree("<1,1>", 4);
        agree("P_a(x) & <2,1>", 3);
        agree("<1,1> | <2,3>", 3);
    }

    #[test]
    fn quantifiers() {
        agree("exists x. P_a(x) & <1,1>", 4);
        agree("forall x. (P_a(x) -> <1,1>) & (P_b(x) -> <0,1>)", 4);
        agree("exists X. forall x. (x in X -> <1,1>) & (!(x in X) -> <0,2>)", 4);
        agree("forall x. ((exists y. x <= y & P_b(y)) -> <1,1>)", 3);
    }

    #[test]
    fn rebinding_a_free_name() {
        agree("P_a(x) & exists x. P_b(x) & <1,2>", 3);
    }

    #[test]
    fn unrestricted_is_refused() {
        let s = RatioStructure;
        let f = parse("forall x. exists y. <1,1>", &s).unwrap();
        let e = compile(&f, &Alphabet::new(["a"]).unwrap(), &s).unwrap_err();
        assert!(matches!(e, Error::NotRestricted(_)));
    }

    #[test]
    fn displacement_compiles() {
        let s = DisplacementStructure::new(2);
        let sig = Signature::new(vec!["↔".into(), "↕".into()]).with_alias("<->", "↔").with_alias("<|>", "↕");
        let f = parse_with(
            "forall x. (P_<->(x) -> (<-1,0> | <1,0>)) & (P_<|>(x) -> (<0,-1> | <0,1>))",
            &s,
            &sig,
        )
        .unwrap();
        let base = Alphabet::new(["↔", "↕"]).unwrap();
        let c = compile(&f, &base, &s).unwrap();
        let v = s.phi(&multiset_behavior(&c.automaton, &[0, 0], &s).unwrap());
        assert_eq!(v.0, 1.0);
        let v = s.phi(&multiset_behavior(&c.automaton, &[0, 1], &s).unwrap());
        assert!((v.0 - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn constant_automaton_is_constant() {
        let s = RatioStructure;
        let al = Alphabet::new(["a", "b"]).unwrap();
        let r = FiniteMultiset::from_counts([(crate::structures::Weight::from_ints(&[1, 1]), 2u32)]);
        let a = constant_automaton(&al, &r, &s);
        for w in words(2, 4) {
            assert_eq!(lifted_behavior(&a, &w, &s).unwrap(), r);
        }
    }
}
