//! Direct multiset semantics on finite words.

use super::{AssignedWord, ExtAlphabet, Formula, Kind, Var, VarValue};
use crate::automata::Alphabet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::multiset::{lift_val, support_tuple_count, FiniteMultiset};
use crate::structures::PvStructure;
use std::collections::HashMap;

/// Longest word the evaluator accepts under a set quantifier.
pub const MAX_SECOND_ORDER_LEN: usize = 20;

enum Node<M> {
    /// `None` when the letter is not in the alphabet.
    Label(Option<usize>, usize),
    Leq(usize, usize),
    Member(usize, usize),
    Const(M),
    Not(Box<Resolved<M>>),
    And(Box<Resolved<M>>, Box<Resolved<M>>),
    Or(Box<Resolved<M>>, Box<Resolved<M>>),
    ExistsPos(usize, Box<Resolved<M>>),
    ForallPos(usize, Box<Resolved<M>>),
    ExistsSet(usize, Box<Resolved<M>>),
    ForallSet(usize, Box<Resolved<M>>),
}

struct Resolved<M> {
    node: Node<M>,
    boolean: bool,
}

#[derive(Default)]
struct Slots {
    fo: HashMap<Var, usize>,
    so: HashMap<Var, usize>,
    fo_count: usize,
    so_count: usize,
    set_quantifier: bool,
}

impl Slots {
    fn lookup(&self, v: &Var) -> Result<usize> {
        let table = if v.is_second_order() { &self.so } else { &self.fo };
        table
            .get(v)
            .copied()
            .ok_or_else(|| Error::Scope(format!("variable {v} is free but not assigned")))
    }

    fn bind(&mut self, v: &Var) -> (usize, Option<usize>) {
        let (table, count) = if v.is_second_order() {
            (&mut self.so, &mut self.so_count)
        } else {
            (&mut self.fo, &mut self.fo_count)
        };
        let slot = *count;
        *count += 1;
        (slot, table.insert(v.clone(), slot))
    }

    fn unbind(&mut self, v: &Var, previous: Option<usize>) {
        let table = if v.is_second_order() { &mut self.so } else { &mut self.fo };
        match previous {
            Some(p) => table.insert(v.clone(), p),
            None => table.remove(v),
        };
    }
}

fn resolve<M: Clone>(f: &Formula<M>, alphabet: &Alphabet, slots: &mut Slots) -> Result<Resolved<M>> {
    let rec = |g: &Formula<M>, slots: &mut Slots| resolve(g, alphabet, slots).map(Box::new);
    let node = match f.kind() {
        Kind::Label { letter, var } => Node::Label(alphabet.index_of(letter), slots.lookup(var)?),
        Kind::Leq(x, y) => Node::Leq(slots.lookup(x)?, slots.lookup(y)?),
        Kind::Member(x, set) => Node::Member(slots.lookup(x)?, slots.lookup(set)?),
        Kind::Const(m) => Node::Const(m.clone()),
        Kind::Not(b) => Node::Not(rec(b, slots)?),
        Kind::And(a, b) => Node::And(rec(a, slots)?, rec(b, slots)?),
        Kind::Or(a, b) => Node::Or(rec(a, slots)?, rec(b, slots)?),
        Kind::Exists(v, b) | Kind::Forall(v, b) => {
            let (slot, previous) = slots.bind(v);
            if v.is_second_order() {
                slots.set_quantifier = true;
            }
            let body = rec(b, slots);
            slots.unbind(v, previous);
            let body = body?;
            match (matches!(f.kind(), Kind::Exists(..)), v.is_second_order()) {
                (true, false) => Node::ExistsPos(slot, body),
                (false, false) => Node::ForallPos(slot, body),
                (true, true) => Node::ExistsSet(slot, body),
                (false, true) => Node::ForallSet(slot, body),
            }
        }
    };
    Ok(Resolved { node, boolean: f.is_boolean() })
}

struct Env {
    word: Vec<usize>,
    fo: Vec<usize>,
    so: Vec<u64>,
}

/// Evaluates formulas over a pv-structure.
pub struct Evaluator<'a, S: PvStructure> {
    s: &'a S,
    budget: Budget,
    literal: bool,
}

impl<'a, S: PvStructure> Evaluator<'a, S> {
    pub fn new(s: &'a S) -> Self {
        Evaluator { s, budget: Budget::default(), literal: false }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    /// Follows the recursion literally on boolean subformulas too, instead
    /// of deciding them by plain satisfaction.
    pub fn literal(mut self, on: bool) -> Self {
        self.literal = on;
        self
    }

    /// `⟨f⟩_V(w, σ)` where `V` is the set of assigned variables.
    pub fn eval_multiset(
        &self,
        f: &Formula<S::Elem>,
        alphabet: &Alphabet,
        aw: &AssignedWord,
    ) -> Result<FiniteMultiset<S::Elem>> {
        aw.check()?;
        if let Some(&a) = aw.word.iter().find(|&&a| a >= alphabet.len()) {
            return Err(Error::UnknownLetter(format!("#{a}")));
        }
        let mut slots = Slots::default();
        let mut env = Env { word: aw.word.clone(), fo: Vec::new(), so: Vec::new() };
        let n = aw.word.len();
        for (v, value) in &aw.values {
            slots.bind(v);
            match value {
                VarValue::Pos(i) => env.fo.push(*i),
                VarValue::Set(set) => {
                    if n > 64 {
                        return Err(Error::Resource("set variables need words of length at most 64".into()));
                    }
                    env.so.push(set.iter().fold(0u64, |m, &i| m | 1 << i));
                }
            }
        }
        let r = resolve(f, alphabet, &mut slots)?;
        if slots.set_quantifier && n > MAX_SECOND_ORDER_LEN {
            return Err(Error::Resource(format!(
                "set quantification over a word of length {n} (limit {MAX_SECOND_ORDER_LEN})"
            )));
        }
        env.fo.resize(slots.fo_count, 0);
        env.so.resize(slots.so_count, 0);
        self.ms(&r, &mut env)
    }

    /// `⟨f⟩_V` on a word over `Σ_V`; invalid encodings give `ε`.
    pub fn eval_encoded(
        &self,
        f: &Formula<S::Elem>,
        ext: &ExtAlphabet,
        word: &[usize],
    ) -> Result<FiniteMultiset<S::Elem>> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(v) = f.free_vars().iter().find(|v| ext.position(v).is_none()) {
            return Err(Error::Scope(format!("free variable {v} is outside the scope")));
        }
        match ext.decode(word) {
            Some(aw) => self.eval_multiset(f, ext.base(), &aw),
            None => Ok(FiniteMultiset::empty()),
        }
    }

    fn unit(&self) -> FiniteMultiset<S::Elem> {
        FiniteMultiset::singleton(self.s.unit())
    }

    fn of_bool(&self, b: bool) -> FiniteMultiset<S::Elem> {
        if b {
            self.unit()
        } else {
            FiniteMultiset::empty()
        }
    }

    fn holds(&self, r: &Resolved<S::Elem>, env: &mut Env) -> bool {
        match &r.node {
            Node::Label(sym, x) => *sym == Some(env.word[env.fo[*x]]),
            Node::Leq(x, y) => env.fo[*x] <= env.fo[*y],
            Node::Member(x, set) => env.so[*set] >> env.fo[*x] & 1 == 1,
            Node::Not(b) => !self.holds(b, env),
            Node::And(a, b) => self.holds(a, env) && self.holds(b, env),
            Node::ForallPos(slot, b) => (0..env.word.len()).all(|i| {
                env.fo[*slot] = i;
                self.holds(b, env)
            }),
            Node::ForallSet(slot, b) => (0..1u64 << env.word.len()).all(|mask| {
                env.so[*slot] = mask;
                self.holds(b, env)
            }),
            Node::Const(_) | Node::Or(..) | Node::ExistsPos(..) | Node::ExistsSet(..) => {
                unreachable!("boolean nodes are built from atoms, !, &, and forall")
            }
        }
    }

    fn lift(&self, rs: &[FiniteMultiset<S::Elem>]) -> Result<FiniteMultiset<S::Elem>> {
        if rs.iter().any(FiniteMultiset::is_empty) {
            return Ok(FiniteMultiset::empty());
        }
        self.budget.check_count(&support_tuple_count(rs), "universal quantifier")?;
        Ok(lift_val(rs, |seq| self.s.val(seq)))
    }

    fn ms(&self, r: &Resolved<S::Elem>, env: &mut Env) -> Result<FiniteMultiset<S::Elem>> {
        if r.boolean && !self.literal {
            return Ok(self.of_bool(self.holds(r, env)));
        }
        let n = env.word.len();
        Ok(match &r.node {
            Node::Label(sym, x) => self.of_bool(*sym == Some(env.word[env.fo[*x]])),
            Node::Leq(x, y) => self.of_bool(env.fo[*x] <= env.fo[*y]),
            Node::Member(x, set) => self.of_bool(env.so[*set] >> env.fo[*x] & 1 == 1),
            Node::Const(m) => FiniteMultiset::singleton(m.clone()),
            Node::Not(b) => self.of_bool(self.ms(b, env)?.is_empty()),
            Node::And(a, b) => {
                let left = self.ms(a, env)?;
                if left.is_empty() {
                    return Ok(left);
                }
                left.cauchy_product(&self.ms(b, env)?, |x, y| self.s.prod(x, y))
            }
            Node::Or(a, b) => {
                let mut left = self.ms(a, env)?;
                left.union_in_place(&self.ms(b, env)?);
                left
            }
            Node::ExistsPos(slot, b) => {
                let mut acc = FiniteMultiset::empty();
                for i in 0..n {
                    env.fo[*slot] = i;
                    acc.union_in_place(&self.ms(b, env)?);
                }
                acc
            }
            Node::ExistsSet(slot, b) => {
                let mut acc = FiniteMultiset::empty();
                for mask in 0..1u64 << n {
                    env.so[*slot] = mask;
                    acc.union_in_place(&self.ms(b, env)?);
                }
                acc
            }
            Node::ForallPos(slot, b) => {
                let mut rs = Vec::with_capacity(n);
                for i in 0..n {
                    env.fo[*slot] = i;
                    let r = self.ms(b, env)?;
                    if r.is_empty() {
                        return Ok(r);
                    }
                    rs.push(r);
                }
                self.lift(&rs)?
            }
            Node::ForallSet(slot, b) => {
                let mut rs = Vec::with_capacity(1 << n);
                for k in 0..1u64 << n {
                    env.so[*slot] = lex_subset(k, n);
                    let r = self.ms(b, env)?;
                    if r.is_empty() {
                        return Ok(r);
                    }
                    rs.push(r);
                }
                self.lift(&rs)?
            }
        })
    }
}

/// The `k`-th subset of `{0..n}` in lexicographic order of characteristic
/// vectors read from position 0.
fn lex_subset(k: u64, n: usize) -> u64 {
    (0..n).fold(0, |m, i| m | (k >> (n - 1 - i) & 1) << i)
}

pub fn eval_multiset<S: PvStructure>(
    f: &Formula<S::Elem>,
    alphabet: &Alphabet,
    aw: &AssignedWord,
    s: &S,
) -> Result<FiniteMultiset<S::Elem>> {
    Evaluator::new(s).eval_multiset(f, alphabet, aw)
}

pub fn eval_encoded<S: PvStructure>(
    f: &Formula<S::Elem>,
    ext: &ExtAlphabet,
    word: &[usize],
    s: &S,
) -> Result<FiniteMultiset<S::Elem>> {
    Evaluator::new(s).eval_encoded(f, ext, word)
}

/// `⟨⟨f⟩⟩ = Φ ∘ ⟨f⟩`.
pub fn eval<S: PvStructure>(f: &Formula<S::Elem>, alphabet: &Alphabet, aw: &AssignedWord, s: &S) -> Result<S::Value> {
    Ok(s.phi(&eval_multiset(f, alphabet, aw, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, parse_with, Signature};
    use crate::structures::{DisplacementStructure, RatioStructure, ValuationStructure, Weight};

    const EX5: &str = "forall x. (P_<->(x) -> (<-1,0> | <1,0>)) & (P_<|>(x) -> (<0,-1> | <0,1>))";

    fn arrows() -> (Alphabet, Signature) {
        let sig = Signature::new(vec!["↔".into(), "↕".into()])
            .with_alias("<->", "↔")
            .with_alias("<|>", "↕");
        (Alphabet::new(["↔", "↕"]).unwrap(), sig)
    }

    #[test]
    fn displacement_golden() {
        let (al, sig) = arrows();
        let s = DisplacementStructure::new(2);
        let f = parse_with(EX5, &s, &sig).unwrap();
        let r = eval_multiset(&f, &al, &AssignedWord::new(vec![0, 0]), &s).unwrap();
        let expect = FiniteMultiset::from_counts([
            (Weight::from_ints(&[2, 0]), 1u32),
            (Weight::from_ints(&[0, 0]), 2),
            (Weight::from_ints(&[-2, 0]), 1),
        ]);
        assert_eq!(r, expect);
        assert_eq!(s.phi(&r).0, 1.0);
        let v = eval(&f, &al, &AssignedWord::new(vec![0, 1]), &s).unwrap();
        assert!((v.0 - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn literal_mode_agrees() {
        let (al, sig) = arrows();
        let s = DisplacementStructure::new(2);
        let f = parse_with(EX5, &s, &sig).unwrap();
        let aw = AssignedWord::new(vec![0, 1, 0]);
        let fast = eval_multiset(&f, &al, &aw, &s).unwrap();
        let slow = Evaluator::new(&s).literal(true).eval_multiset(&f, &al, &aw).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn invalid_encoding_is_empty() {
        let s = RatioStructure;
        let f = parse("P_a(x) & <1,1>", &s).unwrap();
        let ext = ExtAlphabet::new(Alphabet::new(["a", "b"]).unwrap(), [Var::new("x")]).unwrap();
        let w = [ext.letter(0, 1), ext.letter(0, 1)];
        assert!(eval_encoded(&f, &ext, &w, &s).unwrap().is_empty());
        let w = [ext.letter(0, 1), ext.letter(0, 0)];
        assert_eq!(eval_encoded(&f, &ext, &w, &s).unwrap().total_count(), 1u32.into());
    }

    #[test]
    fn constant_is_singleton() {
        let s = RatioStructure;
        let f = parse("<3,2>", &s).unwrap();
        let r = eval_multiset(&f, &Alphabet::new(["a"]).unwrap(), &AssignedWord::new(vec![0]), &s).unwrap();
        assert_eq!(r, FiniteMultiset::singleton(Weight::from_ints(&[3, 2])));
    }

    #[test]
    fn free_variable_must_be_assigned() {
        let s = RatioStructure;
        let f = parse("P_a(x)", &s).unwrap();
        let e = eval_multiset(&f, &Alphabet::new(["a"]).unwrap(), &AssignedWord::new(vec![0]), &s);
        assert!(matches!(e, Err(Error::Scope(_))));
    }

    #[test]
    fn empty_word_rejected() {
        let s = RatioStructure;
        let f = parse("<1,1>", &s).unwrap();
        let e = eval_multiset(&f, &Alphabet::new(["a"]).unwrap(), &AssignedWord::new(vec![]), &s);
        assert_eq!(e, Err(Error::EmptyWord));
    }

    #[test]
    fn set_quantifier_guard() {
        let s = RatioStructure;
        let f = parse("exists X. <1,1>", &s).unwrap();
        let al = Alphabet::new(["a"]).unwrap();
        let e = eval_multiset(&f, &al, &AssignedWord::new(vec![0; 21]), &s);
        assert!(matches!(e, Err(Error::Resource(_))));
        let r = eval_multiset(&f, &al, &AssignedWord::new(vec![0; 4]), &s).unwrap();
        assert_eq!(r.total_count(), 16u32.into());
    }

    #[test]
    fn lexicographic_subsets() {
        let order: Vec<u64> = (0..8).map(|k| lex_subset(k, 3)).collect();
        assert_eq!(order, vec![0b000, 0b100, 0b010, 0b110, 0b001, 0b101, 0b011, 0b111]);
    }
}
