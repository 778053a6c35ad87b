//! Multi-weighted MSO formulas: syntax tree, parser, classification, and
//! the direct multiset semantics on finite words.
//!
//! Variables starting with an uppercase letter are second-order (sets of
//! positions); all others are first-order (single positions).

mod assign;
mod classify;
mod eval;
mod parse;

pub use assign::{AssignedWord, ExtAlphabet, VarValue, MAX_SCOPE};
pub use classify::{classify, Class, Classification, NodeTag};
pub use eval::{eval, eval_encoded, eval_multiset, Evaluator, MAX_SECOND_ORDER_LEN};
pub use parse::{parse, parse_with, Signature};

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn is_second_order(&self) -> bool {
        self.0.chars().next().is_some_and(char::is_uppercase)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Kind<M> {
    /// `P_a(x)`
    Label { letter: String, var: Var },
    /// `x <= y`
    Leq(Var, Var),
    /// `x in X`
    Member(Var, Var),
    Const(M),
    Not(Box<Formula<M>>),
    And(Box<Formula<M>>, Box<Formula<M>>),
    Or(Box<Formula<M>>, Box<Formula<M>>),
    Exists(Var, Box<Formula<M>>),
    Forall(Var, Box<Formula<M>>),
}

/// A formula node with its cached free variables and layer flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula<M> {
    kind: Kind<M>,
    free: BTreeSet<Var>,
    boolean: bool,
    almost_boolean: bool,
}

impl<M> Formula<M> {
    fn build(kind: Kind<M>) -> Self {
        let (free, boolean, almost) = match &kind {
            Kind::Label { var, .. } => (BTreeSet::from([var.clone()]), true, true),
            Kind::Leq(x, y) | Kind::Member(x, y) => (BTreeSet::from([x.clone(), y.clone()]), true, true),
            Kind::Const(_) => (BTreeSet::new(), false, true),
            Kind::Not(b) => (b.free.clone(), b.boolean, b.boolean),
            Kind::And(a, b) | Kind::Or(a, b) => {
                let free = a.free.union(&b.free).cloned().collect();
                let both_bool = a.boolean && b.boolean && matches!(kind, Kind::And(..));
                (free, both_bool, a.almost_boolean && b.almost_boolean)
            }
            Kind::Exists(v, b) => {
                let mut free = b.free.clone();
                free.remove(v);
                (free, false, false)
            }
            Kind::Forall(v, b) => {
                let mut free = b.free.clone();
                free.remove(v);
                (free, b.boolean, b.boolean)
            }
        };
        Formula {
            kind,
            free,
            boolean,
            almost_boolean: almost,
        }
    }

    pub fn kind(&self) -> &Kind<M> {
        &self.kind
    }

    pub fn free_vars(&self) -> &BTreeSet<Var> {
        &self.free
    }

    pub fn is_sentence(&self) -> bool {
        self.free.is_empty()
    }

    /// Generated by the boolean grammar (atoms, `¬`, `∧`, `∀x`, `∀X`).
    pub fn is_boolean(&self) -> bool {
        self.boolean
    }

    /// Built from constants and boolean formulas by `∧` and `∨`.
    pub fn is_almost_boolean(&self) -> bool {
        self.almost_boolean
    }

    pub fn label(letter: impl Into<String>, x: Var) -> Self {
        Self::build(Kind::Label { letter: letter.into(), var: x })
    }

    pub fn leq(x: Var, y: Var) -> Self {
        Self::build(Kind::Leq(x, y))
    }

    pub fn member(x: Var, set: Var) -> Self {
        Self::build(Kind::Member(x, set))
    }

    pub fn constant(m: M) -> Self {
        Self::build(Kind::Const(m))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Self::build(Kind::Not(Box::new(f)))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Self::build(Kind::And(Box::new(a), Box::new(b)))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Self::build(Kind::Or(Box::new(a), Box::new(b)))
    }

    pub fn exists(v: Var, f: Self) -> Self {
        Self::build(Kind::Exists(v, Box::new(f)))
    }

    pub fn forall(v: Var, f: Self) -> Self {
        Self::build(Kind::Forall(v, Box::new(f)))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Formula<M>> {
        match &self.kind {
            Kind::Not(b) | Kind::Exists(_, b) | Kind::Forall(_, b) => vec![b],
            Kind::And(a, b) | Kind::Or(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    /// Letters named by `P_a` atoms.
    pub fn letters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<String>) {
        if let Kind::Label { letter, .. } = &self.kind {
            out.insert(letter.clone());
        }
        for c in self.children() {
            c.collect_letters(out);
        }
    }
}

impl<M: Clone> Formula<M> {
    /// `β → ψ`, read as `(β ∧ ψ) ∨ ¬β`.
    pub fn implies(b: Self, psi: Self) -> Self {
        Self::or(Self::and(b.clone(), psi), Self::not(b))
    }

    /// Boolean disjunction `¬(¬a ∧ ¬b)`.
    pub fn bool_or(a: Self, b: Self) -> Self {
        Self::negate(Self::and(Self::negate(a), Self::negate(b)))
    }

    /// Boolean implication `¬(a ∧ ¬b)`.
    pub fn bool_implies(a: Self, b: Self) -> Self {
        Self::negate(Self::and(a, Self::negate(b)))
    }

    /// Boolean existential `¬∀v.¬f`.
    pub fn bool_exists(v: Var, f: Self) -> Self {
        Self::negate(Self::forall(v, Self::negate(f)))
    }

    /// Negation that cancels a leading negation.
    pub fn negate(f: Self) -> Self {
        match f.kind {
            Kind::Not(inner) => *inner,
            kind => Self::not(Self::build(kind)),
        }
    }

    /// Disjunction of many boolean formulas; `fallback` when empty.
    pub fn bool_any(items: Vec<Self>, fallback: Self) -> Self {
        items.into_iter().reduce(Self::bool_or).unwrap_or(fallback)
    }

    /// Conjunction of many formulas; `fallback` when empty.
    pub fn all(items: Vec<Self>, fallback: Self) -> Self {
        items.into_iter().reduce(Self::and).unwrap_or(fallback)
    }

    /// Rewrites `∨` and `∃` over boolean operands into their boolean
    /// equivalents so the result is generated by the boolean grammar.
    pub fn to_boolean(&self) -> Option<Self> {
        if self.boolean {
            return Some(self.clone());
        }
        match &self.kind {
            Kind::Or(a, b) => Some(Self::bool_or(a.to_boolean()?, b.to_boolean()?)),
            Kind::Exists(v, b) => Some(Self::bool_exists(v.clone(), b.to_boolean()?)),
            Kind::And(a, b) => Some(Self::and(a.to_boolean()?, b.to_boolean()?)),
            Kind::Forall(v, b) => Some(Self::forall(v.clone(), b.to_boolean()?)),
            _ => None,
        }
    }
}

impl<M> Formula<M> {
    /// Checks the grammar: `¬` and `∀X` only over boolean formulas, atoms
    /// with variables of the right order, and no quantifier re-binding a
    /// variable that is already bound by an enclosing quantifier.
    pub fn check_well_formed(&self) -> Result<()> {
        let mut bound = Vec::new();
        self.check_rec(&mut bound)
    }

    fn check_rec(&self, bound: &mut Vec<Var>) -> Result<()> {
        match &self.kind {
            Kind::Label { var, .. } => expect_order(var, false),
            Kind::Leq(x, y) => expect_order(x, false).and(expect_order(y, false)),
            Kind::Member(x, set) => expect_order(x, false).and(expect_order(set, true)),
            Kind::Const(_) => Ok(()),
            Kind::Not(b) => {
                if !b.boolean {
                    return Err(Error::Scope("negation applied to a non-boolean formula".into()));
                }
                b.check_rec(bound)
            }
            Kind::And(a, b) | Kind::Or(a, b) => {
                a.check_rec(bound)?;
                b.check_rec(bound)
            }
            Kind::Exists(v, b) | Kind::Forall(v, b) => {
                if bound.contains(v) {
                    return Err(Error::Scope(format!("variable {v} is bound twice")));
                }
                if v.is_second_order() && matches!(self.kind, Kind::Forall(..)) && !b.boolean {
                    return Err(Error::Scope(format!(
                        "universal set quantifier over {v} needs a boolean body"
                    )));
                }
                bound.push(v.clone());
                let r = b.check_rec(bound);
                bound.pop();
                r
            }
        }
    }
}

fn expect_order(v: &Var, second: bool) -> Result<()> {
    if v.is_second_order() == second {
        Ok(())
    } else if second {
        Err(Error::Scope(format!("{v} must be a set variable (uppercase)")))
    } else {
        Err(Error::Scope(format!("{v} must be a position variable (lowercase)")))
    }
}

impl<M: fmt::Display> Formula<M> {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::And(..) | Kind::Or(..) | Kind::Exists(..) | Kind::Forall(..) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl<M: fmt::Display> fmt::Display for Formula<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Label { letter, var } => write!(f, "P_{letter}({var})"),
            Kind::Leq(x, y) => write!(f, "{x} <= {y}"),
            Kind::Member(x, set) => write!(f, "{x} in {set}"),
            Kind::Const(m) => write!(f, "{m}"),
            Kind::Not(b) => {
                write!(f, "!")?;
                match &b.kind {
                    Kind::Leq(..) | Kind::Member(..) => write!(f, "({b})"),
                    _ => b.fmt_operand(f),
                }
            }
            Kind::And(a, b) => {
                a.fmt_operand(f)?;
                write!(f, " & ")?;
                b.fmt_operand(f)
            }
            Kind::Or(a, b) => {
                a.fmt_operand(f)?;
                write!(f, " | ")?;
                b.fmt_operand(f)
            }
            Kind::Exists(v, b) => write!(f, "exists {v}. {b}"),
            Kind::Forall(v, b) => write!(f, "forall {v}. {b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Formula<i64>;

    fn x() -> Var {
        Var::new("x")
    }

    #[test]
    fn layers() {
        let atom = F::label("a", x());
        assert!(atom.is_boolean());
        let c = F::constant(3);
        assert!(!c.is_boolean() && c.is_almost_boolean());
        let mixed = F::and(atom.clone(), c.clone());
        assert!(mixed.is_almost_boolean() && !mixed.is_boolean());
        let ex = F::exists(x(), mixed);
        assert!(!ex.is_almost_boolean());
        assert!(ex.is_sentence());
        let all = F::forall(x(), atom);
        assert!(all.is_boolean());
    }

    #[test]
    fn implication_sugar() {
        let i = F::implies(F::label("a", x()), F::constant(1));
        assert!(matches!(i.kind(), Kind::Or(..)));
        assert_eq!(i.to_string(), "(P_a(x) & <1>) | !P_a(x)".replace("<1>", "1"));
    }

    #[test]
    fn boolean_rewrite() {
        let d = F::or(F::label("a", x()), F::label("b", x()));
        let b = d.to_boolean().unwrap();
        assert!(b.is_boolean());
        assert!(F::or(F::constant(1), F::label("a", x())).to_boolean().is_none());
    }

    #[test]
    fn shadowing_is_rejected() {
        let big_x = Var::new("X");
        let f = F::exists(big_x.clone(), F::forall(big_x.clone(), F::member(x(), big_x)));
        assert!(matches!(f.check_well_formed(), Err(Error::Scope(_))));
    }
}
