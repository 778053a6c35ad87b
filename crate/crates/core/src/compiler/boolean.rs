//! Boolean formulas to DFAs over the extended alphabet.

use crate::automata::{determinize, project_language, Dfa};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::logic::{ExtAlphabet, Formula, Kind, Var};

/// DFA for `N_V`: every first-order row has exactly one 1.
pub fn validity_dfa(ext: &ExtAlphabet, budget: &Budget) -> Result<Dfa> {
    let rows: Vec<usize> = (0..ext.scope().len()).filter(|&j| !ext.scope()[j].is_second_order()).collect();
    let full = (1usize << rows.len()) - 1;
    let sink = full + 1;
    budget.check_states(sink + 1, "validity automaton")?;
    let k = ext.len();
    let mut delta = Vec::with_capacity((sink + 1) * k);
    for seen in 0..=sink {
        for l in 0..k {
            let next = if seen == sink {
                sink
            } else {
                let mut s = seen;
                let mut dead = false;
                for (i, &j) in rows.iter().enumerate() {
                    if ext.row(l, j) {
                        dead |= s >> i & 1 == 1;
                        s |= 1 << i;
                    }
                }
                if dead {
                    sink
                } else {
                    s
                }
            };
            delta.push(next);
        }
    }
    let accepting = (0..=sink).map(|s| s == full).collect();
    Ok(Dfa::new(ext.alphabet().clone(), 0, accepting, delta)?.minimize())
}

fn row_of(ext: &ExtAlphabet, v: &Var) -> Result<usize> {
    ext.position(v)
        .ok_or_else(|| Error::Scope(format!("variable {v} is not in the scope")))
}

/// A DFA over `Σ_V` from a table `step(state, letter)`; state 0 starts.
fn table_dfa<F: Fn(usize, usize) -> usize>(ext: &ExtAlphabet, states: usize, accept: &[usize], step: F) -> Result<Dfa> {
    let k = ext.len();
    let mut delta = Vec::with_capacity(states * k);
    for q in 0..states {
        for l in 0..k {
            delta.push(step(q, l));
        }
    }
    let accepting = (0..states).map(|q| accept.contains(&q)).collect();
    Dfa::new(ext.alphabet().clone(), 0, accepting, delta)
}

fn label_dfa(ext: &ExtAlphabet, letter: &str, x: usize) -> Result<Dfa> {
    let Some(a) = ext.base().index_of(letter) else {
        return Ok(Dfa::empty(ext.alphabet().clone()));
    };
    // 0: x unseen, 1: x seen on an `a`, 2: dead
    table_dfa(ext, 3, &[1], |q, l| match (q, ext.row(l, x)) {
        (_, false) => q,
        (0, true) if ext.symbol(l) == a => 1,
        _ => 2,
    })
}

fn leq_dfa(ext: &ExtAlphabet, x: usize, y: usize) -> Result<Dfa> {
    // 0: neither seen, 1: x seen, 2: both seen in order, 3: dead
    table_dfa(ext, 4, &[2], |q, l| match (q, ext.row(l, x), ext.row(l, y)) {
        (3, _, _) => 3,
        (0, true, true) => 2,
        (0, true, false) => 1,
        (0, false, true) => 3,
        (1, false, true) => 2,
        (1, true, _) => 3,
        (2, false, false) => 2,
        (2, _, _) => 3,
        (q, _, _) => q,
    })
}

fn member_dfa(ext: &ExtAlphabet, x: usize, set: usize) -> Result<Dfa> {
    // 0: x unseen, 1: x seen inside the set, 2: dead
    table_dfa(ext, 3, &[1], |q, l| match (q, ext.row(l, x)) {
        (_, false) => q,
        (0, true) if ext.row(l, set) => 1,
        _ => 2,
    })
}

/// Builds a minimal DFA `D` over `Σ_V` with `L(D) = {(w, σ) ∈ N_V : β holds}`.
pub fn boolean_to_dfa<M: Clone>(beta: &Formula<M>, ext: &ExtAlphabet, budget: &Budget) -> Result<Dfa> {
    if !beta.is_boolean() {
        return Err(Error::Unsupported(format!("{} is not a boolean formula", beta.kind_name())));
    }
    let valid = validity_dfa(ext, budget)?;
    let beta = super::rename_apart(beta, &ext.scope().iter().cloned().collect());
    build(&beta, ext, &valid, budget)
}

fn build<M: Clone>(beta: &Formula<M>, ext: &ExtAlphabet, valid: &Dfa, budget: &Budget) -> Result<Dfa> {
    let within = |d: Dfa| -> Result<Dfa> { Ok(d.intersect(valid, budget)?.minimize()) };
    match beta.kind() {
        Kind::Label { letter, var } => within(label_dfa(ext, letter, row_of(ext, var)?)?),
        Kind::Leq(x, y) => within(leq_dfa(ext, row_of(ext, x)?, row_of(ext, y)?)?),
        Kind::Member(x, set) => within(member_dfa(ext, row_of(ext, x)?, row_of(ext, set)?)?),
        Kind::Not(b) => within(build(b, ext, valid, budget)?.complement()),
        Kind::And(a, b) => {
            let da = build(a, ext, valid, budget)?;
            if da.is_empty_plus() {
                return Ok(da);
            }
            Ok(da.intersect(&build(b, ext, valid, budget)?, budget)?.minimize())
        }
        Kind::Forall(v, b) => {
            // ∀v β = ¬∃v ¬β
            within(exists_not_dfa(v, b, ext, budget)?.complement())
        }
        Kind::Const(_) | Kind::Or(..) | Kind::Exists(..) => Err(Error::Unsupported(format!(
            "{} outside the boolean layer",
            beta.kind_name()
        ))),
    }
}

/// `∃v ¬β` by projecting away the row of `v`.
fn exists_not_dfa<M: Clone>(v: &Var, b: &Formula<M>, ext: &ExtAlphabet, budget: &Budget) -> Result<Dfa> {
    if ext.position(v).is_some() {
        return Err(Error::Scope(format!("variable {v} is rebound inside its own scope")));
    }
    let wide = ExtAlphabet::new(ext.base().clone(), ext.scope().iter().cloned().chain([v.clone()]))?;
    let wide_valid = validity_dfa(&wide, budget)?;
    let body = build(b, &wide, &wide_valid, budget)?
        .complement()
        .intersect(&wide_valid, budget)?;
    let nfa = project_language(&body.to_nfa().trim(), ext.alphabet(), wide.restrict(ext))?;
    Ok(determinize(&nfa, budget)?.minimize())
}

impl<M> Formula<M> {
    fn kind_name(&self) -> &'static str {
        match self.kind() {
            Kind::Label { .. } => "P_a(x)",
            Kind::Leq(..) => "x <= y",
            Kind::Member(..) => "x in X",
            Kind::Const(_) => "constant",
            Kind::Not(_) => "negation",
            Kind::And(..) => "conjunction",
            Kind::Or(..) => "disjunction",
            Kind::Exists(..) => "exists",
            Kind::Forall(..) => "forall",
        }
    }
}
