use super::Decision;
use crate::automata::{behavior, Automaton};
use crate::error::{Error, Result};
use crate::num::{ExtRational, Rational};
use crate::structures::{TwoCostStructure, Weight};
use num_traits::Signed;

struct Label {
    prim: Rational,
    sec: Rational,
    state: usize,
    parent: Option<usize>,
    letter: usize,
}

/// Is there `w ∈ Σ⁺` with `||A||(w) ≤ ν` over the two-cost structure?
///
/// Equivalently: is there an accepting path with secondary cost at most the
/// structure bound and primary cost at most `ν`. Both cost components must
/// be nonnegative. The search runs breadth first over labelled states,
/// keeping for each state only cost pairs not dominated by one already seen,
/// so the first accepting label yields a shortest witness.
pub fn twocost_emptiness_leq(
    a: &Automaton<Weight>,
    s: &TwoCostStructure,
    nu: &Rational,
) -> Result<Decision<ExtRational>> {
    for t in a.transitions() {
        if t.weight.arity() != 2 {
            return Err(Error::Structure(format!("twocost weights have two components, found {}", t.weight)));
        }
        if t.weight.0.iter().any(Signed::is_negative) {
            return Err(Error::Unsupported(format!(
                "threshold search needs nonnegative costs, found {}",
                t.weight
            )));
        }
    }
    let n = a.num_states();
    let mut labels: Vec<Label> = Vec::new();
    let mut frontier: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); n];
    let mut layer: Vec<usize> = Vec::new();
    let mut init: Vec<usize> = a.initial().to_vec();
    init.sort_unstable();
    init.dedup();
    for q in init {
        labels.push(Label { prim: Rational::default(), sec: Rational::default(), state: q, parent: None, letter: 0 });
        layer.push(labels.len() - 1);
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &li in &layer {
            let q = labels[li].state;
            for letter in 0..a.alphabet().len() {
                for (_, t) in a.outgoing_on(q, letter) {
                    let prim = &labels[li].prim + &t.weight.0[0];
                    let sec = &labels[li].sec + &t.weight.0[1];
                    if sec > s.bound || prim > *nu {
                        continue;
                    }
                    let seen = &mut frontier[t.to];
                    if seen.iter().any(|(p, c)| *p <= prim && *c <= sec) {
                        continue;
                    }
                    seen.retain(|(p, c)| !(prim <= *p && sec <= *c));
                    seen.push((prim.clone(), sec.clone()));
                    labels.push(Label { prim, sec, state: t.to, parent: Some(li), letter });
                    let id = labels.len() - 1;
                    if a.is_final(t.to) {
                        let witness = trace(&labels, id);
                        let value = behavior(a, &witness, s)?;
                        debug_assert!(value <= ExtRational::Finite(nu.clone()));
                        return Ok(Decision::Yes { witness, value });
                    }
                    next.push(id);
                }
            }
        }
        layer = next;
    }
    Ok(Decision::No)
}

fn trace(labels: &[Label], mut id: usize) -> Vec<usize> {
    let mut word = Vec::new();
    while let Some(p) = labels[id].parent {
        word.push(labels[id].letter);
        id = p;
    }
    word.reverse();
    word
}
