use super::{check_inputs, lasso_steps, LassoWord, MullerMwa, OmegaRun, Product};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::num::{ExtRational, Rational};
use crate::structures::RatioPair;
use num_traits::{Signed, Zero};
use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use std::collections::HashMap;

/// Result of [`ratio_sup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSup {
    pub value: ExtRational,
    /// A run reaching an optimal cycle and repeating it. Its prefix ratios
    /// converge to `value`. The cycle need not visit the whole Muller set;
    /// accepting runs approach the value by visiting the rest of the set
    /// ever more rarely.
    pub run: Option<OmegaRun>,
}

type Edge = (usize, usize, Rational, Rational);

/// Supremum over accepting runs on `w` of the limsup of prefix ratios.
///
/// Every cycle inside a Muller-consistent component must have positive
/// cost, otherwise the query is refused. The value is the best cycle ratio
/// over those components, found by Dinkelbach iteration with exact
/// rationals, and `−∞` when there is no accepting run.
pub fn ratio_sup(a: &MullerMwa<RatioPair>, w: &LassoWord, budget: &Budget) -> Result<RatioSup> {
    check_inputs(a, w)?;
    let aut = a.automaton();
    for t in aut.transitions() {
        if !t.weight.reward.is_finite() || t.weight.cost.is_negative() {
            return Err(Error::Structure(format!(
                "{} lies outside finite rewards and nonnegative costs",
                t.weight
            )));
        }
    }
    let g = Product::explore(
        aut.initial().iter().map(|&q| (q, 0usize)).collect(),
        |&(q, p)| {
            let next = w.next_phase(p);
            lasso_steps(aut, w, q, p).into_iter().map(|(t, to, _)| (t, (to, next))).collect()
        },
        budget,
    )?;
    let weight = |e: usize| {
        let m = &aut.transitions()[g.edges[e].2].weight;
        (m.reward.finite().expect("checked finite").clone(), m.cost.clone())
    };
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for comp in g.muller_components(a.muller(), |&(q, _)| q) {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut ids = Vec::new();
        let mut edges: Vec<Edge> = Vec::new();
        for (e, &(x, y, _)) in g.edges.iter().enumerate() {
            if let (Some(&i), Some(&j)) = (local.get(&x), local.get(&y)) {
                let (r, c) = weight(e);
                ids.push(e);
                edges.push((i, j, r, c));
            }
        }
        let mut free: DiGraph<(), ()> = DiGraph::new();
        let handles: Vec<_> = (0..comp.len()).map(|_| free.add_node(())).collect();
        for (i, j, _, c) in &edges {
            if c.is_zero() {
                free.add_edge(handles[*i], handles[*j], ());
            }
        }
        if is_cyclic_directed(&free) {
            return Err(Error::Unsupported(
                "a cycle of an accepting component has total cost 0".into(),
            ));
        }
        let inside = |j: usize| local.contains_key(&j);
        let seed = g
            .loop_through(comp[0], &inside)
            .expect("component is strongly connected")
            .into_iter()
            .map(|e| ids.iter().position(|&x| x == e).expect("edge inside component"))
            .collect();
        let (lambda, cycle) = best_cycle(&edges, comp.len(), seed);
        if best.as_ref().is_none_or(|(b, _)| lambda > *b) {
            best = Some((lambda, cycle.into_iter().map(|k| ids[k]).collect()));
        }
    }
    Ok(match best {
        None => RatioSup { value: ExtRational::NegInf, run: None },
        Some((lambda, cycle)) => {
            let entry = g.edges[cycle[0]].0;
            let stem = g.path(None, entry, |_| true).expect("components are reachable");
            RatioSup {
                value: ExtRational::Finite(lambda),
                run: Some(OmegaRun { stem: g.transitions(&stem), cycle: g.transitions(&cycle) }),
            }
        }
    })
}

/// `Φ` of the behavior of `a` on `w` over the ω-ratio structure.
pub fn ratio_sup_behavior(a: &MullerMwa<RatioPair>, w: &LassoWord) -> Result<ExtRational> {
    Ok(ratio_sup(a, w, &Budget::default())?.value)
}

fn cycle_ratio(edges: &[Edge], cycle: &[usize]) -> Rational {
    let r: Rational = cycle.iter().map(|&k| edges[k].2.clone()).sum();
    let c: Rational = cycle.iter().map(|&k| edges[k].3.clone()).sum();
    r / c
}

/// Maximum cycle ratio, starting from the cycle `seed`.
fn best_cycle(edges: &[Edge], n: usize, seed: Vec<usize>) -> (Rational, Vec<usize>) {
    let mut cycle = seed;
    let mut lambda = cycle_ratio(edges, &cycle);
    while let Some(better) = positive_cycle(edges, n, &lambda) {
        let next = cycle_ratio(edges, &better);
        debug_assert!(next > lambda);
        lambda = next;
        cycle = better;
    }
    (lambda, cycle)
}

/// A cycle with positive total `r - λ·c`, by Bellman–Ford with predecessor
/// tracking.
fn positive_cycle(edges: &[Edge], n: usize, lambda: &Rational) -> Option<Vec<usize>> {
    let gain: Vec<Rational> = edges.iter().map(|(_, _, r, c)| r - lambda * c).collect();
    let mut dist = vec![Rational::zero(); n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (k, (i, j, _, _)) in edges.iter().enumerate() {
            let cand = &dist[*i] + &gain[k];
            if cand > dist[*j] {
                dist[*j] = cand;
                parent[*j] = Some(k);
                last = Some(*j);
            }
        }
        last?;
    }
    let mut x = last?;
    for _ in 0..n {
        x = edges[parent[x].expect("updated nodes have parents")].0;
    }
    let mut cycle = Vec::new();
    let mut y = x;
    loop {
        let k = parent[y].expect("on the predecessor cycle");
        cycle.push(k);
        y = edges[k].0;
        if y == x {
            break;
        }
    }
    cycle.reverse();
    Some(cycle)
}
