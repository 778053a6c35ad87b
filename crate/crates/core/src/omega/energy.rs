use super::{check_inputs, lasso_steps, LassoWord, MullerMwa, OmegaRun, Product};
use crate::budget::Budget;
use crate::error::Result;
use crate::structures::{EnergyStructure, IntVector, OmegaStructure};

/// An accepting run on `w` whose running energy never drops below zero in
/// any component, if one exists.
///
/// The running value starts at zero, so the infimum of the running values
/// is nonnegative exactly when every prefix value is. The product therefore
/// tracks `(state, phase, energy)` and never enters a negative level.
pub fn energy_run(
    a: &MullerMwa<IntVector>,
    s: &EnergyStructure,
    w: &LassoWord,
    budget: &Budget,
) -> Result<Option<OmegaRun>> {
    check_inputs(a, w)?;
    let aut = a.automaton();
    for t in aut.transitions() {
        s.check(&t.weight)?;
    }
    let starts = aut.initial().iter().map(|&q| (q, 0usize, s.unit())).collect();
    let g = Product::explore(
        starts,
        |(q, p, v)| {
            let next = w.next_phase(*p);
            lasso_steps(aut, w, *q, *p)
                .into_iter()
                .filter_map(|(t, to, m)| {
                    let v2 = s.step(v, m);
                    v2.is_nonnegative().then_some((t, (to, next, v2)))
                })
                .collect()
        },
        budget,
    )?;
    let comps = g.muller_components(a.muller(), |(q, _, _)| *q);
    Ok(comps.first().map(|comp| {
        let root = comp[0];
        let stem = g.path(None, root, |_| true).expect("components are reachable");
        let cycle = g.covering_cycle(comp, root);
        OmegaRun { stem: g.transitions(&stem), cycle: g.transitions(&cycle) }
    }))
}

/// `Φ` of the behavior of `a` on `w` over the energy structure: whether some
/// accepting run keeps a nonnegative energy level throughout.
pub fn energy_behavior(a: &MullerMwa<IntVector>, s: &EnergyStructure, w: &LassoWord) -> Result<bool> {
    Ok(energy_run(a, s, w, &Budget::default())?.is_some())
}
