use super::{Decision, MAX_WITNESS_LEN};
use crate::automata::{behavior, Automaton, Transition};
use crate::error::{Error, Result};
use crate::num::{ExtRational, Rational};
use crate::structures::{RatioStructure, Weight};
use num_traits::{Signed, Zero};

fn check_weights(a: &Automaton<Weight>) -> Result<()> {
    for t in a.transitions() {
        if t.weight.arity() != 2 || t.weight.0[1].is_negative() {
            return Err(Error::Structure(format!(
                "ratio weights must be (reward, cost) with cost >= 0, found {}",
                t.weight
            )));
        }
    }
    Ok(())
}

/// Is there `w ∈ Σ⁺` with `||A||(w) ≥ ν` over the ratio structure?
///
/// A path of total cost 0 has ratio `+∞`, so an accepting path using only
/// cost-0 transitions settles the question. Any other path has ratio at
/// least `ν` iff its total of `r - ν·c` is nonnegative, which is a longest
/// path question: a positive cycle on a useful state makes the answer yes,
/// and without one Bellman–Ford gives the best total. The witness is the
/// least of the two searches.
pub fn ratio_emptiness_geq(a: &Automaton<Weight>, nu: &Rational) -> Result<Decision<ExtRational>> {
    check_weights(a)?;
    let zero_cost = |t: &Transition<Weight>| t.weight.0[1].is_zero().then(Rational::zero);
    let infinite = shortest_witness(a, zero_cost, a.num_states())?;
    let shifted = |t: &Transition<Weight>| Some(&t.weight.0[0] - nu * &t.weight.0[1]);
    let useful = a.useful_states();
    let finite = if has_positive_cycle(a, &useful, &shifted) || best_total(a, &useful, &shifted).is_some_and(|b| !b.is_negative()) {
        let limit = infinite.as_ref().map_or(MAX_WITNESS_LEN, Vec::len);
        shortest_witness(a, shifted, limit)?
    } else {
        None
    };
    let found = match (infinite, finite) {
        (Some(x), Some(y)) => Some(if (y.len(), &y) < (x.len(), &x) { y } else { x }),
        (x, y) => x.or(y),
    };
    match found {
        Some(witness) => {
            let value = behavior(a, &witness, &RatioStructure)?;
            debug_assert!(value >= ExtRational::Finite(nu.clone()));
            Ok(Decision::Yes { witness, value })
        }
        None => Ok(Decision::No),
    }
}

type WeightFn<'a> = dyn Fn(&Transition<Weight>) -> Option<Rational> + 'a;

fn max_into(slot: &mut Option<Rational>, x: Rational) {
    if slot.as_ref().is_none_or(|y| x > *y) {
        *slot = Some(x);
    }
}

/// Positive cycle among useful states, by Bellman–Ford from a virtual source.
fn has_positive_cycle(a: &Automaton<Weight>, useful: &[bool], w: &WeightFn<'_>) -> bool {
    let n = useful.iter().filter(|&&u| u).count();
    let mut dist: Vec<Rational> = vec![Rational::zero(); a.num_states()];
    for _ in 0..=n {
        let mut changed = false;
        for t in a.transitions() {
            if !(useful[t.from] && useful[t.to]) {
                continue;
            }
            if let Some(x) = w(t) {
                let cand = &dist[t.from] + x;
                if cand > dist[t.to] {
                    dist[t.to] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return false;
        }
    }
    true
}

/// Largest total over accepting paths, assuming no positive cycle.
fn best_total(a: &Automaton<Weight>, useful: &[bool], w: &WeightFn<'_>) -> Option<Rational> {
    let mut dist: Vec<Option<Rational>> = vec![None; a.num_states()];
    for &q in a.initial() {
        for t in a.outgoing(q) {
            if useful[t.to] {
                if let Some(x) = w(t) {
                    max_into(&mut dist[t.to], x);
                }
            }
        }
    }
    for _ in 0..a.num_states() {
        let mut changed = false;
        for t in a.transitions() {
            if !useful[t.to] {
                continue;
            }
            if let (Some(d), Some(x)) = (&dist[t.from], w(t)) {
                let cand = d + x;
                if dist[t.to].as_ref().is_none_or(|y| cand > *y) {
                    dist[t.to] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..a.num_states())
        .filter(|&q| a.is_final(q))
        .filter_map(|q| dist[q].clone())
        .max()
}

/// The shortest word, lexicographically least among those, carrying an
/// accepting path whose total under `w` is nonnegative. Transitions with
/// `w = None` are unusable. Searches lengths up to `limit`.
pub(crate) fn shortest_witness<F>(a: &Automaton<Weight>, w: F, limit: usize) -> Result<Option<Vec<usize>>>
where
    F: Fn(&Transition<Weight>) -> Option<Rational>,
{
    let n = a.num_states();
    let mut layer: Vec<Option<Rational>> = vec![None; n];
    for &q in a.initial() {
        layer[q] = Some(Rational::zero());
    }
    let mut len = 0;
    loop {
        if len >= limit.max(1) && len > 0 {
            return if limit >= MAX_WITNESS_LEN {
                Err(Error::Resource(format!("no witness of length at most {limit}")))
            } else {
                Ok(None)
            };
        }
        let mut next: Vec<Option<Rational>> = vec![None; n];
        for t in a.transitions() {
            if let (Some(d), Some(x)) = (&layer[t.from], w(t)) {
                max_into(&mut next[t.to], d + x);
            }
        }
        layer = next;
        len += 1;
        let hit = (0..n).any(|q| a.is_final(q) && layer[q].as_ref().is_some_and(|d| !d.is_negative()));
        if hit {
            return Ok(Some(reconstruct(a, &w, len)));
        }
        if layer.iter().all(Option::is_none) {
            return Ok(None);
        }
    }
}

fn reconstruct<F>(a: &Automaton<Weight>, w: &F, len: usize) -> Vec<usize>
where
    F: Fn(&Transition<Weight>) -> Option<Rational>,
{
    let n = a.num_states();
    // back[j][q]: best total of a path of length j from q to a final state
    let mut back: Vec<Vec<Option<Rational>>> = vec![(0..n).map(|q| a.is_final(q).then(Rational::zero)).collect()];
    for j in 1..len {
        let mut row: Vec<Option<Rational>> = vec![None; n];
        for t in a.transitions() {
            if let (Some(x), Some(b)) = (w(t), &back[j - 1][t.to]) {
                max_into(&mut row[t.from], x + b);
            }
        }
        back.push(row);
    }
    let mut cur: Vec<Option<Rational>> = vec![None; n];
    for &q in a.initial() {
        cur[q] = Some(Rational::zero());
    }
    let mut word = Vec::with_capacity(len);
    for i in 0..len {
        let rest = &back[len - 1 - i];
        let letter = (0..a.alphabet().len())
            .find(|&l| {
                (0..n).any(|q| {
                    cur[q].as_ref().is_some_and(|d| {
                        a.outgoing_on(q, l).any(|(_, t)| match (w(t), &rest[t.to]) {
                            (Some(x), Some(b)) => !(d + x + b).is_negative(),
                            _ => false,
                        })
                    })
                })
            })
            .expect("a witness of this length exists");
        let mut next: Vec<Option<Rational>> = vec![None; n];
        for (q, d) in cur.iter().enumerate() {
            if let Some(d) = d {
                for (_, t) in a.outgoing_on(q, letter) {
                    if let Some(x) = w(t) {
                        max_into(&mut next[t.to], d + x);
                    }
                }
            }
        }
        cur = next;
        word.push(letter);
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;
    use crate::num::{int, rat};

    fn tr(from: usize, letter: usize, to: usize, r: i64, c: i64) -> Transition<Weight> {
        Transition { from, letter, to, weight: Weight::from_ints(&[r, c]) }
    }

    fn loop_a(r: i64, c: i64) -> Automaton<Weight> {
        Automaton::new(Alphabet::new(["a"]).unwrap(), 1, vec![0], vec![0], vec![tr(0, 0, 0, r, c)]).unwrap()
    }

    #[test]
    fn single_loop_threshold() {
        let a = loop_a(1, 2);
        let yes = ratio_emptiness_geq(&a, &rat(1, 2)).unwrap();
        assert_eq!(yes, Decision::Yes { witness: vec![0], value: ExtRational::Finite(rat(1, 2)) });
        assert_eq!(ratio_emptiness_geq(&a, &rat(3, 4)).unwrap(), Decision::No);
    }

    #[test]
    fn zero_cost_path_is_infinite() {
        let a = loop_a(1, 0);
        for nu in [int(0), int(1000), rat(-5, 3)] {
            let d = ratio_emptiness_geq(&a, &nu).unwrap();
            assert_eq!(d, Decision::Yes { witness: vec![0], value: ExtRational::PosInf });
        }
    }

    #[test]
    fn empty_language_is_no() {
        let a: Automaton<Weight> = Automaton::empty(Alphabet::new(["a"]).unwrap());
        assert_eq!(ratio_emptiness_geq(&a, &int(-100)).unwrap(), Decision::No);
    }

    #[test]
    fn positive_cycle_needs_pumping() {
        // entry costs ratio 0, loop ratio 2: ratio approaches 2 from below
        let a = Automaton::new(
            Alphabet::new(["a", "b"]).unwrap(),
            2,
            vec![0],
            vec![1],
            vec![tr(0, 0, 1, 0, 4), tr(1, 1, 1, 4, 2)],
        )
        .unwrap();
        let d = ratio_emptiness_geq(&a, &int(1)).unwrap();
        // (0 + 4k) / (4 + 2k) >= 1 first at k = 2
        assert_eq!(d, Decision::Yes { witness: vec![0, 1, 1], value: ExtRational::Finite(int(1)) });
        assert_eq!(ratio_emptiness_geq(&a, &int(2)).unwrap(), Decision::No);
    }

    #[test]
    fn lexicographically_least_witness() {
        let a = Automaton::new(
            Alphabet::new(["a", "b"]).unwrap(),
            2,
            vec![0],
            vec![1],
            vec![tr(0, 0, 1, 1, 1), tr(0, 1, 1, 3, 1)],
        )
        .unwrap();
        assert_eq!(ratio_emptiness_geq(&a, &int(1)).unwrap().witness(), Some(&[0][..]));
        assert_eq!(ratio_emptiness_geq(&a, &int(2)).unwrap().witness(), Some(&[1][..]));
    }

    #[test]
    fn finite_witness_beats_later_infinite_one() {
        let a = Automaton::new(
            Alphabet::new(["a", "b"]).unwrap(),
            2,
            vec![0],
            vec![1],
            vec![tr(0, 0, 1, 1, 1), tr(0, 1, 1, -1, 0)],
        )
        .unwrap();
        let d = ratio_emptiness_geq(&a, &int(1)).unwrap();
        assert_eq!(d.witness(), Some(&[0][..]));
        assert_eq!(ratio_emptiness_geq(&a, &int(2)).unwrap().witness(), Some(&[1][..]));
    }

    #[test]
    fn negative_cost_rejected() {
        let a = loop_a(1, -1);
        assert!(matches!(ratio_emptiness_geq(&a, &int(0)), Err(Error::Structure(_))));
    }
}
