//! Long-prefix simulation of ultimately periodic weight sequences, used to
//! cross-check the graph-based answers.

use crate::structures::{EnergyStructure, IntVector, RatioPair};

fn sequence<'a, T>(stem: &'a [T], cycle: &'a [T], steps: usize) -> impl Iterator<Item = &'a T> {
    stem.iter().chain(cycle.iter().cycle()).take(steps)
}

/// Reward over cost of the first `steps` weights of `stem · cycle^ω`, in
/// floating point. Infinite rewards are not expected here.
pub fn prefix_ratio(stem: &[RatioPair], cycle: &[RatioPair], steps: usize) -> f64 {
    let (mut r, mut c) = (0.0, 0.0);
    for m in sequence(stem, cycle, steps) {
        r += m.reward.to_f64();
        c += num_traits::ToPrimitive::to_f64(&m.cost).unwrap_or(f64::NAN);
    }
    r / c
}

/// Componentwise minimum of the running clamped values over the first
/// `steps` weights, including the starting zero vector.
pub fn prefix_minimum(s: &EnergyStructure, stem: &[IntVector], cycle: &[IntVector], steps: usize) -> IntVector {
    let mut v = IntVector(vec![0; s.dim()]);
    let mut low = v.clone();
    for m in sequence(stem, cycle, steps) {
        v = s.step(&v, m);
        for (a, b) in low.0.iter_mut().zip(&v.0) {
            *a = (*a).min(*b);
        }
    }
    low
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn ratio_converges() {
        let cyc = [RatioPair::new(int(1), int(1)), RatioPair::new(int(3), int(1))];
        let stem = [RatioPair::new(int(100), int(1))];
        assert!((prefix_ratio(&stem, &cyc, 10_000) - 2.0).abs() < 1e-2);
    }

    #[test]
    fn energy_minimum() {
        let s = EnergyStructure::new(vec![2]).unwrap();
        assert_eq!(prefix_minimum(&s, &[], &[IntVector(vec![-1])], 100), IntVector(vec![-2]));
        assert_eq!(prefix_minimum(&s, &[], &[IntVector(vec![1])], 100), IntVector(vec![0]));
    }
}
