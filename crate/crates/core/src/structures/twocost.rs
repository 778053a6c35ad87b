use super::{expect_arity, finite_components, PvStructure, ValuationStructure, Weight, WeightDomain};
use crate::error::Result;
use crate::multiset::FiniteMultiset;
use crate::num::{ExtRational, Rational};

/// Primary/secondary cost pairs; `Φ` is the cheapest primary cost among
/// pairs whose secondary cost is at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCostStructure {
    pub bound: Rational,
}

impl TwoCostStructure {
    pub fn new(bound: Rational) -> Self {
        TwoCostStructure { bound }
    }
}

impl WeightDomain for TwoCostStructure {
    type Elem = Weight;

    fn name(&self) -> String {
        format!("twocost({})", self.bound)
    }

    fn parse_elem(&self, components: &[ExtRational]) -> Result<Weight> {
        expect_arity("twocost", components, 2)?;
        finite_components(components).map(Weight)
    }
}

impl ValuationStructure for TwoCostStructure {
    type Value = ExtRational;

    fn val(&self, seq: &[Weight]) -> Weight {
        Weight::sum(seq, 2)
    }

    fn phi(&self, r: &FiniteMultiset<Weight>) -> ExtRational {
        r.support()
            .filter(|w| w.0[1] <= self.bound)
            .map(|w| ExtRational::Finite(w.0[0].clone()))
            .min()
            .unwrap_or(ExtRational::PosInf)
    }

    fn is_incremental(&self) -> bool {
        true
    }
}

impl PvStructure for TwoCostStructure {
    fn unit(&self) -> Weight {
        Weight::zeros(2)
    }

    fn prod(&self, a: &Weight, b: &Weight) -> Weight {
        a.add(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn phi_respects_bound() {
        let s = TwoCostStructure::new(int(10));
        assert_eq!(s.phi(&FiniteMultiset::empty()), ExtRational::PosInf);
        let r = FiniteMultiset::singleton(Weight::from_ints(&[5, 9]))
            .union(&FiniteMultiset::singleton(Weight::from_ints(&[2, 11])));
        assert_eq!(s.phi(&r), ExtRational::Finite(int(5)));
        let z = TwoCostStructure::new(int(0));
        assert_eq!(
            z.phi(&FiniteMultiset::singleton(Weight::from_ints(&[-1, 0]))),
            ExtRational::Finite(int(-1))
        );
    }
}
