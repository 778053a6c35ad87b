use super::{expect_arity, finite_components, PvStructure, ValuationStructure, Weight, WeightDomain};
use crate::error::{Error, Result};
use crate::multiset::FiniteMultiset;
use crate::num::{ratio_value, ExtRational};
use num_traits::Signed;

/// Reward/cost pairs; `Φ` is the maximal reward-to-cost ratio over the support.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RatioStructure;

impl WeightDomain for RatioStructure {
    type Elem = Weight;

    fn name(&self) -> String {
        "ratio".into()
    }

    fn parse_elem(&self, components: &[ExtRational]) -> Result<Weight> {
        expect_arity("ratio", components, 2)?;
        let c = finite_components(components)?;
        if c[1].is_negative() {
            return Err(Error::Structure(format!("ratio cost {} is negative", c[1])));
        }
        Ok(Weight(c))
    }
}

impl ValuationStructure for RatioStructure {
    type Value = ExtRational;

    fn val(&self, seq: &[Weight]) -> Weight {
        Weight::sum(seq, 2)
    }

    fn phi(&self, r: &FiniteMultiset<Weight>) -> ExtRational {
        r.support()
            .map(|w| ratio_value(&w.0[0], &w.0[1]))
            .max()
            .unwrap_or(ExtRational::NegInf)
    }

    fn is_incremental(&self) -> bool {
        true
    }
}

impl PvStructure for RatioStructure {
    fn unit(&self) -> Weight {
        Weight::zeros(2)
    }

    fn prod(&self, a: &Weight, b: &Weight) -> Weight {
        a.add(b)
    }
}
