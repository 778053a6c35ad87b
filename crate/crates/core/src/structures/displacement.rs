use super::{expect_arity, finite_components, PvStructure, Real, ValuationStructure, Weight, WeightDomain};
use crate::error::Result;
use crate::multiset::FiniteMultiset;
use crate::num::{ExtRational, Rational};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Displacement vectors in ℚⁿ; `Φ` is the count-weighted mean Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisplacementStructure {
    pub dim: usize,
}

impl DisplacementStructure {
    pub fn new(dim: usize) -> Self {
        DisplacementStructure { dim }
    }
}

/// Exact squared Euclidean norm.
pub fn squared_norm(w: &Weight) -> Rational {
    w.0.iter().fold(Rational::zero(), |acc, x| acc + x * x)
}

impl WeightDomain for DisplacementStructure {
    type Elem = Weight;

    fn name(&self) -> String {
        format!("disp({})", self.dim)
    }

    fn parse_elem(&self, components: &[ExtRational]) -> Result<Weight> {
        expect_arity("disp", components, self.dim)?;
        finite_components(components).map(Weight)
    }
}

impl ValuationStructure for DisplacementStructure {
    type Value = Real;

    fn val(&self, seq: &[Weight]) -> Weight {
        Weight::sum(seq, self.dim)
    }

    fn phi(&self, r: &FiniteMultiset<Weight>) -> Real {
        if r.is_empty() {
            return Real(0.0);
        }
        let total: BigUint = r.total_count();
        let mut acc = 0.0f64;
        for (v, c) in r.iter() {
            let norm = squared_norm(v).to_f64().unwrap_or(f64::NAN).sqrt();
            acc += c.to_f64().unwrap_or(f64::INFINITY) * norm;
        }
        Real(acc / total.to_f64().unwrap_or(f64::INFINITY))
    }

    fn is_incremental(&self) -> bool {
        true
    }
}

impl PvStructure for DisplacementStructure {
    fn unit(&self) -> Weight {
        Weight::zeros(self.dim)
    }

    fn prod(&self, a: &Weight, b: &Weight) -> Weight {
        a.add(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_norm() {
        let s = DisplacementStructure::new(2);
        assert_eq!(s.phi(&FiniteMultiset::empty()), Real(0.0));
        let r = FiniteMultiset::from_counts([
            (Weight::from_ints(&[2, 0]), 1u32),
            (Weight::from_ints(&[0, 0]), 2u32),
            (Weight::from_ints(&[-2, 0]), 1u32),
        ]);
        assert_eq!(s.phi(&r), Real(1.0));
        let d = s.phi(&FiniteMultiset::singleton(Weight::from_ints(&[1, 1])));
        assert!((d.0 - 2f64.sqrt()).abs() < 1e-9);
    }
}
