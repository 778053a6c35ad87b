use super::{expect_arity, OmegaStructure, WeightDomain};
use crate::error::{Error, Result};
use crate::num::{format_literal, ratio_value, ExtRational, Rational};
use num_traits::{Signed, Zero};
use std::fmt;

/// An extended reward together with a nonnegative cost.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatioPair {
    pub reward: ExtRational,
    pub cost: Rational,
}

impl RatioPair {
    pub fn new(reward: Rational, cost: Rational) -> Self {
        RatioPair {
            reward: ExtRational::Finite(reward),
            cost,
        }
    }

    pub fn ratio(&self) -> ExtRational {
        match &self.reward {
            ExtRational::Finite(x) => ratio_value(x, &self.cost),
            _ if self.cost.is_zero() => ExtRational::PosInf,
            other => other.clone(),
        }
    }

    fn is_unit(&self) -> bool {
        self.reward == ExtRational::zero() && self.cost.is_zero()
    }
}

impl fmt::Display for RatioPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [self.reward.to_string(), self.cost.to_string()];
        f.write_str(&format_literal(&parts))
    }
}

/// Reward/cost pairs on infinite sequences; `Val^ω` is the supremum limit
/// of prefix ratios when a sum diverges, and the pair of sums otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OmegaRatioStructure;

impl WeightDomain for OmegaRatioStructure {
    type Elem = RatioPair;

    fn name(&self) -> String {
        "omega-ratio".into()
    }

    fn parse_elem(&self, components: &[ExtRational]) -> Result<RatioPair> {
        expect_arity("omega-ratio", components, 2)?;
        let cost = components[1]
            .finite()
            .cloned()
            .filter(|c| !c.is_negative())
            .ok_or_else(|| Error::Structure(format!("cost {} must be finite and nonnegative", components[1])))?;
        Ok(RatioPair {
            reward: components[0].clone(),
            cost,
        })
    }
}

impl OmegaStructure for OmegaRatioStructure {
    type Value = ExtRational;

    fn unit(&self) -> RatioPair {
        RatioPair::new(Rational::zero(), Rational::zero())
    }

    fn prod(&self, a: &RatioPair, b: &RatioPair) -> RatioPair {
        RatioPair {
            reward: a.reward.add(&b.reward),
            cost: &a.cost + &b.cost,
        }
    }

    fn val_omega(&self, prefix: &[RatioPair], period: &[RatioPair]) -> Result<RatioPair> {
        if period.is_empty() {
            return Err(Error::Structure("period must be nonempty".into()));
        }
        if period.iter().all(RatioPair::is_unit) {
            return Ok(prefix.iter().fold(self.unit(), |acc, m| self.prod(&acc, m)));
        }
        let mut rp = Rational::zero();
        let mut cp = Rational::zero();
        for m in prefix.iter().chain(period) {
            if !m.reward.is_finite() || m.cost.is_negative() {
                return Err(Error::Structure(format!(
                    "{m} lies outside finite rewards and nonnegative costs"
                )));
            }
        }
        for m in prefix {
            rp += m.reward.finite().unwrap();
            cp += &m.cost;
        }
        let rv: Rational = period.iter().map(|m| m.reward.finite().unwrap().clone()).sum();
        let cv: Rational = period.iter().map(|m| m.cost.clone()).sum();
        let one = Rational::from_integer(1.into());
        let x = if !cv.is_zero() {
            ExtRational::Finite(rv / cv)
        } else if cp.is_zero() || rv.is_positive() {
            ExtRational::PosInf
        } else if rv.is_negative() {
            ExtRational::NegInf
        } else {
            let mut running = rp.clone();
            let mut best: Option<Rational> = None;
            for m in period {
                running += m.reward.finite().unwrap();
                if best.as_ref().is_none_or(|b| running > *b) {
                    best = Some(running.clone());
                }
            }
            ExtRational::Finite(best.unwrap() / cp)
        };
        Ok(RatioPair { reward: x, cost: one })
    }

    fn phi_support(&self, support: &[RatioPair]) -> ExtRational {
        support
            .iter()
            .map(RatioPair::ratio)
            .max()
            .unwrap_or(ExtRational::NegInf)
    }
}
