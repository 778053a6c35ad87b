//! Recognizable step functions: the normal form of almost boolean formulas.

use super::boolean::{boolean_to_dfa, validity_dfa};
use crate::automata::Dfa;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::logic::{ExtAlphabet, Formula, Kind};
use crate::multiset::FiniteMultiset;
use crate::structures::PvStructure;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<M: Ord> {
    pub dfa: Dfa,
    pub coeff: FiniteMultiset<M>,
}

/// Blocks with pairwise disjoint languages covering `Σ_V⁺`, each with a
/// constant coefficient. Coefficients are distinct and blocks are sorted by
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction<M: Ord> {
    pub blocks: Vec<Block<M>>,
}

impl<M: Ord + Clone> StepFunction<M> {
    fn from_pairs(pairs: Vec<(Dfa, FiniteMultiset<M>)>, budget: &Budget) -> Result<Self> {
        let mut merged: BTreeMap<FiniteMultiset<M>, Dfa> = BTreeMap::new();
        for (dfa, coeff) in pairs {
            if dfa.is_empty_plus() {
                continue;
            }
            budget.check_count(&coeff.total_count(), "step function coefficient")?;
            let dfa = match merged.remove(&coeff) {
                Some(old) => old.union(&dfa, budget)?,
                None => dfa,
            };
            merged.insert(coeff, dfa.minimize());
        }
        Ok(StepFunction {
            blocks: merged.into_iter().map(|(coeff, dfa)| Block { dfa, coeff }).collect(),
        })
    }

    /// `(L, r)` together with `(complement of L, ε)`.
    pub fn indicator(dfa: Dfa, r: FiniteMultiset<M>, budget: &Budget) -> Result<Self> {
        let rest = dfa.complement();
        Self::from_pairs(vec![(dfa, r), (rest, FiniteMultiset::empty())], budget)
    }

    /// Common refinement combining coefficients with `op`.
    pub fn combine<F>(&self, other: &Self, op: F, budget: &Budget) -> Result<Self>
    where
        F: Fn(&FiniteMultiset<M>, &FiniteMultiset<M>) -> FiniteMultiset<M>,
    {
        let mut pairs = Vec::new();
        for b1 in &self.blocks {
            for b2 in &other.blocks {
                let d = b1.dfa.intersect(&b2.dfa, budget)?;
                if !d.is_empty_plus() {
                    pairs.push((d, op(&b1.coeff, &b2.coeff)));
                }
            }
        }
        Self::from_pairs(pairs, budget)
    }

    /// The coefficient of the block containing `word`.
    pub fn value(&self, word: &[usize]) -> FiniteMultiset<M> {
        self.blocks
            .iter()
            .find(|b| b.dfa.accepts(word))
            .map(|b| b.coeff.clone())
            .unwrap_or_default()
    }

    /// Whether the blocks are pairwise disjoint and cover `Σ⁺`.
    pub fn is_partition(&self, budget: &Budget) -> Result<bool> {
        let Some(first) = self.blocks.first() else {
            return Ok(false);
        };
        let mut cover = Dfa::empty(first.dfa.alphabet().clone());
        for (i, b) in self.blocks.iter().enumerate() {
            for c in &self.blocks[i + 1..] {
                if !b.dfa.intersect(&c.dfa, budget)?.is_empty_plus() {
                    return Ok(false);
                }
            }
            cover = cover.union(&b.dfa, budget)?.minimize();
        }
        Ok(cover.is_universal_plus())
    }

    pub fn nonempty_blocks(&self) -> impl Iterator<Item = &Block<M>> {
        self.blocks.iter().filter(|b| !b.coeff.is_empty())
    }
}

/// The step function of an almost boolean formula over `Σ_V`.
pub fn step_function<S: PvStructure>(
    f: &Formula<S::Elem>,
    ext: &ExtAlphabet,
    s: &S,
    budget: &Budget,
) -> Result<StepFunction<S::Elem>> {
    if f.is_boolean() {
        let d = boolean_to_dfa(f, ext, budget)?;
        return StepFunction::indicator(d, FiniteMultiset::singleton(s.unit()), budget);
    }
    match f.kind() {
        Kind::Const(m) => StepFunction::indicator(validity_dfa(ext, budget)?, FiniteMultiset::singleton(m.clone()), budget),
        Kind::Or(a, b) => {
            let (sa, sb) = (step_function(a, ext, s, budget)?, step_function(b, ext, s, budget)?);
            sa.combine(&sb, |x, y| x.union(y), budget)
        }
        Kind::And(a, b) => {
            let (sa, sb) = (step_function(a, ext, s, budget)?, step_function(b, ext, s, budget)?);
            sa.combine(&sb, |x, y| x.cauchy_product(y, |m1, m2| s.prod(m1, m2)), budget)
        }
        _ => Err(Error::NotRestricted(format!("{f} is not almost boolean"))),
    }
}
