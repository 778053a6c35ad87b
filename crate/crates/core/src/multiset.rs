//! Finite multisets with union, Cauchy product, and lifted valuation.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A finitely supported map from weights to positive counts.
///
/// The support is kept in the canonical order of `M`, so iteration and
/// printing are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteMultiset<M: Ord> {
    entries: BTreeMap<M, BigUint>,
}

impl<M: Ord> Default for FiniteMultiset<M> {
    fn default() -> Self {
        FiniteMultiset {
            entries: BTreeMap::new(),
        }
    }
}

impl<M: Ord + Clone> FiniteMultiset<M> {
    /// The empty multiset ε.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The simple multiset [m].
    pub fn singleton(m: M) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(m, BigUint::one());
        FiniteMultiset { entries }
    }

    pub fn from_counts<I, C>(items: I) -> Self
    where
        I: IntoIterator<Item = (M, C)>,
        C: Into<BigUint>,
    {
        let mut r = Self::empty();
        for (m, c) in items {
            r.insert(m, c.into());
        }
        r
    }

    /// Adds `count` copies of `m`; a zero count is ignored.
    pub fn insert(&mut self, m: M, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.entries.entry(m).or_insert_with(BigUint::zero) += count;
    }

    pub fn count(&self, m: &M) -> BigUint {
        self.entries.get(m).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &M> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&M, &BigUint)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// |r|, the sum of all counts.
    pub fn total_count(&self) -> BigUint {
        self.entries.values().sum()
    }

    /// Whether this is [m] for some m.
    pub fn as_simple(&self) -> Option<&M> {
        if self.entries.len() == 1 {
            let (m, c) = self.entries.iter().next()?;
            if c.is_one() {
                return Some(m);
            }
        }
        None
    }

    /// r1 ⊕ r2.
    pub fn union(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.union_in_place(other);
        r
    }

    pub fn union_in_place(&mut self, other: &Self) {
        for (m, c) in &other.entries {
            self.insert(m.clone(), c.clone());
        }
    }

    /// r1 · r2 with respect to the product `prod`.
    pub fn cauchy_product<F>(&self, other: &Self, prod: F) -> Self
    where
        F: Fn(&M, &M) -> M,
    {
        let mut r = Self::empty();
        for (m1, c1) in &self.entries {
            for (m2, c2) in &other.entries {
                r.insert(prod(m1, m2), c1 * c2);
            }
        }
        r
    }

    /// Applies `f` to every element, merging counts of equal images.
    pub fn map<N: Ord + Clone, F: Fn(&M) -> N>(&self, f: F) -> FiniteMultiset<N> {
        let mut r = FiniteMultiset::empty();
        for (m, c) in &self.entries {
            r.insert(f(m), c.clone());
        }
        r
    }
}

/// Number of support tuples `lift_val` would visit.
pub fn support_tuple_count<M: Ord + Clone>(rs: &[FiniteMultiset<M>]) -> BigUint {
    rs.iter()
        .map(|r| BigUint::from(r.support_size()))
        .product()
}

/// Val(r1, ..., rn) lifted to multisets.
///
/// # Panics
/// Panics if `rs` is empty.
pub fn lift_val<M, F>(rs: &[FiniteMultiset<M>], val: F) -> FiniteMultiset<M>
where
    M: Ord + Clone,
    F: Fn(&[M]) -> M,
{
    assert!(!rs.is_empty(), "lift_val needs at least one argument");
    if rs.iter().any(|r| r.is_empty()) {
        return FiniteMultiset::empty();
    }
    let supports: Vec<Vec<(&M, &BigUint)>> = rs.iter().map(|r| r.iter().collect()).collect();
    let mut idx = vec![0usize; rs.len()];
    let mut out = FiniteMultiset::empty();
    let mut tuple: Vec<M> = Vec::with_capacity(rs.len());
    loop {
        tuple.clear();
        let mut count = BigUint::one();
        for (k, &i) in idx.iter().enumerate() {
            let (m, c) = supports[k][i];
            tuple.push(m.clone());
            count *= c;
        }
        out.insert(val(&tuple), count);
        let mut k = rs.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < supports[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl<M: Ord + Clone + fmt::Display> fmt::Display for FiniteMultiset<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (m, c)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}:{c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(items: &[(i64, u32)]) -> FiniteMultiset<i64> {
        FiniteMultiset::from_counts(items.iter().map(|&(m, c)| (m, BigUint::from(c))))
    }

    #[test]
    fn union_adds_counts() {
        assert_eq!(ms(&[(1, 1)]).union(&ms(&[(1, 2)])), ms(&[(1, 3)]));
        assert_eq!(ms(&[(4, 2)]).union(&FiniteMultiset::empty()), ms(&[(4, 2)]));
    }

    #[test]
    fn cauchy_multiplies_counts() {
        let r = ms(&[(1, 2)]).cauchy_product(&ms(&[(2, 3)]), |a, b| a + b);
        assert_eq!(r, ms(&[(3, 6)]));
        let e = ms(&[(1, 2)]).cauchy_product(&FiniteMultiset::empty(), |a, b| a + b);
        assert!(e.is_empty());
    }

    #[test]
    fn lift_val_counts_tuples() {
        let r = lift_val(&[ms(&[(1, 1), (2, 1)]), ms(&[(10, 2)])], |xs| xs.iter().sum());
        assert_eq!(r, ms(&[(11, 2), (12, 2)]));
        assert_eq!(r.total_count(), BigUint::from(4u32));
        let z = lift_val(&[ms(&[(1, 1)]), FiniteMultiset::empty()], |xs| xs[0]);
        assert!(z.is_empty());
    }

    #[test]
    fn zero_counts_are_dropped() {
        let mut r = FiniteMultiset::empty();
        r.insert(5i64, BigUint::zero());
        assert!(r.is_empty());
        assert_eq!(r.support_size(), 0);
    }

    #[test]
    fn display_is_sorted() {
        assert_eq!(ms(&[(3, 1), (-1, 2)]).to_string(), "{-1:2, 3:1}");
    }
}
