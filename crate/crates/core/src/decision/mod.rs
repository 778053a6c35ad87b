//! Threshold emptiness: is there a word whose behavior meets a bound?

mod ratio;
mod twocost;

pub use ratio::ratio_emptiness_geq;
pub use twocost::twocost_emptiness_leq;

use std::fmt;

/// Answer of a threshold query. A positive answer carries a shortest
/// witness word and its behavior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<V> {
    Yes { witness: Vec<usize>, value: V },
    No,
}

impl<V> Decision<V> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes { .. })
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            Decision::Yes { witness, .. } => Some(witness),
            Decision::No => None,
        }
    }
}

impl<V: fmt::Display> fmt::Display for Decision<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Yes { value, .. } => write!(f, "yes ({value})"),
            Decision::No => f.write_str("no"),
        }
    }
}

/// Longest witness search before giving up.
pub const MAX_WITNESS_LEN: usize = 1 << 16;
