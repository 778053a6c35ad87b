use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Resource limits shared by the evaluator, the compiler, and the classical
/// automaton constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of states of any constructed automaton.
    pub max_states: usize,
    /// Maximum total count of any multiset coefficient.
    pub max_count: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_states: 1 << 16,
            max_count: 1 << 24,
        }
    }
}

impl Budget {
    pub fn check_states(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_states {
            Err(Error::Resource(format!(
                "{what} needs {n} states, budget is {}",
                self.max_states
            )))
        } else {
            Ok(())
        }
    }

    pub fn check_count(&self, n: &BigUint, what: &str) -> Result<()> {
        if *n > BigUint::from(self.max_count) {
            Err(Error::Resource(format!(
                "{what} has total count {n}, budget is {}",
                self.max_count
            )))
        } else {
            Ok(())
        }
    }
}
