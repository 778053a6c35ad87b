pub mod automata;
pub mod budget;
pub mod compiler;
pub mod decision;
pub mod error;
pub mod logic;
pub mod multiset;
pub mod num;
pub mod omega;
pub mod structures;

pub use budget::Budget;
pub use error::{Error, Result};
pub use multiset::{lift_val, FiniteMultiset};
