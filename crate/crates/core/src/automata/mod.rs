//! Finite automata over activities: subset construction, minimization,
//! products, inclusion tests, projection and weighted prefix trees.

mod dfa;
mod nfa;
mod prefix;

pub use dfa::{Dfa, DfaState, Product};
pub use nfa::Nfa;
pub use prefix::{build_prefix_automaton, PrefixAutomaton, PrefixNode};
