//! Precision measures for process mining, with the Petri net and automata
//! machinery they are built on and an executable harness for precision
//! axioms.

pub mod activity;
pub mod alignment;
pub mod axioms;
pub mod automata;
pub mod corpus;
pub mod error;
pub mod log;
pub mod measures;
pub mod petri;
pub mod reproduce;

pub use activity::Activity;
pub use error::{Error, Result};
pub use log::{parse_log, EventLog, Trace};
pub use petri::{parse_net, write_net, AcceptingPetriNet, ExploreLimits, LabeledPetriNet, Marking, StateGraph};
