use std::collections::{HashSet, VecDeque};

use super::net::{AcceptingPetriNet, Marking};
use super::state_graph::{explore, ExploreLimits, StateGraph};
use crate::activity::Activity;
use crate::automata::{Dfa, Nfa};
use crate::error::{Error, Result};
use crate::log::EventLog;

/// ε-NFA over activities read off a state graph: τ-edges become ε.
pub fn state_graph_nfa(apn: &AcceptingPetriNet, graph: &StateGraph) -> Nfa {
    let mut nfa = Nfa::new(apn.net().alphabet());
    for s in 0..graph.num_states() {
        nfa.add_state(graph.is_accepting(s));
    }
    nfa.set_initial(graph.initial());
    for (s, t, d) in graph.edges() {
        nfa.add_edge(s, apn.net().transition(t).label.as_ref(), d);
    }
    nfa
}

fn bounded_graph(apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<StateGraph> {
    let graph = explore(apn, limits)?;
    if let Some(p) = graph.overflow_place() {
        return Err(Error::Unbounded {
            place: apn.net().place_name(p).to_string(),
            bound: limits.bound,
        });
    }
    Ok(graph)
}

/// Minimal DFA of the net's language.
pub fn language_dfa(apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<Dfa> {
    let graph = bounded_graph(apn, limits)?;
    Ok(state_graph_nfa(apn, &graph).determinize().minimize())
}

/// State graph and language DFA of a bounded net, computed once.
#[derive(Debug, Clone)]
pub struct ModelLanguage {
    pub graph: StateGraph,
    pub dfa: Dfa,
}

impl ModelLanguage {
    pub fn new(apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<Self> {
        let graph = bounded_graph(apn, limits)?;
        let dfa = state_graph_nfa(apn, &graph).determinize().minimize();
        Ok(ModelLanguage { graph, dfa })
    }

    pub fn accepts(&self, sigma: &[Activity]) -> bool {
        self.dfa.accepts(sigma)
    }

    pub fn fits(&self, log: &EventLog) -> bool {
        log.iter().all(|(t, _)| self.accepts(t.activities()))
    }

    /// First trace of the log outside the language.
    pub fn first_unfit<'a>(&self, log: &'a EventLog) -> Option<&'a crate::log::Trace> {
        log.iter().map(|(t, _)| t).find(|t| !self.accepts(t.activities()))
    }
}

/// Breadth-first firing-sequence search for `sigma`, visiting at most
/// `budget` (marking, position) configurations. Revisits are skipped, which
/// cuts τ-cycles; exhausting the budget is reported as undecided.
pub fn search_trace(apn: &AcceptingPetriNet, sigma: &[Activity], budget: usize) -> Result<bool> {
    let mut seen: HashSet<(Marking, usize)> = HashSet::new();
    let start = (apn.initial().clone(), 0usize);
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some((m, pos)) = queue.pop_front() {
        if pos == sigma.len() && apn.is_final(&m) {
            return Ok(true);
        }
        for t in apn.enabled_unchecked(&m) {
            let next_pos = match &apn.net().transition(t).label {
                None => pos,
                Some(a) if pos < sigma.len() && *a == sigma[pos] => pos + 1,
                Some(_) => continue,
            };
            let cfg = (apn.fire_unchecked(&m, t), next_pos);
            if !seen.contains(&cfg) {
                if seen.len() >= budget {
                    return Err(Error::Undecided(format!(
                        "trace search exceeded {budget} configurations"
                    )));
                }
                seen.insert(cfg.clone());
                queue.push_back(cfg);
            }
        }
    }
    Ok(false)
}

/// Membership of `sigma` in the net's language: DFA membership for bounded
/// nets, budgeted firing-sequence search otherwise.
pub fn is_trace(apn: &AcceptingPetriNet, sigma: &[Activity], limits: ExploreLimits) -> Result<bool> {
    match language_dfa(apn, limits) {
        Ok(dfa) => Ok(dfa.accepts(sigma)),
        Err(Error::Unbounded { .. }) | Err(Error::ExplorationOverflow { .. }) => {
            search_trace(apn, sigma, limits.state_cap)
        }
        Err(e) => Err(e),
    }
}

/// `trace_set(log) ⊆ L(apn)`.
pub fn is_fitting(log: &EventLog, apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<bool> {
    match ModelLanguage::new(apn, limits) {
        Ok(lang) => Ok(lang.fits(log)),
        Err(Error::Unbounded { .. }) | Err(Error::ExplorationOverflow { .. }) => {
            for (t, _) in log.iter() {
                if !search_trace(apn, t.activities(), limits.state_cap)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Err(e) => Err(e),
    }
}
