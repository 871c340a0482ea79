use std::collections::{BTreeSet, HashMap, VecDeque};

use super::net::{AcceptingPetriNet, Marking, PlaceId, TransitionId};
use crate::activity::Activity;
use crate::error::{Error, Result};

/// Caps for state-space exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreLimits {
    /// Tokens a place may hold before the net is declared unbounded.
    pub bound: u32,
    /// Maximum number of distinct markings.
    pub state_cap: usize,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            bound: 8,
            state_cap: 100_000,
        }
    }
}

/// Reachability graph of an accepting net. State 0 is the initial marking;
/// numbering is breadth-first with transitions in id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    markings: Vec<Marking>,
    succ: Vec<Vec<(TransitionId, usize)>>,
    accepting: Vec<bool>,
    overflow: Option<PlaceId>,
}

impl StateGraph {
    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn num_states(&self) -> usize {
        self.markings.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn successors(&self, s: usize) -> &[(TransitionId, usize)] {
        &self.succ[s]
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.markings.len()).filter(|&s| self.accepting[s])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, TransitionId, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |&(t, d)| (s, t, d)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_bounded(&self) -> bool {
        self.overflow.is_none()
    }

    /// Place that exceeded the token bound, if any.
    pub fn overflow_place(&self) -> Option<PlaceId> {
        self.overflow
    }

    pub fn state_of(&self, m: &Marking) -> Option<usize> {
        self.markings.iter().position(|x| x == m)
    }

    /// τ-closure of a set of states.
    pub fn silent_closure(&self, apn: &AcceptingPetriNet, states: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = states.clone();
        let mut stack: Vec<usize> = states.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(t, d) in &self.succ[s] {
                if apn.net().transition(t).is_silent() && out.insert(d) {
                    stack.push(d);
                }
            }
        }
        out
    }

    /// States reachable from the initial state by firing sequences whose
    /// visible projection is `prefix`, closed under τ.
    pub fn after(&self, apn: &AcceptingPetriNet, prefix: &[Activity]) -> BTreeSet<usize> {
        let mut cur = self.silent_closure(apn, &BTreeSet::from([0]));
        for a in prefix {
            let next: BTreeSet<usize> = cur
                .iter()
                .flat_map(|&s| self.succ[s].iter())
                .filter(|(t, _)| apn.net().transition(*t).label.as_ref() == Some(a))
                .map(|&(_, d)| d)
                .collect();
            if next.is_empty() {
                return next;
            }
            cur = self.silent_closure(apn, &next);
        }
        cur
    }

    /// Visible activities enabled in any of `states`.
    pub fn enabled_activities(&self, apn: &AcceptingPetriNet, states: &BTreeSet<usize>) -> BTreeSet<Activity> {
        states
            .iter()
            .flat_map(|&s| self.succ[s].iter())
            .filter_map(|(t, _)| apn.net().transition(*t).label.clone())
            .collect()
    }
}

/// Breadth-first closure of the reachable markings.
///
/// A marking with more than `bound` tokens on a place is not expanded; the
/// graph is then flagged unbounded with that place as witness. Exceeding
/// `state_cap` is an error.
pub fn explore(apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<StateGraph> {
    if limits.bound == 0 || limits.state_cap == 0 {
        return Err(Error::InvalidArgument("bound and state_cap must be at least 1".into()));
    }
    let mut index: HashMap<Marking, usize> = HashMap::new();
    let mut markings = vec![apn.initial().clone()];
    let mut succ: Vec<Vec<(TransitionId, usize)>> = vec![Vec::new()];
    let mut overflow = None;
    index.insert(apn.initial().clone(), 0);
    if let Some(p) = over_bound(apn.initial(), limits.bound) {
        overflow = Some(p);
    }
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let m = markings[s].clone();
        if over_bound(&m, limits.bound).is_some() {
            continue;
        }
        for t in apn.enabled_unchecked(&m) {
            let next = apn.fire_unchecked(&m, t);
            let d = match index.get(&next) {
                Some(&d) => d,
                None => {
                    if markings.len() >= limits.state_cap {
                        return Err(Error::ExplorationOverflow {
                            cap: limits.state_cap,
                        });
                    }
                    if overflow.is_none() {
                        overflow = over_bound(&next, limits.bound);
                    }
                    let d = markings.len();
                    index.insert(next.clone(), d);
                    markings.push(next);
                    succ.push(Vec::new());
                    queue.push_back(d);
                    d
                }
            };
            succ[s].push((t, d));
        }
    }
    let accepting = markings.iter().map(|m| apn.is_final(m)).collect();
    Ok(StateGraph {
        markings,
        succ,
        accepting,
        overflow,
    })
}

fn over_bound(m: &Marking, bound: u32) -> Option<PlaceId> {
    m.counts().iter().position(|&c| c > bound).map(PlaceId)
}
