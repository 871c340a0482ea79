use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::dfa::{Dfa, DfaState};
use crate::activity::Activity;

/// Nondeterministic automaton with ε-edges (`None` labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Vec<Activity>,
    accepting: Vec<bool>,
    edges: Vec<(usize, Option<usize>, usize)>,
    initial: Vec<usize>,
}

impl Nfa {
    /// `alphabet` is sorted and deduplicated.
    pub fn new(alphabet: impl IntoIterator<Item = Activity>) -> Self {
        let set: BTreeSet<Activity> = alphabet.into_iter().collect();
        Nfa {
            alphabet: set.into_iter().collect(),
            accepting: Vec::new(),
            edges: Vec::new(),
            initial: Vec::new(),
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.accepting.len() - 1
    }

    pub fn set_initial(&mut self, s: usize) {
        assert!(s < self.accepting.len(), "undeclared state {s}");
        if !self.initial.contains(&s) {
            self.initial.push(s);
        }
    }

    /// Adds an edge; `None` is ε. Panics on undeclared states or symbols.
    pub fn add_edge(&mut self, from: usize, label: Option<&Activity>, to: usize) {
        assert!(from < self.accepting.len() && to < self.accepting.len());
        let sym = label.map(|a| {
            self.alphabet
                .binary_search(a)
                .unwrap_or_else(|_| panic!("`{a}` is not in the alphabet"))
        });
        self.edges.push((from, sym, to));
    }

    pub fn alphabet(&self) -> &[Activity] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    /// Subset construction with ε-closure. Only non-empty reachable subsets
    /// become states, so the result is partial.
    pub fn determinize(&self) -> Dfa {
        let n = self.num_states();
        let mut eps: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut by_sym: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
        for &(from, sym, to) in &self.edges {
            match sym {
                None => eps[from].push(to),
                Some(a) => by_sym[from].entry(a).or_default().push(to),
            }
        }
        let closure = |seed: BTreeSet<usize>| {
            let mut set = seed;
            let mut stack: Vec<usize> = set.iter().copied().collect();
            while let Some(s) = stack.pop() {
                for &t in &eps[s] {
                    if set.insert(t) {
                        stack.push(t);
                    }
                }
            }
            set
        };

        let start = closure(self.initial.iter().copied().collect());
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut states: Vec<DfaState> = Vec::new();
        let mut queue = VecDeque::new();
        if start.is_empty() {
            states.push(DfaState::default());
            return Dfa::from_parts(self.alphabet.clone(), states, 0);
        }
        index.insert(start.clone(), 0);
        states.push(DfaState {
            accepting: start.iter().any(|&s| self.accepting[s]),
            next: BTreeMap::new(),
        });
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            let mut moves: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for &s in &set {
                for (&a, targets) in &by_sym[s] {
                    moves.entry(a).or_default().extend(targets.iter().copied());
                }
            }
            for (a, targets) in moves {
                let target = closure(targets);
                let tid = match index.get(&target) {
                    Some(&t) => t,
                    None => {
                        let t = states.len();
                        states.push(DfaState {
                            accepting: target.iter().any(|&s| self.accepting[s]),
                            next: BTreeMap::new(),
                        });
                        index.insert(target.clone(), t);
                        queue.push_back(target);
                        t
                    }
                };
                states[id].next.insert(a, tid);
            }
        }
        Dfa::from_parts(self.alphabet.clone(), states, 0)
    }
}
