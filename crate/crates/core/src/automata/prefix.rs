use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};

use crate::activity::Activity;
use crate::log::EventLog;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixNode<S> {
    pub parent: Option<usize>,
    /// Symbol on the edge from the parent; `None` for the root.
    pub symbol: Option<S>,
    pub children: BTreeMap<S, usize>,
    /// Total weight of sequences having this prefix.
    pub visits: u64,
    /// Weight of sequences ending exactly here.
    pub ends: u64,
}

impl<S> PrefixNode<S> {
    /// Number of events observed while in this state.
    pub fn events(&self) -> u64 {
        self.visits - self.ends
    }
}

/// Tree automaton with one state per distinct prefix of a weighted set of
/// sequences. State 0 is the empty prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixAutomaton<S> {
    nodes: Vec<PrefixNode<S>>,
}

impl<S: Ord + Clone> Default for PrefixAutomaton<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Ord + Clone> PrefixAutomaton<S> {
    pub fn new() -> Self {
        PrefixAutomaton {
            nodes: vec![PrefixNode {
                parent: None,
                symbol: None,
                children: BTreeMap::new(),
                visits: 0,
                ends: 0,
            }],
        }
    }

    pub fn insert(&mut self, sequence: &[S], weight: u64) {
        let mut s = 0;
        self.nodes[0].visits += weight;
        for sym in sequence {
            s = match self.nodes[s].children.get(sym) {
                Some(&c) => c,
                None => {
                    let c = self.nodes.len();
                    self.nodes.push(PrefixNode {
                        parent: Some(s),
                        symbol: Some(sym.clone()),
                        children: BTreeMap::new(),
                        visits: 0,
                        ends: 0,
                    });
                    self.nodes[s].children.insert(sym.clone(), c);
                    c
                }
            };
            self.nodes[s].visits += weight;
        }
        self.nodes[s].ends += weight;
    }

    pub fn from_weighted<'a, I>(items: I) -> Self
    where
        S: 'a,
        I: IntoIterator<Item = (&'a [S], u64)>,
    {
        let mut pa = Self::new();
        for (seq, w) in items {
            pa.insert(seq, w);
        }
        pa
    }

    pub fn nodes(&self) -> &[PrefixNode<S>] {
        &self.nodes
    }

    pub fn root(&self) -> &PrefixNode<S> {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1 && self.nodes[0].visits == 0
    }

    /// Sequence of symbols leading to a node.
    pub fn prefix(&self, node: usize) -> Vec<S> {
        let mut out = Vec::new();
        let mut at = node;
        while let Some(p) = self.nodes[at].parent {
            out.push(self.nodes[at].symbol.clone().expect("non-root has a symbol"));
            at = p;
        }
        out.reverse();
        out
    }

    /// Nodes in breadth-first order with ascending symbols.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = vec![0];
        let mut i = 0;
        while i < order.len() {
            order.extend(self.nodes[order[i]].children.values().copied());
            i += 1;
        }
        order
    }
}

impl<S: Ord + Clone + Display> PrefixAutomaton<S> {
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"{}\"];", n.visits);
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for (sym, c) in &n.children {
                let _ = writeln!(out, "  s{i} -> s{c} [label=\"{sym}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Prefix automaton of a log, weighted by trace multiplicities.
pub fn build_prefix_automaton(log: &EventLog) -> PrefixAutomaton<Activity> {
    PrefixAutomaton::from_weighted(log.iter().map(|(t, n)| (t.activities(), n)))
}
