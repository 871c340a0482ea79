use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::activity::Activity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    /// `None` for τ-transitions.
    pub label: Option<Activity>,
    /// Preset, sorted and duplicate-free.
    pub inputs: Vec<PlaceId>,
    /// Postset, sorted and duplicate-free.
    pub outputs: Vec<PlaceId>,
}

impl Transition {
    pub fn is_silent(&self) -> bool {
        self.label.is_none()
    }
}

/// A labeled Petri net. Places and transitions are indexed in ascending
/// name order so that every derived structure is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPetriNet {
    places: Vec<String>,
    transitions: Vec<Transition>,
}

impl LabeledPetriNet {
    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t.0]
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0]
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.places
            .binary_search_by(|p| p.as_str().cmp(name))
            .ok()
            .map(PlaceId)
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transitions
            .binary_search_by(|t| t.name.as_str().cmp(name))
            .ok()
            .map(TransitionId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len()).map(TransitionId)
    }

    /// Activities that label at least one transition.
    pub fn alphabet(&self) -> BTreeSet<Activity> {
        self.transitions
            .iter()
            .filter_map(|t| t.label.clone())
            .collect()
    }

    pub fn visible_transition_count(&self) -> usize {
        self.transitions.iter().filter(|t| !t.is_silent()).count()
    }

    /// Output transitions of a place.
    pub fn consumers(&self, p: PlaceId) -> impl Iterator<Item = TransitionId> + '_ {
        self.transition_ids()
            .filter(move |t| self.transitions[t.0].inputs.contains(&p))
    }

    /// Input transitions of a place.
    pub fn producers(&self, p: PlaceId) -> impl Iterator<Item = TransitionId> + '_ {
        self.transition_ids()
            .filter(move |t| self.transitions[t.0].outputs.contains(&p))
    }
}

/// Incremental construction of a [`LabeledPetriNet`] by name.
#[derive(Debug, Default, Clone)]
pub struct NetBuilder {
    places: BTreeSet<String>,
    transitions: BTreeMap<String, Option<Activity>>,
    arcs: BTreeSet<(String, String)>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn place(&mut self, name: &str) -> Result<&mut Self> {
        if self.transitions.contains_key(name) {
            return Err(Error::InvalidNet(format!(
                "`{name}` is declared as both place and transition"
            )));
        }
        if !self.places.insert(name.to_string()) {
            return Err(Error::InvalidNet(format!("duplicate place `{name}`")));
        }
        Ok(self)
    }

    pub fn transition(&mut self, name: &str, label: Option<&str>) -> Result<&mut Self> {
        if self.places.contains(name) {
            return Err(Error::InvalidNet(format!(
                "`{name}` is declared as both place and transition"
            )));
        }
        if let Some(l) = label {
            if l.is_empty() {
                return Err(Error::InvalidNet(format!("empty label on `{name}`")));
            }
        }
        if self
            .transitions
            .insert(name.to_string(), label.map(Activity::from))
            .is_some()
        {
            return Err(Error::InvalidNet(format!("duplicate transition `{name}`")));
        }
        Ok(self)
    }

    pub fn arc(&mut self, from: &str, to: &str) -> Result<&mut Self> {
        if !self.arcs.insert((from.to_string(), to.to_string())) {
            return Err(Error::InvalidNet(format!("duplicate arc {from} -> {to}")));
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<LabeledPetriNet> {
        let places: Vec<String> = self.places.iter().cloned().collect();
        let index = |name: &str| places.binary_search_by(|p| p.as_str().cmp(name)).ok();
        let mut transitions: Vec<Transition> = self
            .transitions
            .iter()
            .map(|(name, label)| Transition {
                name: name.clone(),
                label: label.clone(),
                inputs: Vec::new(),
                outputs: Vec::new(),
            })
            .collect();
        let t_index = |name: &str| {
            transitions
                .binary_search_by(|t| t.name.as_str().cmp(name))
                .ok()
        };
        let mut wiring = Vec::with_capacity(self.arcs.len());
        for (from, to) in &self.arcs {
            match (index(from), t_index(to), t_index(from), index(to)) {
                (Some(p), Some(t), _, _) => wiring.push((t, PlaceId(p), true)),
                (_, _, Some(t), Some(p)) => wiring.push((t, PlaceId(p), false)),
                _ => {
                    return Err(Error::InvalidNet(format!(
                        "arc {from} -> {to} must connect a declared place and transition"
                    )))
                }
            }
        }
        for (t, p, is_input) in wiring {
            if is_input {
                transitions[t].inputs.push(p);
            } else {
                transitions[t].outputs.push(p);
            }
        }
        for t in &mut transitions {
            t.inputs.sort();
            t.outputs.sort();
        }
        Ok(LabeledPetriNet {
            places,
            transitions,
        })
    }
}

/// Token counts indexed by [`PlaceId`]; the dense vector is the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn empty(net: &LabeledPetriNet) -> Self {
        Marking(vec![0; net.places.len()])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Marking(counts)
    }

    pub fn from_pairs(net: &LabeledPetriNet, pairs: &[(&str, u32)]) -> Result<Self> {
        let mut m = Marking::empty(net);
        for (name, n) in pairs {
            let p = net
                .place_id(name)
                .ok_or_else(|| Error::InvalidMarking(format!("unknown place `{name}`")))?;
            m.0[p.0] += n;
        }
        Ok(m)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, p: PlaceId) -> u32 {
        self.0[p.0]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Sorted `(place, count)` pairs for non-zero places.
    pub fn pairs<'a>(&'a self, net: &'a LabeledPetriNet) -> Vec<(&'a str, u32)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (net.places[i].as_str(), c))
            .collect()
    }

    pub fn display<'a>(&'a self, net: &'a LabeledPetriNet) -> MarkingDisplay<'a> {
        MarkingDisplay { marking: self, net }
    }

    pub(crate) fn check(&self, net: &LabeledPetriNet) -> Result<()> {
        if self.0.len() != net.places.len() {
            return Err(Error::InvalidMarking(format!(
                "marking covers {} places, net has {}",
                self.0.len(),
                net.places.len()
            )));
        }
        Ok(())
    }
}

pub struct MarkingDisplay<'a> {
    marking: &'a Marking,
    net: &'a LabeledPetriNet,
}

impl fmt::Display for MarkingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .marking
            .pairs(self.net)
            .into_iter()
            .map(|(p, c)| if c == 1 { p.to_string() } else { format!("{p}={c}") })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A labeled net with an initial marking and a non-empty set of final markings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptingPetriNet {
    net: LabeledPetriNet,
    initial: Marking,
    finals: BTreeSet<Marking>,
}

impl AcceptingPetriNet {
    pub fn new(net: LabeledPetriNet, initial: Marking, finals: BTreeSet<Marking>) -> Result<Self> {
        initial.check(&net)?;
        if finals.is_empty() {
            return Err(Error::InvalidNet("at least one final marking is required".into()));
        }
        for m in &finals {
            m.check(&net)?;
        }
        Ok(AcceptingPetriNet {
            net,
            initial,
            finals,
        })
    }

    pub fn net(&self) -> &LabeledPetriNet {
        &self.net
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    pub fn finals(&self) -> &BTreeSet<Marking> {
        &self.finals
    }

    pub fn is_final(&self, m: &Marking) -> bool {
        self.finals.contains(m)
    }

    /// Transitions whose every input place holds a token.
    pub fn enabled(&self, m: &Marking) -> Result<Vec<TransitionId>> {
        m.check(&self.net)?;
        Ok(self.enabled_unchecked(m))
    }

    pub(crate) fn enabled_unchecked(&self, m: &Marking) -> Vec<TransitionId> {
        self.net
            .transition_ids()
            .filter(|t| self.is_enabled(m, *t))
            .collect()
    }

    pub(crate) fn is_enabled(&self, m: &Marking, t: TransitionId) -> bool {
        self.net.transitions[t.0]
            .inputs
            .iter()
            .all(|p| m.0[p.0] >= 1)
    }

    /// `m − •t + t•`.
    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking> {
        m.check(&self.net)?;
        if t.0 >= self.net.transitions.len() {
            return Err(Error::InvalidArgument(format!("no transition #{}", t.0)));
        }
        if !self.is_enabled(m, t) {
            return Err(Error::NotEnabled(self.net.transitions[t.0].name.clone()));
        }
        Ok(self.fire_unchecked(m, t))
    }

    pub(crate) fn fire_unchecked(&self, m: &Marking, t: TransitionId) -> Marking {
        let tr = &self.net.transitions[t.0];
        let mut next = m.0.clone();
        for p in &tr.inputs {
            next[p.0] -= 1;
        }
        for p in &tr.outputs {
            next[p.0] += 1;
        }
        Marking(next)
    }

    /// Syntactic workflow-net shape: one source place, one sink place, and
    /// every node on a path from source to sink.
    pub fn check_wf_shape(&self) -> Result<()> {
        let net = &self.net;
        let n_places = net.places.len();
        let sources: Vec<PlaceId> = (0..n_places)
            .map(PlaceId)
            .filter(|p| net.producers(*p).next().is_none())
            .collect();
        let sinks: Vec<PlaceId> = (0..n_places)
            .map(PlaceId)
            .filter(|p| net.consumers(*p).next().is_none())
            .collect();
        if sources.len() != 1 || sinks.len() != 1 {
            return Err(Error::Precondition(format!(
                "not a workflow net: {} source place(s) and {} sink place(s)",
                sources.len(),
                sinks.len()
            )));
        }
        // Nodes 0..P are places, P.. are transitions.
        let n = n_places + net.transitions.len();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for (i, t) in net.transitions.iter().enumerate() {
            for p in &t.inputs {
                fwd[p.0].push(n_places + i);
                bwd[n_places + i].push(p.0);
            }
            for p in &t.outputs {
                fwd[n_places + i].push(p.0);
                bwd[p.0].push(n_places + i);
            }
        }
        let reach = |start: usize, adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        };
        let from_source = reach(sources[0].0, &fwd);
        let to_sink = reach(sinks[0].0, &bwd);
        if let Some(i) = (0..n).find(|&i| !(from_source[i] && to_sink[i])) {
            let name = if i < n_places {
                net.places[i].clone()
            } else {
                net.transitions[i - n_places].name.clone()
            };
            return Err(Error::Precondition(format!(
                "not a workflow net: `{name}` is not on a source-to-sink path"
            )));
        }
        Ok(())
    }
}
