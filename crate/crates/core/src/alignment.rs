//! Optimal alignments of traces against accepting Petri nets.
//!
//! Search runs on the synchronous product of the trace and the reachability
//! graph. Alignments are ranked by `(cost, number of moves)`: among equal-cost
//! alignments the shorter one wins, which keeps τ-detours out of the result.
//! Remaining ties are broken by a move ordering (synchronous before model
//! before log moves, then by transition rank).

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::activity::Activity;
use crate::error::{Error, Result};
use crate::log::{EventLog, Trace};
use crate::petri::{explore, AcceptingPetriNet, ExploreLimits, Marking, StateGraph, TransitionId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Synchronous,
    Model,
    Log,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    /// Set for synchronous and log moves.
    pub activity: Option<Activity>,
    /// Set for synchronous and model moves.
    pub transition: Option<TransitionId>,
}

impl Move {
    pub fn sync(a: Activity, t: TransitionId) -> Self {
        Move { kind: MoveKind::Synchronous, activity: Some(a), transition: Some(t) }
    }

    pub fn log(a: Activity) -> Self {
        Move { kind: MoveKind::Log, activity: Some(a), transition: None }
    }

    pub fn model(t: TransitionId) -> Self {
        Move { kind: MoveKind::Model, activity: None, transition: Some(t) }
    }
}

/// Move costs. Synchronous moves and τ model moves always cost 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Costs {
    pub log_move: u64,
    pub model_move: u64,
}

impl Default for Costs {
    fn default() -> Self {
        Costs { log_move: 1, model_move: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    #[default]
    Lexicographic,
    /// Transition ranks are shuffled with the given seed.
    SeededRandom(u64),
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreak::Lexicographic => f.write_str("lexicographic"),
            TieBreak::SeededRandom(s) => write!(f, "seeded-random({s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alignment {
    pub moves: Vec<Move>,
    pub cost: u64,
    /// Model-side firing sequence γ, τ-transitions included.
    pub firing: Vec<TransitionId>,
    pub final_marking: Marking,
}

impl Alignment {
    /// Log-side projection; equals the aligned trace.
    pub fn log_projection(&self) -> Vec<Activity> {
        self.moves
            .iter()
            .filter(|m| m.kind != MoveKind::Model)
            .filter_map(|m| m.activity.clone())
            .collect()
    }

    pub fn is_fitting(&self) -> bool {
        self.moves.iter().all(|m| m.kind != MoveKind::Log) && self.cost == 0
    }

    pub fn render(&self, apn: &AcceptingPetriNet) -> String {
        let parts: Vec<String> = self
            .moves
            .iter()
            .map(|m| match m.kind {
                MoveKind::Synchronous => format!(
                    "({},{})",
                    m.activity.as_ref().map(Activity::as_str).unwrap_or(""),
                    apn.net().transition(m.transition.unwrap()).name
                ),
                MoveKind::Log => format!("({},>>)", m.activity.as_ref().unwrap()),
                MoveKind::Model => format!(">>,{}", apn.net().transition(m.transition.unwrap()).name),
            })
            .collect();
        parts.join(" ")
    }
}

/// `(cost, moves)` still needed to reach the goal.
type Dist = (u64, u64);
const INF: Dist = (u64::MAX, u64::MAX);

/// Reusable alignment engine for one net: the reachability graph is explored
/// once and shared across traces.
#[derive(Debug, Clone)]
pub struct Aligner<'a> {
    apn: &'a AcceptingPetriNet,
    graph: StateGraph,
    costs: Costs,
    product_cap: usize,
}

struct Step {
    mv: Move,
    cost: u64,
    to: usize,
}

impl<'a> Aligner<'a> {
    pub fn new(apn: &'a AcceptingPetriNet, costs: Costs, limits: ExploreLimits) -> Result<Self> {
        let graph = explore(apn, limits)?;
        if let Some(p) = graph.overflow_place() {
            return Err(Error::Unbounded {
                place: apn.net().place_name(p).to_string(),
                bound: limits.bound,
            });
        }
        Ok(Aligner { apn, graph, costs, product_cap: limits.state_cap.saturating_mul(16) })
    }

    pub fn net(&self) -> &AcceptingPetriNet {
        self.apn
    }

    pub fn graph(&self) -> &StateGraph {
        &self.graph
    }

    fn node(&self, s: usize, i: usize, n: usize) -> usize {
        s * (n + 1) + i
    }

    fn steps(&self, trace: &[Activity], node: usize, rank: &[usize]) -> Vec<Step> {
        let n = trace.len();
        let (s, i) = (node / (n + 1), node % (n + 1));
        let net = self.apn.net();
        let mut out = Vec::new();
        for &(t, d) in self.graph.successors(s) {
            match &net.transition(t).label {
                Some(a) if i < n && *a == trace[i] => out.push(Step {
                    mv: Move::sync(a.clone(), t),
                    cost: 0,
                    to: self.node(d, i + 1, n),
                }),
                _ => {}
            }
            let cost = if net.transition(t).is_silent() { 0 } else { self.costs.model_move };
            out.push(Step { mv: Move::model(t), cost, to: self.node(d, i, n) });
        }
        if i < n {
            out.push(Step { mv: Move::log(trace[i].clone()), cost: self.costs.log_move, to: self.node(s, i + 1, n) });
        }
        out.sort_by_key(|st| (st.mv.kind, st.mv.transition.map(|t| rank[t.0])));
        out
    }

    /// Distance of every product node to the goal, by Dijkstra on reversed edges.
    fn distances(&self, trace: &[Activity]) -> Result<Vec<Dist>> {
        let n = trace.len();
        let size = self.graph.num_states() * (n + 1);
        if size > self.product_cap {
            return Err(Error::Undecided(format!(
                "alignment product has {size} nodes, above the cap of {}",
                self.product_cap
            )));
        }
        let identity: Vec<usize> = (0..self.apn.net().transitions().len()).collect();
        let mut rev: Vec<Vec<(usize, u64)>> = vec![Vec::new(); size];
        for node in 0..size {
            for st in self.steps(trace, node, &identity) {
                rev[st.to].push((node, st.cost));
            }
        }
        let mut dist = vec![INF; size];
        let mut heap = BinaryHeap::new();
        for s in self.graph.accepting_states() {
            let g = self.node(s, n, n);
            dist[g] = (0, 0);
            heap.push(Reverse(((0u64, 0u64), g)));
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, c) in &rev[v] {
                let nd = (d.0 + c, d.1 + 1);
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        Ok(dist)
    }

    fn rank(&self, tiebreak: TieBreak) -> Vec<usize> {
        let count = self.apn.net().transitions().len();
        let mut order: Vec<usize> = (0..count).collect();
        if let TieBreak::SeededRandom(seed) = tiebreak {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut rank = vec![0; count];
        for (r, t) in order.into_iter().enumerate() {
            rank[t] = r;
        }
        rank
    }

    fn finish(&self, moves: Vec<Move>, cost: u64) -> Alignment {
        let firing: Vec<TransitionId> = moves.iter().filter_map(|m| m.transition).collect();
        let mut m = self.apn.initial().clone();
        for &t in &firing {
            m = self.apn.fire(&m, t).expect("alignment follows the reachability graph");
        }
        Alignment { moves, cost, firing, final_marking: m }
    }

    /// One optimal alignment, chosen by `tiebreak`.
    pub fn align(&self, trace: &[Activity], tiebreak: TieBreak) -> Result<Alignment> {
        let dist = self.distances(trace)?;
        let start = self.node(self.graph.initial(), 0, trace.len());
        if dist[start] == INF {
            return Err(Error::NoAlignment);
        }
        let rank = self.rank(tiebreak);
        let mut node = start;
        let mut moves = Vec::new();
        while dist[node] != (0, 0) {
            let d = dist[node];
            let st = self
                .steps(trace, node, &rank)
                .into_iter()
                .find(|st| dist[st.to] != INF && (dist[st.to].0 + st.cost, dist[st.to].1 + 1) == d)
                .expect("an optimal successor exists");
            moves.push(st.mv);
            node = st.to;
        }
        Ok(self.finish(moves, dist[start].0))
    }

    /// Every optimal alignment, in move order. More than `cap` is an error.
    pub fn all_optimal(&self, trace: &[Activity], cap: usize) -> Result<Vec<Alignment>> {
        let dist = self.distances(trace)?;
        let start = self.node(self.graph.initial(), 0, trace.len());
        if dist[start] == INF {
            return Err(Error::NoAlignment);
        }
        let rank = self.rank(TieBreak::Lexicographic);
        let mut found: Vec<Vec<Move>> = Vec::new();
        let mut path = Vec::new();
        self.enumerate(trace, start, &dist, &rank, &mut path, &mut found, cap)?;
        Ok(found.into_iter().map(|moves| self.finish(moves, dist[start].0)).collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        trace: &[Activity],
        node: usize,
        dist: &[Dist],
        rank: &[usize],
        path: &mut Vec<Move>,
        found: &mut Vec<Vec<Move>>,
        cap: usize,
    ) -> Result<()> {
        if dist[node] == (0, 0) {
            if found.len() >= cap {
                return Err(Error::EnumerationOverflow { cap });
            }
            found.push(path.clone());
            return Ok(());
        }
        let d = dist[node];
        for st in self.steps(trace, node, rank) {
            if dist[st.to] != INF && (dist[st.to].0 + st.cost, dist[st.to].1 + 1) == d {
                path.push(st.mv);
                self.enumerate(trace, st.to, dist, rank, path, found, cap)?;
                path.pop();
            }
        }
        Ok(())
    }
}

/// One optimal alignment of `trace` on `apn` with default exploration limits.
pub fn optimal_alignment(
    apn: &AcceptingPetriNet,
    trace: &[Activity],
    costs: Costs,
    tiebreak: TieBreak,
) -> Result<Alignment> {
    Aligner::new(apn, costs, ExploreLimits::default())?.align(trace, tiebreak)
}

pub fn all_optimal_alignments(
    apn: &AcceptingPetriNet,
    trace: &[Activity],
    costs: Costs,
    cap: usize,
) -> Result<Vec<Alignment>> {
    Aligner::new(apn, costs, ExploreLimits::default())?.all_optimal(trace, cap)
}

/// Aligns every distinct trace of the log. Multiplicities stay with the log.
pub fn align_log(
    apn: &AcceptingPetriNet,
    log: &EventLog,
    costs: Costs,
    tiebreak: TieBreak,
) -> Result<BTreeMap<Trace, Alignment>> {
    align_log_with(&Aligner::new(apn, costs, ExploreLimits::default())?, log, tiebreak)
}

pub fn align_log_with(
    aligner: &Aligner<'_>,
    log: &EventLog,
    tiebreak: TieBreak,
) -> Result<BTreeMap<Trace, Alignment>> {
    let traces: Vec<&Trace> = log.iter().map(|(t, _)| t).collect();
    traces
        .par_iter()
        .map(|t| aligner.align(t.activities(), tiebreak).map(|a| ((*t).clone(), a)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::seq;
    use crate::petri::parse_net;

    const CHOICE_LOOP: &str = "place p1 init=1\nplace p2\nplace p3\n\
        trans ta label=a\ntrans tb label=b\ntrans tc label=c\ntrans td label=d\n\
        arc p1 ta\narc ta p3\narc p3 tb\narc tb p1\narc p3 tc\narc tc p2\narc p3 td\narc td p2\nfinal p2=1\n";
    const A_STAR_B: &str = "place p1 init=1\nplace p2\ntrans ta label=a\ntrans tb label=b\n\
        arc p1 ta\narc ta p1\narc p1 tb\narc tb p2\nfinal p2=1\n";
    const DUPLICATES: &str = "place i init=1\nplace p1\nplace p2\nplace o\n\
        trans t1 label=a\ntrans t2 label=a\ntrans t3 label=b\ntrans t4 label=b\ntrans t5 label=b\n\
        arc i t1\narc t1 p1\narc i t2\narc t2 p2\narc p1 t3\narc t3 o\narc p2 t4\narc t4 o\narc p2 t5\narc t5 o\nfinal o=1\n";

    #[test]
    fn fitting_trace_is_all_synchronous() {
        let apn = parse_net(CHOICE_LOOP).unwrap();
        let al = optimal_alignment(&apn, &seq(&["a", "d"]), Costs::default(), TieBreak::Lexicographic).unwrap();
        assert_eq!(al.cost, 0);
        assert!(al.moves.iter().all(|m| m.kind == MoveKind::Synchronous));
        assert!(al.is_fitting());
        assert!(apn.is_final(&al.final_marking));
    }

    #[test]
    fn missing_b_costs_one_model_move() {
        let apn = parse_net(A_STAR_B).unwrap();
        let al = optimal_alignment(&apn, &seq(&["a"]), Costs::default(), TieBreak::Lexicographic).unwrap();
        assert_eq!(al.cost, 1);
        assert_eq!(al.moves.len(), 2);
        assert_eq!(al.moves[1].kind, MoveKind::Model);
        assert_eq!(al.log_projection(), seq(&["a"]));
        assert_eq!(al.render(&apn), "(a,ta) >>,tb");
    }

    #[test]
    fn log_moves_and_costs() {
        let apn = parse_net(A_STAR_B).unwrap();
        let costs = Costs { log_move: 5, model_move: 1 };
        let al = optimal_alignment(&apn, &seq(&["x", "b"]), costs, TieBreak::Lexicographic).unwrap();
        assert_eq!(al.cost, 5);
        assert_eq!(al.moves[0], Move::log("x".into()));
    }

    #[test]
    fn unique_alignment_for_fitting_choice() {
        let apn = parse_net(CHOICE_LOOP).unwrap();
        let all = all_optimal_alignments(&apn, &seq(&["a", "c"]), Costs::default(), 10).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn reversed_trace_has_four_optimal_alignments() {
        let apn = parse_net(CHOICE_LOOP).unwrap();
        let all = all_optimal_alignments(&apn, &seq(&["a", "b"]), Costs::default(), 10).unwrap();
        // (a,a) then {(b,>>), (>>,c|d)} in either order.
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|a| a.cost == 2 && a.moves.len() == 3));
        assert_eq!(
            all_optimal_alignments(&apn, &seq(&["a", "b"]), Costs::default(), 1),
            Err(Error::EnumerationOverflow { cap: 1 })
        );
    }

    #[test]
    fn duplicate_labels_give_seed_dependent_choices() {
        let apn = parse_net(DUPLICATES).unwrap();
        let all = all_optimal_alignments(&apn, &seq(&["a", "b"]), Costs::default(), 10).unwrap();
        assert_eq!(all.len(), 3);
        let aligner = Aligner::new(&apn, Costs::default(), ExploreLimits::default()).unwrap();
        let firings: std::collections::BTreeSet<Vec<TransitionId>> = (0..32)
            .map(|s| aligner.align(&seq(&["a", "b"]), TieBreak::SeededRandom(s)).unwrap().firing)
            .collect();
        assert!(firings.len() >= 2);
        let lex = aligner.align(&seq(&["a", "b"]), TieBreak::Lexicographic).unwrap();
        assert_eq!(apn.net().transition(lex.firing[0]).name, "t1");
    }

    #[test]
    fn unreachable_final_marking() {
        let apn = parse_net("place p init=1\nplace q\ntrans t label=a\narc p t\narc t p\nfinal q=1").unwrap();
        assert_eq!(
            optimal_alignment(&apn, &seq(&["a"]), Costs::default(), TieBreak::Lexicographic),
            Err(Error::NoAlignment)
        );
        assert_eq!(all_optimal_alignments(&apn, &[], Costs::default(), 4), Err(Error::NoAlignment));
    }

    #[test]
    fn silent_detours_are_not_preferred() {
        let apn = parse_net(
            "place p1 init=1\nplace p2\ntrans a label=a\ntrans t1\ntrans t2\n\
             arc p1 a\narc a p2\narc p1 t1\narc t1 p2\narc p2 t2\narc t2 p1\nfinal p2=1",
        )
        .unwrap();
        let all = all_optimal_alignments(&apn, &seq(&["a"]), Costs::default(), 10).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].firing.len(), 1);
    }

    #[test]
    fn align_log_preserves_traces() {
        let apn = parse_net(A_STAR_B).unwrap();
        let log = EventLog::from_pairs(&[(&["a", "b"], 3), (&["a"], 1)]);
        let out = align_log(&apn, &log, Costs::default(), TieBreak::Lexicographic).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[&Trace::from(&["a", "b"][..])].cost, 0);
        assert_eq!(out[&Trace::from(&["a"][..])].cost, 1);
    }

    #[test]
    fn unbounded_net_is_rejected() {
        let apn = parse_net("place p\ntrans g label=g\narc g p\nfinal p=1").unwrap();
        assert!(matches!(
            optimal_alignment(&apn, &seq(&["g"]), Costs::default(), TieBreak::Lexicographic),
            Err(Error::Unbounded { .. })
        ));
    }
}
