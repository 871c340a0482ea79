//! Escaping-edges precision on prefix automata: the plain variant over log
//! prefixes and the alignment-based variants over model firing sequences.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::report::{PrecisionReport, Rational, Value};
use crate::activity::show_seq;
use crate::alignment::{Aligner, Costs, TieBreak};
use crate::automata::{build_prefix_automaton, PrefixAutomaton, PrefixNode};
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{AcceptingPetriNet, ExploreLimits, ModelLanguage, TransitionId};

/// State weights for the alignment automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Weighting {
    /// Number of times a state is visited.
    #[default]
    Visits,
    /// Number of events observed while in a state (visits that do not end there).
    Events,
}

impl Weighting {
    fn weight<S>(self, node: &PrefixNode<S>) -> u64 {
        match self {
            Weighting::Visits => node.visits,
            Weighting::Events => node.events(),
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Visits => "visits",
            Weighting::Events => "events",
        })
    }
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "visits" => Ok(Weighting::Visits),
            "events" => Ok(Weighting::Events),
            other => Err(Error::InvalidArgument(format!("unknown weighting `{other}`"))),
        }
    }
}

struct Tally {
    num: i128,
    den: i128,
}

impl Tally {
    fn new() -> Self {
        Tally { num: 0, den: 0 }
    }

    fn add(&mut self, w: i128, allowed: usize, non_escaping: usize) {
        self.num += w * non_escaping as i128;
        self.den += w * allowed as i128;
    }

    fn finish(self, mut report: PrecisionReport) -> PrecisionReport {
        report.diag("numerator", self.num);
        report.diag("denominator", self.den);
        if self.den == 0 {
            report.value = Value::Undefined { reason: "the model allows no behavior on any weighted state".into() };
        } else {
            report.value = Value::Defined(Rational::new(self.num, self.den));
        }
        report
    }
}

/// Escaping-edges precision of a fitting log: each log prefix is weighted by
/// how often it is visited; the model's allowed activities after the prefix
/// are compared with those observed in the log.
pub fn etc_precision(log: &EventLog, apn: &AcceptingPetriNet) -> Result<PrecisionReport> {
    etc_precision_with(log, apn, ExploreLimits::default())
}

pub fn etc_precision_with(log: &EventLog, apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<PrecisionReport> {
    let lang = ModelLanguage::new(apn, limits)?;
    if let Some(t) = lang.first_unfit(log) {
        return Err(Error::Precondition(format!("trace {t} does not fit the model")));
    }
    let pa = build_prefix_automaton(log);
    let mut report = PrecisionReport::undefined("etc", "").option("weighting", Weighting::Visits);
    let mut tally = Tally::new();
    for (i, s) in pa.bfs_order().into_iter().enumerate() {
        let node = &pa.nodes()[s];
        let prefix = pa.prefix(s);
        let states = lang.graph.after(apn, &prefix);
        let allowed = lang.graph.enabled_activities(apn, &states);
        let observed: BTreeSet<_> = node.children.keys().cloned().collect();
        let non_escaping = allowed.intersection(&observed).count();
        tally.add(node.visits as i128, allowed.len(), non_escaping);
        report.diag(
            format!("state.{i:04}"),
            format!(
                "prefix={} weight={} allowed={} escaping={}",
                show_seq(&prefix),
                node.visits,
                allowed.len(),
                allowed.len() - non_escaping
            ),
        );
    }
    Ok(tally.finish(report))
}

fn alignment_tally(
    apn: &AcceptingPetriNet,
    pa: &PrefixAutomaton<TransitionId>,
    weighting: Weighting,
    report: &mut PrecisionReport,
) -> Tally {
    let mut tally = Tally::new();
    for (i, s) in pa.bfs_order().into_iter().enumerate() {
        let node = &pa.nodes()[s];
        let firing = pa.prefix(s);
        let mut m = apn.initial().clone();
        for &t in &firing {
            m = apn.fire(&m, t).expect("alignment firing sequences are executable");
        }
        let allowed: BTreeSet<TransitionId> = apn.enabled(&m).expect("marking of this net").into_iter().collect();
        let non_escaping = node.children.keys().filter(|t| allowed.contains(t)).count();
        let w = weighting.weight(node);
        tally.add(w as i128, allowed.len(), non_escaping);
        let names: Vec<&str> = firing.iter().map(|&t| apn.net().transition(t).name.as_str()).collect();
        report.diag(
            format!("state.{i:04}"),
            format!(
                "firing=⟨{}⟩ weight={w} allowed={} escaping={}",
                names.join(","),
                allowed.len(),
                allowed.len() - non_escaping
            ),
        );
    }
    tally
}

/// Escaping-edges precision on the automaton of model firing sequences taken
/// from one optimal alignment per trace. τ-firings are automaton steps.
pub fn one_align_etc(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    weighting: Weighting,
    tiebreak: TieBreak,
) -> Result<PrecisionReport> {
    one_align_etc_with(log, apn, weighting, tiebreak, ExploreLimits::default())
}

pub fn one_align_etc_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    weighting: Weighting,
    tiebreak: TieBreak,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    let aligner = Aligner::new(apn, Costs::default(), limits)?;
    let mut pa = PrefixAutomaton::new();
    let mut report = PrecisionReport::undefined("one-align-etc", "")
        .option("weighting", weighting)
        .option("tiebreak", tiebreak);
    for (trace, n) in log.iter() {
        let al = aligner.align(trace.activities(), tiebreak)?;
        report.diag(format!("alignment.{trace}"), format!("cost={} {}", al.cost, al.render(apn)));
        pa.insert(&al.firing, n);
    }
    let tally = alignment_tally(apn, &pa, weighting, &mut report);
    Ok(tally.finish(report))
}

/// Like [`one_align_etc`], but every optimal alignment of a trace contributes
/// with an equal share of the trace's multiplicity.
pub fn all_align_etc(log: &EventLog, apn: &AcceptingPetriNet, cap: usize) -> Result<PrecisionReport> {
    all_align_etc_with(log, apn, cap, ExploreLimits::default())
}

pub fn all_align_etc_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    cap: usize,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    let aligner = Aligner::new(apn, Costs::default(), limits)?;
    let mut report = PrecisionReport::undefined("all-align-etc", "").option("cap", cap);
    let mut per_trace = Vec::new();
    for (trace, n) in log.iter() {
        let all = aligner.all_optimal(trace.activities(), cap)?;
        report.diag(format!("alignments.{trace}"), all.len());
        per_trace.push((all, n));
    }
    // Integer weights: scale every share by the lcm of the alignment counts.
    let scale = per_trace.iter().fold(1u64, |acc, (all, _)| acc.lcm(&(all.len() as u64)));
    let mut pa = PrefixAutomaton::new();
    for (all, n) in &per_trace {
        let share = n * (scale / all.len() as u64);
        for al in all {
            pa.insert(&al.firing, share);
        }
    }
    let tally = alignment_tally(apn, &pa, Weighting::Visits, &mut report);
    report.diag("weight_scale", scale);
    Ok(tally.finish(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::log::parse_log;

    fn r(n: i128, d: i128) -> Option<Rational> {
        Some(Rational::new(n, d))
    }

    #[test]
    fn etc_on_two_trace_log() {
        let rep = etc_precision(&corpus::log("fig4_log_l1").unwrap(), &corpus::model("fig4_model").unwrap()).unwrap();
        assert_eq!(rep.ratio(), r(6, 8));
    }

    #[test]
    fn etc_full_language_is_one() {
        let m = corpus::model("fig7b_unrolled").unwrap();
        let log = parse_log("1x b\n1x a,b\n1x a,a,b").unwrap();
        assert_eq!(etc_precision(&log, &m).unwrap().ratio(), r(1, 1));
    }

    #[test]
    fn etc_rejects_unfit_logs() {
        let m = corpus::model("fig7a_loop").unwrap();
        assert!(matches!(etc_precision(&parse_log("1x a").unwrap(), &m), Err(Error::Precondition(_))));
    }

    #[test]
    fn one_align_on_flowers() {
        let log = corpus::log("fig5_log").unwrap();
        let val = |name: &str| {
            one_align_etc(&log, &corpus::model(name).unwrap(), Weighting::Visits, TieBreak::Lexicographic)
                .unwrap()
                .ratio()
        };
        assert_eq!(val("fig5a_flower"), r(1, 3));
        assert_eq!(val("fig5b_flower_tau"), r(11, 21));
        assert_eq!(val("fig5c_constrained"), r(4, 9));
    }

    #[test]
    fn one_align_matches_etc_without_silent_steps() {
        let m = corpus::model("fig4_model").unwrap();
        for name in ["fig4_log_l1", "fig4_log_l2"] {
            let log = corpus::log(name).unwrap();
            let a = one_align_etc(&log, &m, Weighting::Visits, TieBreak::Lexicographic).unwrap();
            let b = etc_precision(&log, &m).unwrap();
            assert_eq!(a.ratio(), b.ratio(), "{name}");
        }
        let l2 = corpus::log("fig4_log_l2").unwrap();
        assert_eq!(etc_precision(&l2, &m).unwrap().ratio(), r(5, 7));
    }

    #[test]
    fn events_weighting_ignores_terminal_visits() {
        let m = corpus::model("fig5a_flower").unwrap();
        let log = corpus::log("fig5_log").unwrap();
        let rep = one_align_etc(&log, &m, Weighting::Events, TieBreak::Lexicographic).unwrap();
        // The final state is dropped: 5 of 14.
        assert_eq!(rep.ratio(), r(5, 14));
    }

    #[test]
    fn all_align_agrees_when_unique() {
        let m = corpus::model("fig4_model").unwrap();
        let log = corpus::log("fig4_log_l1").unwrap();
        assert_eq!(all_align_etc(&log, &m, 16).unwrap().ratio(), r(3, 4));
    }

    #[test]
    fn all_align_overflow() {
        let m = corpus::model("fig4_model").unwrap();
        let log = parse_log("1x a,b").unwrap();
        assert_eq!(all_align_etc(&log, &m, 1), Err(Error::EnumerationOverflow { cap: 1 }));
    }

    #[test]
    fn weighting_parses() {
        assert_eq!("events".parse::<Weighting>().unwrap(), Weighting::Events);
        assert!("other".parse::<Weighting>().is_err());
    }
}
