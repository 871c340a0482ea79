//! Weighted negative-event precision.
//!
//! At every event position of a fitting log, windows of the preceding `k`
//! events (`k = 1..=max_window`) are matched against the whole log. An
//! activity that never directly follows any match of a window is a negative
//! event for that window, with confidence `k / max_window`.
//!
//! The replayed model marking before the event yields the enabled visible
//! activities (τ-closed). An enabled activity seen after some matching window
//! (or any activity at a position without history) is a true positive with
//! weight 1. For the windows longer than the longest one it was seen after, it
//! is an induced negative and adds `k / max_window` per such window to the
//! false positives. Enabled activities absent from the log add 1 each. The
//! value is `TP / (TP + FP)`.
//!
//! In sampled mode every window match is kept with probability 1/2 using a
//! seeded generator, so fewer followers are seen and more negatives arise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{PrecisionReport, Rational, Value};
use crate::activity::Activity;
use crate::alignment::{Aligner, Costs, MoveKind, TieBreak};
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{AcceptingPetriNet, ExploreLimits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NegativeMode {
    /// Every window match is used.
    #[default]
    Deterministic,
    /// Matches are subsampled with the given seed.
    Sampled(u64),
}

impl fmt::Display for NegativeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegativeMode::Deterministic => f.write_str("deterministic"),
            NegativeMode::Sampled(seed) => write!(f, "sampled({seed})"),
        }
    }
}

pub const DEFAULT_MAX_WINDOW: usize = 5;

struct Position {
    trace: usize,
    index: usize,
    enabled: BTreeSet<Activity>,
}

pub fn negative_event_precision(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    max_window: usize,
    mode: NegativeMode,
) -> Result<PrecisionReport> {
    negative_event_precision_with(log, apn, max_window, mode, ExploreLimits::default())
}

pub fn negative_event_precision_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    max_window: usize,
    mode: NegativeMode,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    if max_window == 0 {
        return Err(Error::InvalidArgument("max_window must be at least 1".into()));
    }
    let aligner = Aligner::new(apn, Costs::default(), limits)?;
    let graph = aligner.graph();
    let traces: Vec<(Vec<Activity>, u64)> = log.iter().map(|(t, n)| (t.activities().to_vec(), n)).collect();

    let mut positions = Vec::new();
    for (ti, (trace, _)) in traces.iter().enumerate() {
        let al = aligner.align(trace, TieBreak::Lexicographic)?;
        if al.cost != 0 {
            return Err(Error::Precondition(format!(
                "trace {} does not fit the model",
                crate::activity::show_seq(trace)
            )));
        }
        let mut m = apn.initial().clone();
        let mut index = 0;
        for mv in &al.moves {
            let t = mv.transition.expect("fitting alignments have model moves");
            if mv.kind == MoveKind::Synchronous {
                let s = graph.state_of(&m).expect("replayed markings are reachable");
                let closure = graph.silent_closure(apn, &BTreeSet::from([s]));
                let enabled = graph.enabled_activities(apn, &closure);
                positions.push(Position { trace: ti, index, enabled });
                index += 1;
            }
            m = apn.fire(&m, t)?;
        }
    }

    let alphabet = log.alphabet();
    let mut rng = match mode {
        NegativeMode::Sampled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        NegativeMode::Deterministic => None,
    };
    let mut tp = Rational::from_integer(0);
    let mut fp = Rational::from_integer(0);
    let mut supported = 0u64;
    for pos in &positions {
        let trace = &traces[pos.trace].0;
        let usable = pos.index.min(max_window);
        // Window size → activities following some (kept) match.
        let mut followers: BTreeMap<usize, BTreeSet<&Activity>> = BTreeMap::new();
        for k in 1..=usable {
            let window = &trace[pos.index - k..pos.index];
            let set = followers.entry(k).or_default();
            for (u, _) in &traces {
                for j in k..u.len() {
                    if &u[j - k..j] == window {
                        let keep = match rng.as_mut() {
                            Some(r) => r.gen_bool(0.5),
                            None => true,
                        };
                        if keep {
                            set.insert(&u[j]);
                        }
                    }
                }
            }
        }
        for a in &pos.enabled {
            if !alphabet.contains(a) {
                fp += Rational::from_integer(1);
                continue;
            }
            // Longest window after which `a` was seen; every longer one induces `a` as negative.
            let kstar = (1..=usable).rev().find(|k| followers[k].contains(a)).unwrap_or(0);
            if kstar >= 1 || usable == 0 {
                tp += Rational::from_integer(1);
                supported += 1;
            }
            let negative_weight: usize = (kstar + 1..=usable).sum();
            fp += Rational::new(negative_weight as i128, max_window as i128);
        }
    }
    let mut report = PrecisionReport::undefined("negative-event", "")
        .option("max_window", max_window)
        .option("mode", mode);
    report.diag("positions", positions.len());
    report.diag("true_positives", tp);
    report.diag("false_positives", fp);
    report.diag("supported_activities", supported);
    report.value = if tp + fp == Rational::from_integer(0) {
        Value::Undefined { reason: "the model enables no activity at any replayed position".into() }
    } else {
        Value::Defined(tp / (tp + fp))
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::parse_log;
    use crate::petri::{flower_model, parse_net};

    #[test]
    fn exact_model_scores_one() {
        let m = parse_net("place i init=1\nplace p\nplace o\ntrans ta label=a\ntrans tb label=b\narc i ta\narc ta p\narc p tb\narc tb o\nfinal o=1").unwrap();
        let r = negative_event_precision(&parse_log("2x a,b").unwrap(), &m, 5, NegativeMode::Deterministic).unwrap();
        assert_eq!(r.ratio(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn flower_on_single_event_log() {
        let m = flower_model(["a", "b"]).unwrap();
        let r = negative_event_precision(&parse_log("1x a").unwrap(), &m, 5, NegativeMode::Deterministic).unwrap();
        // One position with no history: a is positive; b never occurs in the log.
        assert_eq!(r.ratio(), Some(Rational::new(1, 2)));
    }

    #[test]
    fn rejects_unfit_and_zero_window() {
        let m = flower_model(["a"]).unwrap();
        assert!(matches!(
            negative_event_precision(&parse_log("1x b").unwrap(), &m, 5, NegativeMode::Deterministic),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            negative_event_precision(&parse_log("1x a").unwrap(), &m, 0, NegativeMode::Deterministic),
            Err(Error::InvalidArgument(_))
        ));
    }
}
