//! Behavioral appropriateness: the replay-based simple variant and the
//! relation-based advanced variant.

use std::collections::{BTreeSet, VecDeque};

use super::report::{PrecisionReport, Rational, Value};
use crate::activity::Activity;
use crate::alignment::{Aligner, Costs, MoveKind, TieBreak};
use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{language_dfa, AcceptingPetriNet, ExploreLimits};

/// Replays every trace along a cost-0 alignment and averages the number of
/// enabled visible transitions before each event. With `x̄` that average and
/// `|T_v|` the number of visible transitions the value is
/// `(|T_v| − x̄) / (|T_v| − 1)`.
pub fn simple_ba(log: &EventLog, apn: &AcceptingPetriNet, tiebreak: TieBreak) -> Result<PrecisionReport> {
    simple_ba_with(log, apn, tiebreak, ExploreLimits::default())
}

pub fn simple_ba_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    tiebreak: TieBreak,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    apn.check_wf_shape()?;
    let tv = apn.net().visible_transition_count() as i128;
    let mut report = PrecisionReport::undefined("simple-ba", "").option("tiebreak", tiebreak);
    report.diag("visible_transitions", tv);
    let aligner = Aligner::new(apn, Costs::default(), limits)?;
    let mut weighted = Rational::from_integer(0);
    let mut weight = 0i128;
    for (trace, n) in log.iter() {
        let al = aligner.align(trace.activities(), tiebreak)?;
        if al.cost != 0 {
            return Err(Error::Precondition(format!("trace {trace} does not fit the model")));
        }
        let mut m = apn.initial().clone();
        let (mut enabled_sum, mut events) = (0i128, 0i128);
        for mv in &al.moves {
            let t = mv.transition.expect("fitting alignments have model moves");
            if mv.kind == MoveKind::Synchronous {
                let en = apn.enabled(&m)?;
                enabled_sum += en.iter().filter(|&&u| !apn.net().transition(u).is_silent()).count() as i128;
                events += 1;
            }
            m = apn.fire(&m, t)?;
        }
        report.diag(format!("replay.{trace}"), format!("enabled={enabled_sum} events={events} {}", al.render(apn)));
        if events > 0 {
            weighted += Rational::new(enabled_sum, events) * Rational::from_integer(n as i128);
            weight += n as i128;
        }
    }
    if tv <= 1 {
        report.value = Value::Undefined { reason: format!("{tv} visible transition(s); normalization needs at least 2") };
        return Ok(report);
    }
    if weight == 0 {
        report.value = Value::Undefined { reason: "no events to replay".into() };
        return Ok(report);
    }
    let mean = weighted / Rational::from_integer(weight);
    report.diag("mean_enabled", mean);
    let tv = Rational::from_integer(tv);
    report.value = Value::Defined((tv - mean) / (tv - Rational::from_integer(1)));
    Ok(report)
}

/// Ordered activity pairs.
pub type PairSet = BTreeSet<(Activity, Activity)>;

/// Sometimes-follows and sometimes-precedes relations of a log and a model.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SometimesRelations {
    pub follows_log: PairSet,
    pub precedes_log: PairSet,
    pub follows_model: PairSet,
    pub precedes_model: PairSet,
}

/// Three-state pattern automata over `Σ`, total, with one accepting state.
#[derive(Clone, Copy)]
enum Pattern {
    /// Σ* x Σ* y Σ*
    Eventually,
    /// Σ* x (Σ∖{y})*: some x not eventually followed by y.
    XWithoutLaterY,
    /// (Σ∖{x})* y Σ*: some y not preceded by any x.
    YWithoutEarlierX,
}

impl Pattern {
    fn step(self, q: u8, a: &Activity, x: &Activity, y: &Activity) -> u8 {
        match self {
            Pattern::Eventually => match q {
                0 if a == x => 1,
                1 if a == y => 2,
                _ => q,
            },
            Pattern::XWithoutLaterY => {
                if a == x {
                    1
                } else if a == y {
                    0
                } else {
                    q
                }
            }
            Pattern::YWithoutEarlierX => match q {
                0 if a == y => 1,
                0 if a == x => 2,
                _ => q,
            },
        }
    }

    fn accepting(self, q: u8) -> bool {
        match self {
            Pattern::Eventually => q == 2,
            Pattern::XWithoutLaterY => q == 1,
            Pattern::YWithoutEarlierX => q == 1,
        }
    }
}

/// Whether some word of `dfa` matches the pattern for `(x, y)`.
fn exists(dfa: &Dfa, pattern: Pattern, x: &Activity, y: &Activity) -> bool {
    let mut seen = BTreeSet::from([(dfa.initial(), 0u8)]);
    let mut queue = VecDeque::from([(dfa.initial(), 0u8)]);
    while let Some((s, q)) = queue.pop_front() {
        if dfa.states()[s].accepting && pattern.accepting(q) {
            return true;
        }
        for (a, t) in dfa.outgoing(s) {
            let next = (t, pattern.step(q, a, x, y));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Pairs `(x, y)` over `sigma` that sometimes, but not always, follow
/// (resp. precede) each other in the language of `dfa`.
pub fn sometimes_relations(
    dfa: &Dfa,
    sigma: &BTreeSet<Activity>,
) -> (PairSet, PairSet) {
    let mut follows = BTreeSet::new();
    let mut precedes = BTreeSet::new();
    for x in sigma {
        for y in sigma {
            if !exists(dfa, Pattern::Eventually, x, y) {
                continue;
            }
            if exists(dfa, Pattern::XWithoutLaterY, x, y) {
                follows.insert((x.clone(), y.clone()));
            }
            if exists(dfa, Pattern::YWithoutEarlierX, x, y) {
                precedes.insert((x.clone(), y.clone()));
            }
        }
    }
    (follows, precedes)
}

fn show_pairs(pairs: &PairSet) -> String {
    let items: Vec<String> = pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
    format!("{{{}}}", items.join(","))
}

/// `|S_F^L ∩ S_F^M| / (2·|S_F^M|) + |S_P^L ∩ S_P^M| / (2·|S_P^M|)`, undefined
/// when either model relation is empty.
pub fn advanced_ba(log: &EventLog, apn: &AcceptingPetriNet, limits: ExploreLimits) -> Result<PrecisionReport> {
    apn.check_wf_shape()?;
    let model = language_dfa(apn, limits).map_err(|e| match e {
        Error::ExplorationOverflow { cap } => Error::Undecided(format!("state space exceeds {cap} markings")),
        other => other,
    })?;
    let mut sigma = apn.net().alphabet();
    sigma.extend(log.alphabet());
    let traces: Vec<Vec<Activity>> = log.iter().map(|(t, _)| t.activities().to_vec()).collect();
    let log_dfa = Dfa::from_words(sigma.iter().cloned(), traces.iter().map(Vec::as_slice));
    let (follows_model, precedes_model) = sometimes_relations(&model, &sigma);
    let (follows_log, precedes_log) = sometimes_relations(&log_dfa, &sigma);
    let rel = SometimesRelations { follows_log, precedes_log, follows_model, precedes_model };
    let mut report = PrecisionReport::undefined("advanced-ba", "").option("state_cap", limits.state_cap);
    report.diag("follows_log", show_pairs(&rel.follows_log));
    report.diag("precedes_log", show_pairs(&rel.precedes_log));
    report.diag("follows_model", show_pairs(&rel.follows_model));
    report.diag("precedes_model", show_pairs(&rel.precedes_model));
    let fm = rel.follows_model.len() as i128;
    let pm = rel.precedes_model.len() as i128;
    if fm == 0 || pm == 0 {
        report.value = Value::Undefined {
            reason: "the model has no sometimes-follows or no sometimes-precedes pairs".into(),
        };
        return Ok(report);
    }
    let f = rel.follows_log.intersection(&rel.follows_model).count() as i128;
    let p = rel.precedes_log.intersection(&rel.precedes_model).count() as i128;
    report.value = Value::Defined(Rational::new(f, 2 * fm) + Rational::new(p, 2 * pm));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::seq;
    use crate::corpus;
    use crate::log::parse_log;
    use crate::petri::{parse_net, wf_flower_model};

    const SEQ_ABC: &str = "place i init=1\nplace p\nplace q\nplace o\ntrans ta label=a\ntrans tb label=b\ntrans tc label=c\n\
        arc i ta\narc ta p\narc p tb\narc tb q\narc q tc\narc tc o\nfinal o=1";
    const DUPLICATES: &str = "place i init=1\nplace p1\nplace p2\nplace o\n\
        trans t1 label=a\ntrans t2 label=a\ntrans t3 label=b\ntrans t4 label=b\ntrans t5 label=b\n\
        arc i t1\narc t1 p1\narc i t2\narc t2 p2\narc p1 t3\narc t3 o\narc p2 t4\narc t4 o\narc p2 t5\narc t5 o\nfinal o=1\n";

    fn sigma(names: &[&str]) -> BTreeSet<Activity> {
        seq(names).into_iter().collect()
    }

    #[test]
    fn simple_ba_sequential_is_one() {
        let m = parse_net(SEQ_ABC).unwrap();
        let r = simple_ba(&parse_log("3x a,b,c").unwrap(), &m, TieBreak::Lexicographic).unwrap();
        assert_eq!(r.ratio(), Some(Rational::from_integer(1)));
    }

    #[test]
    fn simple_ba_flower_below_one() {
        let m = wf_flower_model(["a", "b", "c"]).unwrap();
        let r = simple_ba(&corpus::log("fig5_log").unwrap(), &m, TieBreak::Lexicographic).unwrap();
        // Three visible loops always enabled: x̄ = 3, (3 − 3)/(3 − 1) = 0.
        assert_eq!(r.ratio(), Some(Rational::from_integer(0)));
    }

    #[test]
    fn simple_ba_replay_path_depends_on_seed() {
        let m = parse_net(DUPLICATES).unwrap();
        let log = parse_log("1x a,b").unwrap();
        let values: BTreeSet<Rational> = (0..16)
            .map(|s| simple_ba(&log, &m, TieBreak::SeededRandom(s)).unwrap().ratio().unwrap())
            .collect();
        assert_eq!(values, BTreeSet::from([Rational::new(3, 4), Rational::new(7, 8)]));
    }

    #[test]
    fn simple_ba_preconditions() {
        let m = parse_net(SEQ_ABC).unwrap();
        assert!(matches!(
            simple_ba(&parse_log("1x a,c").unwrap(), &m, TieBreak::Lexicographic),
            Err(Error::Precondition(_))
        ));
        let not_wf = corpus::model("fig5a_flower").unwrap();
        assert!(matches!(
            simple_ba(&parse_log("1x a").unwrap(), &not_wf, TieBreak::Lexicographic),
            Err(Error::Precondition(_))
        ));
        let single = parse_net("place i init=1\nplace o\ntrans ta label=a\narc i ta\narc ta o\nfinal o=1").unwrap();
        assert!(!simple_ba(&parse_log("1x a").unwrap(), &single, TieBreak::Lexicographic).unwrap().value.is_defined());
    }

    #[test]
    fn relation_oracle_on_small_languages() {
        // {ab, ba}: a sometimes follows... b follows a in ab only.
        let d = Dfa::from_words(seq(&["a", "b"]), [seq(&["a", "b"]), seq(&["b", "a"])].iter().map(Vec::as_slice));
        let (f, p) = sometimes_relations(&d, &sigma(&["a", "b"]));
        let ab = (Activity::from("a"), Activity::from("b"));
        let ba = (Activity::from("b"), Activity::from("a"));
        assert_eq!(f, BTreeSet::from([ab.clone(), ba.clone()]));
        assert_eq!(p, BTreeSet::from([ab, ba]));
        let only = Dfa::from_words(seq(&["a", "b"]), [seq(&["a", "b"])].iter().map(Vec::as_slice));
        let (f, p) = sometimes_relations(&only, &sigma(&["a", "b"]));
        assert!(f.is_empty() && p.is_empty());
    }

    #[test]
    fn advanced_ba_undefined_on_sequence() {
        let m = parse_net(SEQ_ABC).unwrap();
        let r = advanced_ba(&parse_log("1x a,b,c").unwrap(), &m, ExploreLimits::default()).unwrap();
        assert!(!r.value.is_defined());
    }

    #[test]
    fn advanced_ba_loop_equals_flower() {
        let m = corpus::model("fig2_loop_wfnet").unwrap();
        let f = wf_flower_model(["a", "b", "c", "d"]).unwrap();
        for text in ["1x a,c", "1x a,c,b,d", "2x a,c\n1x b,d,b,c,a,d"] {
            let log = parse_log(text).unwrap();
            let x = advanced_ba(&log, &m, ExploreLimits::default()).unwrap();
            let y = advanced_ba(&log, &f, ExploreLimits::default()).unwrap();
            assert!(x.value.is_defined());
            assert_eq!(x.value, y.value, "{text}");
        }
    }

    #[test]
    fn advanced_ba_matching_relations_is_one() {
        let m = corpus::model("fig2_loop_wfnet").unwrap();
        let rich = parse_log("1x a,c\n1x b,d\n1x a,c,a,c\n1x b,d,b,d\n1x a,d,b,c\n1x b,c,a,d\n1x a,c,b,c\n1x b,d,a,d").unwrap();
        let r = advanced_ba(&rich, &m, ExploreLimits::default()).unwrap();
        assert_eq!(r.ratio(), Some(Rational::from_integer(1)));
    }
}
