//! Embedded models and logs used by the counterexample suite, plus the
//! reference values they are expected to produce.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::activity::Activity;
use crate::error::{Error, Result};
use crate::log::{parse_log, EventLog, Trace};
use crate::petri::{parse_net, AcceptingPetriNet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    Model,
    Log,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryKind::Model => "model",
            EntryKind::Log => "log",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            EntryKind::Model => "net",
            EntryKind::Log => "log",
        }
    }
}

/// A value a measure is expected to produce on a corpus (log, model) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expected {
    /// Measure identifier as accepted by the command line.
    pub measure: &'static str,
    pub model: &'static str,
    /// Subset size for the projected measure.
    pub k: Option<usize>,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    /// Net DSL or log text.
    pub payload: &'static str,
    pub provenance: &'static str,
    /// Only log entries carry expected values.
    pub expected: &'static [Expected],
}

impl CorpusEntry {
    pub fn file_name(&self) -> String {
        format!("{}.{}", self.name, self.kind.extension())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusItem {
    Model(AcceptingPetriNet),
    Log(EventLog),
}

const FIG2_LOOP_WFNET: &str = "\
# Workflow net whose loop relates every pair of activities in both orders.
place p0 init=1
place p1
place p2
place p3
place p4
trans t_start
trans ta label=a
trans tb label=b
trans tc label=c
trans td label=d
trans t_redo
trans t_end
arc p0 t_start
arc t_start p1
arc p1 ta
arc ta p2
arc p1 tb
arc tb p2
arc p2 tc
arc tc p3
arc p2 td
arc td p3
arc p3 t_redo
arc t_redo p1
arc p3 t_end
arc t_end p4
final p4=1
";

const FIG4_MODEL: &str = "\
# a, then any number of (b,a), then a choice between c and d.
place p1 init=1
place p2
place p3
trans ta label=a
trans tb label=b
trans tc label=c
trans td label=d
arc p1 ta
arc ta p3
arc p3 tb
arc tb p1
arc p3 tc
arc tc p2
arc p3 td
arc td p2
final p2=1
";

const FIG5A_FLOWER: &str = "\
# Flower over {a,b,c} built from a two-place cycle with silent routing.
place p1 init=1
place p2
trans ta label=a
trans tb label=b
trans tc label=c
trans t1
trans t2
arc p1 ta
arc ta p2
arc p1 tb
arc tb p2
arc p1 tc
arc tc p2
arc p1 t1
arc t1 p2
arc p2 t2
arc t2 p1
final p2=1
";

const FIG5B_FLOWER_TAU: &str = "\
# Flower over {a,b,c} as a four-place cycle, each activity skippable.
place p1 init=1
place p2
place p3
place p4
trans tc label=c
trans t1
trans tb label=b
trans t2
trans ta label=a
trans t3
trans t4
arc p1 tc
arc tc p2
arc p1 t1
arc t1 p2
arc p2 tb
arc tb p3
arc p2 t2
arc t2 p3
arc p3 ta
arc ta p4
arc p3 t3
arc t3 p4
arc p4 t4
arc t4 p1
final p4=1
";

const FIG5C_CONSTRAINED: &str = "\
# a first, then any sequence over {b,c}.
place p1 init=1
place p2
place p3
trans ta label=a
trans tb label=b
trans tc label=c
trans t1
trans t2
arc p1 ta
arc ta p2
arc p2 tb
arc tb p3
arc p2 tc
arc tc p3
arc p2 t1
arc t1 p3
arc p3 t2
arc t2 p2
final p3=1
";

const FIG6_M1: &str = "\
# Choice a/b, three parallel length-one loops c, d, e, then choice f/g.
place p1 init=1
place p2
place p3
place p4
place p5
place p6
place p7
place p8
place p9
place p10
trans ta label=a
trans tb label=b
trans t_split
trans tc label=c
trans tc_back
trans td label=d
trans td_back
trans te label=e
trans te_back
trans t_join
trans tf label=f
trans tg label=g
arc p1 ta
arc ta p2
arc p1 tb
arc tb p2
arc p2 t_split
arc t_split p3
arc t_split p5
arc t_split p6
arc p5 tc
arc tc p7
arc p7 tc_back
arc tc_back p5
arc p3 td
arc td p4
arc p4 td_back
arc td_back p3
arc p6 te
arc te p8
arc p8 te_back
arc te_back p6
arc p4 t_join
arc p7 t_join
arc p8 t_join
arc t_join p9
arc p9 tf
arc tf p10
arc p9 tg
arc tg p10
final p10=1
";

const FIG6_M2_EXTRA: &str = "\
# Long-term dependencies: a enables only f, b enables only g.
place p11
place p12
arc ta p11
arc p11 tf
arc tb p12
arc p12 tg
";

const FIG7A_LOOP: &str = "\
# a*b
place p1 init=1
place p2
trans ta label=a
trans tb label=b
arc p1 ta
arc ta p1
arc p1 tb
arc tb p2
final p2=1
";

const FIG7B_UNROLLED: &str = "\
# a*b unrolled up to two a's.
place p1 init=1
place p2
place p3
place p4
trans ta1 label=a
trans ta2 label=a
trans tb1 label=b
trans tb2 label=b
trans tb3 label=b
arc p1 ta1
arc ta1 p2
arc p2 ta2
arc ta2 p3
arc p1 tb1
arc tb1 p4
arc p2 tb2
arc tb2 p4
arc p3 tb3
arc tb3 p4
final p4=1
";

const FIG8_FLOWER: &str = "\
# Single place, one self-loop per activity.
place p1 init=1
trans ta label=a
trans tb label=b
trans tc label=c
arc p1 ta
arc ta p1
arc p1 tb
arc tb p1
arc p1 tc
arc tc p1
final p1=1
";

/// Seed of the embedded fig6 log; see [`generate_fig6_log`].
pub const FIG6_TEMPLATE_SEED: u64 = 2017;

const FIG6_LOG_TEMPLATE: &str = include_str!("corpus/fig6_log_template.log");

const E4_L1: &[Expected] = &[
    Expected { measure: "etc", model: "fig4_model", k: None, value: 0.75, tolerance: 0.0 },
    Expected { measure: "one-align-etc", model: "fig4_model", k: None, value: 0.75, tolerance: 0.0 },
];
const E4_L2: &[Expected] = &[
    Expected { measure: "etc", model: "fig4_model", k: None, value: 0.7143, tolerance: 0.0001 },
    Expected { measure: "one-align-etc", model: "fig4_model", k: None, value: 0.7143, tolerance: 0.0001 },
];
const E5: &[Expected] = &[
    Expected { measure: "one-align-etc", model: "fig5a_flower", k: None, value: 0.3333, tolerance: 0.0001 },
    Expected { measure: "one-align-etc", model: "fig5b_flower_tau", k: None, value: 0.5238, tolerance: 0.0001 },
    Expected { measure: "one-align-etc", model: "fig5c_constrained", k: None, value: 0.4444, tolerance: 0.0001 },
];
const E6: &[Expected] = &[
    Expected { measure: "negative-event", model: "fig6_m1", k: None, value: 0.4744, tolerance: 0.05 },
    Expected { measure: "negative-event", model: "fig6_m2", k: None, value: 0.4640, tolerance: 0.05 },
];
const E7: &[Expected] = &[
    Expected { measure: "pcc", model: "fig7a_loop", k: Some(2), value: 0.6, tolerance: 0.0001 },
    Expected { measure: "pcc", model: "fig7b_unrolled", k: Some(2), value: 0.5, tolerance: 0.0001 },
];
const E8_L1: &[Expected] = &[
    Expected { measure: "pcc", model: "fig8_flower", k: Some(3), value: 0.3125, tolerance: 0.0001 },
];
const E8_L2: &[Expected] = &[
    Expected { measure: "pcc", model: "fig8_flower", k: Some(3), value: 0.2727, tolerance: 0.0005 },
];

const fn model_entry(name: &'static str, payload: &'static str, provenance: &'static str) -> CorpusEntry {
    CorpusEntry { name, kind: EntryKind::Model, payload, provenance, expected: &[] }
}

const fn log_entry(
    name: &'static str,
    payload: &'static str,
    provenance: &'static str,
    expected: &'static [Expected],
) -> CorpusEntry {
    CorpusEntry { name, kind: EntryKind::Log, payload, provenance, expected }
}

static ENTRIES: &[CorpusEntry] = &[
    model_entry("fig2_loop_wfnet", FIG2_LOOP_WFNET, "loop workflow net for the behavioral appropriateness A3 counterexample"),
    model_entry("fig4_model", FIG4_MODEL, "choice-loop model for the escaping-edges example"),
    log_entry("fig4_log_l1", "1x a,c\n1x a,d\n", "two-trace log L1 on the choice-loop model", E4_L1),
    log_entry(
        "fig4_log_l2",
        "1x a,c\n1x a,d\n1x a,b,a,b,a,b,a,b,a,c\n",
        "L1 extended with one long looping trace",
        E4_L2,
    ),
    model_entry("fig5a_flower", FIG5A_FLOWER, "two-place flower over {a,b,c}"),
    model_entry("fig5b_flower_tau", FIG5B_FLOWER_TAU, "four-place flower over {a,b,c} with skips"),
    model_entry("fig5c_constrained", FIG5C_CONSTRAINED, "model requiring a first, then any sequence over {b,c}"),
    log_entry("fig5_log", "1x a,b,c\n", "single trace for the flower comparisons", E5),
    model_entry("fig6_m1", FIG6_M1, "parallel length-one loops without long-term dependencies"),
    model_entry("fig6_m2", "", "fig6_m1 plus the a-f and b-g long-term dependency places"),
    log_entry("fig6_log_template", FIG6_LOG_TEMPLATE, "ten traces sampled from fig6_m2", E6),
    model_entry("fig7a_loop", FIG7A_LOOP, "length-one loop a*b"),
    model_entry("fig7b_unrolled", FIG7B_UNROLLED, "unrolled loop accepting b, ab, aab"),
    log_entry("fig7_log", "1x a,b\n", "single trace for the PCC A2 counterexample", E7),
    model_entry("fig8_flower", FIG8_FLOWER, "single-place flower over {a,b,c}"),
    log_entry("fig8_log_l1", "1x b,a,c\n1x a,a,c\n", "two short traces on the flower", E8_L1),
    log_entry(
        "fig8_log_l2",
        "1x b,a,c\n1x a,a,c\n1x a,b,b,b,b,b,b,b,b,b,b,b,b,b,b,b\n1x b,a,a,a,a,a,a,a,a,a,a,a,a,a,a,a\n",
        "L1 plus two long repetitive traces",
        E8_L2,
    ),
    log_entry("sec2_example_log", "2x a,b,c\n3x b,a,c\n", "introductory example log", &[]),
];

/// Names of all embedded entries, in corpus order.
pub fn list_entries() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn entries() -> &'static [CorpusEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> Result<&'static CorpusEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownCorpusEntry(name.to_string()))
}

/// Payload text of an entry, with composed models expanded.
pub fn payload(name: &str) -> Result<String> {
    let e = entry(name)?;
    Ok(if e.name == "fig6_m2" {
        let base = FIG6_M1.replace("final p10=1\n", "");
        format!("{base}{FIG6_M2_EXTRA}final p10=1\n")
    } else {
        e.payload.to_string()
    })
}

pub fn get(name: &str) -> Result<CorpusItem> {
    let e = entry(name)?;
    let text = payload(name)?;
    Ok(match e.kind {
        EntryKind::Model => CorpusItem::Model(parse_net(&text)?),
        EntryKind::Log => CorpusItem::Log(parse_log(&text)?),
    })
}

pub fn model(name: &str) -> Result<AcceptingPetriNet> {
    match get(name)? {
        CorpusItem::Model(m) => Ok(m),
        CorpusItem::Log(_) => Err(Error::CorpusKind { name: name.into(), expected: "model", actual: "log" }),
    }
}

pub fn log(name: &str) -> Result<EventLog> {
    match get(name)? {
        CorpusItem::Log(l) => Ok(l),
        CorpusItem::Model(_) => Err(Error::CorpusKind { name: name.into(), expected: "log", actual: "model" }),
    }
}

const FIG6_MAX_FIRINGS: usize = 40;

/// Samples `n_traces` traces of `fig6_m2` by firing uniformly chosen enabled
/// transitions until the final marking; runs longer than a fixed cap are
/// discarded and restarted. Every trace also fits `fig6_m1`.
pub fn generate_fig6_log(seed: u64, n_traces: usize) -> EventLog {
    let apn = model("fig6_m2").expect("embedded model parses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = EventLog::new();
    let mut produced = 0;
    while produced < n_traces {
        let mut m = apn.initial().clone();
        let mut trace: Vec<Activity> = Vec::new();
        let mut steps = 0;
        while !apn.is_final(&m) && steps < FIG6_MAX_FIRINGS {
            let enabled = apn.enabled(&m).expect("marking of this net");
            let Some(&t) = enabled.choose(&mut rng) else { break };
            if let Some(a) = &apn.net().transition(t).label {
                trace.push(a.clone());
            }
            m = apn.fire(&m, t).expect("enabled");
            steps += 1;
        }
        if apn.is_final(&m) {
            log.add(Trace::new(trace).expect("corpus activity names"), 1);
            produced += 1;
        }
    }
    log
}

/// Every expected value in the corpus, keyed by `(log, model, measure)`.
pub fn expected_values() -> BTreeMap<(&'static str, &'static str, &'static str), Expected> {
    ENTRIES
        .iter()
        .flat_map(|e| e.expected.iter().map(move |x| ((e.name, x.model, x.measure), *x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::seq;
    use crate::petri::{is_fitting, language_dfa, write_net, ExploreLimits};

    #[test]
    fn eighteen_entries() {
        let names = list_entries();
        assert_eq!(names.len(), 18);
        assert!(names.contains(&"fig4_model"));
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 18);
    }

    #[test]
    fn every_entry_parses_and_models_round_trip() {
        for name in list_entries() {
            match get(name).unwrap() {
                CorpusItem::Model(m) => assert_eq!(parse_net(&write_net(&m)).unwrap(), m, "{name}"),
                CorpusItem::Log(l) => assert!(!l.is_empty(), "{name}"),
            }
        }
    }

    #[test]
    fn example_log_and_flower_shape() {
        let l = log("sec2_example_log").unwrap();
        assert_eq!(l.multiplicity(&Trace::from(&["a", "b", "c"][..])), 2);
        assert_eq!(l.multiplicity(&Trace::from(&["b", "a", "c"][..])), 3);
        let f = model("fig8_flower").unwrap();
        assert_eq!(f.net().places().len(), 1);
        assert_eq!(f.net().transitions().len(), 3);
    }

    #[test]
    fn unknown_and_wrong_kind() {
        assert_eq!(get("nonexistent"), Err(Error::UnknownCorpusEntry("nonexistent".into())));
        assert!(matches!(model("fig5_log"), Err(Error::CorpusKind { .. })));
        assert!(matches!(log("fig8_flower"), Err(Error::CorpusKind { .. })));
    }

    #[test]
    fn language_relations_between_models() {
        let lim = ExploreLimits::default();
        let dfa = |n: &str| language_dfa(&model(n).unwrap(), lim).unwrap();
        assert!(dfa("fig5a_flower").language_eq(&dfa("fig5b_flower_tau")));
        assert_eq!(dfa("fig5a_flower").num_states(), dfa("fig5b_flower_tau").num_states());
        let (a7, b7) = (dfa("fig7a_loop"), dfa("fig7b_unrolled"));
        assert!(b7.is_subset(&a7) && !a7.is_subset(&b7));
        let (m1, m2) = (dfa("fig6_m1"), dfa("fig6_m2"));
        assert!(m2.is_subset(&m1) && !m1.is_subset(&m2));
        let c5 = dfa("fig5c_constrained");
        assert!(c5.is_subset(&dfa("fig5a_flower")));
    }

    #[test]
    fn logs_fit_their_models() {
        let lim = ExploreLimits::default();
        for (l, m) in [
            ("fig4_log_l1", "fig4_model"),
            ("fig4_log_l2", "fig4_model"),
            ("fig5_log", "fig5a_flower"),
            ("fig5_log", "fig5b_flower_tau"),
            ("fig5_log", "fig5c_constrained"),
            ("fig6_log_template", "fig6_m1"),
            ("fig6_log_template", "fig6_m2"),
            ("fig7_log", "fig7a_loop"),
            ("fig7_log", "fig7b_unrolled"),
            ("fig8_log_l1", "fig8_flower"),
            ("fig8_log_l2", "fig8_flower"),
        ] {
            assert!(is_fitting(&log(l).unwrap(), &model(m).unwrap(), lim).unwrap(), "{l} on {m}");
        }
        let l1 = log("fig4_log_l1").unwrap().trace_set();
        assert!(l1.is_subset(&log("fig4_log_l2").unwrap().trace_set()));
    }

    #[test]
    fn fig2_language() {
        let d = language_dfa(&model("fig2_loop_wfnet").unwrap(), ExploreLimits::default()).unwrap();
        assert!(d.accepts(&seq(&["a", "c"])));
        assert!(d.accepts(&seq(&["b", "d", "a", "c"])));
        assert!(!d.accepts(&seq(&["a"])));
        assert!(d.is_infinite());
        model("fig2_loop_wfnet").unwrap().check_wf_shape().unwrap();
    }

    #[test]
    fn fig6_generator_is_seeded_and_fitting() {
        let lim = ExploreLimits::default();
        let (m1, m2) = (model("fig6_m1").unwrap(), model("fig6_m2").unwrap());
        for seed in 0..5 {
            let l = generate_fig6_log(seed, 10);
            assert_eq!(l.num_traces(), 10);
            assert_eq!(l, generate_fig6_log(seed, 10));
            assert!(is_fitting(&l, &m1, lim).unwrap());
            assert!(is_fitting(&l, &m2, lim).unwrap());
        }
        let one = generate_fig6_log(3, 1);
        let (t, _) = one.iter().next().unwrap();
        let acts = t.activities();
        assert!(["a", "b"].contains(&acts[0].as_str()));
        assert!(["f", "g"].contains(&acts[acts.len() - 1].as_str()));
    }

    #[test]
    fn template_matches_generator() {
        assert_eq!(log("fig6_log_template").unwrap(), generate_fig6_log(FIG6_TEMPLATE_SEED, 10));
    }

    #[test]
    fn expected_values_are_indexed() {
        let ev = expected_values();
        assert_eq!(ev[&("fig5_log", "fig5b_flower_tau", "one-align-etc")].value, 0.5238);
        assert!(ev.values().all(|x| (0.0..=1.0).contains(&x.value)));
    }
}
