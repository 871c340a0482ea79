//! Executable precision axioms over registered measures.
//!
//! Every check verifies its language-level side conditions with the automata
//! layer before comparing values. Checks run on concrete instances only, so
//! the strongest positive verdict is [`Verdict::SatisfiedOnInstances`].
//! Measures declared stochastic are compared on seed batches: their means
//! are tested with a one-tailed Welch test at significance 0.01.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use num_traits::ToPrimitive;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::activity::{show_seq, Activity};
use crate::corpus;
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::measures::{evaluate, format4, MeasureKind, MeasureOptions, PrecisionReport, Rational, Value};
use crate::petri::{flower_model, is_fitting, language_dfa, parse_net, wf_flower_model, write_net, AcceptingPetriNet};

/// Significance level of every statistical comparison.
pub const SIGNIFICANCE: f64 = 0.01;

/// Seeds used when a check is not given any.
pub fn default_seeds() -> Vec<u64> {
    (0..20).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5];

    pub fn statement(self) -> &'static str {
        match self {
            Axiom::A1 => "precision is a deterministic total function",
            Axiom::A2 => "L ⊆ L(M1) ⊆ L(M2) implies prec(L,M1) ≥ prec(L,M2)",
            Axiom::A3 => "L(M1) ⊂ Σ* = L(M2) implies prec(L,M1) > prec(L,M2)",
            Axiom::A4 => "L(M1) = L(M2) implies prec(L,M1) = prec(L,M2)",
            Axiom::A5 => "L1 ⊆ L2 ⊆ L(M) implies prec(L2,M) ≥ prec(L1,M)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SatisfiedOnInstances,
    Violated,
    HypothesisNotMet,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SatisfiedOnInstances => "satisfied-on-instances",
            Verdict::Violated => "violated",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Everything needed to replay a check: serialized inputs, seeds and values.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Witness {
    pub models: Vec<(String, String)>,
    pub logs: Vec<(String, String)>,
    pub seeds: Vec<u64>,
    pub values: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub measure: String,
    pub verdict: Verdict,
    pub witness: Witness,
    pub evidence: Vec<(String, String)>,
}

impl AxiomReport {
    fn new(axiom: Axiom, measure: &str) -> Self {
        AxiomReport {
            axiom,
            measure: measure.to_string(),
            verdict: Verdict::Undecided,
            witness: Witness::default(),
            evidence: Vec::new(),
        }
    }

    fn evidence(&mut self, key: &str, value: impl ToString) {
        self.evidence.push((key.to_string(), value.to_string()));
    }

    fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.witness.values.push((key.into(), value.to_string()));
    }

    fn model(&mut self, role: &str, apn: &AcceptingPetriNet) {
        self.witness.models.push((role.to_string(), write_net(apn)));
    }

    fn log(&mut self, role: &str, log: &EventLog) {
        self.witness.logs.push((role.to_string(), log.serialize()));
    }

    fn finish(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    /// `key=value` lines; serialized models and logs are left to [`AxiomReport`]'s records.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "axiom={}", self.axiom);
        let _ = writeln!(out, "measure={}", self.measure);
        let _ = writeln!(out, "verdict={}", self.verdict);
        for (k, v) in &self.evidence {
            let _ = writeln!(out, "evidence.{k}={v}");
        }
        if !self.witness.seeds.is_empty() {
            let seeds: Vec<String> = self.witness.seeds.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "witness.seeds={}", seeds.join(","));
        }
        for (k, v) in &self.witness.values {
            let _ = writeln!(out, "witness.{k}={v}");
        }
        out
    }
}

/// A precision measure as seen by the axiom checks.
pub trait MeasureHandle: Send + Sync {
    fn name(&self) -> &str;

    /// `seed = None` is the measure's default behavior; a seed drives every
    /// arbitrary internal choice the measure exposes.
    fn evaluate(&self, log: &EventLog, apn: &AcceptingPetriNet, seed: Option<u64>) -> Result<PrecisionReport>;

    /// Values are random variables over seeds and are compared as batches.
    fn is_stochastic(&self) -> bool;

    /// Whether seeds change anything at all.
    fn exposes_seed(&self) -> bool;

    /// Axioms known to hold for the measure in general.
    fn established_axioms(&self) -> &[Axiom] {
        &[]
    }

    /// The maximally imprecise model over `alphabet` that the measure accepts.
    fn flower(&self, alphabet: &BTreeSet<Activity>) -> Result<AcceptingPetriNet> {
        flower_model(alphabet.iter().map(Activity::as_str))
    }

    fn options(&self) -> MeasureOptions {
        MeasureOptions::default()
    }
}

/// One of the built-in measures with fixed options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    pub kind: MeasureKind,
    pub options: MeasureOptions,
    established: Vec<Axiom>,
}

impl Measure {
    pub fn new(kind: MeasureKind, options: MeasureOptions) -> Self {
        let established = match kind {
            MeasureKind::AdvancedBa => vec![Axiom::A4],
            _ => Vec::new(),
        };
        Measure { kind, options, established }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.options.k = k;
        self
    }

    fn needs_wf_shape(&self) -> bool {
        matches!(self.kind, MeasureKind::SimpleBa | MeasureKind::AdvancedBa)
    }
}

impl MeasureHandle for Measure {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn evaluate(&self, log: &EventLog, apn: &AcceptingPetriNet, seed: Option<u64>) -> Result<PrecisionReport> {
        let opts = match seed {
            Some(s) if self.exposes_seed() => self.options.seeded(s),
            _ => self.options,
        };
        evaluate(self.kind, log, apn, &opts)
    }

    fn is_stochastic(&self) -> bool {
        self.kind == MeasureKind::NegativeEvent
    }

    fn exposes_seed(&self) -> bool {
        matches!(self.kind, MeasureKind::SimpleBa | MeasureKind::OneAlignEtc | MeasureKind::NegativeEvent)
    }

    fn established_axioms(&self) -> &[Axiom] {
        &self.established
    }

    fn flower(&self, alphabet: &BTreeSet<Activity>) -> Result<AcceptingPetriNet> {
        let names = alphabet.iter().map(Activity::as_str);
        if self.needs_wf_shape() {
            wf_flower_model(names)
        } else {
            flower_model(names)
        }
    }

    fn options(&self) -> MeasureOptions {
        self.options
    }
}

/// The measures of the axiom overview table, in row order.
pub fn table_measures() -> Vec<Measure> {
    let opts = MeasureOptions::default();
    [
        MeasureKind::SimpleBa,
        MeasureKind::AdvancedBa,
        MeasureKind::OneAlignEtc,
        MeasureKind::NegativeEvent,
        MeasureKind::Pcc,
    ]
    .into_iter()
    .map(|k| Measure::new(k, opts))
    .collect()
}

/// Result of a one-tailed Welch test of `mean(a) > mean(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Welch {
    pub mean_a: f64,
    pub mean_b: f64,
    pub sd_a: f64,
    pub sd_b: f64,
    pub t: f64,
    pub df: f64,
    pub critical: f64,
    pub significant: bool,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// One-tailed Welch test of `mean(a) > mean(b)` at [`SIGNIFICANCE`]. With
/// zero variance on both sides the means are compared exactly.
pub fn welch_greater(a: &[f64], b: &[f64]) -> Result<Welch> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument("a Welch test needs at least two samples per side".into()));
    }
    let (mean_a, sd_a) = mean_sd(a);
    let (mean_b, sd_b) = mean_sd(b);
    let (va, vb) = (sd_a * sd_a / a.len() as f64, sd_b * sd_b / b.len() as f64);
    let se2 = va + vb;
    if se2 == 0.0 {
        let diff = mean_a - mean_b;
        return Ok(Welch {
            mean_a,
            mean_b,
            sd_a,
            sd_b,
            t: if diff > 0.0 { f64::INFINITY } else if diff < 0.0 { f64::NEG_INFINITY } else { 0.0 },
            df: f64::INFINITY,
            critical: 0.0,
            significant: diff > 0.0,
        });
    }
    let t = (mean_a - mean_b) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (a.len() as f64 - 1.0) + vb * vb / (b.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let critical = dist.inverse_cdf(1.0 - SIGNIFICANCE);
    Ok(Welch { mean_a, mean_b, sd_a, sd_b, t, df, critical, significant: t > critical })
}

enum Outcome {
    Value(Rational),
    Batch(Vec<f64>),
}

/// Maps an evaluation error to the verdict it implies, or propagates it.
fn verdict_for(err: Error) -> Result<(Verdict, String)> {
    match err {
        Error::Precondition(m) => Ok((Verdict::HypothesisNotMet, m)),
        e @ (Error::Undecided(_)
        | Error::ExplorationOverflow { .. }
        | Error::Unbounded { .. }
        | Error::EnumerationOverflow { .. }) => Ok((Verdict::Undecided, e.to_string())),
        e => Err(e),
    }
}

macro_rules! settle {
    ($report:ident, $expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => {
                let (verdict, why) = verdict_for(e)?;
                $report.evidence("stopped", why);
                return Ok($report.finish(verdict));
            }
        }
    };
}

fn outcome(
    measure: &dyn MeasureHandle,
    log: &EventLog,
    apn: &AcceptingPetriNet,
    seeds: &[u64],
    report: &mut AxiomReport,
    role: &str,
) -> Result<std::result::Result<Outcome, String>> {
    if measure.is_stochastic() {
        let mut xs = Vec::with_capacity(seeds.len());
        for &s in seeds {
            let r = measure.evaluate(log, apn, Some(s))?;
            match r.value {
                Value::Defined(v) => {
                    report.value(format!("{role}.seed{s}"), format4(&v));
                    xs.push(v.to_f64().unwrap_or(f64::NAN));
                }
                Value::Undefined { reason } => return Ok(Err(format!("{role} undefined for seed {s}: {reason}"))),
            }
        }
        Ok(Ok(Outcome::Batch(xs)))
    } else {
        let r = measure.evaluate(log, apn, None)?;
        match r.value {
            Value::Defined(v) => {
                report.value(role, format!("{} ({v})", format4(&v)));
                Ok(Ok(Outcome::Value(v)))
            }
            Value::Undefined { reason } => Ok(Err(format!("{role} undefined: {reason}"))),
        }
    }
}

#[derive(Clone, Copy)]
enum Relation {
    AtLeast,
    Greater,
    Equal,
}

/// Whether `a rel b` is contradicted by the outcomes.
fn contradicts(a: &Outcome, b: &Outcome, rel: Relation, report: &mut AxiomReport) -> Result<bool> {
    match (a, b) {
        (Outcome::Value(x), Outcome::Value(y)) => Ok(match rel {
            Relation::AtLeast => x < y,
            Relation::Greater => x <= y,
            Relation::Equal => x != y,
        }),
        (Outcome::Batch(x), Outcome::Batch(y)) => {
            let below = welch_greater(y, x)?;
            let above = welch_greater(x, y)?;
            report.evidence(
                "welch",
                format!(
                    "mean_a={:.4} sd_a={:.4} mean_b={:.4} sd_b={:.4} t={:.4} df={:.2} critical={:.4}",
                    below.mean_b, below.sd_b, below.mean_a, below.sd_a, -below.t, below.df, below.critical
                ),
            );
            Ok(match rel {
                Relation::AtLeast => below.significant,
                Relation::Greater => below.significant || below.mean_a == below.mean_b && below.sd_a + below.sd_b == 0.0,
                Relation::Equal => below.significant || above.significant,
            })
        }
        _ => Err(Error::InvalidArgument("mixed deterministic and stochastic outcomes".into())),
    }
}

fn fits(report: &mut AxiomReport, role: &str, log: &EventLog, apn: &AcceptingPetriNet, opts: &MeasureOptions) -> Result<bool> {
    let ok = is_fitting(log, apn, opts.limits)?;
    report.evidence(&format!("{role}_fitting"), ok);
    Ok(ok)
}

/// Determinism and totality: evaluates repeatedly, varying seeds when the
/// measure exposes them. Undefined values on valid input also violate it.
pub fn check_a1(measure: &dyn MeasureHandle, log: &EventLog, apn: &AcceptingPetriNet, seeds: &[u64]) -> Result<AxiomReport> {
    if seeds.len() < 2 {
        return Err(Error::InvalidArgument("A1 needs at least two runs".into()));
    }
    let mut report = AxiomReport::new(Axiom::A1, measure.name());
    report.model("model", apn);
    report.log("log", log);
    report.witness.seeds = seeds.to_vec();
    let mut seen: Vec<Rational> = Vec::new();
    for &s in seeds {
        let seed = measure.exposes_seed().then_some(s);
        let r = settle!(report, measure.evaluate(log, apn, seed));
        match r.value {
            Value::Defined(v) => {
                report.value(format!("run.seed{s}"), format!("{} ({v})", format4(&v)));
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
            Value::Undefined { reason } => {
                report.value(format!("run.seed{s}"), "undefined");
                report.evidence("partial", reason);
                return Ok(report.finish(Verdict::Violated));
            }
        }
    }
    report.evidence("distinct_values", seen.len());
    Ok(report.finish(if seen.len() > 1 { Verdict::Violated } else { Verdict::SatisfiedOnInstances }))
}

/// Monotonicity in the model language: `m1` must not score below `m2` when
/// `L ⊆ L(m1) ⊆ L(m2)`.
pub fn check_a2(
    measure: &dyn MeasureHandle,
    log: &EventLog,
    m1: &AcceptingPetriNet,
    m2: &AcceptingPetriNet,
    seeds: &[u64],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::new(Axiom::A2, measure.name());
    report.model("m1", m1);
    report.model("m2", m2);
    report.log("log", log);
    let opts = measure.options();
    if !settle!(report, fits(&mut report, "log_m1", log, m1, &opts)) {
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    let d1 = settle!(report, language_dfa(m1, opts.limits));
    let d2 = settle!(report, language_dfa(m2, opts.limits));
    if let Some(w) = d1.subset_witness(&d2) {
        report.evidence("subset_counterexample", show_seq(&w));
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    report.evidence("m1_subset_of_m2", true);
    compare(measure, report, (log, m1, "m1"), (log, m2, "m2"), Relation::AtLeast, seeds)
}

fn compare(
    measure: &dyn MeasureHandle,
    mut report: AxiomReport,
    a: (&EventLog, &AcceptingPetriNet, &str),
    b: (&EventLog, &AcceptingPetriNet, &str),
    rel: Relation,
    seeds: &[u64],
) -> Result<AxiomReport> {
    if measure.is_stochastic() {
        report.witness.seeds = seeds.to_vec();
    }
    let x = settle!(report, outcome(measure, a.0, a.1, seeds, &mut report, a.2));
    let y = settle!(report, outcome(measure, b.0, b.1, seeds, &mut report, b.2));
    let (x, y) = match (x, y) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(why), _) | (_, Err(why)) => {
            report.evidence("undefined", why);
            return Ok(report.finish(Verdict::Undecided));
        }
    };
    let violated = contradicts(&x, &y, rel, &mut report)?;
    Ok(report.finish(if violated { Verdict::Violated } else { Verdict::SatisfiedOnInstances }))
}

/// Strictness against the flower over `alphabet` (defaults to the model's
/// alphabet plus the log's).
pub fn check_a3(
    measure: &dyn MeasureHandle,
    log: &EventLog,
    apn: &AcceptingPetriNet,
    alphabet: Option<&BTreeSet<Activity>>,
    seeds: &[u64],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::new(Axiom::A3, measure.name());
    let sigma = match alphabet {
        Some(a) => a.clone(),
        None => {
            let mut s = apn.net().alphabet();
            s.extend(log.alphabet());
            s
        }
    };
    let flower = measure.flower(&sigma)?;
    report.model("model", apn);
    report.model("flower", &flower);
    report.log("log", log);
    let opts = measure.options();
    if !settle!(report, fits(&mut report, "log_model", log, apn, &opts)) {
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    let d = settle!(report, language_dfa(apn, opts.limits));
    let sigma_vec: Vec<Activity> = sigma.iter().cloned().collect();
    let within = d.alphabet().iter().all(|a| sigma.contains(a));
    let universal = d.is_universal(&sigma_vec);
    report.evidence("model_within_alphabet", within);
    report.evidence("model_universal", universal);
    if !within || universal {
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    compare(measure, report, (log, apn, "model"), (log, &flower, "flower"), Relation::Greater, seeds)
}

/// Language-equal models must score equally.
pub fn check_a4(
    measure: &dyn MeasureHandle,
    log: &EventLog,
    m1: &AcceptingPetriNet,
    m2: &AcceptingPetriNet,
    seeds: &[u64],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::new(Axiom::A4, measure.name());
    report.model("m1", m1);
    report.model("m2", m2);
    report.log("log", log);
    let opts = measure.options();
    let d1 = settle!(report, language_dfa(m1, opts.limits));
    let d2 = settle!(report, language_dfa(m2, opts.limits));
    for (name, w) in [("m1_not_m2", d1.subset_witness(&d2)), ("m2_not_m1", d2.subset_witness(&d1))] {
        if let Some(w) = w {
            report.evidence(name, show_seq(&w));
            return Ok(report.finish(Verdict::HypothesisNotMet));
        }
    }
    report.evidence("languages_equal", true);
    compare(measure, report, (log, m1, "m1"), (log, m2, "m2"), Relation::Equal, seeds)
}

/// Monotonicity in the log: `l2` must not score below `l1` when
/// `l1 ⊆ l2 ⊆ L(model)` as trace sets.
pub fn check_a5(
    measure: &dyn MeasureHandle,
    l1: &EventLog,
    l2: &EventLog,
    apn: &AcceptingPetriNet,
    seeds: &[u64],
) -> Result<AxiomReport> {
    let mut report = AxiomReport::new(Axiom::A5, measure.name());
    report.model("model", apn);
    report.log("l1", l1);
    report.log("l2", l2);
    let missing: Vec<String> = l1.trace_set().difference(&l2.trace_set()).map(|t| t.to_string()).collect();
    if !missing.is_empty() {
        report.evidence("l1_traces_missing_from_l2", missing.join(" "));
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    report.evidence("l1_subset_of_l2", true);
    let opts = measure.options();
    if !settle!(report, fits(&mut report, "l2_model", l2, apn, &opts)) {
        return Ok(report.finish(Verdict::HypothesisNotMet));
    }
    compare(measure, report, (l2, apn, "l2"), (l1, apn, "l1"), Relation::AtLeast, seeds)
}

/// Inputs of one axiom check, referring to corpus entries or inline nets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Corpus(&'static str),
    Inline { name: &'static str, text: &'static str },
}

impl Source {
    fn label(&self) -> &'static str {
        match self {
            Source::Corpus(n) | Source::Inline { name: n, .. } => n,
        }
    }

    fn model(&self) -> Result<AcceptingPetriNet> {
        match self {
            Source::Corpus(n) => corpus::model(n),
            Source::Inline { text, .. } => parse_net(text),
        }
    }

    fn log(&self) -> Result<EventLog> {
        match self {
            Source::Corpus(n) => corpus::log(n),
            Source::Inline { text, .. } => crate::log::parse_log(text),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    A1 { log: Source, model: Source },
    A2 { log: Source, m1: Source, m2: Source },
    A3 { log: Source, model: Source },
    A4 { log: Source, m1: Source, m2: Source },
    A5 { l1: Source, l2: Source, model: Source },
}

impl Instance {
    pub fn axiom(&self) -> Axiom {
        match self {
            Instance::A1 { .. } => Axiom::A1,
            Instance::A2 { .. } => Axiom::A2,
            Instance::A3 { .. } => Axiom::A3,
            Instance::A4 { .. } => Axiom::A4,
            Instance::A5 { .. } => Axiom::A5,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Instance::A1 { log, model } | Instance::A3 { log, model } => {
                format!("log={} model={}", log.label(), model.label())
            }
            Instance::A2 { log, m1, m2 } | Instance::A4 { log, m1, m2 } => {
                format!("log={} m1={} m2={}", log.label(), m1.label(), m2.label())
            }
            Instance::A5 { l1, l2, model } => format!("l1={} l2={} model={}", l1.label(), l2.label(), model.label()),
        }
    }

    pub fn run(&self, measure: &dyn MeasureHandle, seeds: &[u64]) -> Result<AxiomReport> {
        match self {
            Instance::A1 { log, model } => check_a1(measure, &log.log()?, &model.model()?, seeds),
            Instance::A2 { log, m1, m2 } => check_a2(measure, &log.log()?, &m1.model()?, &m2.model()?, seeds),
            Instance::A3 { log, model } => check_a3(measure, &log.log()?, &model.model()?, None, seeds),
            Instance::A4 { log, m1, m2 } => check_a4(measure, &log.log()?, &m1.model()?, &m2.model()?, seeds),
            Instance::A5 { l1, l2, model } => check_a5(measure, &l1.log()?, &l2.log()?, &model.model()?, seeds),
        }
    }
}

pub const SEQUENTIAL_AB: &str = "place i init=1\nplace p\nplace o\ntrans ta label=a\ntrans tb label=b\n\
arc i ta\narc ta p\narc p tb\narc tb o\nfinal o=1\n";

pub const SEQUENTIAL_ABC: &str = "place i init=1\nplace p\nplace q\nplace o\ntrans ta label=a\ntrans tb label=b\n\
trans tc label=c\narc i ta\narc ta p\narc p tb\narc tb q\narc q tc\narc tc o\nfinal o=1\n";

/// Language `{ab}` with duplicated labels: the replay path depends on which `a` is chosen.
pub const DUPLICATE_LABELS: &str = "place i init=1\nplace p1\nplace p2\nplace o\n\
trans t1 label=a\ntrans t2 label=a\ntrans t3 label=b\ntrans t4 label=b\ntrans t5 label=b\n\
arc i t1\narc t1 p1\narc i t2\narc t2 p2\narc p1 t3\narc t3 o\narc p2 t4\narc t4 o\narc p2 t5\narc t5 o\nfinal o=1\n";

const LOG_AB: Source = Source::Inline { name: "log_ab", text: "1x a,b" };
const SEQ_AB: Source = Source::Inline { name: "sequential_ab", text: SEQUENTIAL_AB };
const SEQ_ABC: Source = Source::Inline { name: "sequential_abc", text: SEQUENTIAL_ABC };
const DUPES: Source = Source::Inline { name: "duplicate_labels", text: DUPLICATE_LABELS };

/// One row of the overview table: a measure and its instance suite.
pub struct SuiteRow {
    pub measure: Measure,
    pub instances: Vec<Instance>,
}

/// The instances exercised for every measure of [`table_measures`].
pub fn instance_suite() -> Vec<SuiteRow> {
    use Source::Corpus as C;
    let fig2_logs = [
        Source::Inline { name: "fig2_log_1", text: "1x a,c" },
        Source::Inline { name: "fig2_log_2", text: "1x a,c,b,d" },
        Source::Inline { name: "fig2_log_3", text: "2x a,c\n1x b,d,b,c,a,d" },
    ];
    table_measures()
        .into_iter()
        .map(|measure| {
            let instances = match measure.kind {
                MeasureKind::SimpleBa => vec![
                    Instance::A1 { log: LOG_AB, model: DUPES },
                    Instance::A4 { log: LOG_AB, m1: SEQ_AB, m2: DUPES },
                ],
                MeasureKind::AdvancedBa => {
                    let mut v = vec![Instance::A1 { log: Source::Inline { name: "log_abc", text: "1x a,b,c" }, model: SEQ_ABC }];
                    v.extend(fig2_logs.iter().map(|l| Instance::A3 { log: l.clone(), model: C("fig2_loop_wfnet") }));
                    v
                }
                MeasureKind::OneAlignEtc => vec![
                    Instance::A1 { log: LOG_AB, model: DUPES },
                    Instance::A2 { log: C("fig5_log"), m1: C("fig5c_constrained"), m2: C("fig5b_flower_tau") },
                    Instance::A4 { log: C("fig5_log"), m1: C("fig5a_flower"), m2: C("fig5b_flower_tau") },
                    Instance::A5 { l1: C("fig4_log_l1"), l2: C("fig4_log_l2"), model: C("fig4_model") },
                ],
                MeasureKind::NegativeEvent => vec![
                    Instance::A1 { log: C("fig6_log_template"), model: C("fig6_m1") },
                    Instance::A2 { log: C("fig6_log_template"), m1: C("fig6_m2"), m2: C("fig6_m1") },
                ],
                MeasureKind::Pcc => vec![
                    Instance::A2 { log: C("fig7_log"), m1: C("fig7b_unrolled"), m2: C("fig7a_loop") },
                    Instance::A5 { l1: C("fig8_log_l1"), l2: C("fig8_log_l2"), model: C("fig8_flower") },
                ],
                _ => Vec::new(),
            };
            SuiteRow { measure, instances }
        })
        .collect()
}

/// Options an instance needs beyond the measure defaults.
fn instance_measure(measure: &Measure, instance: &Instance) -> Measure {
    match (measure.kind, instance) {
        (MeasureKind::Pcc, Instance::A5 { .. }) => measure.clone().with_k(3),
        _ => measure.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell {
    /// Some instance violates the axiom.
    Violated,
    /// Declared to hold in general.
    Holds,
    Unknown,
}

impl Cell {
    pub fn symbol(self) -> &'static str {
        match self {
            Cell::Violated => "✗",
            Cell::Holds => "✓",
            Cell::Unknown => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixEntry {
    pub measure: String,
    pub instance: String,
    pub report: AxiomReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomMatrix {
    pub rows: Vec<(String, Vec<Cell>)>,
    pub entries: Vec<MatrixEntry>,
}

impl AxiomMatrix {
    pub fn cell(&self, measure: &str, axiom: Axiom) -> Option<Cell> {
        let idx = Axiom::ALL.iter().position(|&a| a == axiom)?;
        self.rows.iter().find(|(m, _)| m == measure).map(|(_, c)| c[idx])
    }

    /// Aligned text table; `?` marks cells without a counterexample or a
    /// general result.
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|(m, _)| m.len()).max().unwrap_or(0).max("measure".len());
        let mut out = format!("{:<width$}", "measure");
        for a in Axiom::ALL {
            let _ = write!(out, "  {a}");
        }
        out.push('\n');
        for (m, cells) in &self.rows {
            let _ = write!(out, "{m:<width$}");
            for c in cells {
                let _ = write!(out, "  {} ", c.symbol());
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }
}

/// Runs every instance of `suite` (concurrently) and aggregates the cells in
/// suite order.
pub fn axiom_matrix(suite: &[SuiteRow], seeds: &[u64]) -> Result<AxiomMatrix> {
    let jobs: Vec<(usize, &Instance)> =
        suite.iter().enumerate().flat_map(|(i, row)| row.instances.iter().map(move |inst| (i, inst))).collect();
    let reports: Vec<Result<AxiomReport>> = jobs
        .par_iter()
        .map(|&(i, inst)| inst.run(&instance_measure(&suite[i].measure, inst), seeds))
        .collect();
    let mut entries = Vec::with_capacity(jobs.len());
    for ((i, inst), report) in jobs.iter().zip(reports) {
        entries.push(MatrixEntry {
            measure: suite[*i].measure.name().to_string(),
            instance: inst.describe(),
            report: report?,
        });
    }
    let rows = suite
        .iter()
        .map(|row| {
            let name = row.measure.name().to_string();
            let cells = Axiom::ALL
                .iter()
                .map(|&a| {
                    let violated = entries
                        .iter()
                        .any(|e| e.measure == name && e.report.axiom == a && e.report.verdict == Verdict::Violated);
                    if violated {
                        Cell::Violated
                    } else if row.measure.established_axioms().contains(&a) {
                        Cell::Holds
                    } else {
                        Cell::Unknown
                    }
                })
                .collect();
            (name, cells)
        })
        .collect();
    Ok(AxiomMatrix { rows, entries })
}
