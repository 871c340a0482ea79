//! Event logs as multisets of traces, and the `.log` text format:
//!
//! ```text
//! # <count>x <activity>,<activity>,...
//! 2x a,b,c
//! 3x b,a,c
//! 1x
//! ```
//!
//! A bare `<count>x` is the empty trace. Lines with equal traces merge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::activity::Activity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(Vec<Activity>);

impl Trace {
    pub fn new(activities: Vec<Activity>) -> Result<Self> {
        for a in &activities {
            if a.as_str().is_empty() || a.as_str().contains(',') || a.as_str().contains(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!("invalid activity name `{a}`")));
            }
        }
        Ok(Trace(activities))
    }

    pub fn activities(&self) -> &[Activity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[&str]> for Trace {
    fn from(names: &[&str]) -> Self {
        Trace::new(names.iter().map(|n| Activity::from(*n)).collect()).expect("valid names")
    }
}

impl std::fmt::Display for Trace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::activity::show_seq(&self.0))
    }
}

/// Finite multiset of traces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    traces: BTreeMap<Trace, u64>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, trace: Trace, count: u64) {
        if count > 0 {
            *self.traces.entry(trace).or_insert(0) += count;
        }
    }

    /// Convenience constructor from `(activities, count)` pairs.
    pub fn from_pairs(pairs: &[(&[&str], u64)]) -> Self {
        let mut log = EventLog::new();
        for (names, n) in pairs {
            log.add(Trace::from(*names), *n);
        }
        log
    }

    /// Distinct traces with multiplicities, in lexicographic trace order.
    pub fn iter(&self) -> impl Iterator<Item = (&Trace, u64)> + '_ {
        self.traces.iter().map(|(t, &n)| (t, n))
    }

    pub fn multiplicity(&self, t: &Trace) -> u64 {
        self.traces.get(t).copied().unwrap_or(0)
    }

    /// Support of the multiset.
    pub fn trace_set(&self) -> BTreeSet<Trace> {
        self.traces.keys().cloned().collect()
    }

    pub fn alphabet(&self) -> BTreeSet<Activity> {
        self.traces
            .keys()
            .flat_map(|t| t.0.iter().cloned())
            .collect()
    }

    pub fn num_traces(&self) -> u64 {
        self.traces.values().sum()
    }

    pub fn num_distinct(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Drops events whose activity is not in `keep`.
    pub fn project(&self, keep: &BTreeSet<Activity>) -> EventLog {
        let mut out = EventLog::new();
        for (t, n) in self.iter() {
            let kept = t.0.iter().filter(|a| keep.contains(*a)).cloned().collect();
            out.add(Trace(kept), n);
        }
        out
    }

    /// Text format with descending multiplicity, ties in lexicographic order.
    pub fn serialize(&self) -> String {
        let mut rows: Vec<(&Trace, u64)> = self.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (t, n) in rows {
            let names: Vec<&str> = t.0.iter().map(Activity::as_str).collect();
            if names.is_empty() {
                let _ = writeln!(out, "{n}x");
            } else {
                let _ = writeln!(out, "{n}x {}", names.join(","));
            }
        }
        out
    }
}

pub fn parse_log(text: &str) -> Result<EventLog> {
    let mut log = EventLog::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw.find('#') {
            Some(j) => &raw[..j],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let (count_part, rest) = match line.find(char::is_whitespace) {
            Some(j) => (&line[..j], line[j..].trim()),
            None => (line, ""),
        };
        let count = count_part
            .strip_suffix('x')
            .ok_or_else(|| err(format!("expected `<count>x`, got `{count_part}`")))?;
        let count: u64 = count
            .parse()
            .map_err(|_| err(format!("invalid count `{count}`")))?;
        if count == 0 {
            return Err(err("trace count must be positive".into()));
        }
        let activities = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|tok| {
                    let tok = tok.trim();
                    if tok.is_empty() || tok.contains(char::is_whitespace) {
                        Err(err(format!("invalid activity `{tok}`")))
                    } else {
                        Ok(Activity::from(tok))
                    }
                })
                .collect::<Result<Vec<_>>>()?
        };
        log.add(Trace(activities), count);
    }
    Ok(log)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trace_set_of_example_log() {
        let log = parse_log("2x a,b,c\n3x b,a,c").unwrap();
        let set = log.trace_set();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&Trace::from(&["a", "b", "c"][..])));
        assert!(set.contains(&Trace::from(&["b", "a", "c"][..])));
        assert_eq!(log.num_traces(), 5);
    }

    #[test]
    fn empty_and_collapsed_logs() {
        assert!(parse_log("").unwrap().trace_set().is_empty());
        let log = parse_log("100x a").unwrap();
        assert_eq!(log.trace_set().len(), 1);
        assert_eq!(log.multiplicity(&Trace::from(&["a"][..])), 100);
    }

    #[test]
    fn merges_equal_lines_and_reads_empty_trace() {
        let log = parse_log("1x a, b\n2x a,b\n# comment\n3x\n").unwrap();
        assert_eq!(log.multiplicity(&Trace::from(&["a", "b"][..])), 3);
        assert_eq!(log.multiplicity(&Trace::default()), 3);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_log("0x a"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_log("1x a\nx a"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_log("2 a"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_log("1x a,,b"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn projection_drops_events() {
        let log = parse_log("1x a,b,c").unwrap();
        let keep: BTreeSet<Activity> = ["a", "c"].iter().map(|s| Activity::from(*s)).collect();
        let p = log.project(&keep);
        assert_eq!(p.trace_set().into_iter().next().unwrap(), Trace::from(&["a", "c"][..]));
    }

    #[test]
    fn serializer_orders_by_multiplicity() {
        let log = parse_log("1x z\n5x b\n5x a").unwrap();
        assert_eq!(log.serialize(), "5x a\n5x b\n1x z\n");
    }

    fn arb_log() -> impl Strategy<Value = EventLog> {
        let trace = proptest::collection::vec(prop_oneof!["a", "b", "c", "long_name"], 0..6);
        proptest::collection::vec((trace, 1u64..5), 0..6).prop_map(|rows| {
            let mut log = EventLog::new();
            for (t, n) in rows {
                log.add(Trace(t.into_iter().map(Activity::from).collect()), n);
            }
            log
        })
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(log in arb_log()) {
            prop_assert_eq!(parse_log(&log.serialize()).unwrap(), log);
        }
    }
}
