//! Precision measures. Each one is a pure function of a log, a model and its
//! options, returning a [`PrecisionReport`] with an exact rational value.

mod behavioral;
mod etc;
mod greco;
mod negative;
mod pcc;
mod report;

use std::fmt;
use std::str::FromStr;

pub use behavioral::{advanced_ba, simple_ba, simple_ba_with, sometimes_relations, PairSet, SometimesRelations};
pub use etc::{
    all_align_etc, all_align_etc_with, etc_precision, etc_precision_with, one_align_etc, one_align_etc_with,
    Weighting,
};
pub use greco::{greco_precision, greco_precision_with};
pub use negative::{negative_event_precision, negative_event_precision_with, NegativeMode, DEFAULT_MAX_WINDOW};
pub use pcc::{pcc_precision, pcc_precision_with, subset_share, subsets, DEFAULT_K};
pub use report::{format4, PrecisionReport, Rational, ReportRecord, Value};

use crate::alignment::TieBreak;
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{AcceptingPetriNet, ExploreLimits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureKind {
    Greco,
    SimpleBa,
    AdvancedBa,
    Etc,
    OneAlignEtc,
    AllAlignEtc,
    NegativeEvent,
    Pcc,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 8] = [
        MeasureKind::Greco,
        MeasureKind::SimpleBa,
        MeasureKind::AdvancedBa,
        MeasureKind::Etc,
        MeasureKind::OneAlignEtc,
        MeasureKind::AllAlignEtc,
        MeasureKind::NegativeEvent,
        MeasureKind::Pcc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Greco => "greco",
            MeasureKind::SimpleBa => "simple-ba",
            MeasureKind::AdvancedBa => "advanced-ba",
            MeasureKind::Etc => "etc",
            MeasureKind::OneAlignEtc => "one-align-etc",
            MeasureKind::AllAlignEtc => "all-align-etc",
            MeasureKind::NegativeEvent => "negative-event",
            MeasureKind::Pcc => "pcc",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{s}`")))
    }
}

/// Options shared by all measures; each measure reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureOptions {
    pub k: usize,
    pub max_window: usize,
    pub weighting: Weighting,
    pub tiebreak: TieBreak,
    pub negative_mode: NegativeMode,
    pub trace_cap: u128,
    pub alignment_cap: usize,
    pub limits: ExploreLimits,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            k: DEFAULT_K,
            max_window: DEFAULT_MAX_WINDOW,
            weighting: Weighting::Visits,
            tiebreak: TieBreak::Lexicographic,
            negative_mode: NegativeMode::Deterministic,
            trace_cap: 100_000,
            alignment_cap: 1_000,
            limits: ExploreLimits::default(),
        }
    }
}

impl MeasureOptions {
    /// Copy with every seeded choice driven by `seed`.
    pub fn seeded(self, seed: u64) -> Self {
        MeasureOptions {
            tiebreak: TieBreak::SeededRandom(seed),
            negative_mode: NegativeMode::Sampled(seed),
            ..self
        }
    }
}

/// Dispatches to the measure named by `kind`.
pub fn evaluate(
    kind: MeasureKind,
    log: &EventLog,
    apn: &AcceptingPetriNet,
    opts: &MeasureOptions,
) -> Result<PrecisionReport> {
    let lim = opts.limits;
    match kind {
        MeasureKind::Greco => greco_precision_with(log, apn, opts.trace_cap, lim),
        MeasureKind::SimpleBa => simple_ba_with(log, apn, opts.tiebreak, lim),
        MeasureKind::AdvancedBa => advanced_ba(log, apn, lim),
        MeasureKind::Etc => etc_precision_with(log, apn, lim),
        MeasureKind::OneAlignEtc => one_align_etc_with(log, apn, opts.weighting, opts.tiebreak, lim),
        MeasureKind::AllAlignEtc => all_align_etc_with(log, apn, opts.alignment_cap, lim),
        MeasureKind::NegativeEvent => negative_event_precision_with(log, apn, opts.max_window, opts.negative_mode, lim),
        MeasureKind::Pcc => pcc_precision_with(log, apn, opts.k, lim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in MeasureKind::ALL {
            assert_eq!(m.name().parse::<MeasureKind>().unwrap(), m);
        }
        assert!("nope".parse::<MeasureKind>().is_err());
    }
}
