use super::report::{PrecisionReport, Rational, Value};
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{language_dfa, AcceptingPetriNet, ExploreLimits};

/// Share of the model's traces that occur in the log. Infinite languages
/// score 0; finite languages with more than `trace_cap` traces are undecided.
pub fn greco_precision(log: &EventLog, apn: &AcceptingPetriNet, trace_cap: u128) -> Result<PrecisionReport> {
    greco_precision_with(log, apn, trace_cap, ExploreLimits::default())
}

pub fn greco_precision_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    trace_cap: u128,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    let dfa = language_dfa(apn, limits)?;
    let mut report = PrecisionReport::undefined("greco", "").option("trace_cap", trace_cap);
    let matched = log.iter().filter(|(t, _)| dfa.accepts(t.activities())).count() as i128;
    report.diag("matched_log_traces", matched);
    if dfa.is_infinite() {
        report.diag("model_traces", "infinite");
        report.value = Value::Defined(Rational::from_integer(0));
        return Ok(report);
    }
    let total = match dfa.count_words() {
        Some(n) if n <= trace_cap => n,
        _ => {
            return Err(Error::Undecided(format!(
                "model language has more than {trace_cap} traces"
            )))
        }
    };
    report.diag("model_traces", total);
    report.value = if total == 0 {
        Value::Undefined { reason: "the model has an empty language".into() }
    } else {
        Value::Defined(Rational::new(matched, total as i128))
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::log::parse_log;

    #[test]
    fn loops_give_zero() {
        let m = corpus::model("fig7a_loop").unwrap();
        let r = greco_precision(&corpus::log("fig7_log").unwrap(), &m, 1000).unwrap();
        assert_eq!(r.ratio(), Some(Rational::from_integer(0)));
    }

    #[test]
    fn full_language_gives_one_and_empty_log_zero() {
        let m = corpus::model("fig7b_unrolled").unwrap();
        let full = parse_log("1x b\n1x a,b\n5x a,a,b").unwrap();
        assert_eq!(greco_precision(&full, &m, 1000).unwrap().ratio(), Some(Rational::from_integer(1)));
        let half = parse_log("1x b").unwrap();
        assert_eq!(greco_precision(&half, &m, 1000).unwrap().ratio(), Some(Rational::new(1, 3)));
        assert_eq!(
            greco_precision(&EventLog::new(), &m, 1000).unwrap().ratio(),
            Some(Rational::from_integer(0))
        );
    }

    #[test]
    fn cap_exceeded_is_undecided() {
        let m = corpus::model("fig7b_unrolled").unwrap();
        assert!(matches!(greco_precision(&EventLog::new(), &m, 2), Err(Error::Undecided(_))));
    }
}
