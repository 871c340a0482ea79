//! Projected conformance checking precision.
//!
//! For every activity subset `A` of size `min(k, |Σ|)` the model language and
//! the log are projected on `A` and turned into minimal DFAs. In the
//! conjunction automaton every state offers its outgoing activities plus a
//! stop option if accepting. The subset value is the number of options the
//! conjunction keeps divided by the options the model offers at the
//! corresponding model states, where model states the conjunction never
//! reaches still contribute their options. The result is the mean over all
//! subsets.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::report::{PrecisionReport, Rational, Value};
use crate::activity::Activity;
use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::log::EventLog;
use crate::petri::{language_dfa, AcceptingPetriNet, ExploreLimits};

pub const DEFAULT_K: usize = 2;

fn options(dfa: &Dfa, s: usize, live: Option<&[bool]>) -> usize {
    let out = dfa
        .states()[s]
        .next
        .values()
        .filter(|&&t| live.is_none_or(|l| l[t]))
        .count();
    out + usize::from(dfa.states()[s].accepting)
}

/// Subsets of `items` of size `k` in lexicographic order.
pub fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Share of model options kept by the log on one activity subset, as
/// `(kept, offered)`.
pub fn subset_share(model: &Dfa, log: &EventLog, subset: &BTreeSet<Activity>) -> (i128, i128) {
    let m = model.project(subset).with_alphabet(&subset.iter().cloned().collect::<Vec<_>>());
    let projected = log.project(subset);
    let words: Vec<Vec<Activity>> = projected.iter().map(|(t, _)| t.activities().to_vec()).collect();
    let l = Dfa::from_words(subset.iter().cloned(), words.iter().map(Vec::as_slice)).minimize();
    let conj = m.product(&l);
    let live = conj.dfa.co_reachable();
    let reachable: Vec<usize> = (0..conj.dfa.num_states()).filter(|&c| live[c]).collect();
    let mut kept = 0i128;
    let mut offered = 0i128;
    let mut touched = vec![false; m.num_states()];
    for &c in &reachable {
        let ms = conj.origin[c].0;
        touched[ms] = true;
        kept += options(&conj.dfa, c, Some(&live)) as i128;
        offered += options(&m, ms, None) as i128;
    }
    for (ms, t) in touched.iter().enumerate() {
        if !t {
            offered += options(&m, ms, None) as i128;
        }
    }
    (kept, offered)
}

pub fn pcc_precision(log: &EventLog, apn: &AcceptingPetriNet, k: usize) -> Result<PrecisionReport> {
    pcc_precision_with(log, apn, k, ExploreLimits::default())
}

pub fn pcc_precision_with(
    log: &EventLog,
    apn: &AcceptingPetriNet,
    k: usize,
    limits: ExploreLimits,
) -> Result<PrecisionReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let model = language_dfa(apn, limits)?;
    let mut sigma = apn.net().alphabet();
    sigma.extend(log.alphabet());
    if sigma.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let sigma: Vec<Activity> = sigma.into_iter().collect();
    let size = k.min(sigma.len());
    let subsets = subsets(&sigma, size);
    let shares: Vec<(i128, i128)> = subsets
        .par_iter()
        .map(|s| subset_share(&model, log, &s.iter().cloned().collect()))
        .collect();
    let mut report = PrecisionReport::undefined("pcc", "").option("k", k);
    if size < k {
        report.diag("k_truncated_to", size);
    }
    let mut sum = Rational::from_integer(0);
    let mut counted = 0i128;
    for (s, &(kept, offered)) in subsets.iter().zip(&shares) {
        let names: Vec<&str> = s.iter().map(Activity::as_str).collect();
        report.diag(format!("subset.{{{}}}", names.join(",")), format!("{kept}/{offered}"));
        if offered > 0 {
            sum += Rational::new(kept, offered);
            counted += 1;
        }
    }
    report.value = if counted == 0 {
        Value::Undefined { reason: "no subset offers any model option".into() }
    } else {
        Value::Defined(sum / Rational::from_integer(counted))
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::log::parse_log;

    fn pcc(log: &str, model: &str, k: usize) -> Option<Rational> {
        pcc_precision(&corpus::log(log).unwrap(), &corpus::model(model).unwrap(), k).unwrap().ratio()
    }

    #[test]
    fn loop_versus_unrolled() {
        assert_eq!(pcc("fig7_log", "fig7a_loop", 2), Some(Rational::new(3, 5)));
        assert_eq!(pcc("fig7_log", "fig7b_unrolled", 2), Some(Rational::new(1, 2)));
    }

    #[test]
    fn flower_logs_with_three_activity_subsets() {
        assert_eq!(pcc("fig8_log_l1", "fig8_flower", 3), Some(Rational::new(5, 16)));
        assert_eq!(pcc("fig8_log_l2", "fig8_flower", 3), Some(Rational::new(3, 11)));
    }

    #[test]
    fn pairs_on_the_flower() {
        // {a,b}: 4/9, {a,c}: 5/12, {b,c}: 4/9.
        assert_eq!(pcc("fig8_log_l1", "fig8_flower", 2), Some(Rational::new(47, 108)));
    }

    #[test]
    fn equal_languages_score_one_and_k_truncates() {
        let m = corpus::model("fig7b_unrolled").unwrap();
        let log = parse_log("1x b\n1x a,b\n1x a,a,b").unwrap();
        let r = pcc_precision(&log, &m, 7).unwrap();
        assert_eq!(r.ratio(), Some(Rational::from_integer(1)));
        assert!(r.diagnostics.iter().any(|(k, v)| k == "k_truncated_to" && v == "2"));
        assert!(matches!(pcc_precision(&log, &m, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn silent_re_encoding_is_invisible() {
        for k in 1..=3 {
            assert_eq!(pcc("fig5_log", "fig5a_flower", k), pcc("fig5_log", "fig5b_flower_tau", k));
        }
    }

    #[test]
    fn subsets_in_order() {
        let s = subsets(&[1, 2, 3], 2);
        assert_eq!(s, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(&[1, 2], 3).len(), 0);
    }
}
