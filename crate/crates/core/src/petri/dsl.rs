//! Line-oriented text format for accepting Petri nets.
//!
//! ```text
//! # length-one loop followed by b
//! place p1 init=1
//! place p2
//! trans ta label=a
//! trans tb label=b
//! trans t_skip            # no label: silent
//! arc p1 ta
//! arc ta p1
//! arc p1 tb
//! arc tb p2
//! final p2=1
//! ```
//!
//! One `final` line per final marking; a bare `final` denotes the empty marking.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::net::{AcceptingPetriNet, LabeledPetriNet, Marking, NetBuilder};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_count(line: usize, s: &str) -> Result<u32> {
    s.parse::<u32>()
        .map_err(|_| parse_err(line, format!("invalid token count `{s}`")))
}

pub fn parse_net(text: &str) -> Result<AcceptingPetriNet> {
    let mut builder = NetBuilder::new();
    let mut initial: Vec<(String, u32, usize)> = Vec::new();
    let mut finals: Vec<(Vec<(String, u32)>, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        match keyword {
            "place" => {
                let (name, opts) = rest
                    .split_first()
                    .ok_or_else(|| parse_err(lineno, "place needs an identifier"))?;
                builder
                    .place(name)
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
                for opt in opts {
                    match opt.split_once('=') {
                        Some(("init", n)) => {
                            initial.push((name.to_string(), parse_count(lineno, n)?, lineno))
                        }
                        _ => return Err(parse_err(lineno, format!("unknown place option `{opt}`"))),
                    }
                }
            }
            "trans" => {
                let (name, opts) = rest
                    .split_first()
                    .ok_or_else(|| parse_err(lineno, "trans needs an identifier"))?;
                let mut label = None;
                for opt in opts {
                    match opt.split_once('=') {
                        Some(("label", l)) if !l.is_empty() => label = Some(l),
                        _ => {
                            return Err(parse_err(
                                lineno,
                                format!("unknown transition option `{opt}`"),
                            ))
                        }
                    }
                }
                builder
                    .transition(name, label)
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
            }
            "arc" => {
                if rest.len() != 2 {
                    return Err(parse_err(lineno, "arc needs exactly two endpoints"));
                }
                builder
                    .arc(rest[0], rest[1])
                    .map_err(|e| parse_err(lineno, e.to_string()))?;
            }
            "final" => {
                let spec = rest.join("");
                let mut pairs = Vec::new();
                for part in spec.split(',').filter(|s| !s.is_empty()) {
                    let (p, n) = part
                        .split_once('=')
                        .ok_or_else(|| parse_err(lineno, format!("expected <place>=<n>, got `{part}`")))?;
                    pairs.push((p.to_string(), parse_count(lineno, n)?));
                }
                finals.push((pairs, lineno));
            }
            other => return Err(parse_err(lineno, format!("unknown declaration `{other}`"))),
        }
    }

    let net = builder.build().map_err(|e| parse_err(0, e.to_string()))?;
    let mut m0 = Marking::empty(&net);
    let mut counts = m0.counts().to_vec();
    for (name, n, _) in &initial {
        let p = net.place_id(name).expect("declared place");
        counts[p.0] += n;
    }
    m0 = Marking::from_counts(counts);
    if finals.is_empty() {
        return Err(parse_err(0, "no final marking declared"));
    }
    let mut final_set = BTreeSet::new();
    for (pairs, lineno) in finals {
        let refs: Vec<(&str, u32)> = pairs.iter().map(|(p, n)| (p.as_str(), *n)).collect();
        let m = Marking::from_pairs(&net, &refs).map_err(|e| parse_err(lineno, e.to_string()))?;
        final_set.insert(m);
    }
    AcceptingPetriNet::new(net, m0, final_set).map_err(|e| parse_err(0, e.to_string()))
}

/// Emits the text format; places, transitions and arcs in canonical order.
pub fn write_net(apn: &AcceptingPetriNet) -> String {
    let net: &LabeledPetriNet = apn.net();
    let mut out = String::new();
    for (i, p) in net.places().iter().enumerate() {
        let init = apn.initial().counts()[i];
        if init > 0 {
            let _ = writeln!(out, "place {p} init={init}");
        } else {
            let _ = writeln!(out, "place {p}");
        }
    }
    for t in net.transitions() {
        match &t.label {
            Some(l) => {
                let _ = writeln!(out, "trans {} label={l}", t.name);
            }
            None => {
                let _ = writeln!(out, "trans {}", t.name);
            }
        }
    }
    for t in net.transitions() {
        for p in &t.inputs {
            let _ = writeln!(out, "arc {} {}", net.place_name(*p), t.name);
        }
        for p in &t.outputs {
            let _ = writeln!(out, "arc {} {}", t.name, net.place_name(*p));
        }
    }
    for m in apn.finals() {
        let pairs: Vec<String> = m
            .pairs(net)
            .into_iter()
            .map(|(p, c)| format!("{p}={c}"))
            .collect();
        if pairs.is_empty() {
            out.push_str("final\n");
        } else {
            let _ = writeln!(out, "final {}", pairs.join(","));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOOP: &str = "\
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

    #[test]
    fn parses_and_round_trips() {
        let apn = parse_net(LOOP).unwrap();
        assert_eq!(apn.net().places().len(), 2);
        assert_eq!(apn.net().transitions().len(), 2);
        let again = parse_net(&write_net(&apn)).unwrap();
        assert_eq!(apn, again);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_net("place p1 init=1\nplace p2\nfoo bar\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "unknown declaration `foo`".into()
            }
        );
        let err = parse_net("place p1\ntrans t\narc p1 q\nfinal p1=1").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_net("place p1\nfinal q=1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_place_transition_clash_and_missing_final() {
        assert!(parse_net("place x\ntrans x\nfinal x=1").is_err());
        assert!(parse_net("place x init=1").is_err());
    }

    #[test]
    fn silent_transition_and_empty_final() {
        let apn = parse_net("place p init=1\ntrans t\narc p t\nfinal\n").unwrap();
        assert!(apn.net().transitions()[0].is_silent());
        assert_eq!(apn.finals().iter().next().unwrap().total(), 0);
    }
}
