//! Labeled and accepting Petri nets: firing rule, bounded state-space
//! exploration and language extraction.

mod dsl;
mod language;
mod net;
mod state_graph;

pub use dsl::{parse_net, write_net};
pub use language::{is_fitting, is_trace, language_dfa, search_trace, state_graph_nfa, ModelLanguage};
pub use net::{
    AcceptingPetriNet, LabeledPetriNet, Marking, MarkingDisplay, NetBuilder, PlaceId, Transition,
    TransitionId,
};
pub use state_graph::{explore, ExploreLimits, StateGraph};

/// Single place, one self-loop per activity; the place is both initial and
/// final. Its language is every word over `alphabet`.
pub fn flower_model<I, S>(alphabet: I) -> crate::Result<AcceptingPetriNet>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let names: std::collections::BTreeSet<String> =
        alphabet.into_iter().map(|s| s.as_ref().to_string()).collect();
    if names.is_empty() {
        return Err(crate::Error::EmptyAlphabet);
    }
    let mut text = String::from("place hub init=1\n");
    for a in &names {
        text.push_str(&format!("trans t_{a} label={a}\narc hub t_{a}\narc t_{a} hub\n"));
    }
    text.push_str("final hub=1\n");
    parse_net(&text)
}

/// Flower with workflow-net shape: `source -τ-> hub -τ-> sink`, with the
/// activity self-loops on `hub`. Same language as [`flower_model`].
pub fn wf_flower_model<I, S>(alphabet: I) -> crate::Result<AcceptingPetriNet>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let names: std::collections::BTreeSet<String> =
        alphabet.into_iter().map(|s| s.as_ref().to_string()).collect();
    if names.is_empty() {
        return Err(crate::Error::EmptyAlphabet);
    }
    let mut text = String::from(
        "place source init=1\nplace hub\nplace sink\ntrans tau_in\ntrans tau_out\n\
         arc source tau_in\narc tau_in hub\narc hub tau_out\narc tau_out sink\n",
    );
    for a in &names {
        text.push_str(&format!("trans t_{a} label={a}\narc hub t_{a}\narc t_{a} hub\n"));
    }
    text.push_str("final sink=1\n");
    parse_net(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::{seq, Activity};
    use crate::Error;
    use proptest::prelude::*;

    const LOOP: &str = "place p1 init=1\nplace p2\ntrans ta label=a\ntrans tb label=b\n\
        arc p1 ta\narc ta p1\narc p1 tb\narc tb p2\nfinal p2=1\n";
    const UNROLLED: &str = "place p1 init=1\nplace p2\nplace p3\nplace p4\n\
        trans a1 label=a\ntrans a2 label=a\ntrans b1 label=b\ntrans b2 label=b\ntrans b3 label=b\n\
        arc p1 a1\narc a1 p2\narc p2 a2\narc a2 p3\n\
        arc p1 b1\narc b1 p4\narc p2 b2\narc b2 p4\narc p3 b3\narc b3 p4\nfinal p4=1\n";

    fn m(apn: &AcceptingPetriNet, pairs: &[(&str, u32)]) -> Marking {
        Marking::from_pairs(apn.net(), pairs).unwrap()
    }

    #[test]
    fn enabled_and_fire_on_length_one_loop() {
        let apn = parse_net(LOOP).unwrap();
        let ta = apn.net().transition_id("ta").unwrap();
        let tb = apn.net().transition_id("tb").unwrap();
        assert_eq!(apn.enabled(&m(&apn, &[("p1", 1)])).unwrap(), vec![ta, tb]);
        assert_eq!(apn.fire(&m(&apn, &[("p1", 1)]), ta).unwrap(), m(&apn, &[("p1", 1)]));
        let end = apn.fire(&m(&apn, &[("p1", 1)]), tb).unwrap();
        assert_eq!(end, m(&apn, &[("p2", 1)]));
        assert!(apn.enabled(&end).unwrap().is_empty());
        assert_eq!(apn.fire(&end, ta), Err(Error::NotEnabled("ta".into())));
    }

    #[test]
    fn empty_marking_enables_only_source_transitions() {
        let apn = parse_net("place p\ntrans gen label=g\ntrans eat label=e\narc gen p\narc p eat\nfinal p=1").unwrap();
        let empty = Marking::empty(apn.net());
        assert_eq!(apn.enabled(&empty).unwrap(), vec![apn.net().transition_id("gen").unwrap()]);
    }

    #[test]
    fn invalid_markings_are_rejected() {
        let apn = parse_net(LOOP).unwrap();
        assert!(matches!(
            Marking::from_pairs(apn.net(), &[("nope", 1)]),
            Err(Error::InvalidMarking(_))
        ));
        assert!(matches!(
            apn.enabled(&Marking::from_counts(vec![1])),
            Err(Error::InvalidMarking(_))
        ));
    }

    #[test]
    fn explore_flower_and_unrolled() {
        let flower = flower_model(["a", "b", "c"]).unwrap();
        let g = explore(&flower, ExploreLimits::default()).unwrap();
        assert_eq!(g.num_states(), 1);
        assert_eq!(g.num_edges(), 3);
        let g = explore(&parse_net(UNROLLED).unwrap(), ExploreLimits::default()).unwrap();
        assert_eq!(g.num_states(), 4);
        assert!(g.is_bounded());
    }

    #[test]
    fn token_generator_is_unbounded() {
        let apn = parse_net("place p init=0\ntrans gen label=g\narc gen p\nfinal p=1").unwrap();
        let g = explore(&apn, ExploreLimits { bound: 3, state_cap: 100 }).unwrap();
        assert!(!g.is_bounded());
        assert_eq!(apn.net().place_name(g.overflow_place().unwrap()), "p");
        assert!(matches!(
            language_dfa(&apn, ExploreLimits { bound: 3, state_cap: 100 }),
            Err(Error::Unbounded { .. })
        ));
        // Search still decides membership.
        let limits = ExploreLimits { bound: 3, state_cap: 100 };
        assert!(is_trace(&apn, &seq(&["g"]), limits).unwrap());
        assert!(!is_trace(&apn, &seq(&["g", "g"]), limits).unwrap_or(true));
    }

    #[test]
    fn state_cap_overflow() {
        let apn = parse_net(UNROLLED).unwrap();
        assert_eq!(
            explore(&apn, ExploreLimits { bound: 8, state_cap: 2 }),
            Err(Error::ExplorationOverflow { cap: 2 })
        );
    }

    #[test]
    fn loop_language_is_a_star_b() {
        let apn = parse_net(LOOP).unwrap();
        let dfa = language_dfa(&apn, ExploreLimits::default()).unwrap();
        assert_eq!(dfa.num_states(), 2);
        // Oracle: bounded firing-sequence search.
        let ab = seq(&["a", "b"]);
        let mut words: Vec<Vec<Activity>> = vec![vec![]];
        for _ in 0..5 {
            let next: Vec<Vec<Activity>> = words
                .iter()
                .filter(|w| w.len() < 5)
                .flat_map(|w| ab.iter().map(move |a| [w.clone(), vec![a.clone()]].concat()))
                .collect();
            words.extend(next);
            words.sort();
            words.dedup();
        }
        for w in &words {
            let expected = !w.is_empty() && w[..w.len() - 1].iter().all(|a| a.as_str() == "a") && w.last().unwrap().as_str() == "b";
            assert_eq!(dfa.accepts(w), expected, "{w:?}");
            assert_eq!(search_trace(&apn, w, 10_000).unwrap(), expected, "{w:?}");
        }
    }

    #[test]
    fn unreachable_finals_give_empty_language() {
        let apn = parse_net("place p init=1\nplace q\nfinal q=1").unwrap();
        let dfa = language_dfa(&apn, ExploreLimits::default()).unwrap();
        assert!(dfa.is_empty());
        assert_eq!(dfa.num_states(), 1);
    }

    #[test]
    fn empty_trace_when_initial_is_final() {
        let flower = flower_model(["a"]).unwrap();
        assert!(is_trace(&flower, &[], ExploreLimits::default()).unwrap());
        let dfa = language_dfa(&flower, ExploreLimits::default()).unwrap();
        assert!(dfa.accepts(&seq(&["a", "a", "a"])));
        assert!(dfa.is_universal(&seq(&["a"])));
        assert_eq!(flower_model(Vec::<String>::new()), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn wf_flower_is_universal_and_wf_shaped() {
        let f = wf_flower_model(["a", "b"]).unwrap();
        f.check_wf_shape().unwrap();
        assert!(flower_model(["a"]).unwrap().check_wf_shape().is_err());
        let dfa = language_dfa(&f, ExploreLimits::default()).unwrap();
        assert!(dfa.is_universal(&seq(&["a", "b"])));
    }

    #[test]
    fn explore_is_deterministic() {
        let apn = parse_net(UNROLLED).unwrap();
        let a = explore(&apn, ExploreLimits::default()).unwrap();
        let b = explore(&apn, ExploreLimits::default()).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn firing_conserves_token_arithmetic(choices in proptest::collection::vec(0usize..8, 0..12)) {
            let apn = parse_net(UNROLLED).unwrap();
            let mut cur = apn.initial().clone();
            for c in choices {
                let en = apn.enabled(&cur).unwrap();
                if en.is_empty() { break; }
                let t = en[c % en.len()];
                let tr = apn.net().transition(t);
                let next = apn.fire(&cur, t).unwrap();
                prop_assert_eq!(next.total(), cur.total() - tr.inputs.len() as u64 + tr.outputs.len() as u64);
                cur = next;
            }
        }
    }
}
