use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::nfa::Nfa;
use crate::activity::Activity;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DfaState {
    pub accepting: bool,
    /// Symbol index into the alphabet → successor state.
    pub next: BTreeMap<usize, usize>,
}

/// Partial deterministic automaton: a missing transition rejects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<Activity>,
    states: Vec<DfaState>,
    initial: usize,
}

/// Result of [`Dfa::product`]: the conjunction automaton plus, for each of
/// its states, the pair of operand states it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub dfa: Dfa,
    pub origin: Vec<(usize, usize)>,
}

impl Dfa {
    pub(crate) fn from_parts(alphabet: Vec<Activity>, states: Vec<DfaState>, initial: usize) -> Self {
        debug_assert!(initial < states.len());
        Dfa {
            alphabet,
            states,
            initial,
        }
    }

    /// Accepts nothing; a single non-accepting state.
    pub fn empty(alphabet: impl IntoIterator<Item = Activity>) -> Self {
        let set: BTreeSet<Activity> = alphabet.into_iter().collect();
        Dfa::from_parts(set.into_iter().collect(), vec![DfaState::default()], 0)
    }

    /// Accepts every word over `alphabet`.
    pub fn universal(alphabet: impl IntoIterator<Item = Activity>) -> Self {
        let set: BTreeSet<Activity> = alphabet.into_iter().collect();
        let alphabet: Vec<Activity> = set.into_iter().collect();
        let next = (0..alphabet.len()).map(|a| (a, 0)).collect();
        Dfa::from_parts(alphabet, vec![DfaState { accepting: true, next }], 0)
    }

    /// Prefix-tree automaton accepting exactly `words`.
    pub fn from_words<'a, I>(alphabet: impl IntoIterator<Item = Activity>, words: I) -> Self
    where
        I: IntoIterator<Item = &'a [Activity]>,
    {
        let words: Vec<&[Activity]> = words.into_iter().collect();
        let mut set: BTreeSet<Activity> = alphabet.into_iter().collect();
        for w in &words {
            set.extend(w.iter().cloned());
        }
        let alphabet: Vec<Activity> = set.into_iter().collect();
        let mut states = vec![DfaState::default()];
        for w in words {
            let mut s = 0;
            for a in w {
                let sym = alphabet.binary_search(a).expect("alphabet covers words");
                s = match states[s].next.get(&sym) {
                    Some(&t) => t,
                    None => {
                        states.push(DfaState::default());
                        let t = states.len() - 1;
                        states[s].next.insert(sym, t);
                        t
                    }
                };
            }
            states[s].accepting = true;
        }
        Dfa::from_parts(alphabet, states, 0)
    }

    pub fn alphabet(&self) -> &[Activity] {
        &self.alphabet
    }

    pub fn states(&self) -> &[DfaState] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn symbol(&self, a: &Activity) -> Option<usize> {
        self.alphabet.binary_search(a).ok()
    }

    pub fn step(&self, s: usize, a: &Activity) -> Option<usize> {
        self.symbol(a).and_then(|i| self.states[s].next.get(&i).copied())
    }

    pub fn run(&self, word: &[Activity]) -> Option<usize> {
        word.iter().try_fold(self.initial, |s, a| self.step(s, a))
    }

    pub fn accepts(&self, word: &[Activity]) -> bool {
        self.run(word).is_some_and(|s| self.states[s].accepting)
    }

    /// Outgoing activities of a state, in alphabet order.
    pub fn outgoing(&self, s: usize) -> impl Iterator<Item = (&Activity, usize)> + '_ {
        self.states[s]
            .next
            .iter()
            .map(move |(&a, &t)| (&self.alphabet[a], t))
    }

    /// Same language over the union of both alphabets.
    pub fn with_alphabet(&self, extra: &[Activity]) -> Dfa {
        let mut set: BTreeSet<Activity> = self.alphabet.iter().cloned().collect();
        set.extend(extra.iter().cloned());
        let alphabet: Vec<Activity> = set.into_iter().collect();
        let remap: Vec<usize> = self
            .alphabet
            .iter()
            .map(|a| alphabet.binary_search(a).unwrap())
            .collect();
        let states = self
            .states
            .iter()
            .map(|s| DfaState {
                accepting: s.accepting,
                next: s.next.iter().map(|(&a, &t)| (remap[a], t)).collect(),
            })
            .collect();
        Dfa::from_parts(alphabet, states, self.initial)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for &t in self.states[s].next.values() {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub fn co_reachable(&self) -> Vec<bool> {
        let n = self.states.len();
        let mut rev = vec![Vec::new(); n];
        for (s, st) in self.states.iter().enumerate() {
            for &t in st.next.values() {
                rev[t].push(s);
            }
        }
        let mut seen: Vec<bool> = self.states.iter().map(|s| s.accepting).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Removes unreachable states and states that cannot reach acceptance,
    /// renumbering in breadth-first order (symbols ascending).
    pub fn trim(&self) -> Dfa {
        let live = self.co_reachable();
        if !live[self.initial] {
            return Dfa::empty(self.alphabet.clone());
        }
        self.renumber_bfs(|s| live[s])
    }

    fn renumber_bfs(&self, keep: impl Fn(usize) -> bool) -> Dfa {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = vec![self.initial];
        map.insert(self.initial, 0);
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for &t in self.states[s].next.values() {
                if keep(t) && !map.contains_key(&t) {
                    map.insert(t, order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let states = order
            .iter()
            .map(|&s| DfaState {
                accepting: self.states[s].accepting,
                next: self.states[s]
                    .next
                    .iter()
                    .filter_map(|(&a, t)| map.get(t).map(|&nt| (a, nt)))
                    .collect(),
            })
            .collect();
        Dfa::from_parts(self.alphabet.clone(), states, 0)
    }

    /// Minimal trimmed DFA by partition refinement, states numbered in
    /// breadth-first order. Two language-equal automata over the same
    /// alphabet minimize to identical values.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim();
        let n = trimmed.states.len();
        let k = trimmed.alphabet.len();
        // Missing transitions go to an implicit dead class, encoded as usize::MAX.
        let mut class: Vec<usize> = trimmed
            .states
            .iter()
            .map(|s| usize::from(s.accepting))
            .collect();
        let mut n_classes = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next_class = vec![0; n];
            for s in 0..n {
                let succ: Vec<usize> = (0..k)
                    .map(|a| {
                        trimmed.states[s]
                            .next
                            .get(&a)
                            .map_or(usize::MAX, |&t| class[t])
                    })
                    .collect();
                let key = (class[s], succ);
                let len = sig_index.len();
                next_class[s] = *sig_index.entry(key).or_insert(len);
            }
            let count = sig_index.len();
            class = next_class;
            if count == n_classes {
                break;
            }
            n_classes = count;
        }
        let mut quotient: Vec<DfaState> = vec![DfaState::default(); n_classes];
        for s in 0..n {
            let c = class[s];
            quotient[c].accepting = trimmed.states[s].accepting;
            for (&a, &t) in &trimmed.states[s].next {
                quotient[c].next.insert(a, class[t]);
            }
        }
        let q = Dfa::from_parts(trimmed.alphabet.clone(), quotient, class[trimmed.initial]);
        q.renumber_bfs(|_| true)
    }

    /// Conjunction automaton over the union alphabet, reachable part only.
    pub fn product(&self, other: &Dfa) -> Product {
        let a = self.with_alphabet(&other.alphabet);
        let b = other.with_alphabet(&self.alphabet);
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut origin = vec![(a.initial, b.initial)];
        let mut states = vec![DfaState {
            accepting: a.states[a.initial].accepting && b.states[b.initial].accepting,
            next: BTreeMap::new(),
        }];
        index.insert((a.initial, b.initial), 0);
        let mut i = 0;
        while i < origin.len() {
            let (sa, sb) = origin[i];
            for (&sym, &ta) in &a.states[sa].next {
                if let Some(&tb) = b.states[sb].next.get(&sym) {
                    let t = match index.get(&(ta, tb)) {
                        Some(&t) => t,
                        None => {
                            let t = origin.len();
                            index.insert((ta, tb), t);
                            origin.push((ta, tb));
                            states.push(DfaState {
                                accepting: a.states[ta].accepting && b.states[tb].accepting,
                                next: BTreeMap::new(),
                            });
                            t
                        }
                    };
                    states[i].next.insert(sym, t);
                }
            }
            i += 1;
        }
        Product {
            dfa: Dfa::from_parts(a.alphabet, states, 0),
            origin,
        }
    }

    /// Shortest word in `L(self) \ L(other)`, ties broken by alphabet order.
    pub fn subset_witness(&self, other: &Dfa) -> Option<Vec<Activity>> {
        let a = self.with_alphabet(&other.alphabet);
        let b = other.with_alphabet(&self.alphabet);
        // `None` on the right is the dead state of `b`.
        let start = (a.initial, Some(b.initial));
        type Pair = (usize, Option<usize>);
        let mut parent: BTreeMap<Pair, Option<(Pair, usize)>> = BTreeMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(cur @ (sa, sb)) = queue.pop_front() {
            let b_accepts = sb.is_some_and(|s| b.states[s].accepting);
            if a.states[sa].accepting && !b_accepts {
                let mut word = Vec::new();
                let mut at = cur;
                while let Some(Some((prev, sym))) = parent.get(&at) {
                    word.push(a.alphabet[*sym].clone());
                    at = *prev;
                }
                word.reverse();
                return Some(word);
            }
            for (&sym, &ta) in &a.states[sa].next {
                let tb = sb.and_then(|s| b.states[s].next.get(&sym).copied());
                let nxt = (ta, tb);
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(nxt) {
                    e.insert(Some((cur, sym)));
                    queue.push_back(nxt);
                }
            }
        }
        None
    }

    pub fn is_subset(&self, other: &Dfa) -> bool {
        self.subset_witness(other).is_none()
    }

    pub fn language_eq(&self, other: &Dfa) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    /// True iff every word over `alphabet` is accepted. Missing transitions
    /// count as a path to the dead state.
    pub fn is_universal(&self, alphabet: &[Activity]) -> bool {
        let reach = self.reachable();
        for (s, st) in self.states.iter().enumerate() {
            if !reach[s] {
                continue;
            }
            if !st.accepting {
                return false;
            }
            if alphabet.iter().any(|a| self.step(s, a).is_none()) {
                return false;
            }
        }
        true
    }

    pub fn is_empty(&self) -> bool {
        !self.co_reachable()[self.initial]
    }

    /// Keeps only `keep` symbols: dropped symbols become ε, then the result
    /// is determinized and minimized.
    pub fn project(&self, keep: &BTreeSet<Activity>) -> Dfa {
        let mut nfa = Nfa::new(self.alphabet.iter().filter(|a| keep.contains(*a)).cloned());
        for st in &self.states {
            nfa.add_state(st.accepting);
        }
        nfa.set_initial(self.initial);
        for (s, st) in self.states.iter().enumerate() {
            for (&sym, &t) in &st.next {
                let a = &self.alphabet[sym];
                if keep.contains(a) {
                    nfa.add_edge(s, Some(a), t);
                } else {
                    nfa.add_edge(s, None, t);
                }
            }
        }
        nfa.determinize().minimize()
    }

    /// Whether the trimmed automaton has a cycle, i.e. the language is infinite.
    pub fn is_infinite(&self) -> bool {
        let t = self.trim();
        if t.is_empty() {
            return false;
        }
        // Iterative three-colour DFS.
        let n = t.states.len();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>)> =
                vec![(root, t.states[root].next.values().copied().collect())];
            colour[root] = 1;
            while let Some((s, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(x) => match colour[x] {
                        1 => return true,
                        0 => {
                            colour[x] = 1;
                            let succ = t.states[x].next.values().copied().collect();
                            stack.push((x, succ));
                        }
                        _ => {}
                    },
                    None => {
                        colour[*s] = 2;
                        stack.pop();
                    }
                }
            }
        }
        false
    }

    /// Number of accepted words of a finite language, `None` if infinite or
    /// larger than `u128`.
    pub fn count_words(&self) -> Option<u128> {
        if self.is_infinite() {
            return None;
        }
        let t = self.trim();
        if t.is_empty() {
            return Some(0);
        }
        // Acyclic: memoised path counting.
        fn count(t: &Dfa, s: usize, memo: &mut Vec<Option<u128>>) -> Option<u128> {
            if let Some(c) = memo[s] {
                return Some(c);
            }
            let mut total = u128::from(t.states[s].accepting);
            for &x in t.states[s].next.values() {
                total = total.checked_add(count(t, x, memo)?)?;
            }
            memo[s] = Some(total);
            Some(total)
        }
        let mut memo = vec![None; t.states.len()];
        count(&t, t.initial, &mut memo)
    }

    /// All accepted words of length ≤ `max_len`, shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<Activity>> {
        let mut out = Vec::new();
        let mut layer: Vec<(usize, Vec<Activity>)> = vec![(self.initial, Vec::new())];
        for depth in 0..=max_len {
            let mut next_layer = Vec::new();
            for (s, w) in &layer {
                if self.states[*s].accepting {
                    out.push(w.clone());
                }
                if depth < max_len {
                    for (a, t) in self.outgoing(*s) {
                        let mut w2 = w.clone();
                        w2.push(a.clone());
                        next_layer.push((t, w2));
                    }
                }
            }
            layer = next_layer;
        }
        out
    }

    /// Graphviz rendering.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=LR;\n  init [shape=point];\n");
        for (i, s) in self.states.iter().enumerate() {
            let shape = if s.accepting { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{i} [shape={shape}];");
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for (i, s) in self.states.iter().enumerate() {
            for (&a, &t) in &s.next {
                let _ = writeln!(out, "  q{i} -> q{t} [label=\"{}\"];", self.alphabet[a]);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activity::seq;

    /// a*b with a duplicated a-loop state.
    fn redundant_a_star_b() -> Dfa {
        let ab = seq(&["a", "b"]);
        let mut states = vec![DfaState::default(); 3];
        states[0].next.insert(0, 1);
        states[0].next.insert(1, 2);
        states[1].next.insert(0, 0);
        states[1].next.insert(1, 2);
        states[2].accepting = true;
        Dfa::from_parts(ab, states, 0)
    }

    fn all_words(alphabet: &[Activity], max_len: usize) -> Vec<Vec<Activity>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for a in alphabet {
                    let mut w2: Vec<Activity> = w.clone();
                    w2.push(a.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn minimize_merges_duplicate_loop_state() {
        let d = redundant_a_star_b();
        let m = d.minimize();
        assert_eq!(m.num_states(), 2);
        for w in all_words(d.alphabet(), 5) {
            assert_eq!(d.accepts(&w), m.accepts(&w), "{w:?}");
        }
        assert_eq!(m.minimize(), m);
    }

    #[test]
    fn minimize_empty_language() {
        let mut d = redundant_a_star_b();
        d.states[2].accepting = false;
        let m = d.minimize();
        assert_eq!(m.num_states(), 1);
        assert!(!m.states()[0].accepting);
        assert!(m.is_empty());
    }

    #[test]
    fn product_of_a_star_b_and_b_star() {
        let a_star_b = redundant_a_star_b();
        let b_star = Dfa::universal(seq(&["b"]));
        let p = a_star_b.product(&b_star);
        let ab = seq(&["a", "b"]);
        for w in all_words(&ab, 4) {
            let expected = a_star_b.accepts(&w) && b_star.accepts(&w);
            assert_eq!(p.dfa.accepts(&w), expected, "{w:?}");
        }
        assert!(p.dfa.accepts(&seq(&["b"])));
        assert_eq!(p.origin[0], (0, 0));
    }

    #[test]
    fn subset_witness_is_shortest() {
        let u = Dfa::universal(seq(&["a", "b"]));
        let d = redundant_a_star_b();
        assert!(d.is_subset(&u));
        assert_eq!(u.subset_witness(&d), Some(vec![]));
        assert!(u.is_universal(&seq(&["a", "b"])));
        assert!(!d.is_universal(&seq(&["a", "b"])));
    }

    #[test]
    fn projection_of_a_star_b_onto_b() {
        let d = redundant_a_star_b();
        let keep: BTreeSet<Activity> = [Activity::from("b")].into();
        let p = d.project(&keep);
        let b = seq(&["b"]);
        for w in all_words(&b, 3) {
            assert_eq!(p.accepts(&w), w.len() == 1, "{w:?}");
        }
    }

    #[test]
    fn counts_and_cycles() {
        let d = redundant_a_star_b();
        assert!(d.is_infinite());
        assert_eq!(d.count_words(), None);
        let f = Dfa::from_words(
            seq(&["a", "b"]),
            [seq(&["a"]), seq(&["a", "b"]), seq(&["b"])].iter().map(|w| w.as_slice()),
        );
        assert!(!f.is_infinite());
        assert_eq!(f.count_words(), Some(3));
        assert_eq!(f.words_up_to(2).len(), 3);
    }

    #[test]
    fn dot_mentions_every_edge() {
        let dot = redundant_a_star_b().minimize().to_dot("m");
        assert_eq!(dot.matches("->").count(), 3);
    }
}
