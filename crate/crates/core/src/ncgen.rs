//! Labeled (non-commutative) generating functions
//! `F_k^α = Σ_γ v(γ) W(γ)`, where `W(γ)` is the word of labels of the chain
//! `γ`, written with the last step leftmost.
//!
//! Words are kept up to a length bound. For `N` there is a weighted digraph
//! whose walks realize `F_k^α`, and the support of `F_k^α` is a regular
//! language built from `(U_1 + … + U_j)^*` blocks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::genfun::weight_monomial;
use crate::operators::{admissible_letters, Alphabet, Letter, Word};
use crate::polyfrac::{Monomial, MultiPoly, Rat};

/// A truncated non-commutative series: word ↦ integer combination of
/// monomials in the commuting variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCSeries {
    max_len: usize,
    terms: BTreeMap<Word, BTreeMap<Monomial, i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCTerm {
    pub word: String,
    pub coefficient: String,
}

impl NCSeries {
    pub fn new(max_len: usize) -> Self {
        NCSeries {
            max_len,
            terms: BTreeMap::new(),
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Adds `c · m · w`; words longer than the bound are dropped.
    pub fn add(&mut self, w: Word, m: Monomial, c: i64) {
        if w.len() > self.max_len || c == 0 {
            return;
        }
        let coeffs = self.terms.entry(w.clone()).or_default();
        let v = coeffs.entry(m.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            coeffs.remove(&m);
            if coeffs.is_empty() {
                self.terms.remove(&w);
            }
        }
    }

    pub fn merge(&mut self, other: &NCSeries) {
        for (w, m, c) in other.iter() {
            self.add(w.clone(), m.clone(), c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Monomial, i64)> {
        self.terms
            .iter()
            .flat_map(|(w, ms)| ms.iter().map(move |(m, &c)| (w, m, c)))
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&BTreeMap<Monomial, i64>> {
        self.terms.get(w)
    }

    /// The coefficient of `w` if it is a single monomial with coefficient 1.
    pub fn monomial_of(&self, w: &Word) -> Option<&Monomial> {
        let c = self.terms.get(w)?;
        match c.iter().next() {
            Some((m, 1)) if c.len() == 1 => Some(m),
            _ => None,
        }
    }

    /// Whether every coefficient is one monomial with coefficient 1.
    pub fn is_single_monomial(&self) -> bool {
        self.terms.keys().all(|w| self.monomial_of(w).is_some())
    }

    /// Words whose coefficient contains `m`.
    pub fn words_with_monomial(&self, m: &Monomial) -> BTreeSet<Word> {
        self.terms
            .iter()
            .filter(|(_, ms)| ms.contains_key(m))
            .map(|(w, _)| w.clone())
            .collect()
    }

    /// Letters set to 1.
    pub fn collapse_letters(&self) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (_, m, c) in self.iter() {
            p.add_term(m.clone(), Rat::from_integer(c.into()));
        }
        p
    }

    /// Commuting variables set to 1: the multiset of words.
    pub fn collapse_weights(&self) -> BTreeMap<Word, i64> {
        self.terms
            .iter()
            .map(|(w, ms)| (w.clone(), ms.values().sum()))
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    /// Number of words of each length `0..=max_len`.
    pub fn count_by_length(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_len + 1];
        for w in self.terms.keys() {
            out[w.len()] += 1;
        }
        out
    }

    pub fn terms_json(&self) -> Vec<NCTerm> {
        self.terms
            .iter()
            .map(|(w, ms)| NCTerm {
                word: w.to_string(),
                coefficient: format_coefficient(ms),
            })
            .collect()
    }

    /// The first word (in word order) whose coefficients differ.
    pub fn first_mismatch(&self, other: &NCSeries) -> Option<Error> {
        let words: BTreeSet<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        let empty = BTreeMap::new();
        for w in words {
            let a = self.terms.get(w).unwrap_or(&empty);
            let b = other.terms.get(w).unwrap_or(&empty);
            if a != b {
                return Some(Error::OracleMismatch {
                    word: w.to_string(),
                    expected: format_coefficient(a),
                    found: format_coefficient(b),
                });
            }
        }
        None
    }

    /// `Ok` if `found` equals `self` word by word.
    pub fn check_against(&self, found: &NCSeries) -> Result<()> {
        match self.first_mismatch(found) {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

fn format_coefficient(ms: &BTreeMap<Monomial, i64>) -> String {
    if ms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, &c)) in ms.iter().enumerate() {
        if c < 0 {
            s.push('-');
        } else if i > 0 {
            s.push('+');
        }
        if c.abs() != 1 {
            let _ = write!(s, "{}*", c.abs());
        }
        let _ = write!(s, "{}", m);
    }
    s
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, ms) in &self.terms {
            writeln!(f, "{}\t{}", w, format_coefficient(ms))?;
        }
        Ok(())
    }
}

/// All saturated chains from `α` with at most `n` steps, as word ↦ endpoint
/// monomial; with `Some(k)` only endpoints of width `k` are kept.
pub fn labeled_oracle(a: Alphabet, alpha: &Composition, k: Option<usize>, n: usize) -> NCSeries {
    let mut out = NCSeries::new(n);
    let mut stack: Vec<(Composition, Vec<Letter>)> = vec![(alpha.clone(), Vec::new())];
    while let Some((p, applied)) = stack.pop() {
        if k.map_or(true, |k| p.width() == k) {
            out.add(
                Word::from_application_order(applied.clone()),
                weight_monomial(&p),
                1,
            );
        }
        if applied.len() == n {
            continue;
        }
        for (t, q) in admissible_letters(&p, a) {
            if k.map_or(false, |k| q.width() > k) {
                continue;
            }
            let mut next = applied.clone();
            next.push(t);
            stack.push((q, next));
        }
    }
    out
}

/// Which all-ones correction `F_recurrence` subtracts in `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtractionTerm {
    /// `x_1⋯x_k R L^{k-1-r}`: the `R` step that duplicates `L` on `(1^{k-1})`.
    Resolved,
    /// `v(α) R L^{k-1}`, as sometimes written.
    Printed,
}

/// `F_k^α` for `N` or `BBD` from the recurrences, to word length `n`.
pub fn f_recurrence(a: Alphabet, alpha: &Composition, k: usize, n: usize) -> Result<NCSeries> {
    f_recurrence_with(a, alpha, k, n, SubtractionTerm::Resolved)
}

pub fn f_recurrence_with(
    a: Alphabet,
    alpha: &Composition,
    k: usize,
    n: usize,
    d: SubtractionTerm,
) -> Result<NCSeries> {
    let a = a.normalized()?;
    if !matches!(a, Alphabet::N | Alphabet::Bbd) {
        return Err(Error::Unsupported(a));
    }
    let r = alpha.width();
    if k < r {
        return Ok(NCSeries::new(n));
    }
    let mut base = NCSeries::new(n);
    if k == r {
        base.add(Word::empty(), weight_monomial(alpha), 1);
    } else {
        let prev = f_recurrence_with(a, alpha, k - 1, n, d)?;
        for (w, m, c) in prev.iter() {
            base.add(w.prepend(Letter::L), m.shift(1).mul(&Monomial::var(1)), c);
        }
        match a {
            Alphabet::N => {
                for (w, m, c) in prev.iter() {
                    base.add(w.prepend(Letter::R), m.mul(&Monomial::var(k)), c);
                }
                if alpha.is_all_ones() {
                    let (len, m) = match d {
                        SubtractionTerm::Resolved => (k - 1 - r, Monomial::new(vec![1; k])),
                        SubtractionTerm::Printed => (k - 1, weight_monomial(alpha)),
                    };
                    let mut letters = vec![Letter::R];
                    letters.extend(std::iter::repeat(Letter::L).take(len));
                    base.add(Word(letters), m, -1);
                }
            }
            _ => {
                for i in 2..=k {
                    for (w, m, c) in prev.iter() {
                        if m.exp(i - 1) != 1 {
                            base.add(w.prepend(Letter::V(i, 1)), m.shift(i).mul(&Monomial::var(i)), c);
                        }
                    }
                }
            }
        }
    }
    Ok(u_closure(base, k))
}

/// `(1 − x_1U_1 − … − x_kU_k)^{-1} · s`, truncated.
fn u_closure(s: NCSeries, k: usize) -> NCSeries {
    let mut out = s.clone();
    let mut frontier = s;
    while !frontier.is_empty() {
        let mut next = NCSeries::new(frontier.max_len);
        for (w, m, c) in frontier.iter() {
            for i in 1..=k {
                next.add(w.prepend(Letter::U(i)), m.mul(&Monomial::var(i)), c);
            }
        }
        out.merge(&next);
        frontier = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// `None` on entry edges that only carry a weight.
    pub letter: Option<Letter>,
    pub weight: Monomial,
}

/// Walks from `start` to `accept` read edge letters in the order the
/// operations are applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub states: usize,
    pub start: usize,
    pub accept: usize,
    pub edges: Vec<Edge>,
}

impl WeightedDigraph {
    fn add_state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    fn edge(&mut self, from: usize, to: usize, letter: Option<Letter>, weight: Monomial) {
        self.edges.push(Edge {
            from,
            to,
            letter,
            weight,
        });
    }

    /// Copies `g` into `self`, identifying its start with `start`; returns
    /// the state map.
    fn embed(&mut self, g: &WeightedDigraph, start: usize, relabel: impl Fn(&Monomial) -> Monomial) -> Vec<usize> {
        let map: Vec<usize> = (0..g.states)
            .map(|s| if s == g.start { start } else { self.add_state() })
            .collect();
        for e in &g.edges {
            self.edge(map[e.from], map[e.to], e.letter, relabel(&e.weight));
        }
        map
    }

    /// Copies `g` while tracking whether every letter so far was `L`; returns
    /// the copy of `g.accept` reached through at least one other letter.
    fn embed_excluding_pure_l(&mut self, g: &WeightedDigraph, start: usize) -> usize {
        let mut map: HashMap<(usize, bool), usize> = HashMap::new();
        map.insert((g.start, true), start);
        let mut todo = vec![(g.start, true)];
        while let Some((s, flag)) = todo.pop() {
            let from = map[&(s, flag)];
            for e in g.edges.iter().filter(|e| e.from == s) {
                let key = (e.to, flag && matches!(e.letter, None | Some(Letter::L)));
                let to = match map.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = self.add_state();
                        map.insert(key, t);
                        todo.push(key);
                        t
                    }
                };
                self.edge(from, to, e.letter, e.weight.clone());
            }
        }
        match map.get(&(g.accept, false)) {
            Some(&t) => t,
            None => self.add_state(),
        }
    }

    /// Drops states not on any walk from `start` to `accept`.
    fn trim(self) -> WeightedDigraph {
        let reach = |forward: bool, from: usize| {
            let mut seen = vec![false; self.states];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(s) = stack.pop() {
                for e in &self.edges {
                    let (a, b) = if forward { (e.from, e.to) } else { (e.to, e.from) };
                    if a == s && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen
        };
        let fwd = reach(true, self.start);
        let bwd = reach(false, self.accept);
        let mut map = vec![usize::MAX; self.states];
        let mut n = 0;
        for s in 0..self.states {
            if (fwd[s] && bwd[s]) || s == self.start || s == self.accept {
                map[s] = n;
                n += 1;
            }
        }
        let edges = self
            .edges
            .into_iter()
            .filter(|e| map[e.from] != usize::MAX && map[e.to] != usize::MAX)
            .map(|e| Edge {
                from: map[e.from],
                to: map[e.to],
                ..e
            })
            .collect();
        WeightedDigraph {
            states: n,
            start: map[self.start],
            accept: map[self.accept],
            edges,
        }
    }

    /// The series of all walks `start → accept` with at most `n` letters.
    pub fn path_series(&self, n: usize) -> NCSeries {
        let mut out = NCSeries::new(n);
        let mut stack: Vec<(usize, Vec<Letter>, Monomial)> = vec![(self.start, Vec::new(), Monomial::one())];
        while let Some((s, letters, m)) = stack.pop() {
            if s == self.accept {
                out.add(Word::from_application_order(letters.clone()), m.clone(), 1);
            }
            for e in self.edges.iter().filter(|e| e.from == s) {
                if e.letter.is_some() && letters.len() == n {
                    continue;
                }
                let mut next = letters.clone();
                next.extend(e.letter);
                stack.push((e.to, next, m.mul(&e.weight)));
            }
        }
        out
    }
}

/// Digraph for `F_k^α[N]`.
pub fn build_automaton_n(alpha: &Composition, k: usize) -> Result<WeightedDigraph> {
    let r = alpha.width();
    if k < r {
        return Err(Error::Precondition(format!("k = {} below the width of {}", k, alpha)));
    }
    let mut g = WeightedDigraph {
        states: 0,
        start: 0,
        accept: 0,
        edges: Vec::new(),
    };
    g.start = g.add_state();
    g.accept = g.add_state();
    if k == r {
        g.edge(g.start, g.accept, None, weight_monomial(alpha));
    } else {
        let prev = build_automaton_n(alpha, k - 1)?;
        let start = g.start;
        let accept = g.accept;
        let from_r = if alpha.is_all_ones() {
            g.embed_excluding_pure_l(&prev, start)
        } else {
            g.embed(&prev, start, Monomial::clone)[prev.accept]
        };
        g.edge(from_r, accept, Some(Letter::R), Monomial::var(k));
        let shifted = g.embed(&prev, start, |m| m.shift(1));
        g.edge(shifted[prev.accept], accept, Some(Letter::L), Monomial::var(1));
    }
    for i in 1..=k {
        g.edge(g.accept, g.accept, Some(Letter::U(i)), Monomial::var(i));
    }
    Ok(g.trim())
}

/// Graphviz rendering; edge labels are `letter/weight`, `ε` on entry edges.
pub fn export_dot(g: &WeightedDigraph) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=BT;\n");
    for q in 0..g.states {
        let shape = if q == g.start {
            "point"
        } else if q == g.accept {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(s, "  s{} [shape={}, label=\"\"];", q, shape);
    }
    for e in &g.edges {
        let letter = e.letter.map_or_else(|| "ε".to_string(), |t| t.to_string());
        let _ = writeln!(s, "  s{} -> s{} [label=\"{}/{}\"];", e.from, e.to, letter, e.weight);
    }
    s.push_str("}\n");
    s
}

/// Regular expressions over `{L, R, U_j}`; concatenation is written with the
/// last-applied factor leftmost, as for words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    /// `(U_1 + … + U_j)^*`.
    UStar(usize),
    Letter(Letter),
    Choice(Vec<Regex>),
    Concat(Vec<Regex>),
    /// The language of the regex without the listed words.
    Minus(Box<Regex>, Vec<Word>),
}

impl Regex {
    /// The language of width-`k` chains in `N` from a composition with `r`
    /// parts: `(U_1..U_k)^* (L+R) (U_1..U_{k-1})^* (L+R) ⋯ (L+R) (U_1..U_r)^*`,
    /// and for all-ones starts the word `R L^{j-1-r}` removed at each width `j`.
    pub fn chains_n(r: usize, k: usize, all_ones: bool) -> Result<Regex> {
        if k < r || r == 0 {
            return Err(Error::Precondition(format!("need 1 <= r <= k (r = {}, k = {})", r, k)));
        }
        let mut re = Regex::UStar(r);
        for j in r + 1..=k {
            let mut step = Regex::Concat(vec![Regex::Choice(vec![Regex::Letter(Letter::L), Regex::Letter(Letter::R)]), re]);
            if all_ones {
                let mut w = vec![Letter::R];
                w.extend(std::iter::repeat(Letter::L).take(j - 1 - r));
                step = Regex::Minus(Box::new(step), vec![Word(w)]);
            }
            re = Regex::Concat(vec![Regex::UStar(j), step]);
        }
        Ok(re)
    }

    /// The all-ones form that requires a `U` step right after every `R`:
    /// `(U_1..U_j)^* (L + (U_1..U_j) R) ⋯`.
    pub fn chains_n_u_after_r(r: usize, k: usize) -> Result<Regex> {
        if k < r || r == 0 {
            return Err(Error::Precondition(format!("need 1 <= r <= k (r = {}, k = {})", r, k)));
        }
        let mut re = Regex::UStar(r);
        for j in r + 1..=k {
            let us = Regex::Choice((1..=j).map(|i| Regex::Letter(Letter::U(i))).collect());
            let step = Regex::Choice(vec![
                Regex::Letter(Letter::L),
                Regex::Concat(vec![us, Regex::Letter(Letter::R)]),
            ]);
            re = Regex::Concat(vec![Regex::UStar(j), step, re]);
        }
        Ok(re)
    }

    /// All words of length at most `n`.
    pub fn language(&self, n: usize) -> BTreeSet<Word> {
        match self {
            Regex::UStar(j) => {
                let mut out = BTreeSet::new();
                let mut layer = vec![Word::empty()];
                for _ in 0..=n {
                    let mut next = Vec::new();
                    for w in &layer {
                        if w.len() < n {
                            for i in 1..=*j {
                                next.push(w.prepend(Letter::U(i)));
                            }
                        }
                    }
                    out.extend(layer);
                    layer = next;
                }
                out
            }
            Regex::Letter(t) => {
                if n >= 1 {
                    BTreeSet::from([Word(vec![*t])])
                } else {
                    BTreeSet::new()
                }
            }
            Regex::Choice(rs) => rs.iter().flat_map(|r| r.language(n)).collect(),
            Regex::Concat(rs) => {
                let mut acc = BTreeSet::from([Word::empty()]);
                for r in rs {
                    let right = r.language(n);
                    let mut next = BTreeSet::new();
                    for a in &acc {
                        for b in right.iter().filter(|b| a.len() + b.len() <= n) {
                            let mut v = a.0.clone();
                            v.extend_from_slice(&b.0);
                            next.insert(Word(v));
                        }
                    }
                    acc = next;
                }
                acc
            }
            Regex::Minus(r, ws) => {
                let mut l = r.language(n);
                for w in ws {
                    l.remove(w);
                }
                l
            }
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::UStar(1) => write!(f, "U1*"),
            Regex::UStar(j) => {
                let us: Vec<String> = (1..=*j).map(|i| format!("U{}", i)).collect();
                write!(f, "({})*", us.join("+"))
            }
            Regex::Letter(t) => write!(f, "{}", t),
            Regex::Choice(rs) => {
                let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                write!(f, "({})", parts.join("+"))
            }
            Regex::Concat(rs) => {
                for r in rs {
                    write!(f, "{}", r)?;
                }
                Ok(())
            }
            Regex::Minus(r, ws) => {
                let words: Vec<String> = ws.iter().map(|w| w.0.iter().map(|t| t.to_string()).collect()).collect();
                write!(f, "[{} \\ {{{}}}]", r, words.join(", "))
            }
        }
    }
}

/// Words of the regular language of width-`k` chains in `N` from a
/// composition with `r` parts, up to length `n`.
pub fn regex_language(r: usize, k: usize, all_ones: bool, n: usize) -> Result<BTreeSet<Word>> {
    Ok(Regex::chains_n(r, k, all_ones)?.language(n))
}
