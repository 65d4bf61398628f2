//! Cover relations, saturated chains and their tableaux.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::{Composition, DescentSet, Partition};
use crate::error::{Error, Result};
use crate::operators::{admissible_letters, Alphabet, Letter, Word};

pub fn covers(a: Alphabet, p: &Composition) -> Vec<(Letter, Composition)> {
    admissible_letters(p, a)
}

/// Lexicographically smallest permutation of `1..=n` whose descent set is
/// `d`: the identity with every maximal run of consecutive descents reversed.
pub fn min_permutation_with_descents(d: &DescentSet) -> Vec<usize> {
    let n = d.n;
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut i = 0;
    while i < d.set.len() {
        let start = d.set[i];
        let mut end = start;
        while i + 1 < d.set.len() && d.set[i + 1] == end + 1 {
            i += 1;
            end += 1;
        }
        // descents at positions start..=end reverse entries start..=end+1 (1-based)
        perm[start - 1..=end].reverse();
        i += 1;
    }
    perm
}

/// Covers of `p` in the `S^inf` poset computed through descent sets: insert
/// `0` at every position of `pi` and read back each descent set as a
/// composition of `n + 1`.
pub fn covers_via_descent_oracle_with(pi: &[usize]) -> BTreeSet<Composition> {
    let n = pi.len();
    (0..=n)
        .map(|pos| {
            let mut tau: Vec<usize> = Vec::with_capacity(n + 1);
            tau.extend_from_slice(&pi[..pos]);
            tau.push(0);
            tau.extend_from_slice(&pi[pos..]);
            Composition::from_descents(&DescentSet::of_sequence(&tau))
        })
        .collect()
}

pub fn covers_via_descent_oracle(p: &Composition) -> BTreeSet<Composition> {
    covers_via_descent_oracle_with(&min_permutation_with_descents(&p.descent_set()))
}

/// `p <= q` in the poset: `q` is reachable by admissible letters.
pub fn leq(a: Alphabet, p: &Composition, q: &Composition) -> bool {
    if p == q {
        return true;
    }
    if q.weight() <= p.weight() || q.width() < p.width() {
        return false;
    }
    let mut layer: HashSet<Composition> = HashSet::from([p.clone()]);
    for _ in p.weight()..q.weight() {
        let mut next = HashSet::new();
        for c in &layer {
            for (_, d) in covers(a, c) {
                if d.width() <= q.width() {
                    next.insert(d);
                }
            }
        }
        layer = next;
        if layer.is_empty() {
            return false;
        }
    }
    layer.contains(q)
}

/// Number of saturated chains from `p` to every reachable composition of
/// weight at most `max_weight` and width at most `max_width`.
pub fn chain_counts(
    a: Alphabet,
    p: &Composition,
    max_weight: usize,
    max_width: usize,
) -> HashMap<Composition, BigUint> {
    let mut all: HashMap<Composition, BigUint> = HashMap::new();
    if p.width() > max_width || p.weight() > max_weight {
        return all;
    }
    let mut layer: HashMap<Composition, BigUint> = HashMap::from([(p.clone(), BigUint::one())]);
    for _ in p.weight()..max_weight {
        let mut next: HashMap<Composition, BigUint> = HashMap::new();
        for (c, m) in &layer {
            for (_, d) in covers(a, c) {
                if d.width() <= max_width {
                    *next.entry(d).or_insert_with(BigUint::zero) += m;
                }
            }
        }
        all.extend(layer);
        layer = next;
    }
    all.extend(layer);
    all
}

pub fn count_chains(a: Alphabet, p: &Composition, q: &Composition) -> BigUint {
    if q.weight() < p.weight() {
        return BigUint::zero();
    }
    chain_counts(a, p, q.weight(), q.width())
        .remove(q)
        .unwrap_or_else(BigUint::zero)
}

/// A saturated chain with one label per cover step, in application order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub steps: Vec<Composition>,
    pub labels: Vec<Letter>,
}

impl Chain {
    pub fn trivial(p: Composition) -> Self {
        Chain {
            steps: vec![p],
            labels: Vec::new(),
        }
    }

    pub fn start(&self) -> &Composition {
        &self.steps[0]
    }

    pub fn end(&self) -> &Composition {
        self.steps.last().expect("chains are nonempty")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The label word, last step leftmost.
    pub fn word(&self) -> Word {
        Word::from_application_order(self.labels.clone())
    }

    /// Label a sequence of compositions; each must cover the previous one.
    pub fn from_steps(a: Alphabet, steps: Vec<Composition>) -> Result<Chain> {
        if steps.is_empty() {
            return Err(Error::Precondition("a chain needs a start".into()));
        }
        let mut labels = Vec::with_capacity(steps.len() - 1);
        for (i, w) in steps.windows(2).enumerate() {
            let t = covers(a, &w[0])
                .into_iter()
                .find(|(_, q)| *q == w[1])
                .map(|(t, _)| t)
                .ok_or_else(|| {
                    Error::Precondition(format!("step {}: {} does not cover {}", i + 1, w[1], w[0]))
                })?;
            labels.push(t);
        }
        Ok(Chain { steps, labels })
    }

    /// Rebuild the chain by applying `w` to `p` in `a`.
    pub fn from_word(a: Alphabet, p: &Composition, w: &Word) -> Result<Chain> {
        let mut chain = Chain::trivial(p.clone());
        for (step, t) in w.application_order().enumerate() {
            let cur = chain.end().clone();
            let next = covers(a, &cur)
                .into_iter()
                .find(|(s, _)| *s == t)
                .map(|(_, q)| q)
                .ok_or_else(|| Error::NotAdmissible {
                    step,
                    letter: t.to_string(),
                })?;
            chain.steps.push(next);
            chain.labels.push(t);
        }
        Ok(chain)
    }
}

/// Depth-first enumeration of saturated chains of a fixed length.
pub struct ChainIter {
    alphabet: Alphabet,
    length: usize,
    width_filter: Option<usize>,
    path: Vec<Composition>,
    labels: Vec<Letter>,
    stack: Vec<(Vec<(Letter, Composition)>, usize)>,
    started: bool,
}

impl ChainIter {
    fn prune(&self, q: &Composition, depth: usize) -> bool {
        match self.width_filter {
            // widths never decrease and grow by at most one per step
            Some(k) => q.width() > k || q.width() + (self.length - depth) < k,
            None => false,
        }
    }
}

impl Iterator for ChainIter {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        if !self.started {
            self.started = true;
            let start = self.path[0].clone();
            if self.length == 0 {
                return match self.width_filter {
                    Some(k) if start.width() != k => None,
                    _ => Some(Chain::trivial(start)),
                };
            }
            if self.prune(&start, 0) {
                return None;
            }
            self.stack.push((covers(self.alphabet, &start), 0));
        }
        loop {
            let (options, idx) = self.stack.last_mut()?;
            if *idx >= options.len() {
                self.stack.pop();
                self.path.pop();
                self.labels.pop();
                continue;
            }
            let (t, q) = options[*idx].clone();
            *idx += 1;
            let depth = self.labels.len() + 1;
            if self.prune(&q, depth) {
                continue;
            }
            if depth == self.length {
                let mut steps = self.path.clone();
                steps.push(q);
                let mut labels = self.labels.clone();
                labels.push(t);
                return Some(Chain { steps, labels });
            }
            let next = covers(self.alphabet, &q);
            self.path.push(q);
            self.labels.push(t);
            self.stack.push((next, 0));
        }
    }
}

/// All saturated chains of length `n` from `p`, optionally only those whose
/// endpoint has width `width_filter`.
pub fn enumerate_chains(
    a: Alphabet,
    p: &Composition,
    n: usize,
    width_filter: Option<usize>,
) -> ChainIter {
    ChainIter {
        alphabet: a,
        length: n,
        width_filter,
        path: vec![p.clone()],
        labels: Vec::new(),
        stack: Vec::new(),
        started: false,
    }
}

/// Entries on the diagram of the final composition, per column bottom to
/// top: 0 for boxes of the initial composition, otherwise the step at which
/// the box appeared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tableau {
    pub columns: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn shape(&self) -> Composition {
        Composition::from_parts_unchecked(self.columns.iter().map(Vec::len).collect())
    }

    pub fn size(&self) -> usize {
        self.columns.iter().flatten().filter(|&&e| e > 0).count()
    }
}

impl std::fmt::Display for Tableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_columns(f, &self.columns)
    }
}

fn write_columns(f: &mut std::fmt::Formatter<'_>, columns: &[Vec<usize>]) -> std::fmt::Result {
    let top = columns.iter().map(Vec::len).max().unwrap_or(0);
    let w = columns
        .iter()
        .flatten()
        .map(|e| e.to_string().len())
        .max()
        .unwrap_or(1);
    for row in (0..top).rev() {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| match c.get(row) {
                Some(e) => format!("{:>w$}", e, w = w),
                None => " ".repeat(w),
            })
            .collect();
        writeln!(f, "{}", cells.join(" ").trim_end())?;
    }
    Ok(())
}

/// Track part identities through the chain: `L`, `R` and `V_i^1` create a
/// new single-box part, `U_j` stacks a box on part `j`.
pub fn chain_to_tableau(c: &Chain) -> Result<Tableau> {
    let mut columns: Vec<Vec<usize>> = c.start().parts().iter().map(|&p| vec![0; p]).collect();
    for (idx, t) in c.labels.iter().enumerate() {
        let s = idx + 1;
        match *t {
            Letter::L => columns.insert(0, vec![s]),
            Letter::R => columns.push(vec![s]),
            Letter::U(j) => columns
                .get_mut(j - 1)
                .ok_or_else(|| Error::InvalidTableau(format!("U{} past the last part", j)))?
                .push(s),
            Letter::V(i, 1) => {
                if i - 1 > columns.len() {
                    return Err(Error::InvalidTableau(format!("V{}^1 out of range", i)));
                }
                columns.insert(i - 1, vec![s])
            }
            Letter::V(_, _) => {
                return Err(Error::InvalidTableau(
                    "V_i^r with r >= 2 moves boxes; no tableau".into(),
                ))
            }
        }
    }
    let t = Tableau { columns };
    if &t.shape() != c.end() {
        return Err(Error::InvalidTableau(format!(
            "labels do not reproduce the endpoint {}",
            c.end()
        )));
    }
    Ok(t)
}

/// Inverse of [`chain_to_tableau`].
pub fn tableau_to_chain(t: &Tableau, a: Alphabet) -> Result<Chain> {
    if !a.has_tableaux() {
        return Err(Error::Unsupported(a));
    }
    let n = t.size();
    let mut seen = vec![false; n + 1];
    for col in &t.columns {
        if col.is_empty() {
            return Err(Error::InvalidTableau("empty column".into()));
        }
        for w in col.windows(2) {
            if w[1] <= w[0] && w[1] != 0 {
                return Err(Error::InvalidTableau("entries must increase upwards".into()));
            }
            if w[1] == 0 && w[0] != 0 {
                return Err(Error::InvalidTableau("initial boxes must sit at the bottom".into()));
            }
        }
        for &e in col {
            if e > n || (e > 0 && std::mem::replace(&mut seen[e], true)) {
                return Err(Error::InvalidTableau(format!("entries are not 1..{}", n)));
            }
        }
    }
    let at_step = |s: usize| -> Composition {
        let parts = t
            .columns
            .iter()
            .filter(|c| c[0] <= s)
            .map(|c| c.iter().take_while(|&&e| e <= s).count())
            .collect();
        Composition::from_parts_unchecked(parts)
    };
    let mut chain = Chain::trivial(at_step(0));
    for s in 1..=n {
        let next = at_step(s);
        let cur = chain.end().clone();
        let (letter, _) = covers(a, &cur)
            .into_iter()
            .find(|(_, q)| *q == next)
            .ok_or_else(|| {
                Error::InvalidTableau(format!("step {}: {} does not cover {}", s, next, cur))
            })?;
        chain.steps.push(next);
        chain.labels.push(letter);
    }
    if &chain_to_tableau(&chain)? != t {
        return Err(Error::InvalidTableau(
            "box placement contradicts the admissible labels".into(),
        ));
    }
    Ok(chain)
}

/// Standard skew tableau on `outer / inner`, stored like [`Tableau`]: part
/// `i` of the partition is column `i`, entries bottom to top, 0 for cells of
/// `inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewTableau {
    pub outer: Partition,
    pub inner: Partition,
    pub columns: Vec<Vec<usize>>,
}

impl SkewTableau {
    pub fn size(&self) -> usize {
        self.outer.weight() - self.inner.weight()
    }

    /// The partitions `inner = lambda_0 < lambda_1 < ... < outer`.
    pub fn young_chain(&self) -> Vec<Partition> {
        (0..=self.size())
            .map(|s| {
                let parts = self
                    .columns
                    .iter()
                    .map(|c| c.iter().take_while(|&&e| e <= s).count())
                    .collect();
                Partition::new(parts).expect("columns of a skew tableau are decreasing")
            })
            .collect()
    }
}

impl std::fmt::Display for SkewTableau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write_columns(f, &self.columns)
    }
}

/// The image of the chain under `mw*`, as a skew tableau.
pub fn shadow(c: &Chain) -> Result<SkewTableau> {
    let inner = c.start().mw_star();
    let mut columns: Vec<Vec<usize>> = inner.parts().iter().map(|&p| vec![0; p]).collect();
    let mut prev = inner.clone();
    for (idx, q) in c.steps.iter().enumerate().skip(1) {
        let cur = q.mw_star();
        if !prev.is_young_covered_by(&cur) {
            return Err(Error::Precondition(format!(
                "step {}: {} -> {} is not a Young cover",
                idx, prev, cur
            )));
        }
        let j = (0..cur.len())
            .find(|&j| prev.parts().get(j) != cur.parts().get(j))
            .expect("covers differ in one part");
        if j == columns.len() {
            columns.push(Vec::new());
        }
        columns[j].push(idx);
        prev = cur;
    }
    Ok(SkewTableau {
        outer: prev,
        inner,
        columns,
    })
}

/// Chains of `a` whose shadow is `s`.
pub fn chains_over_shadow(a: Alphabet, s: &SkewTableau) -> Vec<Chain> {
    let n = s.size();
    let width = s.outer.len();
    s.inner
        .rearrangements()
        .iter()
        .flat_map(|p0| enumerate_chains(a, p0, n, Some(width)).collect::<Vec<_>>())
        .filter(|c| shadow(c).map_or(false, |t| &t == s))
        .collect()
}

pub fn shadow_multiplicity(a: Alphabet, s: &SkewTableau) -> usize {
    chains_over_shadow(a, s).len()
}

/// Result of checking that `mw*` is a (almost) Young multiranking.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultirankReport {
    pub alphabet: Alphabet,
    pub max_weight: usize,
    pub covers_checked: usize,
    /// Image edges that are not Young covers (the extra relations of the
    /// extended order).
    pub extra_edges: BTreeSet<(Partition, Partition)>,
    pub violations: Vec<String>,
}

impl MultirankReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every cover between weights below `max_weight`: images are rank
/// preserving, every partition is hit, and every Young cover is attained.
/// For `N` and `BBD` an image edge outside the Young lattice is a
/// violation; for the `S` posets such edges make up the extended order and
/// are reported.
pub fn verify_multiranking(a: Alphabet, max_weight: usize) -> MultirankReport {
    let strict = a.has_tableaux();
    let mut image: BTreeSet<(Partition, Partition)> = BTreeSet::new();
    let mut violations = Vec::new();
    let mut covers_checked = 0;
    for n in 0..max_weight {
        for p in Composition::all_of_weight(n) {
            let lam = p.mw_star();
            for (t, q) in covers(a, &p) {
                covers_checked += 1;
                let mu = q.mw_star();
                if mu.weight() != lam.weight() + 1 {
                    violations.push(format!("{} -{}-> {} is not rank preserving", p, t, q));
                }
                image.insert((lam.clone(), mu));
            }
        }
    }
    let mut extra_edges = BTreeSet::new();
    for (lam, mu) in &image {
        if !lam.is_young_covered_by(mu) {
            if strict {
                violations.push(format!("image edge {} -> {} is not a Young cover", lam, mu));
            }
            extra_edges.insert((lam.clone(), mu.clone()));
        }
    }
    for n in 0..=max_weight {
        for lam in Partition::all_of_weight(n) {
            // surjectivity: the partition itself is a composition
            let as_comp = Composition::from_parts_unchecked(lam.parts().to_vec());
            if as_comp.mw_star() != lam {
                violations.push(format!("{} is not in the image", lam));
            }
            if n < max_weight {
                for mu in lam.young_covers() {
                    if !image.contains(&(lam.clone(), mu.clone())) {
                        violations.push(format!("Young cover {} -> {} is not attained", lam, mu));
                    }
                }
            }
        }
    }
    MultirankReport {
        alphabet: a,
        max_weight,
        covers_checked,
        extra_edges,
        violations,
    }
}

/// DOT digraph of all compositions of weight at most `max_weight`, edges
/// labeled with the covering letter.
pub fn hasse_dot(a: Alphabet, max_weight: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph hasse {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let mut ids: BTreeMap<Composition, usize> = BTreeMap::new();
    let mut all = Vec::new();
    for n in 0..=max_weight {
        all.extend(Composition::all_of_weight(n));
    }
    for (i, c) in all.iter().enumerate() {
        ids.insert(c.clone(), i);
        let _ = writeln!(out, "  n{} [label=\"{}\"];", i, c);
    }
    for c in &all {
        if c.weight() == max_weight {
            continue;
        }
        for (t, q) in covers(a, c) {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", ids[c], ids[&q], t);
        }
    }
    out.push_str("}\n");
    out
}
