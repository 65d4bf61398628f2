//! Compositions, partitions, diagrams and the descent-set encoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of positive integers. The empty composition is a
/// valid value of width 0 and prints as `()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(Error::InvalidComposition(format!(
                "part {} is zero in {:?}",
                pos + 1,
                parts
            )));
        }
        Ok(Composition { parts })
    }

    /// Construct without validation. Callers guarantee every part is positive.
    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        Composition { parts }
    }

    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    /// The composition `(1, 1, ..., 1)` with `r` parts.
    pub fn all_ones(r: usize) -> Self {
        Composition { parts: vec![1; r] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<usize> {
        self.parts
    }

    pub fn width(&self) -> usize {
        self.parts.len()
    }

    pub fn height(&self) -> usize {
        self.parts.iter().copied().max().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(width, height, weight)`.
    pub fn measures(&self) -> (usize, usize, usize) {
        (self.width(), self.height(), self.weight())
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// True for `(1,...,1)`, including the empty composition.
    pub fn is_all_ones(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// `mw(P) = sum_i f_{p_i}` where `f_j = e_1 + ... + e_j`. Component `m`
    /// counts the parts that are at least `m`.
    pub fn multiweight(&self) -> Partition {
        let mut v = vec![0usize; self.height()];
        for &p in &self.parts {
            for slot in v.iter_mut().take(p) {
                *slot += 1;
            }
        }
        Partition { parts: v }
    }

    /// The decreasing reordering of the parts.
    pub fn mw_star(&self) -> Partition {
        let mut v = self.parts.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts: v }
    }

    pub fn descent_set(&self) -> DescentSet {
        let n = self.weight();
        let mut set = Vec::with_capacity(self.width().saturating_sub(1));
        let mut acc = 0;
        for &p in self.parts.iter().take(self.width().saturating_sub(1)) {
            acc += p;
            set.push(acc);
        }
        DescentSet { n, set }
    }

    pub fn from_descents(d: &DescentSet) -> Composition {
        if d.n == 0 {
            return Composition::empty();
        }
        let mut parts = Vec::with_capacity(d.set.len() + 1);
        let mut prev = 0;
        for &s in &d.set {
            parts.push(s - prev);
            prev = s;
        }
        parts.push(d.n - prev);
        Composition::from_parts_unchecked(parts)
    }

    pub fn diagram(&self) -> Diagram {
        let cells = self
            .parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
            .collect();
        Diagram { cells }
    }

    /// All `2^(n-1)` compositions of `n` (one, the empty one, for `n = 0`),
    /// in lexicographic order of their descent sets' bitmasks.
    pub fn all_of_weight(n: usize) -> Vec<Composition> {
        if n == 0 {
            return vec![Composition::empty()];
        }
        (0u64..(1u64 << (n - 1)))
            .map(|mask| {
                let set = (1..n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                Composition::from_descents(&DescentSet { n, set })
            })
            .collect()
    }

    /// All compositions of `n` with exactly `k` parts.
    pub fn all_of_weight_and_width(n: usize, k: usize) -> Vec<Composition> {
        fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if k == 0 {
                if n == 0 {
                    out.push(Composition::from_parts_unchecked(prefix.clone()));
                }
                return;
            }
            if n < k {
                return;
            }
            for first in 1..=(n - (k - 1)) {
                prefix.push(first);
                rec(n - first, k - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, k, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Composition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<usize> {
    fn from(c: Composition) -> Self {
        c.parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = t
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad part `{}` in `{}`: {}", p, s, e)))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// A weakly decreasing sequence of positive integers. Also used for the
/// finitely supported vectors of `N^omega` (trailing zeros trimmed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{:?}", parts)));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|m| self.parts.iter().take_while(|&&p| p >= m).count())
            .collect();
        Partition { parts }
    }

    /// Containment of diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Partitions covering `self` in the Young lattice (one box added).
    pub fn young_covers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.parts.len() {
            let cur = self.parts.get(i).copied().unwrap_or(0);
            let above = if i == 0 { usize::MAX } else { self.parts[i - 1] };
            if cur < above {
                let mut p = self.parts.clone();
                if i == p.len() {
                    p.push(1);
                } else {
                    p[i] += 1;
                }
                out.push(Partition { parts: p });
            }
        }
        out
    }

    /// True when `other` is obtained from `self` by adding one box.
    pub fn is_young_covered_by(&self, other: &Partition) -> bool {
        other.weight() == self.weight() + 1 && other.contains(self)
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_weight(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for p in (1..=n.min(max)).rev() {
                prefix.push(p);
                rec(n - p, p, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Distinct rearrangements of the parts, as compositions.
    pub fn rearrangements(&self) -> Vec<Composition> {
        let mut v: Vec<usize> = self.parts.iter().rev().copied().collect();
        let mut out = vec![Composition::from_parts_unchecked(v.clone())];
        while next_permutation(&mut v) {
            out.push(Composition::from_parts_unchecked(v.clone()));
        }
        out
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let c: Composition = s.parse()?;
        Partition::new(c.into_parts())
    }
}

/// Cells `(column, row)` of a composition diagram, both 1-based; column `i`
/// holds rows `1..=p_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub cells: Vec<(usize, usize)>,
}

impl Diagram {
    pub fn column_heights(&self) -> Vec<usize> {
        let cols = self.cells.iter().map(|c| c.0).max().unwrap_or(0);
        let mut h = vec![0; cols];
        for &(i, j) in &self.cells {
            h[i - 1] = h[i - 1].max(j);
        }
        h
    }
}

impl fmt::Display for Diagram {
    /// Rows printed top-down, `#` for a cell.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.column_heights();
        let top = h.iter().copied().max().unwrap_or(0);
        for row in (1..=top).rev() {
            let line: String = h.iter().map(|&c| if c >= row { '#' } else { ' ' }).collect();
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

/// A subset of `{1, ..., n-1}`, stored increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DescentSet {
    pub n: usize,
    pub set: Vec<usize>,
}

impl DescentSet {
    pub fn new(n: usize, mut set: Vec<usize>) -> Result<Self> {
        set.sort_unstable();
        set.dedup();
        if set.iter().any(|&s| s == 0 || s >= n) {
            return Err(Error::Precondition(format!(
                "descent set {:?} is not a subset of 1..{}",
                set, n
            )));
        }
        Ok(DescentSet { n, set })
    }

    /// Descent positions of a sequence (1-based): `i` with `seq[i-1] > seq[i]`.
    pub fn of_sequence<T: Ord>(seq: &[T]) -> DescentSet {
        let set = (1..seq.len()).filter(|&i| seq[i - 1] > seq[i]).collect();
        DescentSet { n: seq.len(), set }
    }
}
