//! The operator alphabet and its partial action on compositions.
//!
//! Letters act on the left: in a word `W = W_r ... W_1` the rightmost
//! letter is applied first. Words are stored in printed order, so
//! `letters[0]` is the last letter applied.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// Prepend a part of size one.
    L,
    /// Append a part of size one.
    R,
    /// Increase part `j` (1-based) by one.
    U(usize),
    /// `V(i, 1)` inserts a part of size one before position `i`;
    /// `V(i, r)` with `r >= 2` moves `r - 1` boxes from part `i - 1` into a
    /// new part of size `r` inserted at position `i`.
    V(usize, usize),
}

impl Letter {
    pub fn is_valid(&self) -> bool {
        match *self {
            Letter::L | Letter::R => true,
            Letter::U(j) => j >= 1,
            Letter::V(i, r) => i >= 2 && r >= 1,
        }
    }

    pub fn is_u(&self) -> bool {
        matches!(self, Letter::U(_))
    }

    /// Apply to `p`; `None` when the operation is undefined on `p`.
    pub fn apply(&self, p: &Composition) -> Option<Composition> {
        let parts = p.parts();
        let k = parts.len();
        let out = match *self {
            Letter::L => {
                let mut v = Vec::with_capacity(k + 1);
                v.push(1);
                v.extend_from_slice(parts);
                v
            }
            Letter::R => {
                let mut v = parts.to_vec();
                v.push(1);
                v
            }
            Letter::U(j) => {
                if j == 0 || j > k {
                    return None;
                }
                let mut v = parts.to_vec();
                v[j - 1] += 1;
                v
            }
            Letter::V(i, 1) => {
                if i < 2 || i > k + 1 || parts[i - 2] < 2 {
                    return None;
                }
                let mut v = parts.to_vec();
                v.insert(i - 1, 1);
                v
            }
            Letter::V(i, r) => {
                if r == 0 || i < 2 || i > k + 1 || parts[i - 2] < r + 1 {
                    return None;
                }
                let mut v = parts.to_vec();
                v[i - 2] -= r - 1;
                v.insert(i - 1, r);
                v
            }
        };
        Some(Composition::from_parts_unchecked(out))
    }

    fn priority_class(&self) -> u8 {
        match self {
            Letter::L | Letter::U(_) => 0,
            Letter::V(..) => 1,
            Letter::R => 2,
        }
    }
}

/// Outcome of comparing the priorities of two letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Priority {
    Higher,
    Lower,
    Incomparable,
}

/// `L` and every `U_j` first, then the `V_i^r` ordered by increasing `i`,
/// then `R`. Letters of one class with the same insertion index are
/// incomparable.
pub fn priority_compare(s: Letter, t: Letter) -> Priority {
    match s.priority_class().cmp(&t.priority_class()) {
        Ordering::Less => Priority::Higher,
        Ordering::Greater => Priority::Lower,
        Ordering::Equal => match (s, t) {
            (Letter::V(i, _), Letter::V(j, _)) => match i.cmp(&j) {
                Ordering::Less => Priority::Higher,
                Ordering::Greater => Priority::Lower,
                Ordering::Equal => Priority::Incomparable,
            },
            _ => Priority::Incomparable,
        },
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::L => write!(f, "L"),
            Letter::R => write!(f, "R"),
            Letter::U(j) => write!(f, "U{}", j),
            Letter::V(i, r) => write!(f, "V{}^{}", i, r),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad letter `{}`", s));
        let num = |x: &str| x.trim_start_matches('_').parse::<usize>().map_err(|_| bad());
        let letter = match s {
            "L" => Letter::L,
            "R" => Letter::R,
            _ if s.starts_with('U') => Letter::U(num(&s[1..])?),
            _ if s.starts_with('V') => match s[1..].split_once('^') {
                Some((i, r)) => Letter::V(num(i)?, num(r)?),
                None => Letter::V(num(&s[1..])?, 1),
            },
            _ => return Err(bad()),
        };
        if letter.is_valid() {
            Ok(letter)
        } else {
            Err(bad())
        }
    }
}

/// A word over the alphabet, printed leftmost-first; the rightmost letter
/// acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Build from letters listed in the order they are applied.
    pub fn from_application_order(mut letters: Vec<Letter>) -> Self {
        letters.reverse();
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letters in the order they act.
    pub fn application_order(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().rev().copied()
    }

    /// `t . self` as a word: `t` is written on the left.
    pub fn prepend(&self, t: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(t);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn concat(&self, later: &Word) -> Word {
        // `later` acts after `self`, so it is written to the left.
        let mut v = later.0.clone();
        v.extend_from_slice(&self.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Word::empty());
        }
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Selects one of the posets on compositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Alphabet {
    /// `{L, R} ∪ {U_j}`.
    N,
    /// `{L} ∪ {U_j} ∪ {V_i^1}`; the same poset as `S(2)`.
    Bbd,
    /// `{L} ∪ {U_j} ∪ {V_i^r : r < d}`, `d > 1`.
    S(usize),
    /// `{L} ∪ {U_j} ∪ {V_i^r}`.
    SInf,
    /// `{U_j}` only.
    UOnly,
}

impl Alphabet {
    /// Maps `S(2)` to `Bbd`; rejects `S(d)` with `d < 2`.
    pub fn normalized(self) -> Result<Self> {
        match self {
            Alphabet::S(d) if d < 2 => Err(Error::Precondition(format!("S:{} needs d > 1", d))),
            Alphabet::S(2) => Ok(Alphabet::Bbd),
            a => Ok(a),
        }
    }

    /// Bound `d` on the `V` exponent (`r < d`); `None` if unbounded, `Some(0)` if no `V`.
    pub fn v_bound(&self) -> Option<usize> {
        match *self {
            Alphabet::N | Alphabet::UOnly => Some(1),
            Alphabet::Bbd => Some(2),
            Alphabet::S(d) => Some(d),
            Alphabet::SInf => None,
        }
    }

    pub fn contains(&self, t: Letter) -> bool {
        if !t.is_valid() {
            return false;
        }
        match (self, t) {
            (Alphabet::UOnly, Letter::U(_)) => true,
            (Alphabet::UOnly, _) => false,
            (Alphabet::N, Letter::V(..)) => false,
            (Alphabet::N, _) => true,
            (_, Letter::R) => false,
            (a, Letter::V(_, r)) => a.v_bound().map_or(true, |d| r < d),
            _ => true,
        }
    }

    /// Whether chains in this poset can be coded as tableaux (no box moves).
    pub fn has_tableaux(&self) -> bool {
        matches!(self, Alphabet::N | Alphabet::Bbd | Alphabet::UOnly | Alphabet::S(2))
    }

    /// Every letter of the alphabet that is defined on `p`. For `SInf` this
    /// coincides with `S(d)` for any `d > height(p)`.
    pub fn candidate_letters(&self, p: &Composition) -> Vec<Letter> {
        let k = p.width();
        let mut out = Vec::new();
        if !matches!(self, Alphabet::UOnly) {
            out.push(Letter::L);
        }
        out.extend((1..=k).map(Letter::U));
        let vmax = match self.v_bound() {
            Some(d) => d.saturating_sub(1),
            None => p.height() + 1,
        };
        if vmax >= 1 {
            for i in 2..=k + 1 {
                let prev = p.parts()[i - 2];
                for r in 1..=vmax.min(prev.saturating_sub(1)) {
                    out.push(Letter::V(i, r));
                }
            }
        }
        if matches!(self, Alphabet::N) {
            out.push(Letter::R);
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::N => write!(f, "N"),
            Alphabet::Bbd => write!(f, "BBD"),
            Alphabet::S(d) => write!(f, "S:{}", d),
            Alphabet::SInf => write!(f, "S:inf"),
            Alphabet::UOnly => write!(f, "U"),
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let a = match t.to_ascii_lowercase().as_str() {
            "n" => Alphabet::N,
            "bbd" => Alphabet::Bbd,
            "u" | "uonly" => Alphabet::UOnly,
            "s:inf" | "sinf" | "s:infinity" => Alphabet::SInf,
            other => match other.strip_prefix("s:") {
                Some(d) => Alphabet::S(
                    d.parse()
                        .map_err(|_| Error::Parse(format!("bad poset `{}`", s)))?,
                ),
                None => return Err(Error::Parse(format!("bad poset `{}`", s))),
            },
        };
        a.normalized()
    }
}

pub fn apply_letter(t: Letter, p: &Composition) -> Option<Composition> {
    t.apply(p)
}

/// Defined, in the alphabet, and not duplicated by a strictly higher
/// priority letter of the alphabet.
pub fn is_admissible(t: Letter, p: &Composition, a: Alphabet) -> bool {
    if !a.contains(t) {
        return false;
    }
    let Some(q) = t.apply(p) else {
        return false;
    };
    !a.candidate_letters(p).into_iter().any(|s| {
        priority_compare(s, t) == Priority::Higher && s.apply(p).as_ref() == Some(&q)
    })
}

/// The labeled cover set of `p`: each admissible letter with its result.
/// Results are pairwise distinct.
pub fn admissible_letters(p: &Composition, a: Alphabet) -> Vec<(Letter, Composition)> {
    let defined: Vec<(Letter, Composition)> = a
        .candidate_letters(p)
        .into_iter()
        .filter_map(|t| t.apply(p).map(|q| (t, q)))
        .collect();
    let mut out: Vec<(Letter, Composition)> = Vec::with_capacity(defined.len());
    for (t, q) in &defined {
        let shadowed = defined.iter().any(|(s, q2)| {
            q2 == q && priority_compare(*s, *t) == Priority::Higher
        });
        if !shadowed {
            out.push((*t, q.clone()));
        }
    }
    for (i, (s, q1)) in out.iter().enumerate() {
        for (t, q2) in &out[i + 1..] {
            assert!(
                q1 != q2,
                "letters {} and {} collide on {} with no priority between them",
                s,
                t,
                p
            );
        }
    }
    out
}

/// Apply `w` right-to-left, each step admissible. On failure reports the
/// 0-based application step.
pub fn apply_word(w: &Word, p: &Composition, a: Alphabet) -> Result<Composition> {
    let mut cur = p.clone();
    for (step, t) in w.application_order().enumerate() {
        if !is_admissible(t, &cur, a) {
            return Err(Error::NotAdmissible {
                step,
                letter: t.to_string(),
            });
        }
        cur = t.apply(&cur).expect("admissible letters are defined");
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[usize]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let p = c(&[3, 4, 1, 2]);
        assert_eq!(Letter::U(2).apply(&p), Some(c(&[3, 5, 1, 2])));
        assert_eq!(Letter::V(3, 3).apply(&p), Some(c(&[3, 2, 3, 1, 2])));
        assert_eq!(Letter::U(5).apply(&p), None);
        assert_eq!(Letter::L.apply(&Composition::empty()), Some(c(&[1])));
        assert_eq!(Letter::V(2, 2).apply(&p), Some(c(&[2, 2, 4, 1, 2])));
        assert_eq!(Letter::V(4, 1).apply(&p), None);
        assert_eq!(Letter::V(5, 1).apply(&p), Some(c(&[3, 4, 1, 2, 1])));
        assert_eq!(Letter::V(3, 4).apply(&p), None);
        assert_eq!(Letter::V(6, 1).apply(&p), None);
    }

    #[test]
    fn weight_step_is_one() {
        let mut letters = vec![Letter::L, Letter::R];
        for j in 1..=9 {
            letters.push(Letter::U(j));
        }
        for i in 2..=9 {
            for r in 1..=9 {
                letters.push(Letter::V(i, r));
            }
        }
        for n in 0..=8 {
            for p in Composition::all_of_weight(n) {
                for t in &letters {
                    if let Some(q) = t.apply(&p) {
                        assert_eq!(q.weight(), n + 1, "{} on {}", t, p);
                    }
                }
            }
        }
    }

    #[test]
    fn priority_examples() {
        assert_eq!(priority_compare(Letter::L, Letter::R), Priority::Higher);
        assert_eq!(priority_compare(Letter::V(2, 1), Letter::V(3, 2)), Priority::Higher);
        assert_eq!(priority_compare(Letter::V(3, 2), Letter::V(2, 1)), Priority::Lower);
        assert_eq!(priority_compare(Letter::U(1), Letter::U(2)), Priority::Incomparable);
        assert_eq!(priority_compare(Letter::V(2, 1), Letter::V(2, 2)), Priority::Incomparable);
        assert_eq!(priority_compare(Letter::R, Letter::V(9, 1)), Priority::Lower);
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(Letter::R, &c(&[1, 1]), Alphabet::N));
        assert!(!is_admissible(Letter::V(4, 1), &c(&[3, 4, 1, 2]), Alphabet::Bbd));
        assert!(is_admissible(Letter::V(2, 1), &c(&[3, 4, 1, 2]), Alphabet::Bbd));
        assert!(is_admissible(Letter::R, &c(&[1, 2]), Alphabet::N));
        // not in the alphabet
        assert!(!is_admissible(Letter::R, &c(&[1, 2]), Alphabet::Bbd));
        assert!(!is_admissible(Letter::V(2, 2), &c(&[3]), Alphabet::Bbd));
        assert!(is_admissible(Letter::V(2, 2), &c(&[3]), Alphabet::S(3)));
    }

    #[test]
    fn cover_table_of_3412() {
        let got = admissible_letters(&c(&[3, 4, 1, 2]), Alphabet::SInf);
        let expect = [
            ("L", "1,3,4,1,2"),
            ("U1", "4,4,1,2"),
            ("U2", "3,5,1,2"),
            ("U3", "3,4,2,2"),
            ("U4", "3,4,1,3"),
            ("V2^1", "3,1,4,1,2"),
            ("V2^2", "2,2,4,1,2"),
            ("V3^1", "3,4,1,1,2"),
            ("V3^2", "3,3,2,1,2"),
            ("V3^3", "3,2,3,1,2"),
            ("V5^1", "3,4,1,2,1"),
        ];
        assert_eq!(got.len(), 11);
        for (l, q) in expect {
            let l: Letter = l.parse().unwrap();
            let q: Composition = q.parse().unwrap();
            assert!(got.contains(&(l, q.clone())), "missing {} {}", l, q);
        }
    }

    #[test]
    fn small_cover_sets() {
        assert_eq!(
            admissible_letters(&c(&[1]), Alphabet::N),
            vec![(Letter::L, c(&[1, 1])), (Letter::U(1), c(&[2]))]
        );
        assert_eq!(
            admissible_letters(&Composition::empty(), Alphabet::N),
            vec![(Letter::L, c(&[1]))]
        );
    }

    #[test]
    fn apply_word_examples() {
        // R.(1,2) = (1,2,1), then two boxes on the new part
        let w: Word = "U3 U3 R".parse().unwrap();
        assert_eq!(apply_word(&w, &c(&[1, 2]), Alphabet::N).unwrap(), c(&[1, 2, 3]));
        assert_eq!(
            apply_word(&Word::empty(), &c(&[5, 1]), Alphabet::Bbd).unwrap(),
            c(&[5, 1])
        );
        // L.(1) = (1,1), then R collides with L.
        let w: Word = "R L".parse().unwrap();
        assert_eq!(
            apply_word(&w, &c(&[1]), Alphabet::N),
            Err(Error::NotAdmissible {
                step: 1,
                letter: "R".into()
            })
        );
        let rho: Word = "U3 U3 L U1".parse().unwrap();
        assert_eq!(apply_word(&rho, &c(&[1, 2]), Alphabet::N).unwrap(), c(&[1, 2, 4]));
    }

    #[test]
    fn distinct_results_and_cover_count() {
        let alphabets = [
            Alphabet::N,
            Alphabet::Bbd,
            Alphabet::S(3),
            Alphabet::S(4),
            Alphabet::SInf,
            Alphabet::UOnly,
        ];
        for n in 0..=8 {
            for p in Composition::all_of_weight(n) {
                for a in alphabets {
                    // panics inside on a same-class collision
                    let covers = admissible_letters(&p, a);
                    let mut ends: Vec<_> = covers.iter().map(|x| x.1.clone()).collect();
                    ends.sort();
                    ends.dedup();
                    assert_eq!(ends.len(), covers.len());
                }
                if n <= 7 {
                    assert_eq!(admissible_letters(&p, Alphabet::SInf).len(), n + 1, "{}", p);
                }
                let d = p.height() + 1;
                if d > 1 {
                    assert_eq!(
                        admissible_letters(&p, Alphabet::S(d)),
                        admissible_letters(&p, Alphabet::SInf)
                    );
                }
            }
        }
    }

    #[test]
    fn letter_and_word_text() {
        for s in ["L", "R", "U3", "V2^1", "V3^3"] {
            assert_eq!(s.parse::<Letter>().unwrap().to_string(), s);
        }
        assert_eq!("V2".parse::<Letter>().unwrap(), Letter::V(2, 1));
        assert!("U0".parse::<Letter>().is_err());
        assert!("V1^1".parse::<Letter>().is_err());
        assert!("X".parse::<Letter>().is_err());
        let w: Word = "U2 L L".parse().unwrap();
        assert_eq!(w.to_string(), "U2 L L");
        assert_eq!(
            w.application_order().collect::<Vec<_>>(),
            vec![Letter::L, Letter::L, Letter::U(2)]
        );
    }

    #[test]
    fn alphabet_text() {
        assert_eq!("S:2".parse::<Alphabet>().unwrap(), Alphabet::Bbd);
        assert_eq!("S:inf".parse::<Alphabet>().unwrap(), Alphabet::SInf);
        assert_eq!("S:3".parse::<Alphabet>().unwrap(), Alphabet::S(3));
        assert!("S:1".parse::<Alphabet>().is_err());
        assert!("Q".parse::<Alphabet>().is_err());
    }
}
