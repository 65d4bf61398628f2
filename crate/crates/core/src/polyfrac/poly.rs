use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use serde::{Deserialize, Serialize};

use super::uni::UniPoly;
use super::{fmt_coeff_prefix, Rat, Ring};
use crate::error::Error;

fn mul_rat(a: &Rat, b: &Rat) -> Rat {
    if a.is_integer() && b.is_integer() {
        Rat::new_raw(a.numer() * b.numer(), BigInt::one())
    } else if a.is_one() {
        b.clone()
    } else if b.is_one() {
        a.clone()
    } else if (-a).is_one() {
        -b
    } else if (-b).is_one() {
        -a
    } else {
        a * b
    }
}

fn div_rat(a: &Rat, b: &Rat) -> Rat {
    if b.is_one() {
        a.clone()
    } else if (-b).is_one() {
        -a
    } else {
        a / b
    }
}

/// Arithmetic modulo the Mersenne prime `2^61 - 1`.
mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    use super::Rat;

    const P: u64 = (1 << 61) - 1;

    pub fn add(a: u64, b: u64) -> u64 {
        (a + b) % P
    }

    pub fn neg(a: u64) -> u64 {
        (P - a) % P
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        let x = a as u128 * b as u128;
        let r = (x as u64 & P) + (x >> 61) as u64;
        let r = (r & P) + (r >> 61);
        if r >= P {
            r - P
        } else {
            r
        }
    }

    pub fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    fn int(n: &BigInt) -> u64 {
        match n.to_i64() {
            Some(v) => v.rem_euclid(P as i64) as u64,
            None => n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced"),
        }
    }

    /// `None` when the denominator vanishes mod `P`.
    pub fn rat(c: &Rat) -> Option<u64> {
        if c.is_integer() {
            return Some(int(c.numer()));
        }
        let d = int(c.denom());
        (d != 0).then(|| mul(int(c.numer()), inv(d)))
    }

    /// Fixed pseudo-random evaluation coordinates.
    pub fn sample(i: u64) -> u64 {
        (i.wrapping_add(7).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 3) % P
    }
}

/// Exponent vector of `x_1^{e_1} x_2^{e_2} ...`, trailing zeros trimmed so
/// that the derived lexicographic order is the lex monomial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `x_i`, 1-based.
    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u32) -> Self {
        assert!(i >= 1, "variables are 1-based");
        let mut v = vec![0; i];
        v[i - 1] = e;
        Monomial::new(v)
    }

    /// Exponents of `x_1, x_2, ...` up to the last nonzero one.
    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of `x_i`, 1-based.
    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest variable index present.
    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
            .collect();
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let v = other
            .0
            .iter()
            .enumerate()
            .map(|(i, b)| b - self.0.get(i).unwrap_or(&0))
            .collect();
        Monomial::new(v)
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() < i {
            v.resize(i, 0);
        }
        v[i - 1] = e;
        Monomial::new(v)
    }

    /// Rename `x_m -> x_{m+1}` for every `m >= j`.
    pub fn shift(&self, j: usize) -> Monomial {
        if self.0.len() < j {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.insert(j - 1, 0);
        Monomial(v)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Exponents sorted decreasingly.
    pub fn sorted_decreasing(&self) -> Monomial {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Monomial::new(v)
    }
}

/// Serialized as its display form, e.g. `"x1*x2^2"`.
impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Monomial {
    type Err = crate::error::Error;
    /// Parses the display form: `1` or `x1*x2^2`.
    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || crate::error::Error::Parse(format!("bad monomial `{}`", s));
        let t = s.trim();
        if t == "1" {
            return Ok(Monomial::one());
        }
        let mut m = Monomial::one();
        for factor in t.split('*') {
            let body = factor.trim().strip_prefix('x').ok_or_else(bad)?;
            let (i, e) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(bad());
            }
            m = m.mul(&Monomial::var_pow(i, e));
        }
        Ok(m)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse polynomial over the rationals in `x_1, x_2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<TermJson>", try_from = "Vec<TermJson>")]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rat::one())
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Monomial::var(i))
    }

    /// `x_{from} + ... + x_{to}`.
    pub fn var_sum(from: usize, to: usize) -> Self {
        (from..=to).fold(Self::zero(), |acc, i| &acc + &Self::var(i))
    }

    /// `1 - x_{from} - ... - x_{to}`.
    pub fn one_minus_sum(from: usize, to: usize) -> Self {
        &Self::one() - &Self::var_sum(from, to)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let v = o.get_mut();
                if v.is_integer() && c.is_integer() {
                    *v = Rat::new_raw(v.numer() + c.numer(), BigInt::one());
                } else {
                    *v += c;
                }
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The only term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Monomial::nvars).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), mul_rat(v, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Terms of total degree at most `n`.
    pub fn truncate(&self, n: u32) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated to total degree `n`.
    pub fn mul_trunc(&self, other: &Self, n: u32) -> Self {
        let mut out = MultiPoly::zero();
        for (a, ca) in &self.terms {
            let da = a.degree();
            if da > n {
                continue;
            }
            for (b, cb) in &other.terms {
                if da + b.degree() <= n {
                    out.add_term(a.mul(b), mul_rat(ca, cb));
                }
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), c * Rat::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn substitute_zero(&self, i: usize) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(i) == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `x_m -> x_{m+1}` for `m >= j`.
    pub fn shift_vars(&self, j: usize) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.shift(j), c.clone())).collect(),
        }
    }

    /// Terms whose `x_i`-degree is exactly `d`.
    pub fn degree_part(&self, i: usize, d: u32) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(i) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `self / x_i^e` if every term is divisible.
    pub fn divide_by_var_pow(&self, i: usize, e: u32) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let have = m.exp(i);
            if have < e {
                return None;
            }
            terms.insert(m.with_exp(i, have - e), c.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Exact quotient by `g` via lex-order division; `None` when a nonzero
    /// remainder appears.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (lm, lc) = g.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = div_rat(c, &lc);
            for (gm, gc) in &g.terms {
                rem.add_term(gm.mul(&qm), -mul_rat(gc, &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// `true` if `g` is a linear polynomial that provably does not divide
    /// `self`: `self` is evaluated modulo a prime at a point of `g = 0`.
    pub fn certainly_not_divisible_by_linear(&self, g: &Self) -> bool {
        if g.degree() != 1 || self.is_zero() {
            return false;
        }
        let n = self.nvars().max(g.nvars());
        let Some(c0) = modp::rat(&g.constant_term()) else { return false };
        let mut lin = vec![0u64; n + 1];
        for (m, c) in &g.terms {
            if m.degree() == 1 {
                let i = m.0.iter().position(|&e| e == 1).expect("degree one") + 1;
                match modp::rat(c) {
                    Some(v) => lin[i] = v,
                    None => return false,
                }
            }
        }
        let Some(s) = (1..=n).find(|&i| lin[i] != 0) else { return false };
        let mut point: Vec<u64> = (0..=n).map(|i| modp::sample(i as u64)).collect();
        let mut rest = c0;
        for i in 1..=n {
            if i != s {
                rest = modp::add(rest, modp::mul(lin[i], point[i]));
            }
        }
        point[s] = modp::mul(modp::neg(rest), modp::inv(lin[s]));
        let mut powers: Vec<Vec<u64>> = point.iter().map(|&x| vec![1, x]).collect();
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let Some(mut v) = modp::rat(c) else { return false };
            for (j, &e) in m.0.iter().enumerate() {
                let pw = &mut powers[j + 1];
                while pw.len() <= e as usize {
                    let next = modp::mul(*pw.last().expect("nonempty"), pw[1]);
                    pw.push(next);
                }
                v = modp::mul(v, pw[e as usize]);
            }
            acc = modp::add(acc, v);
        }
        acc != 0
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Substitute `x_i := t` for every `i`.
    pub fn specialize_all(&self) -> UniPoly {
        let mut coeffs = vec![Rat::zero(); self.degree() as usize + 1];
        for (m, c) in &self.terms {
            coeffs[m.degree() as usize] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Substitute the given values; missing variables are zero.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        'terms: for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match values.get(i) {
                    Some(x) => v *= num_traits::pow(x.clone(), e as usize),
                    None => continue 'terms,
                }
            }
            total += v;
        }
        total
    }

    /// Merge coefficients after mapping each monomial.
    pub fn map_monomials<F: Fn(&Monomial) -> Monomial>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Terms in display order: by total degree, then `x_1` before `x_2`.
    fn display_order(&self) -> Vec<(&Monomial, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(b.0.cmp(a.0)));
        v
    }
}

#[derive(Serialize, Deserialize)]
pub struct TermJson {
    exponents: Vec<u32>,
    coeff: String,
}

impl From<MultiPoly> for Vec<TermJson> {
    fn from(p: MultiPoly) -> Self {
        p.terms
            .into_iter()
            .map(|(m, c)| TermJson {
                exponents: m.0,
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl TryFrom<Vec<TermJson>> for MultiPoly {
    type Error = Error;
    fn try_from(v: Vec<TermJson>) -> Result<Self, Error> {
        let mut p = MultiPoly::zero();
        for t in v {
            let c: Rat = t
                .coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            p.add_term(Monomial::new(t.exponents), c);
        }
        Ok(p)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn constant_term(&self) -> Rat {
        MultiPoly::constant_term(self)
    }
    fn is_constant(&self) -> bool {
        MultiPoly::is_constant(self)
    }
    fn scale(&self, c: &Rat) -> Self {
        MultiPoly::scale(self, c)
    }
    fn div_exact(&self, g: &Self) -> Option<Self> {
        MultiPoly::div_exact(self, g)
    }
    fn may_divide(&self, g: &Self) -> bool {
        !self.certainly_not_divisible_by_linear(g)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), mul_rat(ca, cb));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if idx > 0 {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", a)?;
            } else {
                write!(f, "{}{}", fmt_coeff_prefix(&a, "*"), m)?;
            }
        }
        Ok(())
    }
}
