use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, MultiPoly};
use super::uni::UniPoly;
use super::{Rat, Ring};
use crate::error::{Error, Result};

/// Rational function `num / prod(factor^mult)`; every factor is
/// nonconstant with constant term 1, factors are distinct and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    into = "FactoredJson<P>",
    try_from = "FactoredJson<P>",
    bound(serialize = "P: Ring + Serialize", deserialize = "P: Ring + Deserialize<'de>")
)]
pub struct Factored<P: Ring> {
    num: P,
    den: Vec<(P, u32)>,
}

pub type FactoredRational = Factored<MultiPoly>;
pub type UniRational = Factored<UniPoly>;

#[derive(Serialize, Deserialize)]
struct FactorJson<P> {
    factor: P,
    exponent: u32,
}

#[derive(Serialize, Deserialize)]
pub struct FactoredJson<P> {
    numerator: P,
    denominator: Vec<FactorJson<P>>,
}

impl<P: Ring> From<Factored<P>> for FactoredJson<P> {
    fn from(f: Factored<P>) -> Self {
        FactoredJson {
            numerator: f.num,
            denominator: f
                .den
                .into_iter()
                .map(|(factor, exponent)| FactorJson { factor, exponent })
                .collect(),
        }
    }
}

impl<P: Ring> TryFrom<FactoredJson<P>> for Factored<P> {
    type Error = Error;
    fn try_from(j: FactoredJson<P>) -> Result<Self> {
        Factored::new(
            j.numerator,
            j.denominator.into_iter().map(|f| (f.factor, f.exponent)).collect(),
        )
    }
}

impl<P: Ring> Factored<P> {
    pub fn from_poly(p: P) -> Self {
        Factored {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(P::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(P::one())
    }

    /// Normalizes every factor to constant term 1, merges equal factors and
    /// cancels what trial division allows.
    pub fn new(num: P, den: Vec<(P, u32)>) -> Result<Self> {
        let mut num = num;
        let mut merged: BTreeMap<P, u32> = BTreeMap::new();
        for (g, m) in den {
            if m == 0 {
                continue;
            }
            let c = g.constant_term();
            if c.is_zero() {
                return Err(Error::Precondition(format!(
                    "denominator factor {:?} vanishes at the origin",
                    g
                )));
            }
            let inv = c.recip();
            if !inv.is_one() {
                num = num.scale(&num_traits::pow(inv.clone(), m as usize));
            }
            if g.is_constant() {
                continue;
            }
            *merged.entry(g.scale(&inv)).or_insert(0) += m;
        }
        Ok(Factored {
            num,
            den: merged.into_iter().collect(),
        }
        .cancel())
    }

    pub fn numerator(&self) -> &P {
        &self.num
    }

    pub fn denominator(&self) -> &[(P, u32)] {
        &self.den
    }

    pub fn denominator_product(&self) -> P {
        self.den
            .iter()
            .fold(P::one(), |acc, (g, m)| acc.times(&g.power(*m)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is trivial.
    pub fn as_polynomial(&self) -> Option<&P> {
        self.den.is_empty().then_some(&self.num)
    }

    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        for (g, m) in self.den.iter_mut() {
            while *m > 0 && self.num.may_divide(g) {
                match self.num.div_exact(g) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, m)| *m > 0);
        self
    }

    /// Numerators of `self` and `other` over the lcm of the denominators.
    fn common(&self, other: &Self) -> (P, P, Vec<(P, u32)>) {
        let mine: BTreeMap<&P, u32> = self.den.iter().map(|(g, m)| (g, *m)).collect();
        let theirs: BTreeMap<&P, u32> = other.den.iter().map(|(g, m)| (g, *m)).collect();
        let mut lcm: BTreeMap<P, u32> = BTreeMap::new();
        for (g, m) in self.den.iter().chain(&other.den) {
            let e = lcm.entry(g.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let mut a = self.num.clone();
        let mut b = other.num.clone();
        for (g, m) in &lcm {
            let ma = m - mine.get(g).copied().unwrap_or(0);
            let mb = m - theirs.get(g).copied().unwrap_or(0);
            if ma > 0 {
                a = a.times(&g.power(ma));
            }
            if mb > 0 {
                b = b.times(&g.power(mb));
            }
        }
        (a, b, lcm.into_iter().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (a, b, den) = self.common(other);
        Factored { num: a.plus(&b), den }.cancel()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Factored {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .cancel()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den: BTreeMap<P, u32> = self.den.iter().cloned().collect();
        for (g, m) in &other.den {
            *den.entry(g.clone()).or_insert(0) += m;
        }
        Factored {
            num: self.num.times(&other.num),
            den: den.into_iter().collect(),
        }
        .cancel()
    }

    pub fn mul_poly(&self, p: &P) -> Self {
        Factored {
            num: self.num.times(p),
            den: self.den.clone(),
        }
        .cancel()
    }

    /// Divide by `g^m`; `g` must have a nonzero constant term.
    pub fn div_poly(&self, g: &P, m: u32) -> Result<Self> {
        let mut den = self.den.clone();
        den.push((g.clone(), m));
        Factored::new(self.num.clone(), den)
    }

    /// Equality as functions, by cross-multiplication.
    pub fn same_function(&self, other: &Self) -> bool {
        let (a, b, _) = self.common(other);
        a == b
    }

    fn map_polys<F: Fn(&P) -> P>(&self, f: F) -> Result<Self> {
        Factored::new(
            f(&self.num),
            self.den.iter().map(|(g, m)| (f(g), *m)).collect(),
        )
    }
}

impl Factored<MultiPoly> {
    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(MultiPoly::monomial(m))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Factored {
            num: self.num.mul_monomial(m),
            den: self.den.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.den
            .iter()
            .map(|(g, _)| g.nvars())
            .chain(std::iter::once(self.num.nvars()))
            .max()
            .unwrap_or(0)
    }

    /// `x_m -> x_{m+1}` for `m >= j`.
    pub fn lambda_op(&self, j: usize) -> Self {
        Factored {
            num: self.num.shift_vars(j),
            den: {
                let mut d: Vec<_> = self.den.iter().map(|(g, m)| (g.shift_vars(j), *m)).collect();
                d.sort();
                d
            },
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let moving: Vec<usize> = (0..self.den.len())
            .filter(|&j| self.den[j].0.degree_in(i) > 0)
            .collect();
        // N' * prod(g_j) - N * sum(m_j g_j' prod_{l != j} g_l), over J = moving factors
        let prod_except = |skip: Option<usize>| {
            moving
                .iter()
                .filter(|&&j| Some(j) != skip)
                .fold(MultiPoly::one(), |acc, &j| &acc * &self.den[j].0)
        };
        let mut num = &self.num.derivative(i) * &prod_except(None);
        for &j in &moving {
            let (g, m) = &self.den[j];
            let term = &(&self.num * &g.derivative(i)) * &prod_except(Some(j));
            num = &num - &term.scale(&Rat::from_integer(BigInt::from(*m)));
        }
        let den = self
            .den
            .iter()
            .enumerate()
            .map(|(j, (g, m))| (g.clone(), if moving.contains(&j) { m + 1 } else { *m }))
            .collect();
        Factored { num, den }.cancel()
    }

    pub fn substitute_zero(&self, i: usize) -> Self {
        self.map_polys(|p| p.substitute_zero(i))
            .expect("constant terms survive x_i = 0")
    }

    /// `x_i^d / d! * (d/dx_i)^d f` evaluated at `x_i = 0`, times `x_i^d`:
    /// the part of the series of exact `x_i`-degree `d`.
    pub fn delta_op(&self, i: usize, d: u32) -> Self {
        if let Some(p) = self.as_polynomial() {
            return Self::from_poly(p.degree_part(i, d));
        }
        let mut f = self.clone();
        let mut fact = BigInt::one();
        for step in 1..=d {
            f = f.derivative(i);
            fact *= step;
        }
        f.substitute_zero(i)
            .scale(&Rat::from_integer(fact).recip())
            .mul_monomial(&Monomial::var_pow(i, d))
    }

    pub fn divide_by_monomial_exact(&self, i: usize, e: u32) -> Result<Self> {
        let num = self
            .num
            .divide_by_var_pow(i, e)
            .ok_or(Error::NotDivisible { var: i, exp: e })?;
        Ok(Factored {
            num,
            den: self.den.clone(),
        }
        .cancel())
    }

    /// Power series truncated to total degree `n`.
    pub fn taylor(&self, n: u32) -> MultiPoly {
        let mut acc = self.num.truncate(n);
        for (g, m) in &self.den {
            let h = &MultiPoly::one() - g;
            let mut inv = MultiPoly::one();
            let mut pw = MultiPoly::one();
            for _ in 0..n {
                pw = pw.mul_trunc(&h, n);
                if pw.is_zero() {
                    break;
                }
                inv = &inv + &pw;
            }
            for _ in 0..*m {
                acc = acc.mul_trunc(&inv, n);
            }
        }
        acc
    }

    /// Substitute `x_i := t` for all `i`.
    pub fn specialize_all(&self) -> UniRational {
        Factored::new(
            self.num.specialize_all(),
            self.den.iter().map(|(g, m)| (g.specialize_all(), *m)).collect(),
        )
        .expect("specialized factors keep constant term 1")
    }
}

impl Factored<UniPoly> {
    /// The first `n + 1` coefficients of the power series.
    pub fn series_coeffs(&self, n: usize) -> Vec<Rat> {
        let d = self.denominator_product();
        let mut out: Vec<Rat> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut v = self.num.coeff(i);
            for j in 1..=i.min(d.degree()) {
                v -= d.coeff(j) * &out[i - j];
            }
            out.push(v);
        }
        out
    }

    pub fn eval(&self, t: &Rat) -> Option<Rat> {
        let d = self.denominator_product().eval(t);
        (!d.is_zero()).then(|| self.num.eval(t) / d)
    }
}

fn write_den<P: Ring>(
    f: &mut fmt::Formatter<'_>,
    den: &[(P, u32)],
    show: impl Fn(&P) -> String,
    sep: &str,
) -> fmt::Result {
    if den.is_empty() {
        return Ok(());
    }
    if den.len() == 1 && den[0].1 == 1 {
        return write!(f, "/({})", show(&den[0].0));
    }
    let parts: Vec<String> = den
        .iter()
        .map(|(g, m)| {
            if *m == 1 {
                format!("({})", show(g))
            } else {
                format!("({})^{}", show(g), m)
            }
        })
        .collect();
    write!(f, "/({})", parts.join(sep))
}

fn write_num(
    f: &mut fmt::Formatter<'_>,
    content: String,
    rest: String,
    rest_is_one: bool,
    rest_is_minus_one: bool,
    rest_is_constant: bool,
    wrap: bool,
) -> fmt::Result {
    match (content.as_str(), rest_is_constant) {
        ("", _) if !wrap || rest_is_constant => write!(f, "{}", rest),
        ("", _) => write!(f, "({})", rest),
        (m, true) if rest_is_one => write!(f, "{}", m),
        (m, true) if rest_is_minus_one => write!(f, "-{}", m),
        (m, true) => write!(f, "{}*{}", rest, m),
        (m, false) => write!(f, "{}*({})", m, rest),
    }
}

impl fmt::Display for Factored<MultiPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let content = self.num.monomial_content();
        let mut rest = self.num.clone();
        for (i, &e) in content.exps().iter().enumerate() {
            rest = rest.divide_by_var_pow(i + 1, e).expect("content divides");
        }
        let c = rest.constant_term();
        write_num(
            f,
            if content.is_one() { String::new() } else { content.to_string() },
            rest.to_string(),
            rest.is_constant() && c.is_one(),
            rest.is_constant() && c == -Rat::one(),
            rest.is_constant(),
            !self.den.is_empty(),
        )?;
        let mut den = self.den.clone();
        den.sort_by(|a, b| {
            (a.0.len(), a.0.nvars())
                .cmp(&(b.0.len(), b.0.nvars()))
                .then_with(|| b.0.cmp(&a.0))
        });
        write_den(f, &den, |g| g.to_string(), "*")
    }
}

impl fmt::Display for Factored<UniPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let v = self.num.valuation();
        let rest = UniPoly::new(self.num.coeffs()[v..].to_vec());
        let content = match v {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{}", v),
        };
        let c = rest.coeff(0);
        let constant = rest.degree() == 0;
        write_num(
            f,
            content,
            rest.to_string(),
            constant && c.is_one(),
            constant && c == -Rat::one(),
            constant,
            !self.den.is_empty(),
        )?;
        let mut den = self.den.clone();
        den.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| b.0.coeffs().iter().rev().cmp(a.0.coeffs().iter().rev()))
        });
        write_den(f, &den, |g| g.to_string(), "")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, ratio};
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn geometric(i: usize) -> FactoredRational {
        // x_i / (1 - x_i)
        Factored::new(x(i), vec![(MultiPoly::one_minus_sum(i, i), 1)]).unwrap()
    }

    #[test]
    fn normalization() {
        // x / (2 - 2x) = (x/2) / (1 - x)
        let two = MultiPoly::from_int(2);
        let f = Factored::new(x(1), vec![(&two - &x(1).scale(&rat(2)), 1)]).unwrap();
        assert_eq!(f.numerator(), &x(1).scale(&ratio(1, 2)));
        assert_eq!(f.denominator()[0].0, MultiPoly::one_minus_sum(1, 1));
        assert!(Factored::new(x(1), vec![(x(1), 1)]).is_err());
        // (1-x)^2/(1-x) cancels
        let g = MultiPoly::one_minus_sum(1, 1);
        let h = Factored::new(g.pow(2), vec![(g.clone(), 1)]).unwrap();
        assert_eq!(h.as_polynomial(), Some(&g));
    }

    #[test]
    fn delta_of_geometric() {
        let f = geometric(1);
        assert_eq!(f.delta_op(1, 1).as_polynomial(), Some(&x(1)));
        assert_eq!(f.delta_op(1, 3).as_polynomial(), Some(&x(1).pow(3)));
        assert!(f.delta_op(1, 0).is_zero());
        // x1 x2 / (1 - x1 - x2): degree-2 part in x1 is x1^2 x2 / (1-x2)^2
        let g = Factored::new(&x(1) * &x(2), vec![(MultiPoly::one_minus_sum(1, 2), 1)]).unwrap();
        let d = g.delta_op(1, 2);
        let expect = Factored::new(
            &x(1).pow(2) * &x(2),
            vec![(MultiPoly::one_minus_sum(2, 2), 2)],
        )
        .unwrap();
        assert!(d.same_function(&expect), "{}", d);
        assert_eq!(d.taylor(7), g.taylor(7).degree_part(1, 2));
    }

    #[test]
    fn delta_of_polynomial_is_degree_part() {
        let p = &(&x(1) * &x(2)) + &x(1).pow(2);
        let f = Factored::from_poly(p.clone());
        for d in 0..3 {
            assert_eq!(f.delta_op(1, d).as_polynomial(), Some(&p.degree_part(1, d)));
        }
    }

    #[test]
    fn lambda_shift() {
        let g = Factored::new(&x(1) * &x(2), vec![(MultiPoly::one_minus_sum(1, 2), 1)]).unwrap();
        let h = Factored::new(&x(2) * &x(3), vec![(MultiPoly::one_minus_sum(2, 3), 1)]).unwrap();
        assert_eq!(g.lambda_op(1), h);
    }

    #[test]
    fn taylor_and_specialize() {
        let g = Factored::new(&x(1) * &x(2), vec![(MultiPoly::one_minus_sum(1, 2), 1)]).unwrap();
        let t = g.taylor(4);
        assert_eq!(t.coeff(&Monomial::new(vec![2, 2])), rat(2));
        assert_eq!(t.coeff(&Monomial::new(vec![1, 1])), rat(1));
        assert_eq!(t.degree(), 4);
        let one = Factored::new(MultiPoly::one(), vec![(MultiPoly::one_minus_sum(1, 1), 1)]).unwrap();
        assert_eq!(one.taylor(3), MultiPoly::from_terms((0..4).map(|e| (Monomial::var_pow(1, e), rat(1)))));
        let u = g.specialize_all();
        assert_eq!(u.to_string(), "t^2/(1-2t)");
        let c: Vec<Rat> = u.series_coeffs(5);
        assert_eq!(c, vec![rat(0), rat(0), rat(1), rat(2), rat(4), rat(8)]);
    }

    #[test]
    fn add_and_mul() {
        let a = geometric(1);
        let b = geometric(2);
        let s = a.add(&b);
        assert_eq!(s.taylor(6), &a.taylor(6) + &b.taylor(6));
        let p = a.mul(&b);
        assert_eq!(p.taylor(6), a.taylor(6).mul_trunc(&b.taylor(6), 6));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn display_forms() {
        let num = &(&x(1) * &x(2)) * &(&MultiPoly::one() - &(&x(1) * &x(2)));
        let f = Factored::new(
            num,
            vec![
                (MultiPoly::one_minus_sum(1, 2), 1),
                (MultiPoly::one_minus_sum(1, 1), 1),
                (MultiPoly::one_minus_sum(2, 2), 1),
            ],
        )
        .unwrap();
        assert_eq!(f.to_string(), "x1*x2*(1-x1*x2)/((1-x1)*(1-x2)*(1-x1-x2))");
        let u = Factored::new(
            UniPoly::from_ints(&[0, 0, 0, 1, 5, -2]),
            vec![
                (UniPoly::one_minus(3), 1),
                (UniPoly::one_minus(1), 1),
                (UniPoly::one_minus(2), 1),
            ],
        )
        .unwrap();
        assert_eq!(u.to_string(), "t^3*(1+5t-2t^2)/((1-t)(1-2t)(1-3t))");
    }

    #[test]
    fn monomial_division() {
        let g = geometric(2).mul_monomial(&Monomial::var_pow(1, 3));
        let back = g.divide_by_monomial_exact(1, 3).unwrap();
        assert_eq!(back, geometric(2));
        assert!(matches!(
            geometric(2).divide_by_monomial_exact(1, 1),
            Err(Error::NotDivisible { var: 1, exp: 1 })
        ));
    }
}
