use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use serde::{Deserialize, Serialize};

use super::{fmt_coeff_prefix, Rat, Ring};
use crate::error::Error;

/// Dense univariate polynomial in `t`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rat::from_integer(BigInt::from(v))).collect())
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c t^d`.
    pub fn monomial(d: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    pub fn t() -> Self {
        Self::monomial(1, Rat::one())
    }

    /// `1 - c t`.
    pub fn one_minus(c: i64) -> Self {
        Self::from_ints(&[1, -c])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Rat {
        self.coeffs.get(d).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Lowest power of `t` with a nonzero coefficient.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// `p(c t)`.
    pub fn scale_arg(&self, c: &Rat) -> Self {
        let mut pw = Rat::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for v in &self.coeffs {
            out.push(v * &pw);
            pw *= c;
        }
        Self::new(out)
    }

    pub fn shift_up(&self, d: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero(); d];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, g: &Self) -> (Self, Self) {
        assert!(!g.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dg = g.degree();
        let lc = g.leading();
        if self.coeffs.len() < g.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); self.coeffs.len() - dg];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dg] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, gc) in g.coeffs.iter().enumerate() {
                rem[i + j] -= &c * gc;
            }
            q[i] = c;
        }
        (Self::new(q), Self::new(rem))
    }

    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(g);
        r.is_zero().then_some(q)
    }
}

impl From<UniPoly> for Vec<String> {
    fn from(p: UniPoly) -> Self {
        p.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl TryFrom<Vec<String>> for UniPoly {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self, Error> {
        v.iter()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad coefficient {:?}", s))))
            .collect::<Result<Vec<Rat>, Error>>()
            .map(UniPoly::new)
    }
}

impl Ring for UniPoly {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn constant_term(&self) -> Rat {
        self.coeff(0)
    }
    fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
    fn scale(&self, c: &Rat) -> Self {
        UniPoly::scale(self, c)
    }
    fn div_exact(&self, g: &Self) -> Option<Self> {
        UniPoly::div_exact(self, g)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if !first {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            } else if neg {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match d {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{}t", fmt_coeff_prefix(&a, ""))?,
                _ => write!(f, "{}t^{}", fmt_coeff_prefix(&a, ""), d)?,
            }
        }
        Ok(())
    }
}
