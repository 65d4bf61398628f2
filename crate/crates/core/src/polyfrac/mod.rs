//! Exact polynomial and rational-function arithmetic.
//!
//! Rational functions keep their denominators as a multiset of factors with
//! constant term 1. There is no multivariate gcd: cancellation is done by
//! trial division of the numerator by the stored factors.

mod frac;
mod parse;
mod poly;
mod roots;
mod uni;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub use frac::{Factored, FactoredJson, FactoredRational, UniRational};
pub use parse::{parse_rational, parse_uni_rational};
pub use poly::{Monomial, MultiPoly};
pub use roots::{roots_numeric, Root, RootOptions};
pub use uni::UniPoly;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Polynomial rings usable as numerators and denominator factors.
pub trait Ring: Clone + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn constant_term(&self) -> Rat;
    fn is_constant(&self) -> bool;
    fn scale(&self, c: &Rat) -> Self;
    fn div_exact(&self, g: &Self) -> Option<Self>;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;

    /// `false` only if `g` certainly does not divide `self`.
    fn may_divide(&self, _g: &Self) -> bool {
        true
    }

    fn power(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.times(self))
    }
}

/// Coefficient printed in front of a monomial: empty for 1.
pub(crate) fn fmt_coeff_prefix(a: &Rat, sep: &str) -> String {
    if a.is_one() {
        String::new()
    } else if a.is_integer() || !sep.is_empty() {
        format!("{}{}", a, sep)
    } else {
        format!("({})", a)
    }
}
