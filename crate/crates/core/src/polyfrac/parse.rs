//! Parser for rational expressions such as
//! `x1*x2*(1-x1*x2)/((1-x1)*(1-x2)*(1-x1-x2))` or
//! `t^3(-2t^2+5t+1)/((1-3t)(1-2t)(1-t))`.
//!
//! Variables are `x<i>`, `x_<i>`, `x_{<i>}` or `t` (an alias of `x1`);
//! juxtaposition multiplies.

use num_bigint::BigInt;

use super::frac::{FactoredRational, UniRational};
use super::poly::MultiPoly;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s
        .chars()
        .map(|c| match c {
            '\u{2212}' => '-',
            '\u{00b7}' | '\u{22c5}' => '*',
            c => c,
        })
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let d = digits(&mut i);
                out.push(Tok::Num(d.parse().expect("digits")));
            }
            't' => {
                out.push(Tok::Var(1));
                i += 1;
            }
            'x' => {
                i += 1;
                if i < chars.len() && chars[i] == '_' {
                    i += 1;
                }
                let braced = i < chars.len() && chars[i] == '{';
                if braced {
                    i += 1;
                }
                let d = digits(&mut i);
                if braced {
                    if i >= chars.len() || chars[i] != '}' {
                        return Err(Error::Parse("unclosed variable index".into()));
                    }
                    i += 1;
                }
                let idx: usize = d
                    .parse()
                    .map_err(|_| Error::Parse("variable without index".into()))?;
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from 1".into()));
                }
                out.push(Tok::Var(idx));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            _ => return Err(Error::Parse(format!("unexpected character {:?}", c))),
        }
    }
    Ok(out)
}

/// A product `prod(factors) / prod(den)` kept unexpanded so that
/// denominators written as products stay factored.
#[derive(Debug, Clone)]
struct Val {
    factors: Vec<MultiPoly>,
    den: Vec<MultiPoly>,
}

impl Val {
    fn poly(p: MultiPoly) -> Self {
        Val {
            factors: vec![p],
            den: Vec::new(),
        }
    }

    fn collapse(&self) -> Result<FactoredRational> {
        let num = self.factors.iter().fold(MultiPoly::one(), |acc, f| &acc * f);
        FactoredRational::new(num, self.den.iter().map(|g| (g.clone(), 1)).collect()).map_err(|_| {
            Error::Parse("divisors must not vanish at the origin".into())
        })
    }

    fn from_frac(f: FactoredRational) -> Self {
        let mut den = Vec::new();
        for (g, m) in f.denominator() {
            for _ in 0..*m {
                den.push(g.clone());
            }
        }
        Val {
            factors: vec![f.numerator().clone()],
            den,
        }
    }

    fn mul(mut self, o: Val) -> Self {
        self.factors.extend(o.factors);
        self.den.extend(o.den);
        self
    }

    fn div(mut self, o: Val) -> Result<Self> {
        for f in o.factors {
            if f.constant_term() == Rat::from_integer(BigInt::from(0)) {
                return Err(Error::Parse(format!("divisor {} vanishes at the origin", f)));
            }
            self.den.push(f);
        }
        self.factors.extend(o.den);
        Ok(self)
    }

    fn neg(mut self) -> Self {
        self.factors.push(MultiPoly::from_int(-1));
        self
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Val> {
        let first = self.term()?;
        if !matches!(self.peek(), Some(Tok::Op('+' | '-'))) {
            return Ok(first);
        }
        let mut acc = first.collapse()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?.collapse()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?.collapse()?);
            } else {
                return Ok(Val::from_frac(acc));
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(self.unary()?)?;
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Var(_) | Tok::Op('('))) {
                acc = acc.mul(self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.primary()?;
        if self.eat('^') {
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected a nonnegative integer exponent".into())),
            };
            let mut acc = Val::poly(MultiPoly::one());
            for _ in 0..e {
                acc = acc.mul(base.clone());
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Val> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Val::poly(MultiPoly::constant(Rat::from_integer(n))))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Val::poly(MultiPoly::var(i)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<FactoredRational> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    e.collapse()
}

/// Parse an expression in the single variable `t` (or `x1`).
pub fn parse_uni_rational(s: &str) -> Result<UniRational> {
    let f = parse_rational(s)?;
    if f.nvars() > 1 {
        return Err(Error::Parse("expected a univariate expression in t".into()));
    }
    Ok(f.specialize_all())
}
