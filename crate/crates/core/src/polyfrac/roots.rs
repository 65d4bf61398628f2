//! Simultaneous root finding (Aberth) for polynomials with rational
//! coefficients: a double-precision pass for starting values, then a
//! fixed-point pass at high precision so that badly conditioned
//! polynomials still get small residuals.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::uni::UniPoly;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Fractional bits of the fixed-point pass.
    pub bits: u32,
    pub max_iter: usize,
    /// Decimal digits after the point in the textual output.
    pub digits: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            bits: 640,
            max_iter: 400,
            digits: 100,
        }
    }
}

/// One approximate root. `re_text`/`im_text` carry the full precision;
/// `residual` is `|p(z)| / |lead(p)|` at exactly that decimal value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub re_text: String,
    pub im_text: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

struct Ctx {
    bits: u32,
}

impl Ctx {
    fn from_rat(&self, r: &Rat) -> BigInt {
        let shifted: BigInt = r.numer() << self.bits as usize;
        shifted.div_floor(r.denom())
    }

    fn from_f64(&self, x: f64) -> BigInt {
        if x == 0.0 || !x.is_finite() {
            return BigInt::zero();
        }
        let (m, e) = frexp(x);
        // x = m * 2^e with 0.5 <= |m| < 1; keep 53 bits of m
        let mant = BigInt::from((m * (1u64 << 53) as f64) as i64);
        let shift = e - 53 + self.bits as i32;
        if shift >= 0 {
            mant << shift as usize
        } else {
            mant >> (-shift) as usize
        }
    }

    fn to_f64(&self, v: &BigInt) -> f64 {
        let nbits = v.bits() as i64;
        if nbits <= 60 {
            return v.to_f64().unwrap_or(0.0) * 2f64.powi(-(self.bits as i32));
        }
        let s = nbits - 60;
        let top = (v >> s as usize).to_f64().unwrap_or(0.0);
        top * pow2(s - self.bits as i64)
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        let b_ = self.bits as usize;
        Fx {
            re: (&a.re * &b.re - &a.im * &b.im) >> b_,
            im: (&a.re * &b.im + &a.im * &b.re) >> b_,
        }
    }

    fn div(&self, a: &Fx, b: &Fx) -> Fx {
        let b_ = self.bits as usize;
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return Fx {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
        }
        let re = (&a.re * &b.re + &a.im * &b.im) << b_;
        let im = (&a.im * &b.re - &a.re * &b.im) << b_;
        Fx {
            re: re / &den,
            im: im / &den,
        }
    }

    fn one(&self) -> Fx {
        Fx {
            re: BigInt::from(1) << self.bits as usize,
            im: BigInt::zero(),
        }
    }

    fn abs_f64(&self, a: &Fx) -> f64 {
        self.to_f64(&a.re).hypot(self.to_f64(&a.im))
    }

    /// Round to `digits` decimals.
    fn decimal(&self, v: &BigInt, digits: usize) -> (String, BigInt) {
        let scale = BigInt::from(10).pow(digits as u32);
        let num = v * &scale;
        let half = BigInt::from(1) << (self.bits as usize - 1);
        let q = (num + half) >> self.bits as usize;
        let neg = q.sign() == Sign::Minus;
        let s = q.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let frac = frac.trim_end_matches('0');
        let mut text = if frac.is_empty() {
            int.to_string()
        } else {
            format!("{}.{}", int, frac)
        };
        if neg && text.chars().any(|c| c != '0' && c != '.') {
            text.insert(0, '-');
        }
        let back = (q << self.bits as usize) / scale;
        (text, back)
    }
}

fn frexp(x: f64) -> (f64, i32) {
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x * pow2(-e as i64);
    // guard against rounding in log2
    if m.abs() >= 1.0 {
        (m / 2.0, e + 1)
    } else if m.abs() < 0.5 {
        (m * 2.0, e - 1)
    } else {
        (m, e)
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

fn horner_f64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth_f64(c: &[Complex64], iters: usize) -> Vec<Complex64> {
    let n = c.len() - 1;
    let r = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let r = if r.is_finite() { r } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..iters {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_f64(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-14 {
            break;
        }
    }
    z
}

/// Roots of `p`, sorted by real part then imaginary part.
pub fn roots_numeric(p: &UniPoly, opts: &RootOptions) -> Result<Vec<Root>> {
    let n = p.degree();
    if n == 0 || p.is_zero() {
        return Err(Error::Precondition("root finding needs degree at least 1".into()));
    }
    let lead = p.leading();
    let monic: Vec<Rat> = p.coeffs().iter().map(|c| c / &lead).collect();
    let cf: Vec<Complex64> = monic
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0))
        .collect();
    let start = aberth_f64(&cf, 300);

    let ctx = Ctx { bits: opts.bits };
    let coeffs: Vec<Fx> = monic
        .iter()
        .map(|c| Fx {
            re: ctx.from_rat(c),
            im: BigInt::zero(),
        })
        .collect();
    let eval = |z: &Fx| -> (Fx, Fx) {
        let mut v = Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        let mut dv = v.clone();
        for a in coeffs.iter().rev() {
            let t = ctx.mul(&dv, z);
            dv = Fx {
                re: t.re + &v.re,
                im: t.im + &v.im,
            };
            let t = ctx.mul(&v, z);
            v = Fx {
                re: t.re + &a.re,
                im: t.im + &a.im,
            };
        }
        (v, dv)
    };
    let mut z: Vec<Fx> = start
        .iter()
        .map(|w| {
            let w = if w.is_finite() { *w } else { Complex64::new(0.5, 0.5) };
            Fx {
                re: ctx.from_f64(w.re),
                im: ctx.from_f64(w.im),
            }
        })
        .collect();
    let tol = pow2(-(opts.bits as i64) * 5 / 8);
    let one = ctx.one();
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = eval(&z[i]);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let ratio = ctx.div(&v, &dv);
            let mut s = Fx {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
            for j in (0..n).filter(|&j| j != i) {
                let d = Fx {
                    re: &z[i].re - &z[j].re,
                    im: &z[i].im - &z[j].im,
                };
                let inv = ctx.div(&one, &d);
                s.re += inv.re;
                s.im += inv.im;
            }
            let rs = ctx.mul(&ratio, &s);
            let den = Fx {
                re: &one.re - rs.re,
                im: -rs.im,
            };
            let w = ctx.div(&ratio, &den);
            worst = worst.max(ctx.abs_f64(&w) / ctx.abs_f64(&z[i]).max(1.0));
            z[i].re -= w.re;
            z[i].im -= w.im;
        }
        if worst < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: opts.max_iter,
        });
    }
    let mut out: Vec<Root> = z
        .iter()
        .map(|w| {
            let (re_text, re) = ctx.decimal(&w.re, opts.digits);
            let (im_text, im) = ctx.decimal(&w.im, opts.digits);
            let at = Fx { re, im };
            let (v, _) = eval(&at);
            Root {
                re: ctx.to_f64(&at.re),
                im: ctx.to_f64(&at.im),
                re_text,
                im_text,
                residual: ctx.abs_f64(&v),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_quadratic() {
        let r = roots_numeric(&UniPoly::from_ints(&[1, 1]), &RootOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re + 1.0).abs() < 1e-12 && r[0].im.abs() < 1e-12);
        assert_eq!(r[0].re_text, "-1");
        let p = UniPoly::one_minus(1).mul(&UniPoly::one_minus(2));
        let r = roots_numeric(&p, &RootOptions::default()).unwrap();
        assert!((r[0].re - 0.5).abs() < 1e-12);
        assert!((r[1].re - 1.0).abs() < 1e-12);
        assert!(r.iter().all(|x| x.residual < 1e-50));
    }

    #[test]
    fn complex_pair() {
        // t^2 + 1
        let r = roots_numeric(&UniPoly::from_ints(&[1, 0, 1]), &RootOptions::default()).unwrap();
        assert!((r[0].im + 1.0).abs() < 1e-12);
        assert!((r[1].im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilkinson_twenty() {
        let p = (1..=20).fold(UniPoly::one(), |acc, i| {
            acc.mul(&UniPoly::from_ints(&[-i, 1]))
        });
        let r = roots_numeric(&p, &RootOptions::default()).unwrap();
        for (i, root) in r.iter().enumerate() {
            assert!((root.re - (i + 1) as f64).abs() < 1e-12, "{:?}", root);
            assert!(root.residual < 1e-30);
        }
    }

    #[test]
    fn constant_rejected() {
        assert!(roots_numeric(&UniPoly::from_ints(&[3]), &RootOptions::default()).is_err());
    }
}
