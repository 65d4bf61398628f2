//! Fixed-width generating functions
//! `f_k^α(x_1..x_k) = Σ v(γ) · #chains(α → γ)` over compositions `γ` of width `k`,
//! where `v(γ) = x_1^{γ_1} ⋯ x_k^{γ_k}`.
//!
//! `f_k` is obtained from `f_{k-1}` by a linear recurrence in the shift
//! `Λ_j` and the degree-extraction `Δ_i^d` operators.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::operators::Alphabet;
use crate::polyfrac::{
    rat, roots_numeric, FactoredRational, Monomial, MultiPoly, Rat, Root, RootOptions, UniPoly, UniRational,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenFunKey {
    pub poset: Alphabet,
    pub alpha: Composition,
    pub k: usize,
}

fn memo() -> &'static Mutex<HashMap<GenFunKey, FactoredRational>> {
    static MEMO: OnceLock<Mutex<HashMap<GenFunKey, FactoredRational>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `v(α) = x_1^{α_1} ⋯ x_r^{α_r}`.
pub fn weight_monomial(alpha: &Composition) -> Monomial {
    Monomial::new(alpha.parts().iter().map(|&p| p as u32).collect())
}

/// `f_k^α` for `N`, `BBD` and `S(d)` with finite `d`.
pub fn f_width(a: Alphabet, alpha: &Composition, k: usize) -> Result<FactoredRational> {
    let a = a.normalized()?;
    if matches!(a, Alphabet::SInf | Alphabet::UOnly) {
        return Err(Error::Unsupported(a));
    }
    let key = GenFunKey {
        poset: a,
        alpha: alpha.clone(),
        k,
    };
    if let Some(f) = memo().lock().expect("memo lock").get(&key) {
        return Ok(f.clone());
    }
    let f = compute(a, alpha, k)?;
    memo().lock().expect("memo lock").insert(key, f.clone());
    Ok(f)
}

fn compute(a: Alphabet, alpha: &Composition, k: usize) -> Result<FactoredRational> {
    let r = alpha.width();
    if k < r {
        return Ok(FactoredRational::zero());
    }
    let v = MultiPoly::monomial(weight_monomial(alpha));
    if k == r {
        let den = if r == 0 {
            Vec::new()
        } else {
            vec![(MultiPoly::one_minus_sum(1, r), 1)]
        };
        return FactoredRational::new(v, den);
    }
    let prev = f_width(a, alpha, k - 1)?;
    let rhs = match a {
        Alphabet::N => n_terms(&prev, alpha, k),
        Alphabet::Bbd => s_terms(&prev, k, 2)?,
        Alphabet::S(d) => s_terms(&prev, k, d)?,
        _ => unreachable!("rejected above"),
    };
    rhs.div_poly(&MultiPoly::one_minus_sum(1, k), 1)
}

/// `x_1 Λ(f) + x_k f − [α all-ones] x_1⋯x_k`.
fn n_terms(prev: &FactoredRational, alpha: &Composition, k: usize) -> FactoredRational {
    let mut out = prev
        .lambda_op(1)
        .mul_monomial(&Monomial::var(1))
        .add(&prev.mul_monomial(&Monomial::var(k)));
    if alpha.is_all_ones() {
        out = out.sub(&FactoredRational::monomial(Monomial::new(vec![1; k])));
    }
    out
}

/// `x_1 Λ(f) + Σ_{i=2}^k Σ_{v=1}^{d-1} x_i^v / x_{i-1}^{v-1} Λ_i(f − Σ_{j≤v} Δ^j_{i-1} f)`.
fn s_terms(prev: &FactoredRational, k: usize, d: usize) -> Result<FactoredRational> {
    let mut out = prev.lambda_op(1).mul_monomial(&Monomial::var(1));
    for i in 2..=k {
        let mut rest = prev.clone();
        let mut deriv = prev.clone();
        let mut fact = BigInt::one();
        for v in 1..d {
            deriv = deriv.derivative(i - 1);
            fact *= v;
            let delta = deriv
                .substitute_zero(i - 1)
                .scale(&Rat::from_integer(fact.clone()).recip())
                .mul_monomial(&Monomial::var_pow(i - 1, v as u32));
            rest = rest.sub(&delta);
            if rest.is_zero() {
                break;
            }
            let term = rest
                .lambda_op(i)
                .mul_monomial(&Monomial::var_pow(i, v as u32))
                .divide_by_monomial_exact(i - 1, v as u32 - 1)?;
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// `∏_{i=1}^k ∏_{j=i+r-1}^k (1 − x_i − … − x_j)`, with `r` raised to 1 when `α = ()`.
fn structure_denominator(r: usize, k: usize) -> Vec<MultiPoly> {
    let r = r.max(1);
    let mut out = Vec::new();
    for i in 1..=k {
        for j in (i + r - 1)..=k {
            out.push(MultiPoly::one_minus_sum(i, j));
        }
    }
    out
}

/// Checks that `f_k^α[N]` has the predicted denominator and returns the
/// polynomial `f_k · ∏(1 − x_i − … − x_j) / (x_1⋯x_k)`.
pub fn structure_check(a: Alphabet, alpha: &Composition, k: usize) -> Result<MultiPoly> {
    if a != Alphabet::N {
        return Err(Error::Unsupported(a));
    }
    let f = f_width(a, alpha, k)?;
    if f.is_zero() {
        return Ok(MultiPoly::zero());
    }
    let product = structure_denominator(alpha.width(), k)
        .iter()
        .fold(MultiPoly::one(), |acc, g| &acc * g);
    let cleared = f.mul_poly(&product);
    let p = cleared.as_polynomial().ok_or_else(|| {
        Error::StructureViolation(format!(
            "denominator of f_{}^{} does not divide the predicted product",
            k, alpha
        ))
    })?;
    let mut out = p.clone();
    for i in 1..=k {
        out = out.divide_by_var_pow(i, 1).ok_or_else(|| {
            Error::StructureViolation(format!("numerator of f_{}^{} not divisible by x{}", k, alpha, i))
        })?;
    }
    Ok(out)
}

/// Exponents `e(S)` of `1 − Σ_{i∈S} x_i` in a denominator, for every
/// nonempty `S ⊆ {1..k}`. Subsets are coded as bitmasks, bit `i-1` for `x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorProfile {
    pub k: usize,
    /// `exponents[mask - 1]`.
    pub exponents: Vec<u32>,
}

impl DenominatorProfile {
    pub fn mask_of(set: &[usize]) -> u32 {
        set.iter().fold(0, |m, &i| m | (1 << (i - 1)))
    }

    pub fn set_of(mask: u32) -> Vec<usize> {
        (1..=32).filter(|i| mask & (1 << (i - 1)) != 0).collect()
    }

    pub fn get_mask(&self, mask: u32) -> u32 {
        self.exponents.get(mask as usize - 1).copied().unwrap_or(0)
    }

    pub fn get(&self, set: &[usize]) -> u32 {
        self.get_mask(Self::mask_of(set))
    }

    pub fn full_set_exponent(&self) -> u32 {
        self.get_mask((1u32 << self.k) - 1)
    }

    /// `(S, e(S))` in increasing mask order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, u32)> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .map(|(m, &e)| (Self::set_of(m as u32 + 1), e))
    }
}

impl fmt::Display for DenominatorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (set, e) in self.entries() {
            let name: String = set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
            writeln!(f, "{{{}}}\t{}", name, e)?;
        }
        Ok(())
    }
}

/// The subset `S` if `g = 1 − Σ_{i∈S} x_i`.
fn linear_form_support(g: &MultiPoly) -> Option<u32> {
    let mut mask = 0u32;
    for (m, c) in g.terms() {
        if m.is_one() {
            if !c.is_one() {
                return None;
            }
            continue;
        }
        if m.degree() != 1 || *c != -Rat::one() {
            return None;
        }
        let i = m.exps().iter().position(|&e| e == 1)? + 1;
        mask |= 1 << (i - 1);
    }
    Some(mask)
}

pub fn denominator_profile(a: Alphabet, alpha: &Composition, k: usize) -> Result<DenominatorProfile> {
    let a = a.normalized()?;
    if !matches!(a, Alphabet::Bbd | Alphabet::S(_)) {
        return Err(Error::Unsupported(a));
    }
    if k == 0 || k > 16 {
        return Err(Error::Precondition("denominator profiles need 1 <= k <= 16".into()));
    }
    let f = f_width(a, alpha, k)?;
    let mut exponents = vec![0; (1usize << k) - 1];
    for (g, m) in f.denominator() {
        let mask = linear_form_support(g).ok_or_else(|| Error::NonLinearFactor(g.to_string()))?;
        exponents[mask as usize - 1] += m;
    }
    Ok(DenominatorProfile { k, exponents })
}

/// `L_k^α(t) = f_k^α(t, …, t)`. For `N` this uses the univariate recurrence.
pub fn l_width(a: Alphabet, alpha: &Composition, k: usize) -> Result<UniRational> {
    match a {
        Alphabet::N => l_width_recurrence(alpha, k),
        _ => l_width_specialized(a, alpha, k),
    }
}

/// `L_k^α` by specializing the multivariate `f_k^α`.
pub fn l_width_specialized(a: Alphabet, alpha: &Composition, k: usize) -> Result<UniRational> {
    Ok(f_width(a, alpha, k)?.specialize_all())
}

/// `L_k^α[N]` from its own univariate recurrence:
/// `L_r = t^N/(1 − rt)`, `L_k = (2t L_{k-1} − [all-ones] t^k)/(1 − kt)`.
pub fn l_width_recurrence(alpha: &Composition, k: usize) -> Result<UniRational> {
    let r = alpha.width();
    if k < r {
        return Ok(UniRational::zero());
    }
    let mut l = UniRational::new(
        UniPoly::monomial(alpha.weight(), Rat::one()),
        vec![(UniPoly::one_minus(r as i64), 1)],
    )?;
    let two_t = UniPoly::monomial(1, rat(2));
    for j in r + 1..=k {
        let mut next = l.mul_poly(&two_t);
        if alpha.is_all_ones() {
            next = next.sub(&UniRational::from_poly(UniPoly::monomial(j, Rat::one())));
        }
        l = next.div_poly(&UniPoly::one_minus(j as i64), 1)?;
    }
    Ok(l)
}

/// The coefficient of `t^n` in `L_k^α`: chains from `α` to compositions of
/// weight `n` and width `k`.
pub fn a_nk(a: Alphabet, alpha: &Composition, k: usize, n: usize) -> Result<BigInt> {
    let l = l_width(a, alpha, k)?;
    let c = l.series_coeffs(n).pop().expect("n + 1 coefficients");
    if !c.is_integer() {
        return Err(Error::StructureViolation(format!("non-integral coefficient {}", c)));
    }
    Ok(c.to_integer())
}

fn require_not_all_ones(alpha: &Composition, k: usize) -> Result<()> {
    if alpha.is_all_ones() {
        return Err(Error::Precondition(format!("{} is all-ones", alpha)));
    }
    if k < alpha.width() {
        return Err(Error::Precondition(format!("k = {} below width {}", k, alpha.width())));
    }
    Ok(())
}

fn product_one_minus_it(from: usize, to: usize) -> Vec<(UniPoly, u32)> {
    (from..=to).map(|i| (UniPoly::one_minus(i as i64), 1)).collect()
}

/// `2^{k-r} t^{N+k-r} / ∏_{i=r}^k (1 − it)` for `α` not all-ones.
pub fn closed_form_l_not_all_ones(alpha: &Composition, k: usize) -> Result<UniRational> {
    require_not_all_ones(alpha, k)?;
    let r = alpha.width();
    let num = UniPoly::monomial(alpha.weight() + k - r, Rat::from_integer(BigInt::one() << (k - r)));
    UniRational::new(num, product_one_minus_it(r, k))
}

/// `D_r = 1`, `D_k = 2 D_{k-1} − ∏_{i=r}^{k-1} (1 − it)`.
pub fn d_poly(r: usize, k: usize) -> Result<UniPoly> {
    if r == 0 || k < r {
        return Err(Error::Precondition(format!("D_k needs 1 <= r <= k (r = {}, k = {})", r, k)));
    }
    let mut d = UniPoly::one();
    let mut prod = UniPoly::one();
    for j in r + 1..=k {
        prod = prod.mul(&UniPoly::one_minus(j as i64 - 1));
        d = d.scale(&rat(2)).sub(&prod);
    }
    Ok(d)
}

/// Roots of `D_k(x/k)` for all-ones `α` of width `r`.
pub fn d_poly_scaled_roots(r: usize, k: usize, opts: &RootOptions) -> Result<Vec<Root>> {
    let d = d_poly(r, k)?.scale_arg(&Rat::new(BigInt::one(), BigInt::from(k)));
    roots_numeric(&d, opts)
}

/// Checks degree, constant term and leading coefficient of `D_k` for all-ones
/// `α` of width `r` (the last only for `k > r`; `D_r = 1`), and that `L_k = t^k D_k / ∏_{i=r}^k (1 − it)`.
pub fn verify_d_poly(r: usize, k: usize) -> Result<()> {
    let d = d_poly(r, k)?;
    let fail = |what: String| Err(Error::StructureViolation(format!("D_{} (r = {}): {}", k, r, what)));
    if d.degree() != k - r {
        return fail(format!("degree {} != {}", d.degree(), k - r));
    }
    if !d.coeff(0).is_one() {
        return fail(format!("constant term {}", d.coeff(0)));
    }
    let mut lead = BigInt::one();
    for i in r..k {
        lead *= i;
    }
    if (k - r) % 2 == 0 {
        lead = -lead;
    }
    if k > r && d.leading() != Rat::from_integer(lead.clone()) {
        return fail(format!("leading coefficient {} != {}", d.leading(), lead));
    }
    let expected = UniRational::new(d.shift_up(k), product_one_minus_it(r, k))?;
    let actual = l_width(Alphabet::N, &Composition::all_ones(r), k)?;
    if !expected.same_function(&actual) {
        return fail(format!("L_k = {} but t^k D_k/prod = {}", actual, expected));
    }
    Ok(())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C` with `a_{n,k}^α ~ C k^n`.
pub fn asymptotic_constant(alpha: &Composition, k: usize) -> Result<Rat> {
    let r = alpha.width();
    if r == 0 || k <= r {
        return Err(Error::Precondition(format!(
            "asymptotics need 1 <= r < k (r = {}, k = {})",
            r, k
        )));
    }
    let kk = BigInt::from(k);
    let fact = Rat::from_integer(factorial(k - r));
    if alpha.is_all_ones() {
        let d = d_poly(r, k)?;
        let at = d.eval(&Rat::new(BigInt::one(), kk.clone()));
        Ok(at / fact / Rat::from_integer(num_traits::pow(kk, r)))
    } else {
        let two = Rat::from_integer(BigInt::one() << (k - r));
        Ok(two / (Rat::from_integer(num_traits::pow(kk, alpha.weight())) * fact))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticSample {
    pub n: usize,
    pub count: String,
    /// `a_{n,k} / (C k^n) − 1`.
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub alpha: Composition,
    pub k: usize,
    pub constant: String,
    pub samples: Vec<AsymptoticSample>,
}

impl AsymptoticReport {
    pub fn error_at(&self, n: usize) -> Option<f64> {
        self.samples.iter().find(|s| s.n == n).map(|s| s.relative_error)
    }
}

/// Relative error of `C k^n` against the exact `a_{n,k}` for `n ≤ n_max`.
/// Here `n` is the exponent of `t`, as in the asymptotic formula.
pub fn asymptotic_check(alpha: &Composition, k: usize, n_max: usize) -> Result<AsymptoticReport> {
    let c = asymptotic_constant(alpha, k)?;
    let coeffs = l_width(Alphabet::N, alpha, k)?.series_coeffs(n_max);
    let kk = Rat::from_integer(BigInt::from(k));
    let mut pw = Rat::one();
    let mut samples = Vec::new();
    for (n, a) in coeffs.into_iter().enumerate() {
        if !a.is_zero() {
            let approx = &c * &pw;
            let err = (&a / &approx - Rat::one()).to_f64().unwrap_or(f64::INFINITY);
            samples.push(AsymptoticSample {
                n,
                count: a.to_integer().to_string(),
                relative_error: err,
            });
        }
        pw *= &kk;
    }
    Ok(AsymptoticReport {
        alpha: alpha.clone(),
        k,
        constant: c.to_string(),
        samples,
    })
}

/// `𝔎`: sort every exponent vector decreasingly and merge.
pub fn kappa_op(p: &MultiPoly) -> MultiPoly {
    p.map_monomials(Monomial::sorted_decreasing)
}

/// `𝔎` of the Taylor polynomial of `f_k^α` to total degree `n`.
pub fn shadow_series(a: Alphabet, alpha: &Composition, k: usize, n: u32) -> Result<MultiPoly> {
    let parts = alpha.parts();
    if parts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Precondition(format!("{} does not have all parts equal", alpha)));
    }
    Ok(kappa_op(&f_width(a, alpha, k)?.taylor(n)))
}

/// Sum of all coefficients; `𝔎` preserves it.
pub fn coefficient_sum(p: &MultiPoly) -> Rat {
    p.terms().fold(Rat::zero(), |acc, (_, c)| acc + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfrac::{parse_rational, parse_uni_rational};
    use crate::poset::chain_counts;

    fn comp(p: &[usize]) -> Composition {
        Composition::new(p.to_vec()).unwrap()
    }

    fn assert_oracle(a: Alphabet, alpha: &Composition, k: usize, n: u32) {
        let series = f_width(a, alpha, k).unwrap().taylor(n);
        let counts = chain_counts(a, alpha, n as usize, k);
        for (m, c) in series.terms() {
            assert!(m.nvars() == k && m.exps().iter().all(|&e| e > 0), "{:?} {} k={} stray {}", a, alpha, k, m);
            let gamma = Composition::new(m.exps().iter().map(|&e| e as usize).collect()).unwrap();
            let want = counts.get(&gamma).cloned().unwrap_or_default();
            assert_eq!(c, &Rat::from_integer(want.into()), "{:?} {} -> {}", a, alpha, gamma);
        }
        for (gamma, c) in &counts {
            if gamma.width() == k {
                assert_eq!(series.coeff(&weight_monomial(gamma)), Rat::from_integer(c.clone().into()));
            }
        }
    }

    #[test]
    fn closed_forms_n() {
        let cases = [
            (&[1][..], 1, "x1/(1-x1)"),
            (&[1], 2, "x1*x2*(1-x1*x2)/((1-x1)*(1-x2)*(1-x1-x2))"),
            (&[1, 1], 2, "x1*x2/(1-x1-x2)"),
            (
                &[1, 1],
                3,
                "x1 x2 x3 (1 - x1 x2 - x1 x3 - x2^2 - x2 x3)/((1-x1-x2)(1-x2-x3)(1-x1-x2-x3))",
            ),
            (
                &[1, 2],
                3,
                "x1 x2 x3 (-x2^2 - 2x2 x3 + x2 - x1 x3 + x3)/((1-x1-x2)(1-x2-x3)(1-x1-x2-x3))",
            ),
        ];
        for (alpha, k, s) in cases {
            let f = f_width(Alphabet::N, &comp(alpha), k).unwrap();
            assert!(f.same_function(&parse_rational(s).unwrap()), "{:?} {}: {}", alpha, k, f);
        }
    }

    #[test]
    fn closed_forms_s() {
        for (d, s) in [
            (2, "x1 x2 (1 - x1 x2)/((1-x1-x2)(1-x2)(1-x1))"),
            (3, "x2 x1 (1 - x1 x2^2)/((1-x1-x2)(1-x2)(1-x1))"),
            (4, "x1 x2 (1 - x1 x2^3)/((1-x1-x2)(1-x2)(1-x1))"),
        ] {
            let f = f_width(Alphabet::S(d), &comp(&[1]), 2).unwrap();
            assert!(f.same_function(&parse_rational(s).unwrap()), "d = {}: {}", d, f);
        }
    }

    #[test]
    fn unsupported_posets() {
        assert!(matches!(f_width(Alphabet::SInf, &comp(&[1]), 2), Err(Error::Unsupported(_))));
        assert!(f_width(Alphabet::S(1), &comp(&[1]), 2).is_err());
        assert!(f_width(Alphabet::N, &comp(&[1, 2]), 1).unwrap().is_zero());
        assert!(f_width(Alphabet::N, &Composition::empty(), 0).unwrap().same_function(&FactoredRational::one()));
    }

    #[test]
    fn oracle_small() {
        for a in [Alphabet::N, Alphabet::Bbd, Alphabet::S(3)] {
            for alpha in [vec![], vec![1], vec![2], vec![1, 1], vec![1, 2]] {
                for k in 0..=3 {
                    assert_oracle(a, &comp(&alpha), k, 6);
                }
            }
        }
    }

    #[test]
    fn structure() {
        let t = structure_check(Alphabet::N, &comp(&[1]), 2).unwrap();
        assert_eq!(t, parse_rational("1-x1*x2").unwrap().numerator().clone());
        assert_eq!(structure_check(Alphabet::N, &comp(&[1, 1]), 2).unwrap(), MultiPoly::one());
        for n in 0..=3 {
            for alpha in Composition::all_of_weight(n) {
                for k in alpha.width().max(1)..=3 {
                    structure_check(Alphabet::N, &alpha, k).unwrap();
                }
            }
        }
        assert!(structure_check(Alphabet::Bbd, &comp(&[1]), 2).is_err());
    }

    #[test]
    fn profiles() {
        let p = denominator_profile(Alphabet::S(4), &comp(&[1]), 3).unwrap();
        assert_eq!((p.get(&[1]), p.get(&[2]), p.get(&[1, 2, 3])), (4, 1, 1));
        let p = denominator_profile(Alphabet::Bbd, &comp(&[2, 2]), 3).unwrap();
        assert_eq!((p.get(&[1]), p.get(&[1, 2]), p.get(&[1, 2, 3])), (0, 1, 1));
        assert_eq!(DenominatorProfile::set_of(5), vec![1, 3]);
        assert!(denominator_profile(Alphabet::N, &comp(&[1]), 2).is_err());
    }

    #[test]
    fn specializations() {
        let l3 = l_width_specialized(Alphabet::N, &comp(&[1]), 3).unwrap();
        assert_eq!(l3.to_string(), "t^3*(1+5t-2t^2)/((1-t)(1-2t)(1-3t))");
        let l = l_width(Alphabet::N, &comp(&[2, 3]), 5).unwrap();
        assert!(l.same_function(&parse_uni_rational("8t^8/((1-5t)(1-4t)(1-3t)(1-2t))").unwrap()));
        let b = l_width(Alphabet::Bbd, &comp(&[1]), 4).unwrap();
        let want = "(12t^4-19t^3-19t^2+13t+1)t^4/((1-4t)(1-t)^2(1-2t)^2(1-3t))";
        assert!(b.same_function(&parse_uni_rational(want).unwrap()), "{}", b);
        for alpha in [vec![], vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 1, 1]] {
            for k in 0..=5 {
                let a = comp(&alpha);
                let direct = l_width_recurrence(&a, k).unwrap();
                assert!(direct.same_function(&l_width_specialized(Alphabet::N, &a, k).unwrap()), "{:?} {}", alpha, k);
                if !a.is_all_ones() && k >= a.width() {
                    assert!(direct.same_function(&closed_form_l_not_all_ones(&a, k).unwrap()));
                }
            }
        }
        assert_eq!(closed_form_l_not_all_ones(&comp(&[2]), 1).unwrap().to_string(), "t^2/(1-t)");
        assert!(closed_form_l_not_all_ones(&comp(&[1, 1]), 3).is_err());
        assert_eq!(a_nk(Alphabet::N, &comp(&[1]), 2, 3).unwrap(), BigInt::from(4));
    }

    #[test]
    fn d_polynomials() {
        assert_eq!(d_poly(1, 2).unwrap(), UniPoly::from_ints(&[1, 1]));
        assert_eq!(d_poly(1, 3).unwrap(), UniPoly::from_ints(&[1, 5, -2]));
        assert_eq!(d_poly(3, 3).unwrap(), UniPoly::one());
        for r in 1..=3 {
            for k in r..=10 {
                verify_d_poly(r, k).unwrap();
            }
        }
        assert!(d_poly(0, 2).is_err());
        // D_3(x/3) = 1 + 5x/3 - 2x^2/9 has roots (15 ± sqrt(297))/4
        let roots = d_poly_scaled_roots(1, 3, &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].re - (15.0 - 297f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(roots.iter().all(|z| z.residual < 1e-30 && z.im == 0.0));
    }

    #[test]
    fn asymptotics() {
        let c = asymptotic_constant(&comp(&[2, 3]), 5).unwrap();
        assert_eq!(c, Rat::new(8.into(), 18750.into()));
        let rep = asymptotic_check(&comp(&[2, 3]), 5, 40).unwrap();
        assert!(rep.error_at(40).unwrap().abs() < 0.05);
        let c = asymptotic_constant(&comp(&[1]), 3).unwrap();
        let d3 = d_poly(1, 3).unwrap().eval(&Rat::new(1.into(), 3.into()));
        assert_eq!(c, d3 / rat(2) / rat(3));
        let rep = asymptotic_check(&comp(&[1]), 3, 60).unwrap();
        assert!(rep.error_at(60).unwrap().abs() < 1e-6);
        assert!(asymptotic_constant(&comp(&[1, 2]), 2).is_err());
    }

    #[test]
    fn kappa() {
        let p = MultiPoly::monomial(Monomial::new(vec![1, 3]));
        assert_eq!(kappa_op(&p), MultiPoly::monomial(Monomial::new(vec![3, 1])));
        let s = shadow_series(Alphabet::N, &Composition::empty(), 2, 6).unwrap();
        assert_eq!(s.coeff(&Monomial::new(vec![2, 1])), rat(4));
        assert_eq!(s.coeff(&Monomial::new(vec![2, 2])), rat(4));
        assert_eq!(s.coeff(&Monomial::new(vec![3, 1])), rat(6));
        assert_eq!(kappa_op(&s), s);
        assert!(shadow_series(Alphabet::N, &comp(&[1, 2]), 2, 4).is_err());
    }
}
