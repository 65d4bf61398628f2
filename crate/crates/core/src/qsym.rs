//! Fundamental quasi-symmetric functions in finitely many variables, and the
//! product rule `L_(1) L_α = Σ_{β covers α} L_β` in the poset `S(∞)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::polyfrac::{Monomial, MultiPoly, Rat};
use crate::poset::covers_via_descent_oracle;

/// A homogeneous polynomial in `x_1..x_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSymPoly {
    pub m: usize,
    pub degree: usize,
    pub poly: MultiPoly,
}

impl QSymPoly {
    pub fn mul(&self, other: &QSymPoly) -> QSymPoly {
        QSymPoly {
            m: self.m.max(other.m),
            degree: self.degree + other.degree,
            poly: &self.poly * &other.poly,
        }
    }

    pub fn is_quasi_symmetric(&self) -> bool {
        is_quasi_symmetric(&self.poly, self.m)
    }
}

/// The number of variables used by `verify_product_rule` by default.
pub fn default_vars(alpha: &Composition) -> usize {
    alpha.weight() + 2
}

/// `L_α = Σ x_{i_1} ⋯ x_{i_n}` over `1 ≤ i_1 ≤ … ≤ i_n ≤ m` with
/// `i_j < i_{j+1}` whenever `j` is a partial sum of `α`.
pub fn fundamental(alpha: &Composition, m: usize) -> Result<QSymPoly> {
    if m == 0 {
        return Err(Error::Precondition("need at least one variable".into()));
    }
    let n = alpha.weight();
    let descents = alpha.descent_set().set;
    let mut strict = vec![false; n + 1];
    for d in descents {
        strict[d] = true;
    }
    let mut poly = MultiPoly::zero();
    let mut exps = vec![0u32; m];
    fill(1, 1, n, m, &strict, &mut exps, &mut poly);
    Ok(QSymPoly { m, degree: n, poly })
}

/// Chooses `i_j ≥ lo` for positions `j..=n`.
fn fill(j: usize, lo: usize, n: usize, m: usize, strict: &[bool], exps: &mut [u32], out: &mut MultiPoly) {
    if j > n {
        out.add_term(Monomial::new(exps.to_vec()), Rat::from_integer(1.into()));
        return;
    }
    for i in lo..=m {
        exps[i - 1] += 1;
        let next = if strict[j] { i + 1 } else { i };
        fill(j + 1, next, n, m, strict, exps, out);
        exps[i - 1] -= 1;
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Whether the coefficient of `x_{i_1}^{a_1} ⋯ x_{i_r}^{a_r}` (`i_1 < … < i_r ≤ m`)
/// depends only on `(a_1, …, a_r)`.
pub fn is_quasi_symmetric(p: &MultiPoly, m: usize) -> bool {
    if p.nvars() > m {
        return false;
    }
    let mut groups: BTreeMap<Vec<u32>, (usize, Rat)> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let pattern: Vec<u32> = mono.exps().iter().copied().filter(|&e| e > 0).collect();
        let entry = groups.entry(pattern).or_insert_with(|| (0, c.clone()));
        if &entry.1 != c {
            return false;
        }
        entry.0 += 1;
    }
    groups
        .iter()
        .all(|(pattern, (count, _))| *count == binomial(m, pattern.len()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductRuleCheck {
    pub alpha: Composition,
    pub m: usize,
    pub covers: Vec<Composition>,
    pub holds: bool,
}

/// Compares `L_(1) L_α` with the sum of `L_β` over the covers `β` of `α`
/// given by inserting a zero into the minimal permutation.
pub fn product_rule(alpha: &Composition, m: usize) -> Result<ProductRuleCheck> {
    if m < alpha.weight() + 2 {
        return Err(Error::Precondition(format!(
            "need m >= {} variables, got {}",
            alpha.weight() + 2,
            m
        )));
    }
    let one = Composition::new(vec![1])?;
    let lhs = fundamental(&one, m)?.mul(&fundamental(alpha, m)?);
    let covers: Vec<Composition> = covers_via_descent_oracle(alpha).into_iter().collect();
    let mut rhs = MultiPoly::zero();
    for beta in &covers {
        rhs = &rhs + &fundamental(beta, m)?.poly;
    }
    Ok(ProductRuleCheck {
        alpha: alpha.clone(),
        m,
        holds: lhs.poly == rhs,
        covers,
    })
}

pub fn verify_product_rule(alpha: &Composition, m: usize) -> Result<bool> {
    Ok(product_rule(alpha, m)?.holds)
}

/// Rank of the coefficient matrix of `{L_α : α ⊨ n}` in `m` variables.
pub fn fundamental_rank(n: usize, m: usize) -> Result<usize> {
    let rows: Vec<MultiPoly> = Composition::all_of_weight(n)
        .iter()
        .map(|a| fundamental(a, m).map(|q| q.poly))
        .collect::<Result<_>>()?;
    let columns: Vec<Monomial> = {
        let mut all: Vec<Monomial> = rows.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        all.sort();
        all.dedup();
        all
    };
    let mut matrix: Vec<Vec<Rat>> = rows
        .iter()
        .map(|p| columns.iter().map(|c| p.coeff(c)).collect())
        .collect();
    Ok(rank(&mut matrix))
}

fn rank(a: &mut [Vec<Rat>]) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}
