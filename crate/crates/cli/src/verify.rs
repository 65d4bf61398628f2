//! The invariant suites behind `compposets verify`.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use compposets::genfun::{
    asymptotic_check, coefficient_sum, denominator_profile, f_width, kappa_op, l_width_recurrence,
    l_width_specialized, shadow_series, verify_d_poly, weight_monomial,
};
use compposets::ncgen::{build_automaton_n, f_recurrence, labeled_oracle, regex_language};
use compposets::operators::{admissible_letters, priority_compare, Priority};
use compposets::polyfrac::{parse_rational, FactoredRational, MultiPoly, Rat};
use compposets::poset::{chain_counts, covers, covers_via_descent_oracle, enumerate_chains, leq, verify_multiranking};
use compposets::qsym::{fundamental, fundamental_rank, verify_product_rule};
use compposets::{Alphabet, Composition, DescentSet, Letter, Word};

use crate::commands::{dk_roots, Failure};

type Check = std::result::Result<String, String>;

struct Bounds {
    composition_weight: usize,
    operator_weight: usize,
    leq_weight: usize,
    multirank_weight: usize,
    qsym_vars: usize,
    dk_roots_max: usize,
}

const QUICK: Bounds = Bounds {
    composition_weight: 8,
    operator_weight: 6,
    leq_weight: 5,
    multirank_weight: 6,
    qsym_vars: 6,
    dk_roots_max: 45,
};

const FULL: Bounds = Bounds {
    composition_weight: 10,
    operator_weight: 8,
    leq_weight: 7,
    multirank_weight: 7,
    qsym_vars: 7,
    dk_roots_max: 45,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

const ORACLE_ALPHAS: [&[usize]; 7] = [&[], &[1], &[2], &[1, 1], &[1, 2], &[2, 2], &[1, 1, 1]];

fn comp(p: &[usize]) -> Composition {
    Composition::new(p.to_vec()).expect("positive parts")
}

fn all_up_to(n: usize) -> Vec<Composition> {
    (0..=n).flat_map(Composition::all_of_weight).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn compositions(b: &Bounds) -> Check {
    let w = b.composition_weight;
    for n in 0..=w {
        let all = Composition::all_of_weight(n);
        let expected = if n == 0 { 1 } else { 1usize << (n - 1) };
        ensure(all.len() == expected, || format!("{} compositions of {}", all.len(), n))?;
        for p in &all {
            let mw = p.multiweight();
            ensure(mw.parts().windows(2).all(|x| x[0] >= x[1]), || format!("multiweight of {}", p))?;
            ensure(mw.conjugate() == p.mw_star(), || format!("conjugate multiweight of {}", p))?;
            let d: DescentSet = p.descent_set();
            ensure(Composition::from_descents(&d) == *p, || format!("descent round trip of {}", p))?;
        }
    }
    Ok(format!("weight <= {}", w))
}

fn letters_up_to(m: usize) -> Vec<Letter> {
    let mut v = vec![Letter::L, Letter::R];
    v.extend((1..=m).map(Letter::U));
    for i in 2..=m {
        v.extend((1..=m).map(|r| Letter::V(i, r)));
    }
    v
}

fn operators(b: &Bounds) -> Check {
    let w = b.operator_weight;
    let letters = letters_up_to(9);
    let alphabets = [Alphabet::N, Alphabet::Bbd, Alphabet::S(3), Alphabet::S(4), Alphabet::SInf, Alphabet::UOnly];
    for p in all_up_to(w) {
        for t in &letters {
            if let Some(q) = t.apply(&p) {
                ensure(q.weight() == p.weight() + 1, || format!("{} on {} gives {}", t, p, q))?;
            }
        }
        for a in alphabets {
            let defined: Vec<(Letter, Composition)> = a
                .candidate_letters(&p)
                .into_iter()
                .filter_map(|t| t.apply(&p).map(|q| (t, q)))
                .collect();
            for (i, (s, q1)) in defined.iter().enumerate() {
                for (t, q2) in &defined[i + 1..] {
                    ensure(q1 != q2 || priority_compare(*s, *t) != Priority::Incomparable, || {
                        format!("{} and {} collide on {} in {}", s, t, p, a)
                    })?;
                }
            }
            let results: BTreeSet<Composition> = admissible_letters(&p, a).into_iter().map(|(_, q)| q).collect();
            ensure(results.len() == admissible_letters(&p, a).len(), || format!("repeated cover of {} in {}", p, a))?;
        }
        if p.weight() <= 7 {
            let n = admissible_letters(&p, Alphabet::SInf).len();
            ensure(n == p.weight() + 1, || format!("{} has {} covers in S:inf", p, n))?;
        }
        let d = p.height() + 1;
        ensure(
            admissible_letters(&p, Alphabet::S(d.max(3))) == admissible_letters(&p, Alphabet::SInf),
            || format!("S:{} and S:inf differ on {}", d.max(3), p),
        )?;
    }
    Ok(format!("weight <= {}", w))
}

fn endpoints(a: Alphabet, p: &Composition) -> BTreeSet<Composition> {
    covers(a, p).into_iter().map(|(_, q)| q).collect()
}

fn posets(b: &Bounds) -> Check {
    for p in all_up_to(7) {
        ensure(endpoints(Alphabet::SInf, &p) == covers_via_descent_oracle(&p), || {
            format!("descent oracle disagrees on {}", p)
        })?;
    }
    for p in all_up_to(6) {
        let n: BTreeSet<Composition> = covers(Alphabet::N, &p)
            .into_iter()
            .filter(|(t, _)| *t != Letter::R)
            .map(|(_, q)| q)
            .collect();
        let family = [
            endpoints(Alphabet::Bbd, &p),
            endpoints(Alphabet::S(3), &p),
            endpoints(Alphabet::S(4), &p),
            endpoints(Alphabet::SInf, &p),
        ];
        ensure(n.is_subset(&family[0]), || format!("N covers of {} not in BBD", p))?;
        for pair in family.windows(2) {
            ensure(pair[0].is_subset(&pair[1]), || format!("cover sets of {} not nested", p))?;
        }
    }
    let all = all_up_to(b.leq_weight);
    for p in &all {
        for q in &all {
            let expected = p.width() == q.width() && p.parts().iter().zip(q.parts()).all(|(x, y)| x <= y);
            ensure(leq(Alphabet::UOnly, p, q) == expected, || format!("U-only order wrong on {} <= {}", p, q))?;
        }
    }
    for a in [Alphabet::N, Alphabet::Bbd, Alphabet::S(3)] {
        for c in enumerate_chains(a, &comp(&[1]), 5, None) {
            for (i, s) in c.steps.iter().enumerate() {
                ensure(s.weight() == 1 + i, || format!("chain {} is not ranked", c.word()))?;
            }
        }
    }
    Ok(format!("covers to weight 7, U-only order to weight {}", b.leq_weight))
}

fn multiranking(b: &Bounds) -> Check {
    for a in [Alphabet::N, Alphabet::Bbd, Alphabet::S(3)] {
        let r = verify_multiranking(a, b.multirank_weight);
        if !r.passed() {
            return Err(format!("{}: {}", a, r.violations[0]));
        }
    }
    Ok(format!("weight <= {}", b.multirank_weight))
}

fn polyfrac(_: &Bounds) -> Check {
    let samples = ["1 + x1 + 3 x1^2 x2 - x1^3", "x1^2 x2^2 - 2 x2 + x1 x2^3", "5 - x2^4 + x1 x2"];
    for s in samples {
        let f = parse_rational(s).map_err(|e| e.to_string())?;
        for i in 1..=2 {
            for d in 0..=4 {
                for e in 0..=4 {
                    let twice = f.delta_op(i, e).delta_op(i, d);
                    let ok = if d == e {
                        twice.same_function(&f.delta_op(i, d))
                    } else {
                        twice.is_zero()
                    };
                    ensure(ok, || format!("delta_{}^{} delta_{}^{} on {}", i, d, i, e, s))?;
                }
            }
            for e in 0..=3 {
                let g = f.mul_monomial(&compposets::polyfrac::Monomial::var_pow(i, e));
                let back = g.divide_by_monomial_exact(i, e).map_err(|e| e.to_string())?;
                ensure(back.same_function(&f), || format!("divide by x{}^{} on {}", i, e, s))?;
            }
        }
    }
    let f = parse_rational("x1/(1-x1-x2)").map_err(|e| e.to_string())?;
    let g = parse_rational("x2^2/(1-x2)").map_err(|e| e.to_string())?;
    ensure(f.add(&g).taylor(8) == &f.taylor(8) + &g.taylor(8), || "sum does not commute with taylor".into())?;
    ensure(f.mul(&g).taylor(8) == f.taylor(8).mul_trunc(&g.taylor(8), 8), || {
        "product does not commute with taylor".into()
    })?;
    Ok("delta, exact division, taylor".into())
}

fn oracle_check(a: Alphabet, alpha: &Composition, k: usize, n: u32) -> Result<(), String> {
    let series = f_width(a, alpha, k).map_err(|e| e.to_string())?.taylor(n);
    compare_with_chains(a, alpha, k, &series, n)
}

fn compare_with_chains(a: Alphabet, alpha: &Composition, k: usize, series: &MultiPoly, n: u32) -> Result<(), String> {
    let counts = chain_counts(a, alpha, n as usize, k);
    for (m, c) in series.terms() {
        let valid = m.nvars() == k && m.exps().iter().all(|&e| e > 0);
        ensure(valid, || format!("{} {} k={}: stray monomial {}", a, alpha, k, m))?;
        let gamma = comp(&m.exps().iter().map(|&e| e as usize).collect::<Vec<_>>());
        let want = counts.get(&gamma).cloned().unwrap_or_default();
        ensure(*c == Rat::from_integer(want.clone().into()), || {
            format!("{} {} k={}: coefficient of {} is {}, {} chains", a, alpha, k, m, c, want)
        })?;
    }
    for (gamma, c) in &counts {
        if gamma.width() == k {
            let got = series.coeff(&weight_monomial(gamma));
            ensure(got == Rat::from_integer(c.clone().into()), || {
                format!("{} {} k={}: {} chains to {}, coefficient {}", a, alpha, k, c, gamma, got)
            })?;
        }
    }
    Ok(())
}

fn genfun_oracle(_: &Bounds) -> Check {
    for a in [Alphabet::N, Alphabet::Bbd, Alphabet::S(3), Alphabet::S(4)] {
        for alpha in ORACLE_ALPHAS {
            for k in 0..=4 {
                oracle_check(a, &comp(alpha), k, 8)?;
            }
        }
    }
    Ok("N, BBD, S:3, S:4; k <= 4; degree 8".into())
}

fn genfun_structure(_: &Bounds) -> Check {
    for a in [Alphabet::Bbd, Alphabet::S(3)] {
        for alpha in ORACLE_ALPHAS {
            for k in alpha.len().max(1)..=4 {
                let p = denominator_profile(a, &comp(alpha), k).map_err(|e| e.to_string())?;
                ensure(p.full_set_exponent() == 1, || {
                    format!("{} {:?} k={}: e({{1..k}}) = {}", a, alpha, k, p.full_set_exponent())
                })?;
            }
        }
    }
    for alpha in ORACLE_ALPHAS.iter().filter(|a| !a.is_empty()) {
        for k in alpha.len()..=4 {
            let a = comp(alpha);
            let s = l_width_specialized(Alphabet::N, &a, k).map_err(|e| e.to_string())?;
            let r = l_width_recurrence(&a, k).map_err(|e| e.to_string())?;
            ensure(s.same_function(&r), || format!("{:?} k={}: {} vs {}", alpha, k, s, r))?;
        }
    }
    Ok("full-set exponent, specializations".into())
}

fn dk(_: &Bounds) -> Check {
    for r in 1..=3 {
        for k in r..=10 {
            verify_d_poly(r, k).map_err(|e| e.to_string())?;
        }
    }
    let rep = asymptotic_check(&comp(&[2, 3]), 5, 40).map_err(|e| e.to_string())?;
    let err = rep.error_at(40).unwrap_or(f64::INFINITY);
    ensure(err.abs() < 0.05, || format!("a_40,5 relative error {}", err))?;
    Ok(format!("r <= 3, k <= 10; asymptotic error {:.4}", err))
}

fn kappa(_: &Bounds) -> Check {
    for k in 1..=3 {
        let p = shadow_series(Alphabet::N, &Composition::empty(), k, 7).map_err(|e| e.to_string())?;
        let raw = f_width(Alphabet::N, &Composition::empty(), k).map_err(|e| e.to_string())?.taylor(7);
        ensure(kappa_op(&p) == p, || format!("kappa not idempotent for k={}", k))?;
        ensure(coefficient_sum(&p) == coefficient_sum(&raw), || format!("kappa changes the sum for k={}", k))?;
    }
    Ok("k <= 3".into())
}

fn qsym(b: &Bounds) -> Check {
    for n in 0..=5 {
        for a in Composition::all_of_weight(n) {
            ensure(verify_product_rule(&a, n + 2).map_err(|e| e.to_string())?, || {
                format!("product rule fails for {}", a)
            })?;
            for m in 1..=b.qsym_vars {
                let f = fundamental(&a, m).map_err(|e| e.to_string())?;
                ensure(f.is_quasi_symmetric(), || format!("L_{} in {} variables", a, m))?;
            }
        }
    }
    for n in 1..=4 {
        let r = fundamental_rank(n, n).map_err(|e| e.to_string())?;
        ensure(r == 1 << (n - 1), || format!("rank {} for n = {}", r, n))?;
    }
    Ok(format!("weight <= 5, up to {} variables", b.qsym_vars))
}

fn ncgen(_: &Bounds) -> Check {
    let target: BTreeSet<Word> = ["U2 L L", "L U1 L"].iter().map(|w| w.parse().unwrap()).collect();
    let f2 = labeled_oracle(Alphabet::N, &Composition::empty(), Some(2), 3);
    let found = f2.words_with_monomial(&compposets::polyfrac::Monomial::new(vec![1, 2]));
    ensure(found == target, || format!("x1*x2^2 in F_2 of (): {:?}", found))?;
    for alpha in [&[1][..], &[2], &[1, 1], &[2, 3]] {
        let a = comp(alpha);
        for k in a.width()..=4 {
            let oracle = labeled_oracle(Alphabet::N, &a, Some(k), 7);
            ensure(oracle.is_single_monomial(), || format!("{} k={}: coefficient is not a monomial", a, k))?;
            let rec = f_recurrence(Alphabet::N, &a, k, 7).map_err(|e| e.to_string())?;
            oracle.check_against(&rec).map_err(|e| format!("recurrence {} k={}: {}", a, k, e))?;
            let g = build_automaton_n(&a, k).map_err(|e| e.to_string())?;
            oracle
                .check_against(&g.path_series(7))
                .map_err(|e| format!("automaton {} k={}: {}", a, k, e))?;
            let words: BTreeSet<Word> = oracle.words().cloned().collect();
            let lang = regex_language(a.width(), k, a.is_all_ones(), 7).map_err(|e| e.to_string())?;
            ensure(lang == words, || format!("regular language {} k={}", a, k))?;
            let f: FactoredRational = f_width(Alphabet::N, &a, k).map_err(|e| e.to_string())?;
            let deg = (a.weight() + 7) as u32;
            ensure(oracle.collapse_letters() == f.taylor(deg), || format!("letter collapse {} k={}", a, k))?;
            ensure(oracle.collapse_weights().values().all(|&c| c == 1), || {
                format!("weight collapse {} k={}", a, k)
            })?;
        }
    }
    for alpha in [&[1][..], &[2], &[1, 1]] {
        let a = comp(alpha);
        for k in 0..=3 {
            let oracle = labeled_oracle(Alphabet::Bbd, &a, Some(k), 7);
            let rec = f_recurrence(Alphabet::Bbd, &a, k, 7).map_err(|e| e.to_string())?;
            oracle.check_against(&rec).map_err(|e| format!("BBD {} k={}: {}", a, k, e))?;
        }
    }
    Ok("N: recurrence, automaton, language; BBD: recurrence; length <= 7".into())
}

fn roots(b: &Bounds) -> Check {
    let rows = dk_roots(2, b.dk_roots_max).map_err(|e| match e {
        Failure::Usage(m) | Failure::Verification(m) => m,
    })?;
    for k in 2..=b.dk_roots_max {
        let n = rows.iter().filter(|r| r.k == k).count();
        ensure(n == k - 1, || format!("{} roots for k = {}", n, k))?;
    }
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    ensure(worst < 1e-8, || format!("residual {:e}", worst))?;
    Ok(format!("k <= {}, worst residual {:e}", b.dk_roots_max, worst))
}

type Suite = (&'static str, fn(&Bounds) -> Check);

const SUITES: [Suite; 12] = [
    ("composition", compositions),
    ("operators", operators),
    ("poset", posets),
    ("multiranking", multiranking),
    ("polyfrac", polyfrac),
    ("genfun-oracle", genfun_oracle),
    ("genfun-structure", genfun_structure),
    ("dk", dk),
    ("kappa", kappa),
    ("qsym", qsym),
    ("ncgen", ncgen),
    ("dk-roots", roots),
];

pub fn run(out: &mut dyn std::io::Write, quick: bool, json: bool) -> Result<(), Failure> {
    let bounds = if quick { &QUICK } else { &FULL };
    let mut results = Vec::new();
    for (name, suite) in SUITES {
        let start = Instant::now();
        let outcome = suite(bounds);
        let r = SuiteResult {
            suite: name.to_string(),
            passed: outcome.is_ok(),
            detail: outcome.unwrap_or_else(|e| e),
            seconds: start.elapsed().as_secs_f64(),
        };
        if !json {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{}\t{}\t{:.2}s\t{}", tag, r.suite, r.seconds, r.detail)?;
        }
        results.push(r);
    }
    if json {
        serde_json::to_writer_pretty(&mut *out, &results)?;
        writeln!(out)?;
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(if json {
            String::new()
        } else {
            format!("failed: {}", failed.join(", "))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_suites_pass() {
        for f in [compositions, polyfrac, kappa, dk] {
            f(&QUICK).unwrap();
        }
    }

    #[test]
    fn oracle_check_catches_wrong_poset() {
        let alpha = comp(&[1, 1]);
        assert!(oracle_check(Alphabet::N, &alpha, 3, 7).is_ok());
        let bbd = f_width(Alphabet::Bbd, &alpha, 3).unwrap().taylor(7);
        assert!(compare_with_chains(Alphabet::N, &alpha, 3, &bbd, 7).is_err());
    }
}
