use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use compposets::genfun::{
    a_nk, d_poly, d_poly_scaled_roots, denominator_profile, f_width, l_width, shadow_series, DenominatorProfile,
};
use compposets::ncgen::{
    build_automaton_n, export_dot, f_recurrence_with, labeled_oracle, regex_language, NCTerm, SubtractionTerm,
    WeightedDigraph,
};
use compposets::polyfrac::{FactoredJson, MultiPoly, RootOptions, UniPoly};
use compposets::poset::{
    chain_to_tableau, count_chains, covers, enumerate_chains, hasse_dot, shadow, shadow_multiplicity, Chain,
};
use compposets::qsym::{default_vars, product_rule, ProductRuleCheck};
use compposets::{Alphabet, Composition, Error, Word};

use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "compposets", version, about = "Saturated chains in posets of integer compositions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn parse_poset(s: &str) -> Result<Alphabet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_comp(s: &str) -> Result<Composition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Covers of a composition, one `label<TAB>composition` line each.
    Covers {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, allow_hyphen_values = true)]
        comp: Composition,
        #[arg(long)]
        json: bool,
    },
    /// Hasse diagram up to a weight, in DOT.
    Hasse {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        /// Largest weight.
        #[arg(short = 'n', default_value_t = 4)]
        n: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Saturated chains of length `n` from a composition.
    Chains {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "()")]
        from: Composition,
        #[arg(short = 'n')]
        n: usize,
        /// Keep chains ending at width `k`.
        #[arg(short = 'k')]
        k: Option<usize>,
        /// Also print the tableau of each chain.
        #[arg(long)]
        tableaux: bool,
        #[arg(long)]
        json: bool,
    },
    /// Number of saturated chains between two compositions.
    Count {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "()")]
        from: Composition,
        #[arg(long, value_parser = parse_comp)]
        to: Composition,
        #[arg(long)]
        json: bool,
    },
    /// The generating function f_k^α in factored form.
    Genfun {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "()")]
        alpha: Composition,
        #[arg(short = 'k')]
        k: usize,
        /// Print the denominator exponents e(S) (BBD and S:<d>).
        #[arg(long)]
        profile: bool,
        /// For S:inf, the largest d of the table of f_k[S:d].
        #[arg(long, default_value_t = 5)]
        d_max: usize,
        #[arg(long)]
        json: bool,
    },
    /// The specialization L_k^α(t), optionally with its first coefficients.
    Lk {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "1")]
        alpha: Composition,
        #[arg(short = 'k')]
        k: usize,
        /// Print a_{j,k} for j <= n.
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// The numerator polynomial D_k for all-ones α.
    Dk {
        #[arg(long, value_parser = parse_comp, default_value = "1")]
        alpha: Composition,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Roots of D_k^{(1)}(x/k) as CSV `k,re,im,residual`.
    DkRoots {
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 45)]
        k_max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// The shadow of a chain and its multiplicity, or a truncated shadow series.
    Shadow {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        /// Start of the chain, or α for the series.
        #[arg(long, value_parser = parse_comp, default_value = "()")]
        from: Composition,
        /// Labels of the chain, last step first.
        #[arg(long, value_parser = parse_word)]
        word: Option<Word>,
        #[arg(short = 'k')]
        k: Option<usize>,
        /// Total degree of the series truncation.
        #[arg(short = 'n', default_value_t = 6)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Checks L_1 L_α = Σ L_β for every α up to a weight.
    QsymCheck {
        #[arg(long, default_value_t = 5)]
        max_weight: usize,
        #[arg(long)]
        json: bool,
    },
    /// Weighted digraph whose walks give F_k^α in N.
    Automaton {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "1")]
        alpha: Composition,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compares the labeled recurrence (and for N the automaton and the
    /// regular language) with labeled chain enumeration.
    Nccheck {
        #[arg(long, value_parser = parse_poset, default_value = "N")]
        poset: Alphabet,
        #[arg(long, value_parser = parse_comp, default_value = "1")]
        alpha: Composition,
        #[arg(short = 'k')]
        k: usize,
        /// Longest word.
        #[arg(short = 'n', default_value_t = 6)]
        n: usize,
        /// Subtract v(α) R L^{k-1} instead of x_1⋯x_k R L^{k-1-r}.
        #[arg(long)]
        printed_correction: bool,
        /// Print the series.
        #[arg(long)]
        terms: bool,
        #[arg(long)]
        json: bool,
    },
    /// Runs the invariant suites.
    Verify {
        /// Smaller bounds where the full suite is slow.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OracleMismatch { .. } | Error::StructureViolation(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

fn print_json<T: Serialize>(out: Out, v: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub label: String,
    pub composition: Composition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub word: String,
    pub steps: Vec<Composition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountJson {
    pub poset: Alphabet,
    pub from: Composition,
    pub to: Composition,
    pub count: String,
}

#[derive(Serialize, Deserialize)]
pub struct GenFunJson {
    pub poset: Alphabet,
    pub alpha: Composition,
    pub k: usize,
    pub display: String,
    pub function: FactoredJson<MultiPoly>,
    pub profile: Option<DenominatorProfile>,
}

#[derive(Serialize, Deserialize)]
pub struct LkJson {
    pub poset: Alphabet,
    pub alpha: Composition,
    pub k: usize,
    pub display: String,
    pub function: FactoredJson<UniPoly>,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DkJson {
    pub r: usize,
    pub k: usize,
    pub display: String,
    pub polynomial: UniPoly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub k: usize,
    pub re: String,
    pub im: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowJson {
    pub outer: Vec<usize>,
    pub inner: Vec<usize>,
    pub columns: Vec<Vec<usize>>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcCheckJson {
    pub poset: Alphabet,
    pub alpha: Composition,
    pub k: usize,
    pub n: usize,
    pub words: usize,
    pub mismatches: Vec<String>,
    pub terms: Option<Vec<NCTerm>>,
}

pub fn run(cli: Cli, out: Out) -> Result<(), Failure> {
    match cli.command {
        Command::Covers { poset, comp, json } => {
            let cs = covers(poset, &comp);
            if json {
                let rows: Vec<CoverJson> = cs
                    .into_iter()
                    .map(|(t, c)| CoverJson {
                        label: t.to_string(),
                        composition: c,
                    })
                    .collect();
                print_json(out, &rows)
            } else {
                for (t, c) in cs {
                    writeln!(out, "{}\t{}", t, c)?;
                }
                Ok(())
            }
        }
        Command::Hasse { poset, n, dot } => write_or_print(out, dot, &hasse_dot(poset, n)),
        Command::Chains {
            poset,
            from,
            n,
            k,
            tableaux,
            json,
        } => {
            let chains: Vec<Chain> = enumerate_chains(poset, &from, n, k).collect();
            if json {
                let rows: Vec<ChainJson> = chains
                    .into_iter()
                    .map(|c| ChainJson {
                        word: c.word().to_string(),
                        steps: c.steps,
                    })
                    .collect();
                return print_json(out, &rows);
            }
            for c in &chains {
                writeln!(out, "{}\t{}", c.word(), c.end())?;
                if tableaux {
                    writeln!(out, "{}", chain_to_tableau(c)?)?;
                }
            }
            Ok(())
        }
        Command::Count { poset, from, to, json } => {
            let count = count_chains(poset, &from, &to).to_string();
            if json {
                print_json(out, &CountJson { poset, from, to, count })
            } else {
                writeln!(out, "{}", count)?;
                Ok(())
            }
        }
        Command::Genfun {
            poset,
            alpha,
            k,
            profile,
            d_max,
            json,
        } => genfun(out, poset, &alpha, k, profile, d_max, json),
        Command::Lk {
            poset,
            alpha,
            k,
            n,
            json,
        } => {
            let l = l_width(poset, &alpha, k)?;
            let coefficients: Vec<String> = match n {
                Some(n) => (0..=n)
                    .map(|j| a_nk(poset, &alpha, k, j).map(|c| c.to_string()))
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            if json {
                return print_json(
                    out,
                    &LkJson {
                        poset,
                        alpha,
                        k,
                        display: l.to_string(),
                        function: l.into(),
                        coefficients,
                    },
                );
            }
            writeln!(out, "{}", l)?;
            if !coefficients.is_empty() {
                writeln!(out, "{}", coefficients.join(","))?;
            }
            Ok(())
        }
        Command::Dk { alpha, k, json } => {
            if !alpha.is_all_ones() || alpha.is_empty() {
                return Err(Failure::Usage(format!("D_k needs a nonempty all-ones alpha, got {}", alpha)));
            }
            let d = d_poly(alpha.width(), k)?;
            if json {
                print_json(
                    out,
                    &DkJson {
                        r: alpha.width(),
                        k,
                        display: d.to_string(),
                        polynomial: d,
                    },
                )
            } else {
                writeln!(out, "{}", d)?;
                Ok(())
            }
        }
        Command::DkRoots { k_min, k_max, csv, json } => {
            if k_min < 2 || k_max < k_min {
                return Err(Failure::Usage(format!("need 2 <= k-min <= k-max, got {}..{}", k_min, k_max)));
            }
            let rows = dk_roots(k_min, k_max)?;
            if json {
                return print_json(out, &rows);
            }
            let mut text = String::from("k,re,im,residual\n");
            for r in &rows {
                let _ = writeln!(text, "{},{},{},{:e}", r.k, r.re, r.im, r.residual);
            }
            write_or_print(out, csv, &text)
        }
        Command::Shadow {
            poset,
            from,
            word,
            k,
            n,
            json,
        } => match (word, k) {
            (Some(w), _) => {
                let chain = Chain::from_word(poset, &from, &w)?;
                let s = shadow(&chain)?;
                let multiplicity = shadow_multiplicity(poset, &s);
                if json {
                    return print_json(
                        out,
                        &ShadowJson {
                            outer: s.outer.parts().to_vec(),
                            inner: s.inner.parts().to_vec(),
                            columns: s.columns.clone(),
                            multiplicity,
                        },
                    );
                }
                writeln!(out, "shape\t{}/{}", s.outer, s.inner)?;
                writeln!(out, "{}", s)?;
                writeln!(out, "multiplicity\t{}", multiplicity)?;
                Ok(())
            }
            (None, Some(k)) => {
                let p = shadow_series(poset, &from, k, n)?;
                if json {
                    print_json(out, &p)
                } else {
                    writeln!(out, "{}", p)?;
                    Ok(())
                }
            }
            (None, None) => Err(Failure::Usage("shadow needs --word or -k".into())),
        },
        Command::QsymCheck { max_weight, json } => {
            let mut checks: Vec<ProductRuleCheck> = Vec::new();
            for n in 0..=max_weight {
                for a in Composition::all_of_weight(n) {
                    let m = default_vars(&a);
                    checks.push(product_rule(&a, m)?);
                }
            }
            if json {
                print_json(out, &checks)?;
            } else {
                for c in &checks {
                    writeln!(out, "{}\t{}", c.alpha, if c.holds { "pass" } else { "FAIL" })?;
                }
            }
            match checks.iter().find(|c| !c.holds) {
                Some(_) if json => Err(Failure::Verification(String::new())),
                Some(c) => Err(Failure::Verification(format!("product rule fails for {}", c.alpha))),
                None => Ok(()),
            }
        }
        Command::Automaton {
            poset,
            alpha,
            k,
            dot,
            json,
        } => {
            if poset != Alphabet::N {
                return Err(Failure::Usage(format!("automata are built for N only, not {}", poset)));
            }
            let g = build_automaton_n(&alpha, k)?;
            if json {
                return print_json(out, &g);
            }
            match dot {
                Some(path) => {
                    std::fs::write(&path, export_dot(&g))?;
                    writeln!(out, "states\t{}\nedges\t{}", g.states, g.edges.len())?;
                    Ok(())
                }
                None => {
                    write!(out, "{}", export_dot(&g))?;
                    Ok(())
                }
            }
        }
        Command::Nccheck {
            poset,
            alpha,
            k,
            n,
            printed_correction,
            terms,
            json,
        } => nccheck(out, poset, &alpha, k, n, printed_correction, terms, json),
        Command::Verify { quick, json } => verify::run(out, quick, json),
    }
}

fn write_or_print(out: Out, path: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => write!(out, "{}", text)?,
    }
    Ok(())
}

fn genfun(out: Out, poset: Alphabet, alpha: &Composition, k: usize, profile: bool, d_max: usize, json: bool) -> Result<(), Failure> {
    if poset == Alphabet::SInf {
        // no rational form; show f_k[S:d] for growing d
        if d_max < 2 {
            return Err(Failure::Usage("--d-max must be at least 2".into()));
        }
        for d in 2..=d_max {
            let f = f_width(Alphabet::S(d), alpha, k)?;
            writeln!(out, "S:{}\t{}", d, f)?;
            if profile {
                write!(out, "{}", denominator_profile(Alphabet::S(d), alpha, k)?)?;
            }
        }
        return Ok(());
    }
    let f = f_width(poset, alpha, k)?;
    let prof = if profile {
        Some(denominator_profile(poset, alpha, k)?)
    } else {
        None
    };
    if json {
        return print_json(
            out,
            &GenFunJson {
                poset,
                alpha: alpha.clone(),
                k,
                display: f.to_string(),
                function: f.into(),
                profile: prof,
            },
        );
    }
    writeln!(out, "{}", f)?;
    if let Some(p) = prof {
        write!(out, "{}", p)?;
    }
    Ok(())
}

pub fn dk_roots(k_min: usize, k_max: usize) -> Result<Vec<RootRow>, Failure> {
    let opts = RootOptions::default();
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        for z in d_poly_scaled_roots(1, k, &opts)? {
            rows.push(RootRow {
                k,
                re: z.re_text,
                im: z.im_text,
                residual: z.residual,
            });
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn nccheck(
    out: Out,
    poset: Alphabet,
    alpha: &Composition,
    k: usize,
    n: usize,
    printed: bool,
    show_terms: bool,
    json: bool,
) -> Result<(), Failure> {
    let correction = if printed {
        SubtractionTerm::Printed
    } else {
        SubtractionTerm::Resolved
    };
    let oracle = labeled_oracle(poset, alpha, Some(k), n);
    let rec = f_recurrence_with(poset, alpha, k, n, correction)?;
    let mut mismatches = Vec::new();
    if let Some(e) = oracle.first_mismatch(&rec) {
        mismatches.push(format!("recurrence: {}", e));
    }
    if poset == Alphabet::N && k >= alpha.width() {
        let g: WeightedDigraph = build_automaton_n(alpha, k)?;
        if let Some(e) = oracle.first_mismatch(&g.path_series(n)) {
            mismatches.push(format!("automaton: {}", e));
        }
        if !alpha.is_empty() {
            let lang = regex_language(alpha.width(), k, alpha.is_all_ones(), n)?;
            let words: std::collections::BTreeSet<Word> = oracle.words().cloned().collect();
            if let Some(w) = lang.symmetric_difference(&words).next() {
                let side = if words.contains(w) { "missing from" } else { "extra in" };
                mismatches.push(format!("regular language: word `{}` {} the language", w, side));
            }
        }
    }
    if json {
        print_json(
            out,
            &NcCheckJson {
                poset,
                alpha: alpha.clone(),
                k,
                n,
                words: oracle.len(),
                mismatches: mismatches.clone(),
                terms: show_terms.then(|| rec.terms_json()),
            },
        )?;
    } else if show_terms {
        write!(out, "{}", rec)?;
    }
    match (mismatches.is_empty(), json) {
        (true, false) => {
            writeln!(out, "agree")?;
            Ok(())
        }
        (true, true) => Ok(()),
        (false, true) => Err(Failure::Verification(String::new())),
        (false, false) => Err(Failure::Verification(mismatches.join("\n"))),
    }
}
