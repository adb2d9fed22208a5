//! Command-line definitions and the subcommand implementations.

use crate::cache::{CacheError, CacheFile, DEFAULT_SAMPLE};
use crate::expr::{parse_expression, ParseError};
use crate::selfcheck;
use clap::{Parser, Subcommand, ValueEnum};
use pshodge::moduli::{dimension, is_stable, require_pseudostable, require_stable};
use pshodge::taut::ExcessSign;
use pshodge::{format_rational, ps_hodge_integral, stable_integral, Engine, Rational, WkKey};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USER: u8 = 1;
pub const EXIT_SELFCHECK: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pshodge",
    version,
    about = "Exact Hodge integrals on stable and pseudostable moduli spaces of curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate a polynomial in lambdaJ and psiI over the chosen moduli space.
    Eval(EvalArgs),
    /// Tabulate the pseudostable integrals of (2*lambda2 - lambda1^2)*psi1^(3g-5+n).
    Series {
        /// Number of marked points (at least 1).
        #[arg(long)]
        n: u32,
        /// Largest genus, at most 6.
        #[arg(long = "g-max", value_parser = clap::value_parser!(u32).range(2..=6))]
        g_max: u32,
    },
    /// Run the built-in property suites.
    Selfcheck,
    /// Manage the persisted intersection-number table.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Stable,
    Ps,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Stable => "stable",
            Space::Ps => "ps",
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Genus.
    #[arg(long)]
    pub g: u32,
    /// Number of marked points.
    #[arg(long)]
    pub n: u32,
    /// Stable or pseudostable moduli space.
    #[arg(long, value_enum, default_value = "stable")]
    pub space: Space,
    /// Print a JSON object per result.
    #[arg(long)]
    pub json: bool,
    /// Evaluate one expression per line of this file ('#' starts a comment line).
    #[arg(long, conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    /// Worker threads for a batch file.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
    /// Load this table before evaluating and write the grown table back afterwards.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Polynomial such as "(2*lambda2 - lambda1^2)*psi1^2".
    #[arg(required_unless_present = "file")]
    pub expr: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Compute every top-degree intersection number up to the given bounds and write the table.
    Store {
        path: PathBuf,
        #[arg(long = "g-max", default_value_t = 3)]
        g_max: u32,
        #[arg(long = "n-max", default_value_t = 4)]
        n_max: u32,
    },
    /// Read a table and re-verify a sample of its entries.
    Load {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLE)]
        sample: usize,
    },
    /// Recompute entries of a table (all of them unless --sample is given).
    Verify {
        path: PathBuf,
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Moduli(#[from] pshodge::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Integral of the expression `text` over `M̄_{g,n}` or `M̄^ps_{g,n}`.
pub fn evaluate(g: u32, n: u32, space: Space, text: &str) -> Result<Rational, EvalError> {
    match space {
        Space::Stable => require_stable(g, n)?,
        Space::Ps => require_pseudostable(g, n)?,
    }
    let expr = parse_expression(text, g, n)?;
    let f = expr.to_polynomial(g, n, dimension(g, n));
    Ok(match space {
        Space::Stable => stable_integral(&f)?,
        Space::Ps => ps_hodge_integral(&f)?,
    })
}

#[derive(Debug, Serialize)]
struct EvalRecord<'a> {
    g: u32,
    n: u32,
    space: &'a str,
    expr: &'a str,
    value: String,
}

fn render(args: &EvalArgs, expr: &str, value: &Rational) -> String {
    if args.json {
        serde_json::to_string(&EvalRecord {
            g: args.g,
            n: args.n,
            space: args.space.name(),
            expr,
            value: format_rational(value),
        })
        .expect("plain record serializes")
    } else {
        format_rational(value)
    }
}

pub fn run(cli: Cli, out: &mut impl Write, err: &mut impl Write) -> u8 {
    match cli.command {
        Command::Eval(args) => eval(&args, out, err),
        Command::Series { n, g_max } => series(n, g_max, out, err),
        Command::Selfcheck => run_selfcheck(out),
        Command::Cache { action } => cache(action, out, err),
    }
}

fn load_into_global(path: &Path) -> Result<CacheFile, CacheError> {
    let file = CacheFile::load(path)?;
    file.verify(DEFAULT_SAMPLE)?;
    file.install(Engine::global());
    Ok(file)
}

fn save_global(path: &Path, loaded: &CacheFile) -> Result<(), CacheError> {
    let mut table = loaded.clone();
    table.merge(&CacheFile::from_engine(Engine::global()));
    table.store(path)
}

fn eval(args: &EvalArgs, out: &mut impl Write, err: &mut impl Write) -> u8 {
    let loaded = match &args.cache {
        Some(path) => match load_into_global(path) {
            Ok(file) => Some(file),
            Err(e) => {
                let _ = writeln!(err, "error: cache {}: {e}", path.display());
                return EXIT_USER;
            }
        },
        None => None,
    };
    let status = match &args.file {
        Some(path) => eval_batch(args, path, out, err),
        None => {
            let text = args.expr.as_deref().unwrap_or_default();
            match evaluate(args.g, args.n, args.space, text) {
                Ok(v) => {
                    let _ = writeln!(out, "{}", render(args, text, &v));
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USER
                }
            }
        }
    };
    if let (Some(path), Some(loaded)) = (&args.cache, &loaded) {
        if let Err(e) = save_global(path, loaded) {
            let _ = writeln!(err, "error: cache {}: {e}", path.display());
            return EXIT_USER;
        }
    }
    status
}

fn eval_batch(args: &EvalArgs, path: &Path, out: &mut impl Write, err: &mut impl Write) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_USER;
        }
    };
    let entries: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_USER;
        }
    };
    let results: Vec<_> = pool.install(|| {
        entries
            .par_iter()
            .map(|(_, expr)| evaluate(args.g, args.n, args.space, expr))
            .collect()
    });
    let mut failed = 0;
    for ((line, expr), result) in entries.iter().zip(results) {
        match result {
            Ok(v) if args.json => {
                let _ = writeln!(out, "{}", render(args, expr, &v));
            }
            Ok(v) => {
                let _ = writeln!(out, "{line}\t{}", format_rational(&v));
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(err, "error: line {line}: {e}");
            }
        }
    }
    if failed == 0 {
        EXIT_OK
    } else {
        let _ = writeln!(err, "{failed} of {} expressions failed", entries.len());
        EXIT_USER
    }
}

fn series(n: u32, g_max: u32, out: &mut impl Write, err: &mut impl Write) -> u8 {
    if n == 0 {
        let _ = writeln!(err, "error: the series needs n >= 1");
        return EXIT_USER;
    }
    let _ = writeln!(out, "g\tps integral\t-1/(24^g (g-1)!)\tstatus");
    let mut status = EXIT_OK;
    for g in 2..=g_max {
        let expected = selfcheck::mumford_failure_expected(g);
        match selfcheck::mumford_failure_integral(g, n) {
            Ok(v) => {
                let verdict = if v == expected { "PASS" } else { "FAIL" };
                if v != expected {
                    status = EXIT_USER;
                }
                let _ = writeln!(
                    out,
                    "{g}\t{}\t{}\t{verdict}",
                    format_rational(&v),
                    format_rational(&expected)
                );
            }
            Err(e) => {
                let _ = writeln!(err, "error: g={g}: {e}");
                status = EXIT_USER;
            }
        }
    }
    status
}

fn run_selfcheck(out: &mut impl Write) -> u8 {
    let results = selfcheck::run(ExcessSign::Standard);
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    if failed == 0 {
        let _ = writeln!(out, "selfcheck: all {} suites passed", results.len());
        EXIT_OK
    } else {
        let _ = writeln!(
            out,
            "selfcheck: {failed} of {} suites failed",
            results.len()
        );
        EXIT_SELFCHECK
    }
}

/// Non-decreasing sequences of length `n` summing to `total`.
fn sorted_exponents(n: u32, total: u32, min: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut first = min;
    while first * n <= total {
        for mut rest in sorted_exponents(n - 1, total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
        first += 1;
    }
    out
}

fn cache(action: CacheAction, out: &mut impl Write, err: &mut impl Write) -> u8 {
    let result = match action {
        CacheAction::Store { path, g_max, n_max } => {
            let engine = Engine::global();
            let mut computed = Vec::new();
            for g in 0..=g_max {
                for n in 0..=n_max {
                    if !is_stable(g, n) {
                        continue;
                    }
                    for e in sorted_exponents(n, dimension(g, n), 0) {
                        let key = WkKey::new(g, e);
                        let value = engine.wk_integral(&key);
                        computed.push((key, value));
                    }
                }
            }
            let mut table = CacheFile::from_engine(engine);
            for (key, value) in &computed {
                table.insert(key, value.clone());
            }
            table.store(&path).map(|()| {
                let _ = writeln!(out, "stored {} entries to {}", table.len(), path.display());
            })
        }
        CacheAction::Load { path, sample } => CacheFile::load(&path).and_then(|table| {
            let checked = table.verify(sample)?;
            table.install(Engine::global());
            let _ = writeln!(
                out,
                "loaded {} entries from {}; {checked} sampled entries verified",
                table.len(),
                path.display()
            );
            Ok(())
        }),
        CacheAction::Verify { path, sample } => CacheFile::load(&path).and_then(|table| {
            let checked = table.verify(sample.unwrap_or(table.len()))?;
            let _ = writeln!(out, "verified {checked} of {} entries", table.len());
            Ok(())
        }),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USER
        }
    }
}
