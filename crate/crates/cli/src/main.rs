//! Command line front end for the descent engine.
//!
//! Exit status: 0 on success (even with no points found), 1 on usage
//! errors, 2 on solver errors such as adapter failures or timeouts.

mod report;

use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use descent_core::algebra::{parse_polynomial, IntegerPolynomial};
use descent_core::descent::{
    solve, solve_quartic_family, BackendChoice, CurveProblem, SolveOptions,
};
use descent_core::pell::{
    continued_fraction_sqrt, negative_pell_fundamental_with_budget, pell_fundamental_with_budget,
    solve_quartic_minus, solve_quartic_plus, QuarticVariant,
};
use descent_core::twists::{AdapterConfig, TwistCache};
use num_bigint::BigUint;
use rayon::prelude::*;
use report::{OutputFormat, TableRow};

const ADAPTER_ENV: &str = "DESCENT_ADAPTER";

#[derive(Parser)]
#[command(
    name = "descent",
    version,
    about = "Integer points on curves y^p = f(x) g(x), by descent through twist equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve y^p = f(x) g(x) for an odd prime p, with f = A x^p + B
    Super {
        /// Prime exponent, at least 3
        #[arg(long)]
        p: u32,
        /// Left factor, e.g. "[691,0,0,1]" or "x^3+691"
        #[arg(long)]
        f: String,
        /// Right factor, in the same formats
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve y^2 = f(x) g(x), with f a monic cubic or a quartic
    Hyper {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve y^2 = (x^4 - 1) g(x) or y^2 = (x^4 + 1) g(x) exactly
    Quartic {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate a family y^2 = (x^4 - 1) g_k(x) over 1 < k <= kmax
    Tables {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Upper end of the k range (defaults to the family's usual range)
        #[arg(long)]
        kmax: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Pell equations x^2 - d y^2 = +/-1 and the forms d y^2 = x^4 +/- 1
    Pell {
        #[arg(long)]
        d: String,
        /// Solve x^2 - d y^2 = -1 instead of +1
        #[arg(long, conflicts_with = "quartic")]
        negative: bool,
        /// Solve d y^2 = x^4 - 1 (minus) or d y^2 = x^4 + 1 (plus)
        #[arg(long, value_enum)]
        quartic: Option<VariantArg>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Bounded-scan half-width: |x| <= height
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    height: u64,
    /// Twist solver: auto picks exact where available, else bounded
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    /// External solver command (program plus arguments); defaults to $DESCENT_ADAPTER
    #[arg(long)]
    adapter: Option<String>,
    /// Twist result cache file
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Ceiling on decimal digits of exact intermediate numbers (min 10)
    #[arg(long, default_value_t = 100_000)]
    digit_budget: u64,
    /// Adapter timeout in seconds
    #[arg(long)]
    timeout: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    Bounded,
    Exact,
    External,
}

impl From<BackendArg> for BackendChoice {
    fn from(arg: BackendArg) -> Self {
        match arg {
            BackendArg::Auto => BackendChoice::Auto,
            BackendArg::Bounded => BackendChoice::Bounded,
            BackendArg::Exact => BackendChoice::Exact,
            BackendArg::External => BackendChoice::External,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Minus,
    Plus,
}

impl From<VariantArg> for QuarticVariant {
    fn from(arg: VariantArg) -> Self {
        match arg {
            VariantArg::Minus => QuarticVariant::Minus,
            VariantArg::Plus => QuarticVariant::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    X2kx1,
    X3kx2,
    X3kx1,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::X2kx1 => "x2kx1",
            FamilyArg::X3kx2 => "x3kx2",
            FamilyArg::X3kx1 => "x3kx1",
        }
    }

    fn equation(self) -> &'static str {
        match self {
            FamilyArg::X2kx1 => "y^2 = (x^4 - 1)(x^2 + kx + 1)",
            FamilyArg::X3kx2 => "y^2 = (x^4 - 1)(x^3 + kx^2 + 1)",
            FamilyArg::X3kx1 => "y^2 = (x^4 - 1)(x^3 + kx + 1)",
        }
    }

    fn default_kmax(self) -> u64 {
        match self {
            FamilyArg::X2kx1 => 1000,
            FamilyArg::X3kx2 => 500,
            FamilyArg::X3kx1 => 200,
        }
    }

    fn g(self, k: u64) -> IntegerPolynomial {
        let k = i64::try_from(k).expect("k fits in i64");
        match self {
            FamilyArg::X2kx1 => IntegerPolynomial::from_i64(&[1, k, 1]),
            FamilyArg::X3kx2 => IntegerPolynomial::from_i64(&[1, 0, k, 1]),
            FamilyArg::X3kx1 => IntegerPolynomial::from_i64(&[1, k, 0, 1]),
        }
    }
}

enum RunError {
    Usage(String),
    Solver(descent_core::Error),
}

impl From<descent_core::Error> for RunError {
    fn from(e: descent_core::Error) -> Self {
        RunError::Solver(e)
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(RunError::Solver(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_poly_arg(name: &str, text: &str) -> Result<IntegerPolynomial, RunError> {
    parse_polynomial(text).map_err(|e| RunError::Usage(format!("--{name}: {e}")))
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut q = 3u32;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 2;
    }
    true
}

fn build_options(
    common: &Common,
) -> Result<(SolveOptions, Option<Arc<Mutex<TwistCache>>>), RunError> {
    if common.digit_budget < 10 {
        return Err(RunError::Usage("digit budget must be at least 10".into()));
    }
    let adapter_text = common
        .adapter
        .clone()
        .or_else(|| std::env::var(ADAPTER_ENV).ok());
    let adapter = match adapter_text {
        Some(text) => {
            let parts: Vec<String> = text.split_whitespace().map(String::from).collect();
            if parts.is_empty() {
                return Err(RunError::Usage("adapter command is empty".into()));
            }
            let mut cfg = AdapterConfig::new(parts);
            if let Some(secs) = common.timeout {
                cfg.timeout = Duration::from_secs(secs);
            }
            Some(cfg)
        }
        None => None,
    };
    let cache = common.cache.as_ref().map(|path| {
        let c = TwistCache::open(path);
        if let Some(warning) = c.load_warning() {
            eprintln!(
                "warning: cache {}: {warning}; starting over",
                path.display()
            );
        }
        Arc::new(Mutex::new(c))
    });
    let opts = SolveOptions {
        height: common.height,
        backend: common.backend.into(),
        adapter,
        cache: cache.clone(),
        digit_budget: common.digit_budget,
        factor_budget: descent_core::arith::DEFAULT_FACTOR_BUDGET,
    };
    Ok((opts, cache))
}

fn flush_cache(cache: Option<Arc<Mutex<TwistCache>>>) {
    if let Some(cache) = cache {
        let mut guard = cache.lock().expect("cache lock");
        if let Err(e) = guard.flush() {
            eprintln!(
                "warning: could not write cache {}: {e}",
                guard.path().display()
            );
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Cmd::Super { p, f, g, common } => {
            if !is_odd_prime(p) {
                return Err(RunError::Usage(format!(
                    "--p {p} must be an odd prime; use hyper for p = 2"
                )));
            }
            let f = parse_poly_arg("f", &f)?;
            let g = parse_poly_arg("g", &g)?;
            let (opts, cache) = build_options(&common)?;
            let report = solve(&CurveProblem::new(p, f, g), &opts)?;
            print!("{}", report::render_report(&report, common.format));
            flush_cache(cache);
            Ok(())
        }
        Cmd::Hyper { f, g, common } => {
            let f = parse_poly_arg("f", &f)?;
            let g = parse_poly_arg("g", &g)?;
            let (opts, cache) = build_options(&common)?;
            let report = solve(&CurveProblem::new(2, f, g), &opts)?;
            print!("{}", report::render_report(&report, common.format));
            flush_cache(cache);
            Ok(())
        }
        Cmd::Quartic { variant, g, common } => {
            let g = parse_poly_arg("g", &g)?;
            let (opts, cache) = build_options(&common)?;
            let report = solve_quartic_family(&g, variant.into(), &opts)?;
            print!("{}", report::render_report(&report, common.format));
            flush_cache(cache);
            Ok(())
        }
        Cmd::Tables {
            family,
            kmax,
            common,
        } => run_tables(family, kmax, &common),
        Cmd::Pell {
            d,
            negative,
            quartic,
            common,
        } => run_pell(&d, negative, quartic, &common),
    }
}

fn table_row(family: FamilyArg, k: u64, opts: &SolveOptions) -> TableRow {
    let g = family.g(k);
    match solve_quartic_family(&g, QuarticVariant::Minus, opts) {
        Ok(report) => {
            let flag = if report.complete {
                None
            } else {
                let skipped: Vec<&str> = report
                    .notes
                    .iter()
                    .filter(|n| n.contains("skipped"))
                    .map(String::as_str)
                    .collect();
                Some(if skipped.is_empty() {
                    "incomplete".to_string()
                } else {
                    skipped.join("; ")
                })
            };
            TableRow {
                k,
                points: report::positive_points(&report),
                complete: report.complete,
                flag,
            }
        }
        Err(e) => TableRow {
            k,
            points: Vec::new(),
            complete: false,
            flag: Some(format!("failed: {e}")),
        },
    }
}

fn run_tables(family: FamilyArg, kmax: Option<u64>, common: &Common) -> Result<(), RunError> {
    let kmax = kmax.unwrap_or_else(|| family.default_kmax());
    if kmax < 2 {
        return Err(RunError::Usage("kmax must be at least 2".into()));
    }
    let (opts, cache) = build_options(common)?;
    let ks: Vec<u64> = (2..=kmax).collect();
    let mut rows: Vec<TableRow> = ks.par_iter().map(|&k| table_row(family, k, &opts)).collect();
    rows.sort_by_key(|r| r.k);
    if rows
        .iter()
        .all(|r| r.flag.as_deref().is_some_and(|f| f.starts_with("failed")))
    {
        let first = rows[0].flag.clone().unwrap_or_default();
        return Err(RunError::Solver(descent_core::Error::UnsupportedShape(
            format!("every row of the table failed; first: {first}"),
        )));
    }
    print!(
        "{}",
        report::render_table(family.name(), family.equation(), kmax, &rows, common.format)
    );
    flush_cache(cache);
    Ok(())
}

fn run_pell(
    d_text: &str,
    negative: bool,
    quartic: Option<VariantArg>,
    common: &Common,
) -> Result<(), RunError> {
    if common.digit_budget < 10 {
        return Err(RunError::Usage("digit budget must be at least 10".into()));
    }
    let d_text = d_text.trim();
    let d: BigUint = d_text
        .parse()
        .map_err(|e| RunError::Usage(format!("--d {d_text:?}: {e}")))?;
    let out = match quartic {
        Some(VariantArg::Minus) => {
            let solved = solve_quartic_minus(&d, common.digit_budget)?;
            report::render_pell_quartic(&solved, common.format)
        }
        Some(VariantArg::Plus) => {
            let solved = solve_quartic_plus(
                &d,
                common.digit_budget,
                descent_core::arith::DEFAULT_FACTOR_BUDGET,
            )?;
            report::render_pell_quartic(&solved, common.format)
        }
        None => {
            let (_, period) = continued_fraction_sqrt(&d)?;
            if negative {
                let fund = negative_pell_fundamental_with_budget(&d, common.digit_budget)?;
                report::render_pell_fundamental(
                    fund.as_ref(),
                    d_text,
                    -1,
                    period.len(),
                    common.format,
                )
            } else {
                let fund = pell_fundamental_with_budget(&d, common.digit_budget)?;
                report::render_pell_fundamental(
                    Some(&fund),
                    d_text,
                    1,
                    period.len(),
                    common.format,
                )
            }
        }
    };
    print!("{out}");
    Ok(())
}
