mod output;

use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fkradial::counting::{self, CountTable};
use fkradial::freegroup::{format_word, parse_word, word_count};
use fkradial::freeproduct::{self, parse_fp_word, CaseTag, FPConfig};
use fkradial::radial::{self, deviation_bound, Sandwich};
use fkradial::verify::{self, SuiteLimits};
use fkradial::{AlgebraElement, Rational, ReducedWord, DEFAULT_CAP};
use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

use output::{decimal, sqrt_decimal, Cell, Format, OutputTable};

#[derive(Parser)]
#[command(name = "fkradial", version, about = "Exact radial computations in free groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: FormatArg,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Read and write words with letters a, b, c, ... for g1, g2, g3, ...
    #[arg(long, global = true)]
    letters: bool,
    /// Append decimal approximations with this many places.
    #[arg(long, value_name = "P", global = true)]
    decimals: Option<usize>,
    /// Largest number of words or support terms any step may materialize.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_CAP, global = true)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// alpha_n, beta_n, gamma_n for n = 2..=N.
    Counts(RankN),
    /// Exact relations among the boundary counts.
    Identities(RankN),
    /// Radial projection of x w_n y, or of an element read from a file.
    Expect(ExpectArgs),
    /// Squared deviation of E(x w_n y) from E(x) E(y) w_n against its bound.
    Deviation(PairArgs),
    /// Partial sums of squared deviations scaled by |w_n|^-2.
    Series(PairArgs),
    /// Free products of abelian groups.
    #[command(subcommand)]
    Freeproduct(FpCommand),
    /// Run the cross-check suite; exit 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RankN {
    #[arg(long)]
    k: u32,
    #[arg(long = "n-max")]
    n_max: usize,
}

#[derive(Args)]
struct ExpectArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, requires_all = ["y", "n"], conflicts_with = "input")]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Element in text form, one `<rational> <word>` per line.
    #[arg(long, required_unless_present = "x")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long = "n-max")]
    n_max: usize,
}

#[derive(Subcommand)]
enum FpCommand {
    /// |chi_n| and |E(x w_n y)|^2 against their bounds.
    Chi(FpArgs),
    /// Members of chi_n with their cancellation pattern.
    Cases(FpCaseArgs),
}

#[derive(Args)]
struct FpArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long = "n-max")]
    n_max: usize,
}

#[derive(Args)]
struct FpCaseArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long = "n-max", default_value_t = 8)]
    n_max: usize,
    /// Added to the alpha self-coefficient of the recurrence (negative control).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    perturb_alpha: i64,
}

/// Result of a command: the table, plus whether it records a failed check.
struct Outcome {
    table: OutputTable,
    failed: bool,
}

impl Outcome {
    fn ok(table: OutputTable) -> Self {
        Outcome { table, failed: false }
    }
}

fn q(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

fn word(text: &str, k: u32, g: &Global) -> Result<ReducedWord> {
    parse_word(text, k, g.letters).with_context(|| format!("bad word {text:?}"))
}

/// Column names with `_dec` companions for the listed rational columns.
fn columns(base: &[&str], dec: &[&str], g: &Global) -> Vec<String> {
    let mut cols: Vec<String> = base.iter().map(|s| s.to_string()).collect();
    if g.decimals.is_some() {
        cols.extend(dec.iter().map(|s| s.to_string()));
    }
    cols
}

fn cmd_counts(a: &RankN, g: &Global) -> Result<Outcome> {
    let table = CountTable::new(a.k, a.n_max.max(2))?;
    let c_k = counting::constant_c(a.k);
    let mut out = OutputTable::new(columns(
        &["n", "alpha", "beta", "gamma", "total_check", "drift_alpha", "within_C"],
        &["drift_alpha_dec"],
        g,
    ));
    for (n, al, be, ga) in table.iter().filter(|(n, ..)| *n <= a.n_max) {
        let drift = counting::alpha_drift(a.k, n, al);
        let within = [al, be, ga]
            .iter()
            .all(|v| counting::alpha_drift(a.k, n, v).abs() <= c_k);
        let mut row: Vec<Cell> = vec![
            n.into(),
            al.into(),
            be.into(),
            ga.into(),
            counting::total_check(a.k, al, be, ga).into(),
            (&drift).into(),
            within.into(),
        ];
        if let Some(p) = g.decimals {
            row.push(decimal(&drift, p).into());
        }
        out.push(row);
    }
    Ok(Outcome::ok(out))
}

fn cmd_identities(a: &RankN, g: &Global) -> Result<Outcome> {
    let table = CountTable::new(a.k, a.n_max.max(2))?;
    let base = BigInt::from(2 * a.k - 1);
    let mut out = OutputTable::new(columns(
        &[
            "n",
            "beta_minus_gamma",
            "alpha_minus_gamma",
            "level_total",
            "scaled_alpha_gap",
            "ok",
        ],
        &[],
        g,
    ));
    let mut failed = false;
    for (n, al, be, ga) in table.iter().filter(|(n, ..)| *n <= a.n_max) {
        let bg = be - ga;
        let ag = al - ga;
        let total = counting::total_check(a.k, al, be, ga);
        let gap = counting::scaled_alpha_gap(a.k, n, al);
        let parity = BigInt::from(if n % 2 == 0 { 1 } else { 0 });
        let ok =
            bg == BigInt::from(1) && ag == parity && total == Pow::pow(&base, (n - 1) as u32) && gap <= BigInt::from(3);
        failed |= !ok;
        out.push(vec![
            n.into(),
            bg.into(),
            ag.into(),
            total.into(),
            gap.into(),
            ok.into(),
        ]);
    }
    Ok(Outcome { table: out, failed })
}

fn cmd_expect(a: &ExpectArgs, g: &Global) -> Result<Outcome> {
    let value = if let Some(path) = &a.input {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let el = AlgebraElement::<Rational>::parse_text(&text, a.k, g.letters)?;
        radial::expect(&el)
    } else {
        let (x, y) = (
            word(a.x.as_deref().unwrap_or_default(), a.k, g)?,
            word(a.y.as_deref().unwrap_or_default(), a.k, g)?,
        );
        let n = a.n.context("--n is required with --x")?;
        Sandwich::new(a.k, n, g.cap)?.expect::<Rational>(&x, &y, n)?.0
    };
    let mut out = OutputTable::new(columns(&["degree", "coeff"], &["coeff_dec"], g));
    for (d, c) in value.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut row: Vec<Cell> = vec![d.into(), c.into()];
        if let Some(p) = g.decimals {
            row.push(decimal(c, p).into());
        }
        out.push(row);
    }
    Ok(Outcome::ok(out))
}

fn cmd_deviation(a: &PairArgs, g: &Global) -> Result<Outcome> {
    let (x, y) = (word(&a.x, a.k, g)?, word(&a.y, a.k, g)?);
    let sw = Sandwich::new(a.k, a.n_max, g.cap)?;
    let h2 = deviation_bound(x.len(), y.len(), a.k);
    let mut out = OutputTable::new(columns(
        &["n", "delta_sq", "delta_sq_times_norm_sq", "bound_H_sq", "ok"],
        &["delta_dec", "delta_times_norm_dec", "bound_H_dec"],
        g,
    ));
    let mut failed = false;
    for n in 0..=a.n_max {
        let (d, _) = sw.deviation::<Rational>(&x, &y, n)?;
        let scaled = &d * q(&word_count(a.k, n));
        let ok = scaled <= h2;
        failed |= !ok;
        let mut row: Vec<Cell> = vec![n.into(), (&d).into(), (&scaled).into(), (&h2).into(), ok.into()];
        if let Some(p) = g.decimals {
            row.push(sqrt_decimal(&d, p).into());
            row.push(sqrt_decimal(&scaled, p).into());
            row.push(sqrt_decimal(&h2, p).into());
        }
        out.push(row);
    }
    Ok(Outcome { table: out, failed })
}

fn cmd_series(a: &PairArgs, g: &Global) -> Result<Outcome> {
    let (x, y) = (word(&a.x, a.k, g)?, word(&a.y, a.k, g)?);
    let rows = Sandwich::new(a.k, a.n_max, g.cap)?.series::<Rational>(&x, &y, a.n_max)?;
    let mut out = OutputTable::new(columns(
        &["n", "term", "partial_sum"],
        &["term_dec", "partial_sum_dec"],
        g,
    ));
    for r in rows {
        let mut row: Vec<Cell> = vec![r.n.into(), (&r.term).into(), (&r.partial_sum).into()];
        if let Some(p) = g.decimals {
            row.push(decimal(&r.term, p).into());
            row.push(decimal(&r.partial_sum, p).into());
        }
        out.push(row);
    }
    Ok(Outcome::ok(out))
}

fn fp_inputs(config: &Path, x: &str, y: &str) -> Result<(FPConfig, freeproduct::FPWord, freeproduct::FPWord)> {
    let cfg = FPConfig::load(config)?;
    let fx = parse_fp_word(x, &cfg.factors).with_context(|| format!("bad free-product word {x:?}"))?;
    let fy = parse_fp_word(y, &cfg.factors).with_context(|| format!("bad free-product word {y:?}"))?;
    if cfg.is_in_fk(&fx).is_some() && cfg.is_in_fk(&fy).is_some() {
        bail!("x and y both lie in the embedded free group; use the expect command instead");
    }
    Ok((cfg, fx, fy))
}

fn cmd_fp_chi(a: &FpArgs, g: &Global) -> Result<Outcome> {
    let (cfg, x, y) = fp_inputs(&a.config, &a.x, &a.y)?;
    let mut out = OutputTable::new(columns(
        &["n", "chi_size", "bound", "ok", "norm_sq_num", "norm_sq_den"],
        &["norm_dec"],
        g,
    ));
    let mut failed = false;
    for n in 0..=a.n_max {
        let (e, size) = freeproduct::expect_fp::<Rational>(&x, &y, n, &cfg, g.cap)?;
        let bound = freeproduct::chi_bound(n);
        let norm = e.norm_sq();
        let chi = q(&BigInt::from(size));
        let ok = BigInt::from(size) <= bound && norm <= &chi * &chi;
        failed |= !ok;
        let mut row: Vec<Cell> = vec![
            n.into(),
            size.into(),
            bound.into(),
            ok.into(),
            norm.numer().into(),
            norm.denom().into(),
        ];
        if let Some(p) = g.decimals {
            row.push(sqrt_decimal(&norm, p).into());
        }
        out.push(row);
    }
    Ok(Outcome { table: out, failed })
}

fn cmd_fp_cases(a: &FpCaseArgs, g: &Global) -> Result<Outcome> {
    let (cfg, x, y) = fp_inputs(&a.config, &a.x, &a.y)?;
    let mut out = OutputTable::new(["u", "product", "case", "p"]);
    for m in freeproduct::chi_n(&x, &y, a.n, &cfg, g.cap)? {
        let c = freeproduct::case_classify(&m.u, &x, &y, &cfg)?;
        let tag = match c.case {
            CaseTag::FullCancellation => "1",
            CaseTag::Survivor => "2",
        };
        out.push(vec![
            format_word(&m.u, g.letters).into(),
            format_word(&m.product, g.letters).into(),
            tag.into(),
            c.p.into(),
        ]);
    }
    Ok(Outcome::ok(out))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let limits = SuiteLimits {
        ranks: vec![a.k],
        n_max: a.n_max,
        alpha_coefficient_shift: a.perturb_alpha,
        ..Default::default()
    };
    // rank validation up front so bad input exits 2 rather than 1
    CountTable::new(a.k, 2)?;
    let reports = verify::run_suite(&limits)?;
    let mut out = OutputTable::new(["check", "params", "expected", "actual", "pass", "detail"]);
    for r in &reports {
        out.push(vec![
            r.check.as_str().into(),
            r.params.as_str().into(),
            r.expected.as_str().into(),
            r.actual.as_str().into(),
            r.pass.into(),
            r.detail.as_str().into(),
        ]);
    }
    Ok(Outcome {
        table: out,
        failed: !verify::all_pass(&reports),
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Counts(a) => cmd_counts(a, g),
        Command::Identities(a) => cmd_identities(a, g),
        Command::Expect(a) => cmd_expect(a, g),
        Command::Deviation(a) => cmd_deviation(a, g),
        Command::Series(a) => cmd_series(a, g),
        Command::Freeproduct(FpCommand::Chi(a)) => cmd_fp_chi(a, g),
        Command::Freeproduct(FpCommand::Cases(a)) => cmd_fp_cases(a, g),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.global.json {
        Format::Json
    } else {
        match cli.global.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = outcome.table.write(io::stdout().lock(), format) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
