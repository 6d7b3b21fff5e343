use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use monotri::classify::{classify, CaseKind, GaloisClass, GaloisKind, TrinomialFamily};
use monotri::config::CONFIG_ENV;
use monotri::galois_verify::{consistency_check, element_order_spectrum, frobenius_sample, Verdict};
use monotri::report::{ClassificationRecord, Emitter, Format, Record, SampleRecord};
use monotri::scan::{
    corollary_scan, crosscheck, enumerate, exit_status, Corpus, EnumerateFilter, EnumerateGrid,
    RowStatus,
};
use monotri::{Config, Error};

const EXIT_USAGE: u8 = 1;

/// Irreducibility, monogenicity and Galois class of x^(2p) + a x^p + b^p.
#[derive(Debug, Parser)]
#[command(name = "monotri", version)]
struct Cli {
    /// Output format: table, jsonl or csv.
    #[arg(long, global = true, default_value = "table", value_parser = parse_format)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config file of `key = value` lines. Falls back to $MONOTRI_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Pollard rho iteration budget per factoring attempt.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one family (p, a, b).
    Classify(FamilyArgs),
    /// Classify every family in a grid.
    Enumerate(EnumerateArgs),
    /// Check (z^2 + 4, z, -1) for every z <= z_max with z^2 + 4 prime.
    CorollaryScan {
        #[arg(long, default_value_t = 100)]
        z_max: u64,
    },
    /// Compare the JKS criterion with Dedekind's criterion over a corpus.
    Crosscheck(CrosscheckArgs),
    /// Sample Frobenius degree patterns and test a Galois class claim.
    GaloisSample(SampleArgs),
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(short = 'p')]
    p: u64,
    #[arg(short = 'a', allow_hyphen_values = true, value_parser = parse_bigint)]
    a: BigInt,
    #[arg(short = 'b', allow_hyphen_values = true, value_parser = parse_bigint)]
    b: BigInt,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Comma-separated odd primes.
    #[arg(short = 'p', long = "primes", value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    #[arg(long, allow_hyphen_values = true)]
    a_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    a_max: i64,
    /// Comma-separated nonzero b values.
    #[arg(short = 'b', long = "b-values", value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    b_values: Vec<i64>,
    #[arg(long)]
    monogenic_only: bool,
    #[arg(long)]
    p_divides_delta: bool,
    /// Case label, e.g. Omega_b1.
    #[arg(long, value_parser = parse_case)]
    case: Option<CaseKind>,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 500)]
    instances: usize,
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    #[arg(long, default_value_t = 20)]
    coeff_bound: i64,
    /// Use the family grid (2p, p, a, ±1) instead of random trinomials.
    #[arg(long)]
    family_grid: bool,
    /// Primes for the family grid.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    grid_primes: Vec<u64>,
    #[arg(long, default_value_t = 30)]
    grid_a_max: i64,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Number of unramified primes. Defaults to the configured prime budget.
    #[arg(long)]
    primes: Option<usize>,
    /// Class to test instead of the one the family is assigned, e.g.
    /// Full_times_C2.
    #[arg(long, value_parser = parse_kind)]
    claim: Option<GaloisKind>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    s.parse().map_err(|_| format!("not an integer: {s:?}"))
}

fn parse_case(s: &str) -> Result<CaseKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<GaloisKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load_config(cli: &Cli) -> Result<Config, Error> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(path) => Config::from_file(&path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.set_seed(seed);
    }
    if let Some(budget) = cli.budget {
        cfg.factor.rho_iterations = budget;
    }
    Ok(cfg)
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit_all<R: Record>(format: Format, records: &[R]) -> io::Result<()> {
    let stdout = io::stdout();
    let mut emitter = Emitter::new::<R>(format, stdout.lock());
    for r in records {
        emitter.push(r)?;
    }
    emitter.finish()
}

fn family(args: &FamilyArgs) -> Result<TrinomialFamily, Failure> {
    Ok(TrinomialFamily::new(args.p, args.a.clone(), args.b.clone())?)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Classify(args) => {
            let fam = family(args)?;
            match classify(&fam, &cfg) {
                Ok(c) => {
                    emit_all(cli.format, &[ClassificationRecord::from(&c)])?;
                    Ok(if c.is_unknown() { 2 } else { 0 })
                }
                Err(e @ Error::Inconsistent(_)) => {
                    eprintln!("monotri: {fam}: {e}");
                    Ok(3)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Enumerate(args) => {
            let grid = EnumerateGrid {
                primes: args.primes.clone(),
                a_min: args.a_min,
                a_max: args.a_max,
                b_values: args.b_values.clone(),
                filter: EnumerateFilter {
                    monogenic_only: args.monogenic_only,
                    p_divides_delta_only: args.p_divides_delta,
                    case: args.case,
                },
            };
            let rows = enumerate(&grid, &cfg)?;
            let (mut inconsistent, mut unknown) = (false, false);
            let mut records = Vec::with_capacity(rows.len());
            for row in rows {
                match row {
                    Ok(c) => {
                        unknown |= c.is_unknown();
                        records.push(ClassificationRecord::from(&c));
                    }
                    Err(failed) => {
                        inconsistent = true;
                        eprintln!("monotri: {}: {}", failed.family, failed.error);
                    }
                }
            }
            emit_all(cli.format, &records)?;
            Ok(exit_status(inconsistent, unknown) as u8)
        }
        Command::CorollaryScan { z_max } => {
            let rows = corollary_scan(*z_max, &cfg)?;
            emit_all(cli.format, &rows)?;
            let inconsistent = rows.iter().any(|r| r.status == RowStatus::Inconsistent);
            let unknown = rows.iter().any(|r| r.status == RowStatus::Unknown);
            Ok(exit_status(inconsistent, unknown) as u8)
        }
        Command::Crosscheck(args) => {
            let corpus = if args.family_grid {
                Corpus::FamilyGrid {
                    primes: args.grid_primes.clone(),
                    a_max: args.grid_a_max,
                }
            } else {
                Corpus::Random {
                    instances: args.instances,
                    max_degree: args.max_degree,
                    coeff_bound: args.coeff_bound,
                }
            };
            let summary = crosscheck(&corpus, &cfg)?;
            emit_all(cli.format, std::slice::from_ref(&summary))?;
            Ok(exit_status(summary.disagreements > 0, summary.skipped_unknown > 0) as u8)
        }
        Command::GaloisSample(args) => {
            let fam = family(&args.family)?;
            let budget = args.primes.unwrap_or(cfg.prime_budget);
            let report = frobenius_sample(&fam, budget, &cfg)?;
            let claim = match args.claim {
                Some(kind) => GaloisClass::new(kind, fam.p()),
                None => report.claimed,
            };
            let verdict = consistency_check(&fam, &claim, &report, &cfg)?;
            let spectrum = element_order_spectrum(claim.kind, claim.p)?;
            emit_all(cli.format, &[SampleRecord::new(&report, claim, &spectrum, verdict)])?;
            let assigned_class_failed = args.claim.is_none() && verdict == Verdict::Inconsistent;
            Ok(if assigned_class_failed { 3 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("monotri: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            let _ = writeln!(io::stderr(), "monotri: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
