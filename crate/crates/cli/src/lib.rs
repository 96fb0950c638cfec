//! Command-line front end for `gammasplit`.
//!
//! Every subcommand prints text, CSV (fixed header) or a single JSON
//! document. Exit codes: 0 success, 1 usage, 2 domain error, 3 failed
//! verification, 4 resource cap or inconclusive search.

pub mod records;

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gammasplit::density::build_density_sequence;
use gammasplit::explorer::{self, ScanFormat, ScanOptions, ScanRecord, ScanRow};
use gammasplit::periodicity::{self, fibonacci_period_table, gamma_row, pisano, t_k};
use gammasplit::sequences::{
    closed_form_mod6_4, fib_cube_pair, fib_cube_solution, fib_identity_solution, fib_square_pair, fib_square_solution,
    fiblike_pair, fibonacci_pair,
};
use gammasplit::split::DEFAULT_ORACLE_CAP;
use gammasplit::{
    brute_force_split, gamma, gcd, nat, solve_split, term, term_mod, Error, Nat, Ratio, SequenceSpec, SplitSolution,
};
use serde::Serialize;

use records::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "gammasplit",
    version,
    about = "Exact tools for the split equations ax + by = (a-1)(b-1)/2 - delta"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Which equation (0 or 1) is solvable for the pair (A, B).
    Gamma { a: Nat, b: Nat },
    /// The unique nonnegative solution (delta, x, y).
    Solve {
        a: Nat,
        b: Nat,
        /// Cross-check against exhaustive enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
        oracle_cap: u64,
    },
    /// gamma(K, a_n) for n = START .. START + COUNT - 1.
    Row {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        seq: SequenceSpec,
        #[arg(long, default_value_t = 1)]
        start: u64,
        #[arg(long, default_value_t = 60)]
        count: usize,
    },
    /// Eventual period T_K of the row gamma(K, a_n).
    Period {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        seq: SequenceSpec,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Period of the Fibonacci numbers modulo M.
    Pisano { m: u64 },
    /// T_k and pi(2k) for the Fibonacci row, k = 1..KMAX.
    Table1 {
        #[arg(long, default_value_t = 10)]
        kmax: u64,
    },
    /// Greedy sequence whose gamma-zero frequency tends to P.
    Density {
        #[arg(long)]
        p: Ratio,
        #[arg(long)]
        n: u64,
    },
    /// Check a closed-form family against the general solver over LO..HI.
    Verify {
        #[arg(long, value_enum)]
        family: Family,
        /// Inclusive index range, written LO..HI.
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<u64>,
        /// First initial term for `fiblike`.
        #[arg(long, default_value_t = 1)]
        u: u64,
        /// Second initial term for `fiblike`.
        #[arg(long, default_value_t = 2)]
        v: u64,
        /// Bound on u, v for `mod6-4`.
        #[arg(long, default_value_t = 10)]
        max_uv: u64,
    },
    /// Classify i + sum(a_j x_j) = prod(a_j - 1)/2 for i = 0..n-1.
    Nvar {
        #[arg(required = true, num_args = 2..)]
        coeffs: Vec<u64>,
        #[arg(long, default_value_t = explorer::DEFAULT_RHS_CAP)]
        cap: u64,
    },
    /// Classify i + ax + by = (a - r)(b - s)/2 for i = 0, 1.
    Rs {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long, default_value_t = explorer::DEFAULT_RHS_CAP)]
        cap: u64,
    },
    /// Share of ordered coprime pairs 0 < a, b <= XMAX with exactly one
    /// solvable (r, s)-shifted equation.
    BeiterScan {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        xmax: u64,
        /// Write every pair to FILE (CSV with --format csv, JSON lines
        /// otherwise) with a checkpoint in FILE.ckpt.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue from FILE.ckpt.
        #[arg(long, requires = "out")]
        resume: bool,
        #[arg(long, default_value_t = 16)]
        shard_size: u64,
    },
    /// The N-th term of a sequence, optionally reduced modulo MOD.
    Term {
        #[arg(long)]
        seq: SequenceSpec,
        #[arg(long)]
        n: u64,
        #[arg(long = "mod")]
        modulus: Option<Nat>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// (F_n, F_{n+1}) for n = 0, 4 (mod 6), n >= 6.
    Fib,
    /// (F_n^2, F_{n+1}^2) for n = 0, 2, 3, 5 (mod 6).
    Fib2,
    /// (F_{2m-1}^3, F_{2m}^3) for m >= 2.
    Fib3,
    /// (t_n, t_{n+1}) from --u, --v for n = 4 (mod 6).
    Fiblike,
    /// Every coprime (u, v) <= --max-uv for n = 4 (mod 6).
    #[value(name = "mod6-4")]
    Mod64,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Fib => "fib",
            Family::Fib2 => "fib2",
            Family::Fib3 => "fib3",
            Family::Fiblike => "fiblike",
            Family::Mod64 => "mod6-4",
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got `{s}`"))?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: u64 = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 1,
            Error::Domain(_) => 2,
            Error::Invariant(_) => 3,
            Error::Resource(_) | Error::Inconclusive { .. } => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn verification_failed(msg: String) -> Failure {
    Failure { code: 3, message: msg }
}

type Outcome = Result<String, Failure>;

fn csv_of<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Failure::from(Error::Invariant(e.to_string())))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::from(Error::Invariant(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_of<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::from(Error::Invariant(e.to_string())))
}

/// Renders one record: text via `text`, CSV as a single row, JSON as an object.
fn one<T: Serialize>(format: OutputFormat, record: &T, text: impl FnOnce(&T) -> String) -> Outcome {
    match format {
        OutputFormat::Text => Ok(text(record) + "\n"),
        OutputFormat::Csv => csv_of(std::slice::from_ref(record)),
        OutputFormat::Json => json_of(record),
    }
}

/// Runs a parsed command and returns what should go to stdout.
pub fn execute(cli: &Cli) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Gamma { a, b } => {
            let rec = GammaRecord {
                a: a.clone(),
                b: b.clone(),
                gamma: gamma(a, b)?,
            };
            one(format, &rec, |r| r.gamma.to_string())
        }
        Command::Solve {
            a,
            b,
            oracle,
            oracle_cap,
        } => {
            let sol = solve_split(a, b)?;
            if *oracle {
                let report = brute_force_split(a, b, *oracle_cap)?;
                let agrees = report.exactly_one() && report.solution.as_ref().is_some_and(|o| o.same_triple(&sol));
                if !agrees {
                    return Err(verification_failed(format!(
                        "oracle disagrees for ({a}, {b}): solver {sol}, counts {:?}, oracle {:?}",
                        report.counts, report.solution
                    )));
                }
            }
            let rec = SolveRecord::new(a.clone(), b.clone(), sol, *oracle);
            one(format, &rec, |r| {
                SplitSolution::new(r.delta, r.x.clone(), r.y.clone()).to_string()
            })
        }
        Command::Row { k, seq, start, count } => {
            let row = gamma_row(*k, seq, *start, *count)?;
            match format {
                OutputFormat::Text => Ok(row.bits.iter().map(|b| char::from(b'0' + b)).collect::<String>() + "\n"),
                OutputFormat::Csv => {
                    let entries: Vec<RowEntry> = (row.start..)
                        .zip(&row.bits)
                        .map(|(n, &gamma)| RowEntry { n, gamma })
                        .collect();
                    csv_of(&entries)
                }
                OutputFormat::Json => json_of(&row),
            }
        }
        Command::Period { k, seq, window } => {
            let rec = PeriodRecord::new(*k, seq.to_string(), t_k(*k, seq, *window)?);
            one(format, &rec, |r| {
                let pi = r.state_period.map_or("-".to_string(), |p| p.to_string());
                format!(
                    "T_{}={} preperiod={} zeros={} ones={} pi(2k)={} certified={} window={}",
                    r.k, r.period, r.preperiod, r.zeros, r.ones, pi, r.certified, r.window
                )
            })
        }
        Command::Pisano { m } => {
            let rec = PisanoRecord {
                m: *m,
                pisano: pisano(*m)?,
            };
            one(format, &rec, |r| r.pisano.to_string())
        }
        Command::Table1 { kmax } => {
            if *kmax == 0 {
                return Err(Error::Domain("kmax must be >= 1".into()).into());
            }
            let rows = fibonacci_period_table(*kmax)?;
            match format {
                OutputFormat::Text => Ok(periodicity::table_text(&rows)),
                OutputFormat::Csv => Ok(periodicity::table_csv(&rows)),
                OutputFormat::Json => json_of(&rows),
            }
        }
        Command::Density { p, n } => {
            let trace = build_density_sequence(p, *n)?;
            match format {
                OutputFormat::Text => {
                    let mut out = String::new();
                    for row in trace.rows() {
                        let bit = row.gamma_bit.map_or("-".to_string(), |b| b.to_string());
                        let ratio = match (&row.ratio_num, &row.ratio_den) {
                            (Some(num), Some(den)) => format!("{num}/{den}"),
                            _ => "-".to_string(),
                        };
                        writeln!(out, "{:>4} {:>2} {:>9} {}", row.n, bit, ratio, row.a_n).unwrap();
                    }
                    let last = trace.final_ratio();
                    writeln!(out, "b_{n} = {last} ~ {:.6} (target {p})", last.to_f64()).unwrap();
                    Ok(out)
                }
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    trace.write_csv(&mut buf)?;
                    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
                }
                OutputFormat::Json => json_of(&trace),
            }
        }
        Command::Verify {
            family,
            range,
            u,
            v,
            max_uv,
        } => {
            let records = verify(*family, range.clone(), *u, *v, *max_uv)?;
            let bad: Vec<&VerifyRecord> = records.iter().filter(|r| !r.agrees).collect();
            let out = match format {
                OutputFormat::Text => {
                    let mut out = String::new();
                    for r in &records {
                        let status = if r.agrees { "ok" } else { "MISMATCH" };
                        writeln!(out, "{} n={} u={} v={} δ={} {status}", r.family, r.n, r.u, r.v, r.delta).unwrap();
                    }
                    writeln!(out, "{} of {} checks agree", records.len() - bad.len(), records.len()).unwrap();
                    out
                }
                OutputFormat::Csv => csv_of(&records)?,
                OutputFormat::Json => json_of(&records)?,
            };
            if let Some(first) = bad.first() {
                return Err(verification_failed(format!(
                    "{} closed form disagrees with solve_split at n = {} (u = {}, v = {})",
                    first.family, first.n, first.u, first.v
                )));
            }
            Ok(out)
        }
        Command::Nvar { coeffs, cap } => {
            let rec = explorer::nvar_classify(coeffs, *cap)?;
            match format {
                OutputFormat::Json => json_of(&rec),
                _ => one(format, &NvarRow::from(&rec), |r| record_text(&rec, &r.coeffs)),
            }
        }
        Command::Rs { a, b, r, s, cap } => {
            let rec = explorer::rs_solve(*a, *b, *r, *s, *cap)?;
            match format {
                OutputFormat::Json => json_of(&rec),
                _ => one(format, &ScanRow::from(&rec), |row| {
                    record_text(&rec, &format!("{} {} r={} s={}", row.a, row.b, row.r, row.s))
                }),
            }
        }
        Command::BeiterScan {
            r,
            s,
            xmax,
            out,
            resume,
            shard_size,
        } => {
            let opts = ScanOptions {
                r: *r,
                s: *s,
                x_max: *xmax,
                shard_size: *shard_size,
                format: if format == OutputFormat::Csv {
                    ScanFormat::Csv
                } else {
                    ScanFormat::Jsonl
                },
            };
            let summary = match out {
                Some(path) => explorer::run_scan(&opts, path, *resume)?,
                None => explorer::write_scan(&opts, std::io::sink())?,
            };
            one(format, &BeiterRecord::from(&summary), |b| {
                format!(
                    "r={} s={} x_max={} pairs={} exactly_one={} density={} ~ {:.6}",
                    b.r,
                    b.s,
                    b.x_max,
                    b.pairs,
                    b.exactly_one,
                    summary.density,
                    summary.density.to_f64()
                )
            })
        }
        Command::Term { seq, n, modulus } => {
            let value = match modulus {
                Some(m) => term_mod(seq, *n, m)?,
                None => term(seq, *n)?,
            };
            let rec = TermRecord {
                spec: seq.to_string(),
                n: *n,
                modulus: modulus.clone(),
                value,
            };
            one(format, &rec, |r| r.value.to_string())
        }
    }
}

fn record_text(rec: &ScanRecord, label: &str) -> String {
    let rhs = rec
        .rhs
        .as_ref()
        .map_or(format!("{}/2 (not integral)", rec.rhs_numerator), |r| r.to_string());
    format!(
        "{label}: rhs={rhs} counts={} solvable={:?} exactly_one={} setwise_coprime={} pairwise_coprime={}",
        rec.solution_counts
            .iter()
            .map(|c| if *c >= 2 { "2+".to_string() } else { c.to_string() })
            .collect::<Vec<_>>()
            .join(","),
        rec.solvable_indices,
        rec.exactly_one,
        rec.setwise_coprime,
        rec.pairwise_coprime
    )
}

fn compare(
    family: Family,
    n: u64,
    u: u64,
    v: u64,
    pair: (Nat, Nat),
    closed: SplitSolution,
) -> Result<VerifyRecord, Error> {
    let general = solve_split(&pair.0, &pair.1)?;
    Ok(VerifyRecord {
        family: family.name().to_string(),
        n,
        u,
        v,
        delta: closed.delta,
        agrees: general.same_triple(&closed),
        x: closed.x,
        y: closed.y,
    })
}

/// Runs the closed form of `family` at every applicable index in `range`.
pub fn verify(
    family: Family,
    range: RangeInclusive<u64>,
    u: u64,
    v: u64,
    max_uv: u64,
) -> Result<Vec<VerifyRecord>, Error> {
    let mut out = Vec::new();
    for n in range {
        match family {
            Family::Fib if n >= 6 && matches!(n % 6, 0 | 4) => {
                out.push(compare(family, n, 1, 1, fibonacci_pair(n), fib_identity_solution(n)?)?);
            }
            Family::Fib2 if n >= 2 && matches!(n % 6, 0 | 2 | 3 | 5) => {
                out.push(compare(family, n, 1, 1, fib_square_pair(n), fib_square_solution(n)?)?);
            }
            Family::Fib3 if n >= 2 => {
                out.push(compare(family, n, 1, 1, fib_cube_pair(n), fib_cube_solution(n)?)?);
            }
            Family::Fiblike if n % 6 == 4 => {
                let (nu, nv) = (nat(u), nat(v));
                out.push(compare(
                    family,
                    n,
                    u,
                    v,
                    fiblike_pair(&nu, &nv, n),
                    closed_form_mod6_4(&nu, &nv, n)?,
                )?);
            }
            Family::Mod64 if n % 6 == 4 => {
                for uu in 1..=max_uv {
                    for vv in (1..=max_uv).filter(|vv| gcd(&nat(uu), &nat(*vv)).is_ok_and(|g| g == nat(1))) {
                        let (nu, nv) = (nat(uu), nat(vv));
                        let closed = closed_form_mod6_4(&nu, &nv, n)?;
                        out.push(compare(family, n, uu, vv, fiblike_pair(&nu, &nv, n), closed)?);
                    }
                }
            }
            _ => {}
        }
    }
    if out.is_empty() {
        return Err(Error::Domain(format!(
            "no index in the range applies to family {}",
            family.name()
        )));
    }
    Ok(out)
}

/// Parses `args`, runs the command, prints output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 4;
            }
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
