//! Sharded, resumable scans over ordered coprime pairs.
//!
//! The rectangle `1..=x_max` squared is cut into shards of consecutive `a`
//! values. Rows are emitted in `(a, b)` order whatever the shard size, so the
//! output bytes never depend on how the work was split. After each shard the
//! checkpoint file (`<out>.ckpt`) is rewritten with the shard id.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rs_solve, ScanRecord};
use crate::arith::{decimal, Int};
use crate::error::{domain, Error, Result};
use crate::ratio::Ratio;

pub const CSV_HEADER: &str = "a,b,r,s,rhs,integral,solvable_i0,solvable_i1,exactly_one";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    pub r: i64,
    pub s: i64,
    pub x_max: u64,
    /// Number of `a` values per shard.
    pub shard_size: u64,
    pub format: ScanFormat,
}

impl ScanOptions {
    pub fn new(r: i64, s: i64, x_max: u64) -> Self {
        ScanOptions {
            r,
            s,
            x_max,
            shard_size: 16,
            format: ScanFormat::Jsonl,
        }
    }

    pub fn shard_count(&self) -> u64 {
        self.x_max.div_ceil(self.shard_size)
    }

    fn validate(&self) -> Result<()> {
        if self.x_max < 2 {
            return domain(format!("x_max must be >= 2, got {}", self.x_max));
        }
        if self.shard_size == 0 {
            return domain("shard size must be positive");
        }
        Ok(())
    }

    fn shard_range(&self, shard: u64) -> std::ops::RangeInclusive<u64> {
        let lo = shard * self.shard_size + 1;
        lo..=(lo + self.shard_size - 1).min(self.x_max)
    }
}

/// One scanned pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: u64,
    pub b: u64,
    pub r: i64,
    pub s: i64,
    /// Empty when `(a - r)(b - s)` is odd.
    #[serde(with = "decimal::option", default)]
    pub rhs: Option<Int>,
    pub integral: bool,
    pub solvable_i0: bool,
    pub solvable_i1: bool,
    pub exactly_one: bool,
}

impl From<&ScanRecord> for ScanRow {
    fn from(rec: &ScanRecord) -> Self {
        let (r, s) = rec.shift.unwrap_or((1, 1));
        ScanRow {
            a: rec.coeffs[0],
            b: rec.coeffs[1],
            r,
            s,
            rhs: rec.rhs.clone(),
            integral: rec.integral,
            solvable_i0: rec.solution_counts[0] > 0,
            solvable_i1: rec.solution_counts[1] > 0,
            exactly_one: rec.exactly_one,
        }
    }
}

/// Aggregate over a finished scan. Pairs are ordered and include `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub r: i64,
    pub s: i64,
    pub x_max: u64,
    pub pairs: u64,
    pub exactly_one: u64,
    pub density: Ratio,
}

/// Rows of one shard, in `(a, b)` order.
pub fn scan_rows(opts: &ScanOptions, shard: u64) -> Result<Vec<ScanRow>> {
    opts.validate()?;
    let per_a: Vec<Vec<ScanRow>> = opts
        .shard_range(shard)
        .into_par_iter()
        .map(|a| {
            (1..=opts.x_max)
                .filter(|b| a.gcd(b) == 1)
                .map(|b| rs_solve(a, b, opts.r, opts.s, u64::MAX).map(|rec| ScanRow::from(&rec)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_a.into_iter().flatten().collect())
}

fn encode(row: &ScanRow, format: ScanFormat) -> Result<String> {
    match format {
        ScanFormat::Jsonl => serde_json::to_string(row)
            .map(|s| s + "\n")
            .map_err(|e| Error::Invariant(e.to_string())),
        ScanFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.serialize(row).map_err(|e| Error::Invariant(e.to_string()))?;
            let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// Parses one line written by a scan.
pub fn decode(line: &str, format: ScanFormat) -> Result<ScanRow> {
    let parsed = match format {
        ScanFormat::Jsonl => serde_json::from_str(line).map_err(|e| e.to_string()),
        ScanFormat::Csv => {
            let text = format!("{CSV_HEADER}\n{line}\n");
            let mut r = csv::Reader::from_reader(text.as_bytes());
            match r.deserialize().next() {
                Some(row) => row.map_err(|e| e.to_string()),
                None => Err("empty line".to_string()),
            }
        }
    };
    parsed.map_err(|e| Error::Parse(format!("bad scan row {line:?}: {e}")))
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    good: u64,
}

impl Tally {
    fn add(&mut self, row: &ScanRow) {
        self.pairs += 1;
        self.good += row.exactly_one as u64;
    }

    fn finish(self, opts: &ScanOptions) -> Result<ScanSummary> {
        Ok(ScanSummary {
            r: opts.r,
            s: opts.s,
            x_max: opts.x_max,
            pairs: self.pairs,
            exactly_one: self.good,
            density: Ratio::from_u64(self.good, self.pairs)?,
        })
    }
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Resource(format!("{}: {e}", path.display()))
}

/// Streams a complete scan to `out` without checkpointing.
pub fn write_scan<W: Write>(opts: &ScanOptions, mut out: W) -> Result<ScanSummary> {
    opts.validate()?;
    let err = |e: std::io::Error| Error::Resource(e.to_string());
    if opts.format == ScanFormat::Csv {
        writeln!(out, "{CSV_HEADER}").map_err(err)?;
    }
    let mut tally = Tally::default();
    for shard in 0..opts.shard_count() {
        for row in scan_rows(opts, shard)? {
            out.write_all(encode(&row, opts.format)?.as_bytes()).map_err(err)?;
            tally.add(&row);
        }
    }
    out.flush().map_err(err)?;
    tally.finish(opts)
}

pub fn checkpoint_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".ckpt");
    PathBuf::from(name)
}

/// Last completed shard recorded next to `out`, if any.
pub fn read_checkpoint(out: &Path) -> Result<Option<u64>> {
    let path = checkpoint_path(out);
    match fs::read_to_string(&path) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{}: not a shard id: {text:?}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io(&path)(e)),
    }
}

fn write_checkpoint(out: &Path, shard: u64) -> Result<()> {
    let path = checkpoint_path(out);
    let tmp = path.with_extension("ckpt.tmp");
    fs::write(&tmp, format!("{shard}\n")).map_err(io(&tmp))?;
    fs::rename(&tmp, &path).map_err(io(&path))
}

fn expected_rows(opts: &ScanOptions, through: u64) -> u64 {
    let last_a = opts.shard_range(through).last().unwrap_or(0);
    (1..=last_a)
        .into_par_iter()
        .map(|a| (1..=opts.x_max).filter(|b| a.gcd(b) == 1).count() as u64)
        .sum()
}

/// Keeps the header and the rows of shards `0..=last`, dropping anything
/// written after the checkpoint, and tallies the kept rows.
fn truncate_to_checkpoint(opts: &ScanOptions, out: &Path, last: u64) -> Result<Tally> {
    let want = expected_rows(opts, last);
    let file = File::open(out).map_err(io(out))?;
    let mut reader = BufReader::new(file);
    let mut offset = 0u64;
    let mut line = String::new();
    if opts.format == ScanFormat::Csv {
        let n = reader.read_line(&mut line).map_err(io(out))?;
        if line.trim_end() != CSV_HEADER {
            return Err(Error::Invariant(format!("{}: missing scan header", out.display())));
        }
        offset += n as u64;
    }
    let mut tally = Tally::default();
    while tally.pairs < want {
        line.clear();
        let n = reader.read_line(&mut line).map_err(io(out))?;
        if n == 0 || !line.ends_with('\n') {
            return Err(Error::Invariant(format!(
                "{}: checkpoint claims shard {last} but only {} of {want} rows are present",
                out.display(),
                tally.pairs
            )));
        }
        tally.add(&decode(line.trim_end(), opts.format)?);
        offset += n as u64;
    }
    let file = OpenOptions::new().write(true).open(out).map_err(io(out))?;
    file.set_len(offset).map_err(io(out))?;
    Ok(tally)
}

/// Runs a scan into `out`, checkpointing after every shard.
///
/// With `resume`, a previous run is continued from its checkpoint; rows past
/// the checkpoint are discarded and recomputed. Resuming needs the same
/// options as the original run.
pub fn run_scan(opts: &ScanOptions, out: &Path, resume: bool) -> Result<ScanSummary> {
    opts.validate()?;
    let last = if resume { read_checkpoint(out)? } else { None };
    if let Some(last) = last {
        if last >= opts.shard_count() {
            return Err(Error::Invariant(format!(
                "checkpoint shard {last} is out of range for {} shards",
                opts.shard_count()
            )));
        }
    }
    let (mut tally, first) = match last {
        Some(last) => (truncate_to_checkpoint(opts, out, last)?, last + 1),
        None => {
            let mut f = File::create(out).map_err(io(out))?;
            if opts.format == ScanFormat::Csv {
                writeln!(f, "{CSV_HEADER}").map_err(io(out))?;
            }
            let ckpt = checkpoint_path(out);
            if ckpt.exists() {
                fs::remove_file(&ckpt).map_err(io(&ckpt))?;
            }
            (Tally::default(), 0)
        }
    };
    let mut file = OpenOptions::new().append(true).open(out).map_err(io(out))?;
    for shard in first..opts.shard_count() {
        let mut chunk = String::new();
        for row in scan_rows(opts, shard)? {
            chunk.push_str(&encode(&row, opts.format)?);
            tally.add(&row);
        }
        file.write_all(chunk.as_bytes()).map_err(io(out))?;
        file.sync_data().map_err(io(out))?;
        write_checkpoint(out, shard)?;
    }
    tally.finish(opts)
}
