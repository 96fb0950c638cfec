//! Flat record types printed by the CLI. Each one serializes to a CSV row
//! (with a fixed header) and to JSON, and parses back from either.

use gammasplit::arith::decimal;
use gammasplit::explorer::{ScanRecord, ScanSummary};
use gammasplit::periodicity::PeriodReport;
use gammasplit::{Error, Int, Nat, SplitSolution};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRecord {
    #[serde(with = "decimal")]
    pub a: Nat,
    #[serde(with = "decimal")]
    pub b: Nat,
    pub gamma: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveRecord {
    #[serde(with = "decimal")]
    pub a: Nat,
    #[serde(with = "decimal")]
    pub b: Nat,
    pub delta: u8,
    #[serde(with = "decimal")]
    pub x: Nat,
    #[serde(with = "decimal")]
    pub y: Nat,
    pub unique: bool,
    /// Whether brute force confirmed the solution.
    pub oracle_checked: bool,
}

impl SolveRecord {
    pub fn new(a: Nat, b: Nat, sol: SplitSolution, oracle_checked: bool) -> Self {
        SolveRecord {
            a,
            b,
            delta: sol.delta,
            x: sol.x,
            y: sol.y,
            unique: sol.unique,
            oracle_checked,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowEntry {
    pub n: u64,
    pub gamma: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub k: u64,
    pub spec: String,
    pub preperiod: usize,
    pub period: usize,
    pub zeros: usize,
    pub ones: usize,
    pub certified: bool,
    pub verified_repeats: usize,
    pub state_period: Option<u64>,
    pub window: usize,
}

impl PeriodRecord {
    pub fn new(k: u64, spec: String, r: PeriodReport) -> Self {
        PeriodRecord {
            k,
            spec,
            preperiod: r.preperiod,
            period: r.period,
            zeros: r.zeros,
            ones: r.ones,
            certified: r.certified,
            verified_repeats: r.verified_repeats,
            state_period: r.state_period,
            window: r.window,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PisanoRecord {
    pub m: u64,
    pub pisano: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub spec: String,
    pub n: u64,
    #[serde(with = "decimal::option", default)]
    pub modulus: Option<Nat>,
    #[serde(with = "decimal")]
    pub value: Nat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub family: String,
    /// Index into the family (`m` for cubes).
    pub n: u64,
    pub u: u64,
    pub v: u64,
    pub delta: u8,
    #[serde(with = "decimal")]
    pub x: Nat,
    #[serde(with = "decimal")]
    pub y: Nat,
    pub agrees: bool,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn split<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Error> {
    s.split_whitespace()
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad list entry `{p}`"))))
        .collect()
}

/// [`ScanRecord`] with list fields joined by spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NvarRow {
    pub coeffs: String,
    #[serde(with = "decimal")]
    pub rhs_numerator: Int,
    #[serde(with = "decimal::option", default)]
    pub rhs: Option<Int>,
    pub integral: bool,
    pub setwise_coprime: bool,
    pub pairwise_coprime: bool,
    pub solution_counts: String,
    pub solvable_indices: String,
    pub exactly_one: bool,
}

impl From<&ScanRecord> for NvarRow {
    fn from(r: &ScanRecord) -> Self {
        NvarRow {
            coeffs: join(&r.coeffs),
            rhs_numerator: r.rhs_numerator.clone(),
            rhs: r.rhs.clone(),
            integral: r.integral,
            setwise_coprime: r.setwise_coprime,
            pairwise_coprime: r.pairwise_coprime,
            solution_counts: join(&r.solution_counts),
            solvable_indices: join(&r.solvable_indices),
            exactly_one: r.exactly_one,
        }
    }
}

impl TryFrom<NvarRow> for ScanRecord {
    type Error = Error;

    fn try_from(r: NvarRow) -> Result<Self, Error> {
        Ok(ScanRecord {
            coeffs: split(&r.coeffs)?,
            shift: None,
            rhs_numerator: r.rhs_numerator,
            rhs: r.rhs,
            integral: r.integral,
            setwise_coprime: r.setwise_coprime,
            pairwise_coprime: r.pairwise_coprime,
            solution_counts: split(&r.solution_counts)?,
            solvable_indices: split(&r.solvable_indices)?,
            exactly_one: r.exactly_one,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeiterRecord {
    pub r: i64,
    pub s: i64,
    pub x_max: u64,
    /// Ordered coprime pairs, `(1, 1)` included.
    pub pairs: u64,
    pub exactly_one: u64,
    #[serde(with = "decimal")]
    pub density_num: Nat,
    #[serde(with = "decimal")]
    pub density_den: Nat,
}

impl From<&ScanSummary> for BeiterRecord {
    fn from(s: &ScanSummary) -> Self {
        BeiterRecord {
            r: s.r,
            s: s.s,
            x_max: s.x_max,
            pairs: s.pairs,
            exactly_one: s.exactly_one,
            density_num: s.density.numer().clone(),
            density_den: s.density.denom().clone(),
        }
    }
}
