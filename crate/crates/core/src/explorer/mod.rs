//! Brute-force instruments for open variants of the two-equation problem.
//!
//! * [`nvar_classify`]: `i + a_1 x_1 + ... + a_n x_n = prod(a_j - 1) / 2` for
//!   `i = 0..n-1`.
//! * [`rs_solve`]: `i + ax + by = (a - r)(b - s) / 2` for `i = 0, 1`.
//! * [`beiter_density`]: the share of ordered coprime pairs `0 < a, b <= x`
//!   for which exactly one shifted equation is solvable.
//!
//! Solution counts saturate at 2, since only "none", "one" and "many" matter.

mod scan;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{decimal, Int};
use crate::error::{domain, Error, Result};
use crate::ratio::Ratio;

pub use scan::{
    checkpoint_path, decode, read_checkpoint, run_scan, scan_rows, write_scan, ScanFormat, ScanOptions, ScanRow,
    ScanSummary, CSV_HEADER,
};

/// Default bound on the right-hand side handled by a single instance.
pub const DEFAULT_RHS_CAP: u64 = 10_000_000;

/// Outcome of classifying one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub coeffs: Vec<u64>,
    /// `(r, s)` for shifted two-variable instances.
    pub shift: Option<(i64, i64)>,
    /// `prod(a_j - 1)`, or `(a - r)(b - s)` for shifted instances.
    #[serde(with = "decimal")]
    pub rhs_numerator: Int,
    /// Half of the numerator when that is an integer.
    #[serde(with = "decimal::option", default)]
    pub rhs: Option<Int>,
    pub integral: bool,
    /// `gcd` of all coefficients is 1.
    pub setwise_coprime: bool,
    /// Every two coefficients are coprime.
    pub pairwise_coprime: bool,
    /// Number of nonnegative solutions for each `i`, capped at 2.
    pub solution_counts: Vec<u8>,
    pub solvable_indices: Vec<usize>,
    pub exactly_one: bool,
}

impl ScanRecord {
    fn build(
        coeffs: Vec<u64>,
        shift: Option<(i64, i64)>,
        rhs_numerator: Int,
        rhs: Option<Int>,
        solution_counts: Vec<u8>,
    ) -> Self {
        let solvable_indices: Vec<usize> = solution_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i)
            .collect();
        let exactly_one = solvable_indices.len() == 1;
        let setwise_coprime = coeffs.iter().fold(0u64, |g, &c| g.gcd(&c)) == 1;
        let pairwise_coprime = coeffs
            .iter()
            .enumerate()
            .all(|(i, a)| coeffs[i + 1..].iter().all(|b| a.gcd(b) == 1));
        ScanRecord {
            coeffs,
            shift,
            integral: rhs.is_some(),
            rhs_numerator,
            rhs,
            setwise_coprime,
            pairwise_coprime,
            solution_counts,
            solvable_indices,
            exactly_one,
        }
    }

    /// The unique solvable index, if there is one and its solution is unique.
    pub fn unique_index(&self) -> Option<usize> {
        match self.solvable_indices.as_slice() {
            [i] if self.solution_counts[*i] == 1 => Some(*i),
            _ => None,
        }
    }
}

fn half_if_integral(numerator: &Int) -> Option<Int> {
    let (q, r) = numerator.div_rem(&Int::from(2));
    r.is_zero().then_some(q)
}

fn checked_target(rhs: &Int, cap: u64) -> Result<u64> {
    match rhs.to_u64() {
        Some(t) if t <= cap => Ok(t),
        _ => Err(Error::Resource(format!("right-hand side {rhs} exceeds cap {cap}"))),
    }
}

/// Saturating representation counts of every target `0..=max` as
/// nonnegative combinations of `coeffs`.
pub fn representation_counts(coeffs: &[u64], max: usize) -> Vec<u8> {
    let mut cnt = vec![0u8; max + 1];
    cnt[0] = 1;
    for &c in coeffs {
        let c = c as usize;
        for t in c..=max {
            cnt[t] = (cnt[t] + cnt[t - c]).min(2);
        }
    }
    cnt
}

/// Counts solutions of `ax + by = t` in nonnegative integers, capped at 2.
fn count_two(a: u64, b: u64, t: u64) -> u8 {
    let (small, big) = if a <= b { (a, b) } else { (b, a) };
    let mut found = 0u8;
    let mut y = 0u64;
    while y.saturating_mul(big) <= t && found < 2 {
        if (t - y * big).is_multiple_of(small) {
            found += 1;
        }
        y += 1;
    }
    found
}

/// Classifies the system `i + sum(a_j x_j) = prod(a_j - 1) / 2` for
/// `i = 0..n-1`.
///
/// Coefficients need not be coprime; both coprimality readings are recorded
/// on the result. A non-integral right-hand side yields no solvable index.
pub fn nvar_classify(coeffs: &[u64], cap: u64) -> Result<ScanRecord> {
    if coeffs.len() < 2 {
        return domain(format!("need at least two coefficients, got {}", coeffs.len()));
    }
    if coeffs.contains(&0) {
        return domain("coefficients must be positive");
    }
    let numerator: Int = coeffs.iter().map(|&a| Int::from(a - 1)).product();
    let n = coeffs.len();
    let Some(rhs) = half_if_integral(&numerator) else {
        return Ok(ScanRecord::build(coeffs.to_vec(), None, numerator, None, vec![0; n]));
    };
    let target = checked_target(&rhs, cap)?;
    let cnt = representation_counts(coeffs, target as usize);
    let counts = (0..n)
        .map(|i| target.checked_sub(i as u64).map_or(0, |t| cnt[t as usize]))
        .collect();
    Ok(ScanRecord::build(coeffs.to_vec(), None, numerator, Some(rhs), counts))
}

/// Classifies `i + ax + by = (a - r)(b - s) / 2` for `i = 0, 1`.
///
/// A negative or non-integral right-hand side makes both equations
/// unsolvable; that is reported, not raised.
pub fn rs_solve(a: u64, b: u64, r: i64, s: i64, cap: u64) -> Result<ScanRecord> {
    if a == 0 || b == 0 {
        return domain("coefficients must be positive");
    }
    if a.gcd(&b) != 1 {
        return domain(format!("gcd({a}, {b}) must be 1"));
    }
    let numerator = (Int::from(a) - r) * (Int::from(b) - s);
    let rhs = half_if_integral(&numerator);
    let counts = match &rhs {
        Some(v) if !v.is_negative() => {
            let t = checked_target(v, cap)?;
            vec![count_two(a, b, t), t.checked_sub(1).map_or(0, |t| count_two(a, b, t))]
        }
        _ => vec![0, 0],
    };
    Ok(ScanRecord::build(vec![a, b], Some((r, s)), numerator, rhs, counts))
}

/// Number of ordered coprime pairs and of those with exactly one solvable
/// shifted equation, over `0 < a, b <= x_max`.
pub fn beiter_counts(r: i64, s: i64, x_max: u64) -> (u64, u64) {
    (1..=x_max)
        .into_par_iter()
        .map(|a| {
            let mut pairs = 0u64;
            let mut good = 0u64;
            for b in (1..=x_max).filter(|b| a.gcd(b) == 1) {
                pairs += 1;
                let rec = rs_solve(a, b, r, s, u64::MAX).expect("coprime pair");
                good += rec.exactly_one as u64;
            }
            (pairs, good)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
}

/// Fraction of ordered coprime pairs `0 < a, b <= x_max` (including
/// `(1, 1)`) for which exactly one of the `(r, s)`-shifted equations has a
/// nonnegative solution.
pub fn beiter_density(r: i64, s: i64, x_max: u64) -> Result<Ratio> {
    if x_max < 2 {
        return domain(format!("x_max must be >= 2, got {x_max}"));
    }
    let (pairs, good) = beiter_counts(r, s, x_max);
    Ratio::from_u64(good, pairs)
}

/// [`beiter_density`] at each `x`.
pub fn density_curve(r: i64, s: i64, xs: &[u64]) -> Result<Vec<(u64, Ratio)>> {
    if xs.is_empty() {
        return domain("need at least one x value");
    }
    xs.iter().map(|&x| Ok((x, beiter_density(r, s, x)?))).collect()
}
