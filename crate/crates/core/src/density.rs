//! Greedy construction of a strictly increasing sequence whose frequency of
//! `gamma(a_{n-1}, a_n) = 0` tends to a target ratio `p`.
//!
//! Starting from `a_0 = 1, a_1 = 2`, each step doubles (`gamma = 0`) while the
//! running ratio is below `p` and takes `2a - 1` (`gamma = 1`) otherwise.
//! All comparisons are exact.

use std::io::{Read, Write};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{decimal, nat, Nat};
use crate::error::{domain, Error, Result};
use crate::ratio::Ratio;
use crate::split::gamma;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityTrace {
    pub p: Ratio,
    /// `a_0, ..., a_N`.
    #[serde(with = "decimal::vec")]
    pub terms: Vec<Nat>,
    /// `gamma(a_{n-1}, a_n)` for `n = 1..=N`.
    pub bits: Vec<u8>,
    /// `b_n` for `n = 1..=N`.
    pub ratios: Vec<Ratio>,
    /// Indices `n >= 2` where `b_n` moves across `p`.
    pub crossings: Vec<u64>,
}

impl DensityTrace {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `b_N`.
    pub fn final_ratio(&self) -> &Ratio {
        self.ratios.last().expect("trace has at least two steps")
    }

    /// Whether step `n >= 1` doubled the previous term.
    pub fn doubled_at(&self, n: usize) -> bool {
        self.terms[n] == &self.terms[n - 1] << 1u32
    }

    pub fn rows(&self) -> Vec<DensityRow> {
        let mut out = vec![DensityRow {
            n: 0,
            a_n: self.terms[0].clone(),
            gamma_bit: None,
            ratio_num: None,
            ratio_den: None,
        }];
        for n in 1..self.terms.len() {
            out.push(DensityRow {
                n: n as u64,
                a_n: self.terms[n].clone(),
                gamma_bit: Some(self.bits[n - 1]),
                ratio_num: Some(self.ratios[n - 1].numer().clone()),
                ratio_den: Some(self.ratios[n - 1].denom().clone()),
            });
        }
        out
    }

    /// Rebuilds a trace from exported rows.
    pub fn from_rows(p: Ratio, rows: &[DensityRow]) -> Result<Self> {
        let mut terms = Vec::with_capacity(rows.len());
        let mut bits = Vec::new();
        let mut ratios = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.n != i as u64 {
                return Err(Error::Parse(format!("row {i} has n = {}", row.n)));
            }
            terms.push(row.a_n.clone());
            if i > 0 {
                let missing = || Error::Parse(format!("row {i} lacks gamma or ratio"));
                bits.push(row.gamma_bit.ok_or_else(missing)?);
                let num = row.ratio_num.clone().ok_or_else(missing)?;
                let den = row.ratio_den.clone().ok_or_else(missing)?;
                ratios.push(Ratio::new(num, den)?);
            }
        }
        let crossings = crossings(&p, &ratios);
        Ok(DensityTrace {
            p,
            terms,
            bits,
            ratios,
            crossings,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Resource(e.to_string()))
    }

    pub fn read_csv<R: Read>(p: Ratio, input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let rows = r
            .deserialize()
            .collect::<std::result::Result<Vec<DensityRow>, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        DensityTrace::from_rows(p, &rows)
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Resource(format!("write failed: {e}"))
}

/// One CSV line: `n, a_n, gamma_bit, ratio_num, ratio_den`; `n = 0` has no
/// bit or ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRow {
    pub n: u64,
    #[serde(with = "decimal")]
    pub a_n: Nat,
    pub gamma_bit: Option<u8>,
    #[serde(with = "decimal::option", default)]
    pub ratio_num: Option<Nat>,
    #[serde(with = "decimal::option", default)]
    pub ratio_den: Option<Nat>,
}

fn crossings(p: &Ratio, ratios: &[Ratio]) -> Vec<u64> {
    (1..ratios.len())
        .filter(|&i| (ratios[i - 1] < *p) != (ratios[i] < *p))
        .map(|i| i as u64 + 1)
        .collect()
}

/// Builds `a_0, ..., a_N` for the target `p` in `[0, 1]`.
///
/// `p = 1` gives `2^n` and `p = 0` gives `2^n + 1`. Otherwise the greedy rule
/// applies from `n = 2`, testing `b_{n-1} < p` exactly. Every bit is
/// evaluated with [`gamma`], including the seed pair `(1, 2)`.
pub fn build_density_sequence(p: &Ratio, n_max: u64) -> Result<DensityTrace> {
    if *p > Ratio::one() {
        return domain(format!("target ratio must lie in [0, 1], got {p}"));
    }
    if n_max < 2 {
        return domain(format!("trace length N must be >= 2, got {n_max}"));
    }
    let mut terms: Vec<Nat> = Vec::with_capacity(n_max as usize + 1);
    if *p == Ratio::one() {
        terms.extend((0..=n_max).map(|n| Nat::one() << n));
    } else if p.numer().is_zero() {
        terms.extend((0..=n_max).map(|n| (Nat::one() << n) + 1u32));
    }

    let mut bits = Vec::with_capacity(n_max as usize);
    let mut ratios = Vec::with_capacity(n_max as usize);
    let mut zeros = 0u64;
    let mut record = |n: u64, prev: &Nat, cur: &Nat, bits: &mut Vec<u8>, ratios: &mut Vec<Ratio>| -> Result<()> {
        let bit = gamma(prev, cur)?;
        if bit == 0 {
            zeros += 1;
        }
        bits.push(bit);
        ratios.push(Ratio::new(nat(zeros), nat(n))?);
        Ok(())
    };

    if terms.is_empty() {
        terms.push(nat(1));
        terms.push(nat(2));
        record(1, &terms[0], &terms[1], &mut bits, &mut ratios)?;
        for n in 2..=n_max {
            let prev = terms.last().unwrap().clone();
            let below = ratios.last().unwrap() < p;
            let next = if below { &prev << 1u32 } else { (&prev << 1u32) - 1u32 };
            record(n, &prev, &next, &mut bits, &mut ratios)?;
            terms.push(next);
        }
    } else {
        for n in 1..=n_max as usize {
            let (prev, cur) = (terms[n - 1].clone(), terms[n].clone());
            record(n as u64, &prev, &cur, &mut bits, &mut ratios)?;
        }
    }
    let crossings = crossings(p, &ratios);
    Ok(DensityTrace {
        p: p.clone(),
        terms,
        bits,
        ratios,
        crossings,
    })
}

/// `2^(n-1) < a_n <= 2^(n+1)` for `1 <= n <= N` and strict monotonicity.
pub fn verify_growth_bounds(trace: &DensityTrace) -> bool {
    let t = &trace.terms;
    (1..t.len()).all(|n| {
        let lower = Nat::one() << (n - 1);
        let upper = Nat::one() << (n + 1);
        t[n] > t[n - 1] && t[n] > lower && t[n] <= upper
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Ratio {
        Ratio::from_u64(n, d).unwrap()
    }

    #[test]
    fn degenerate_targets() {
        let t = build_density_sequence(&Ratio::one(), 5).unwrap();
        assert_eq!(t.terms, [1u64, 2, 4, 8, 16, 32].map(nat).to_vec());
        assert!(t.bits.iter().all(|&b| b == 0));
        let t = build_density_sequence(&Ratio::zero(), 5).unwrap();
        assert_eq!(t.terms, [2u64, 3, 5, 9, 17, 33].map(nat).to_vec());
        assert!(t.bits.iter().all(|&b| b == 1));
        assert!(t.crossings.is_empty());
    }

    #[test]
    fn half_converges() {
        let t = build_density_sequence(&r(1, 2), 500).unwrap();
        assert!(t.final_ratio().abs_diff(&r(1, 2)) <= r(1, 50));
    }

    #[test]
    fn growth_bounds() {
        for p in [r(1, 2), r(1, 3), Ratio::one(), Ratio::zero()] {
            assert!(verify_growth_bounds(&build_density_sequence(&p, 60).unwrap()), "p={p}");
        }
        let mut t = build_density_sequence(&r(1, 2), 10).unwrap();
        t.terms[4] = nat(1000);
        assert!(!verify_growth_bounds(&t));
    }

    #[test]
    fn greedy_steps_are_steered() {
        for p in [r(1, 4), r(1, 3), r(1, 2), r(2, 3), r(3, 4), r(1, 7)] {
            let t = build_density_sequence(&p, 200).unwrap();
            for n in 2..=t.len() {
                let doubled = t.doubled_at(n);
                assert_eq!(t.bits[n - 1] == 0, doubled, "p={p} n={n}");
                assert_eq!(doubled, t.ratios[n - 2] < p);
                if doubled {
                    assert!(t.ratios[n - 1] > t.ratios[n - 2]);
                } else {
                    assert!(t.ratios[n - 1] < t.ratios[n - 2]);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_density_sequence(&r(3, 2), 10).is_err());
        assert!(build_density_sequence(&r(1, 2), 1).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = build_density_sequence(&r(2, 3), 80).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,a_n,gamma_bit,ratio_num,ratio_den\n0,1,,,\n1,2,0,1,1\n"));
        assert_eq!(DensityTrace::read_csv(r(2, 3), buf.as_slice()).unwrap(), t);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<DensityTrace>(&json).unwrap(), t);
    }
}
