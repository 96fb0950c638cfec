//! Rows `(gamma(k, a_n))_n` along sequences and their eventual periods.
//!
//! For recurrence families the residues `a_n mod 2k` are eventually periodic
//! with period `pi(2k)`, and `gamma(k, a)` depends only on `a mod 2k`, so the
//! row period divides `pi(2k)`. [`t_k`] uses that bound to certify the period
//! it detects; without a recurrence the report stays empirical.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, nat, Int, Nat};
use crate::error::{domain, invariant, Error, Result};
use crate::sequences::{term_residues, terms, SequenceSpec};
use crate::split::{gamma, solve_split};

pub const DEFAULT_MIN_REPEATS: usize = 3;
pub const DEFAULT_WINDOW: usize = 1000;
const MIN_CERTIFIED_WINDOW: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitRow {
    pub k: u64,
    pub spec: String,
    pub start: u64,
    pub bits: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub preperiod: usize,
    pub period: usize,
    pub zeros: usize,
    pub ones: usize,
    pub certified: bool,
    /// Full periods observed after the preperiod.
    pub verified_repeats: usize,
    /// `pi(2k)` when the sequence has a recurrence.
    pub state_period: Option<u64>,
    pub window: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePeriod {
    pub preperiod: u64,
    pub period: u64,
}

/// `gamma(k, a)` for `a >= 1` given only `a mod 2k`.
pub fn gamma_from_residue(k: u64, residue: u64) -> Result<u8> {
    let two_k = 2 * k;
    let r = residue % two_k;
    gamma(&nat(k), &nat(if r == 0 { two_k } else { r }))
}

/// `bits[j] = gamma(k, a_{start + j})`.
///
/// Exact terms are used where the family allows it; `(n!)^(n!)` and
/// nonlinear power recurrences go through residues mod `2k`.
pub fn gamma_row(k: u64, spec: &SequenceSpec, start: u64, count: usize) -> Result<BitRow> {
    if k == 0 {
        return domain("row parameter k must be >= 1");
    }
    if count == 0 {
        return domain("row length must be >= 1");
    }
    let bits = if spec.has_tractable_terms() {
        let k_nat = nat(k);
        let seq = terms(spec, start, count)?;
        seq.par_iter().map(|a| gamma(&k_nat, a)).collect::<Result<Vec<u8>>>()?
    } else {
        residue_row(k, spec, start, count)?
    };
    Ok(BitRow {
        k,
        spec: spec.to_string(),
        start,
        bits,
    })
}

/// Row computed from `a_n mod 2k` only.
pub fn residue_row(k: u64, spec: &SequenceSpec, start: u64, count: usize) -> Result<Vec<u8>> {
    if k == 0 {
        return domain("row parameter k must be >= 1");
    }
    let residues = term_residues(spec, start, count, &nat(2 * k))?;
    residues
        .par_iter()
        .map(|r| gamma_from_residue(k, r.to_u64().expect("residue below 2k")))
        .collect()
}

/// Smallest preperiod `s`, then smallest period `T`, such that the window is
/// `T`-periodic from `s` on and at least `min_repeats` full periods follow
/// `s`.
///
/// Ordering by preperiod first keeps a short constant tail from passing as
/// period 1.
pub fn detect_period(bits: &[u8], min_repeats: usize) -> Result<PeriodReport> {
    if min_repeats < 2 {
        return domain(format!("min_repeats must be >= 2, got {min_repeats}"));
    }
    let len = bits.len();
    let best = (1..=len / min_repeats)
        .filter_map(|period| {
            let preperiod = (0..len - period)
                .rev()
                .find(|&i| bits[i] != bits[i + period])
                .map_or(0, |i| i + 1);
            (len - preperiod >= min_repeats * period).then_some((preperiod, period))
        })
        .min();
    let Some((preperiod, period)) = best else {
        return Err(Error::Inconclusive { window: len });
    };
    let cycle = &bits[preperiod..preperiod + period];
    let zeros = cycle.iter().filter(|&&b| b == 0).count();
    Ok(PeriodReport {
        preperiod,
        period,
        zeros,
        ones: period - zeros,
        certified: false,
        verified_repeats: (len - preperiod) / period,
        state_period: None,
        window: len,
    })
}

/// Exact preperiod and period of the residue orbit of a recurrence family
/// modulo `m`, found by storing every state.
///
/// The state is the tuple of `s` consecutive residues, so the orbit period is
/// exactly the eventual period of `(a_n mod m)`.
pub fn state_period_mod(spec: &SequenceSpec, m: &Nat) -> Result<StatePeriod> {
    spec.validate()?;
    let rec = spec
        .recurrence()
        .ok_or_else(|| Error::Domain(format!("`{spec}` has no recurrence; state periods need one")))?;
    if m.is_zero() {
        return domain("modulus must be >= 1");
    }
    let m64 = m
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("modulus {m} too large for state hashing")))?;
    let mut state: Vec<u64> = rec.init.iter().map(|t| (t % m).to_u64().unwrap()).collect();
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut index = 0u64;
    loop {
        if let Some(&first) = seen.get(&state) {
            return Ok(StatePeriod {
                preperiod: first,
                period: index - first,
            });
        }
        let next = rec.next_mod(&state, m64);
        let mut shifted = state[1..].to_vec();
        shifted.push(next);
        seen.insert(std::mem::replace(&mut state, shifted), index);
        index += 1;
    }
}

/// Pisano period `pi(m)`.
pub fn pisano(m: u64) -> Result<u64> {
    if m == 0 {
        return domain("pisano needs m >= 1");
    }
    let sp = state_period_mod(&SequenceSpec::fibonacci(), &nat(m))?;
    if sp.preperiod != 0 {
        return invariant(format!("Fibonacci orbit mod {m} has preperiod {}", sp.preperiod));
    }
    Ok(sp.period)
}

/// Eventual period of `(gamma(k, a_n))_n`.
///
/// With a recurrence, `pi(2k)` is computed, the detected period must divide
/// it, and the report is certified once the window covers one full `pi(2k)`
/// beyond both preperiods. `window` defaults to `max(mu + 4 pi(2k), 200)`
/// (`mu` the residue preperiod) or 1000 without a recurrence.
pub fn t_k(k: u64, spec: &SequenceSpec, window: Option<usize>) -> Result<PeriodReport> {
    if k == 0 {
        return domain("t_k needs k >= 1");
    }
    spec.validate()?;
    let state = match spec.recurrence() {
        Some(_) => Some(state_period_mod(spec, &nat(2 * k))?),
        None => None,
    };
    let window = window.unwrap_or_else(|| match state {
        Some(sp) => ((sp.preperiod + 4 * sp.period) as usize).max(MIN_CERTIFIED_WINDOW),
        None => DEFAULT_WINDOW,
    });
    let row = gamma_row(k, spec, 1, window)?;
    let mut report = detect_period(&row.bits, DEFAULT_MIN_REPEATS)?;
    if let Some(sp) = state {
        let pi = sp.period;
        report.state_period = Some(pi);
        if pi % report.period as u64 != 0 {
            return invariant(format!(
                "detected period {} of gamma({k}, a_n) does not divide pi({}) = {pi} for `{spec}`",
                report.period,
                2 * k
            ));
        }
        let from = report.preperiod.max(sp.preperiod as usize);
        let to = from + pi as usize;
        if to + report.period <= row.bits.len() {
            report.certified = (from..to).all(|j| row.bits[j] == row.bits[j + report.period]);
        }
    }
    Ok(report)
}

/// Checks the shift lemma on `(a, b, n)`: when `n((a-1)/2 - y*)` is an integer
/// divisible by `a` (with `y*` from the solution for `(a, b)`), `gamma(a, b+n)`
/// must equal `gamma(a, b)`. Returns whether the hypothesis held.
pub fn gamma_shift_check(a: &Nat, b: &Nat, n: &Nat) -> Result<bool> {
    if !gcd(a, b)?.is_one() {
        return domain(format!("gamma_shift_check needs gcd(a, b) = 1, got ({a}, {b})"));
    }
    let shifted = b + n;
    if !gcd(a, &shifted)?.is_one() {
        return domain(format!(
            "gamma_shift_check needs gcd(a, b + N) = 1, got ({a}, {shifted})"
        ));
    }
    let y_star = solve_split(a, b)?.y;
    // N((a-1)/2 - y*) = N(a - 1 - 2y*)/2
    let doubled: Int = Int::from(n.clone()) * (Int::from(a.clone()) - 1 - 2 * Int::from(y_star));
    let holds = doubled.is_even() && (&doubled / 2u32).is_multiple_of(&Int::from(a.clone()));
    if holds {
        let before = gamma(a, b)?;
        let after = gamma(a, &shifted)?;
        if before != after {
            return invariant(format!(
                "shift lemma violated: gamma({a}, {b}) = {before} but gamma({a}, {shifted}) = {after}"
            ));
        }
    }
    Ok(holds)
}

/// Reflection inside one period of `(gamma(k, n))_n`: for odd `k`,
/// `gamma(k, s) != gamma(k, k - s)` for `1 <= s <= (k-1)/2`; for even `k`,
/// `gamma(k, s) != gamma(k, 2k - s)` for `1 <= s <= k - 1`.
pub fn halfperiod_reflection(k: u64) -> Result<bool> {
    if k < 2 {
        return domain(format!("halfperiod_reflection needs k >= 2, got {k}"));
    }
    let kn = nat(k);
    let (upper, mirror) = if k % 2 == 1 { ((k - 1) / 2, k) } else { (k - 1, 2 * k) };
    for s in 1..=upper {
        if gamma(&kn, &nat(s))? == gamma(&kn, &nat(mirror - s))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `bits[j] = gamma(a_{start+j}, a_{start+j+1})`, sequence order.
pub fn consecutive_row(spec: &SequenceSpec, start: u64, count: usize) -> Result<Vec<u8>> {
    let seq = terms(spec, start, count + 1)?;
    seq.par_windows(2).map(|w| gamma(&w[0], &w[1])).collect()
}

/// Smallest index `i` such that `bits[i..]` alternates 0/1.
pub fn alternation_start(bits: &[u8]) -> Option<usize> {
    if bits.is_empty() {
        return None;
    }
    let last_repeat = (0..bits.len() - 1).rev().find(|&i| bits[i] == bits[i + 1]);
    Some(last_repeat.map_or(0, |i| i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub k: u64,
    #[serde(rename = "T_k")]
    pub t_k: usize,
    pub pi_2k: u64,
    pub certified: bool,
}

/// `T_k` of the Fibonacci row against `pi(2k)` for `k = 1..=kmax`.
pub fn fibonacci_period_table(kmax: u64) -> Result<Vec<Table1Row>> {
    let fib = SequenceSpec::fibonacci();
    (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let r = t_k(k, &fib, None)?;
            Ok(Table1Row {
                k,
                t_k: r.period,
                pi_2k: r.state_period.expect("Fibonacci has a recurrence"),
                certified: r.certified,
            })
        })
        .collect()
}

/// Rows as CSV with header `k,T_k,pi_2k,certified`.
pub fn table_csv(rows: &[Table1Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
}

/// Two-column-block layout: rows `1..=h` on the left, the rest on the right.
pub fn table_text(rows: &[Table1Row]) -> String {
    let h = rows.len().div_ceil(2);
    let cell = |r: Option<&Table1Row>| match r {
        Some(r) => format!("{:>4} {:>6} {:>7}", r.k, r.t_k, r.pi_2k),
        None => String::new(),
    };
    let header = format!("{:>4} {:>6} {:>7}", "k", "T_k", "pi(2k)");
    let mut out = format!("{header} | {header}\n");
    for i in 0..h {
        let right = cell(rows.get(i + h));
        let line = format!("{} | {}", cell(rows.get(i)), right);
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::gamma_u64;

    #[test]
    fn gamma_row_examples() {
        let row = gamma_row(3, &SequenceSpec::Naturals, 1, 6).unwrap();
        assert_eq!(row.bits, vec![0, 1, 0, 0, 1, 0]);
        let row = gamma_row(2, &SequenceSpec::Naturals, 1, 8).unwrap();
        assert_eq!(row.bits, vec![0, 0, 1, 0, 0, 0, 1, 0]);
        for spec in [SequenceSpec::fibonacci(), SequenceSpec::Balancing, SequenceSpec::Odds] {
            assert!(gamma_row(1, &spec, 1, 30).unwrap().bits.iter().all(|&b| b == 0));
        }
    }

    #[test]
    fn row_bits_match_direct_gamma() {
        let row = gamma_row(7, &SequenceSpec::Balancing, 3, 12).unwrap();
        let seq = terms(&SequenceSpec::Balancing, 3, 12).unwrap();
        for (b, a) in row.bits.iter().zip(&seq) {
            assert_eq!(*b, gamma(&nat(7), a).unwrap());
        }
    }

    #[test]
    fn residue_route_matches_exact_route() {
        let specs = [
            SequenceSpec::fibonacci(),
            SequenceSpec::Balancing,
            SequenceSpec::KthPower { k: 3 },
            SequenceSpec::ShiftedGeometric {
                a: nat(2),
                ratio: nat(3),
            },
            SequenceSpec::Arithmetic { p: nat(5), r: nat(3) },
        ];
        for spec in specs {
            for k in 1..=15 {
                let exact = gamma_row(k, &spec, 1, 60).unwrap().bits;
                assert_eq!(residue_row(k, &spec, 1, 60).unwrap(), exact, "{spec} k={k}");
            }
        }
        for k in 1..=12 {
            let exact: Vec<u8> = (1..=6)
                .map(|n| gamma(&nat(k), &crate::term(&SequenceSpec::FactorialPower, n).unwrap()).unwrap())
                .collect();
            assert_eq!(gamma_row(k, &SequenceSpec::FactorialPower, 1, 6).unwrap().bits, exact);
        }
    }

    #[test]
    fn detect_period_examples() {
        let r = detect_period(&[0, 1, 0, 1, 0, 1], 2).unwrap();
        assert_eq!((r.preperiod, r.period), (0, 2));
        let r = detect_period(&[1, 0, 0, 1, 0, 0, 1], 2).unwrap();
        assert_eq!((r.preperiod, r.period), (0, 3));
        let r = detect_period(&[0; 10], 2).unwrap();
        assert_eq!((r.preperiod, r.period, r.zeros, r.ones), (0, 1, 1, 0));
        let r = detect_period(&[1, 1, 1, 0, 1, 0, 1, 0, 1], 3).unwrap();
        assert_eq!((r.preperiod, r.period), (2, 2));
        assert!(matches!(
            detect_period(&[0, 1, 1, 0], 2),
            Err(Error::Inconclusive { window: 4 })
        ));
        // a constant tail does not beat a period witnessed from the start
        let r = detect_period(&[0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0], 3).unwrap();
        assert_eq!((r.preperiod, r.period), (0, 6));
        assert!(detect_period(&[0, 1], 1).is_err());
    }

    #[test]
    fn state_period_examples() {
        let fib = SequenceSpec::fibonacci();
        assert_eq!(state_period_mod(&fib, &nat(3)).unwrap().period, 8);
        assert_eq!(state_period_mod(&fib, &nat(5)).unwrap().period, 20);
        for j in 1..=6u32 {
            assert_eq!(pisano(1 << j).unwrap(), 3 * (1 << (j - 1)), "pi(2^{j})");
        }
        assert!(state_period_mod(&SequenceSpec::FactorialPower, &nat(4)).is_err());
    }

    #[test]
    fn state_period_matches_residue_sequence() {
        // independent check: scan the residue sequence itself
        let specs = [
            SequenceSpec::Balancing,
            SequenceSpec::FibonacciPower { power: 2 },
            SequenceSpec::ShiftedGeometric {
                a: nat(3),
                ratio: nat(4),
            },
            "powrec:c=1,1;t=2,1;init=1,2".parse().unwrap(),
        ];
        for spec in specs {
            for m in 1..=30u64 {
                let sp = state_period_mod(&spec, &nat(m)).unwrap();
                let res = term_residues(&spec, 1, 2000, &nat(m)).unwrap();
                let (mu, p) = (sp.preperiod as usize, sp.period as usize);
                for j in mu..res.len() - p {
                    assert_eq!(res[j], res[j + p], "{spec} m={m}");
                }
                for d in 1..p {
                    if p % d == 0 {
                        assert!(
                            (mu..res.len() - d).any(|j| res[j] != res[j + d]),
                            "{spec} m={m} smaller period {d}"
                        );
                    }
                }
                if mu > 0 {
                    assert!((mu - 1..res.len() - p).any(|j| res[j] != res[j + p]));
                }
            }
        }
    }

    #[test]
    fn pisano_examples() {
        assert_eq!(pisano(2).unwrap(), 3);
        assert_eq!(pisano(14).unwrap(), 48);
        assert_eq!(pisano(1).unwrap(), 1);
    }

    #[test]
    fn t_k_examples() {
        let fib = SequenceSpec::fibonacci();
        let r = t_k(2, &fib, None).unwrap();
        assert_eq!((r.period, r.state_period), (6, Some(6)));
        assert!(r.certified);
        let r = t_k(7, &fib, None).unwrap();
        assert_eq!((r.period, r.state_period), (16, Some(48)));
        let r = t_k(3, &SequenceSpec::Naturals, None).unwrap();
        assert_eq!((r.period, r.zeros, r.ones), (3, 2, 1));
        // no recurrence: empirical only
        let r = t_k(4, &SequenceSpec::FactorialPower, Some(40)).unwrap();
        assert_eq!(r.period, 1);
        assert!(!r.certified);
    }

    #[test]
    fn short_window_is_not_certified() {
        let r = t_k(7, &SequenceSpec::fibonacci(), Some(60)).unwrap();
        assert_eq!(r.period, 16);
        assert!(!r.certified);
    }

    #[test]
    fn shift_check_examples() {
        assert!(gamma_shift_check(&nat(3), &nat(5), &nat(6)).unwrap());
        assert_eq!(gamma_u64(3, 11).unwrap(), gamma_u64(3, 5).unwrap());
        assert!(gamma_shift_check(&nat(5), &nat(7), &nat(0)).unwrap());
        for a in 1..25u64 {
            for b in 1..25u64 {
                if num_integer::gcd(a, b) != 1 {
                    continue;
                }
                for j in 0..4 {
                    assert!(gamma_shift_check(&nat(a), &nat(b), &nat(2 * a * j)).unwrap());
                }
            }
        }
        assert!(gamma_shift_check(&nat(4), &nat(6), &nat(1)).is_err());
        assert!(gamma_shift_check(&nat(3), &nat(5), &nat(1)).is_err());
    }

    #[test]
    fn halfperiod_examples() {
        assert!(halfperiod_reflection(3).unwrap());
        assert!(halfperiod_reflection(4).unwrap());
        assert!(halfperiod_reflection(2).unwrap());
        for k in 2..120 {
            assert!(halfperiod_reflection(k).unwrap(), "k={k}");
        }
        assert!(halfperiod_reflection(1).is_err());
    }

    #[test]
    fn alternation_start_index() {
        assert_eq!(alternation_start(&[0, 1, 0, 1]), Some(0));
        assert_eq!(alternation_start(&[0, 0, 1, 0, 1]), Some(1));
        assert_eq!(alternation_start(&[1, 1]), Some(1));
        assert_eq!(alternation_start(&[]), None);
    }

    #[test]
    fn table_layout() {
        let rows = fibonacci_period_table(4).unwrap();
        assert_eq!(
            table_csv(&rows),
            "k,T_k,pi_2k,certified\n1,1,3,true\n2,6,6,true\n3,8,24,true\n4,12,12,true\n"
        );
        let text = table_text(&rows);
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().contains('|'));
    }
}
