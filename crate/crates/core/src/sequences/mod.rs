//! Integer sequence families, their exact terms, residues and recurrences,
//! plus closed-form solutions of the split equations for Fibonacci-type
//! pairs.
//!
//! Every family is indexed from `n = 1`.

mod closed_form;
mod modular;
mod parse;

pub use closed_form::{
    closed_form_mod6_4, fib_cube_pair, fib_cube_solution, fib_identity_solution, fib_square_pair, fib_square_solution,
    fiblike_pair, oddr, phi_psi, OddrResult,
};
pub use modular::{factorial_power_mod, mod_pow, term_mod};

use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, nat, to_nat, Int, Nat};
use crate::error::{domain, Error, Result};

/// Exact terms larger than this many bits are refused.
pub const MAX_TERM_BITS: u64 = 1 << 24;

/// Largest index for which `(n!)^(n!)` is materialized.
pub const FACTORIAL_POWER_MAX_N: u64 = 6;

/// `a_n = sum_i coeffs[i] * a_{n-1-i}^exponents[i]`, seeded with `init`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerRecurrence {
    pub coeffs: Vec<Int>,
    pub exponents: Vec<u32>,
    pub init: Vec<Nat>,
}

impl PowerRecurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_linear(&self) -> bool {
        self.exponents.iter().all(|&t| t == 1)
    }

    fn validate(&self) -> Result<()> {
        let s = self.coeffs.len();
        if s == 0 {
            return domain("power recurrence needs at least one coefficient");
        }
        if self.exponents.len() != s || self.init.len() != s {
            return domain(format!(
                "power recurrence has {} coefficients, {} exponents and {} initial terms; all must match",
                s,
                self.exponents.len(),
                self.init.len()
            ));
        }
        if self.init.iter().any(Zero::is_zero) {
            return domain("power recurrence initial terms must be >= 1");
        }
        Ok(())
    }

    /// Next exact term from the last `order()` terms (oldest first).
    fn next_exact(&self, window: &[Nat]) -> Result<Int> {
        let s = self.order();
        let mut acc = Int::zero();
        for (i, (c, &t)) in self.coeffs.iter().zip(&self.exponents).enumerate() {
            let prev = &window[s - 1 - i];
            if prev.bits() * t as u64 > MAX_TERM_BITS {
                return Err(Error::Resource(format!(
                    "power recurrence term exceeds {MAX_TERM_BITS} bits; use term_mod"
                )));
            }
            acc += c * Int::from(Pow::pow(prev, t));
        }
        Ok(acc)
    }

    /// Next residue modulo `m` from the last `order()` residues.
    pub(crate) fn next_mod(&self, window: &[u64], m: u64) -> u64 {
        let s = self.order();
        let mm = m as u128;
        let mut acc: u128 = 0;
        for (i, (c, &t)) in self.coeffs.iter().zip(&self.exponents).enumerate() {
            let base = window[s - 1 - i];
            let p = mod_pow_u64(base, t as u64, m) as u128;
            let c_mod = c.mod_floor(&Int::from(m)).to_u64().unwrap() as u128;
            acc = (acc + c_mod * p % mm) % mm;
        }
        acc as u64
    }
}

/// A generated integer sequence, one variant per family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceSpec {
    /// `F_n^power` with `F_1 = F_2 = 1`.
    FibonacciPower {
        power: u32,
    },
    /// `t_1`, `t_2` coprime, `t_n = t_{n-1} + t_{n-2}`.
    FibonacciLike {
        t1: Nat,
        t2: Nat,
    },
    /// `B_1 = 1, B_2 = 6, B_n = 6B_{n-1} - B_{n-2}`.
    Balancing,
    /// `C_1 = 3, C_2 = 17, C_n = 6C_{n-1} - C_{n-2}`.
    LucasBalancing,
    /// `a_n = p*n - r`, `0 <= r < p`.
    Arithmetic {
        p: Nat,
        r: Nat,
    },
    /// `a_n = n^k`.
    KthPower {
        k: u32,
    },
    /// `a_n = a*ratio^(n-1) + 1`.
    ShiftedGeometric {
        a: Nat,
        ratio: Nat,
    },
    Naturals,
    /// `a_n = 2n - 1`.
    Odds,
    PowerRecurrence(PowerRecurrence),
    /// `a_n = (n!)^(n!)`.
    FactorialPower,
    Explicit {
        terms: Vec<Nat>,
    },
}

impl SequenceSpec {
    pub fn fibonacci() -> Self {
        SequenceSpec::FibonacciPower { power: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::FibonacciPower { power } if *power == 0 => domain("Fibonacci power must be >= 1"),
            SequenceSpec::FibonacciLike { t1, t2 } => {
                if t1.is_zero() || t2.is_zero() {
                    return domain("Fibonacci-like initial terms must be >= 1");
                }
                if !gcd(t1, t2)?.is_one() {
                    return domain(format!(
                        "Fibonacci-like initial terms must be coprime, gcd({t1}, {t2}) != 1"
                    ));
                }
                Ok(())
            }
            SequenceSpec::Arithmetic { p, r } => {
                if p.is_zero() {
                    return domain("arithmetic step p must be >= 1");
                }
                if r >= p {
                    return domain(format!("arithmetic offset must satisfy 0 <= r < p, got r={r}, p={p}"));
                }
                Ok(())
            }
            SequenceSpec::KthPower { k } if *k == 0 => domain("power k must be >= 1"),
            SequenceSpec::ShiftedGeometric { ratio, .. } if *ratio < nat(2) => domain("geometric ratio must be >= 2"),
            SequenceSpec::PowerRecurrence(rec) => rec.validate(),
            SequenceSpec::Explicit { terms } => {
                if terms.is_empty() {
                    domain("explicit sequence must have at least one term")
                } else if terms.iter().any(Zero::is_zero) {
                    domain("explicit sequence terms must be >= 1")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Whether exact terms can be materialized over long windows. Families
    /// with super-exponential growth are evaluated through residues instead.
    pub fn has_tractable_terms(&self) -> bool {
        match self {
            SequenceSpec::FactorialPower => false,
            SequenceSpec::PowerRecurrence(rec) => rec.is_linear(),
            _ => true,
        }
    }

    /// The defining recurrence with consecutive terms as state, when the
    /// family has one.
    pub fn recurrence(&self) -> Option<PowerRecurrence> {
        let linear = |coeffs: Vec<i64>, init: Vec<Nat>| PowerRecurrence {
            exponents: vec![1; coeffs.len()],
            coeffs: coeffs.into_iter().map(Int::from).collect(),
            init,
        };
        match self {
            SequenceSpec::FibonacciPower { power } => Some(fibonacci_power_recurrence(*power)),
            SequenceSpec::FibonacciLike { t1, t2 } => Some(linear(vec![1, 1], vec![t1.clone(), t2.clone()])),
            SequenceSpec::Balancing => Some(linear(vec![6, -1], vec![nat(1), nat(6)])),
            SequenceSpec::LucasBalancing => Some(linear(vec![6, -1], vec![nat(3), nat(17)])),
            SequenceSpec::Arithmetic { p, r } => Some(linear(vec![2, -1], vec![p - r, (p << 1u32) - r])),
            SequenceSpec::Naturals => Some(linear(vec![2, -1], vec![nat(1), nat(2)])),
            SequenceSpec::Odds => Some(linear(vec![2, -1], vec![nat(1), nat(3)])),
            SequenceSpec::KthPower { k } => {
                // finite differences of order k+1 vanish on a degree-k polynomial
                let order = *k as u64 + 1;
                let coeffs = (1..=order)
                    .map(|j| {
                        let c = Int::from(binomial(order, j));
                        if j % 2 == 1 {
                            c
                        } else {
                            -c
                        }
                    })
                    .collect();
                let init = (1..=order).map(|n| Pow::pow(nat(n), *k)).collect();
                Some(PowerRecurrence {
                    coeffs,
                    exponents: vec![1; order as usize],
                    init,
                })
            }
            SequenceSpec::ShiftedGeometric { a, ratio } => Some(PowerRecurrence {
                coeffs: vec![Int::from(ratio + 1u32), -Int::from(ratio.clone())],
                exponents: vec![1, 1],
                init: vec![a + 1u32, a * ratio + 1u32],
            }),
            SequenceSpec::PowerRecurrence(rec) => Some(rec.clone()),
            SequenceSpec::FactorialPower | SequenceSpec::Explicit { .. } => None,
        }
    }
}

/// Fibonacci numbers by fast doubling: returns `(F_n, F_{n+1})`.
pub fn fibonacci_pair(n: u64) -> (Nat, Nat) {
    if n == 0 {
        return (Nat::zero(), Nat::one());
    }
    let (a, b) = fibonacci_pair(n / 2);
    // F_2k = F_k (2F_{k+1} - F_k), F_2k+1 = F_k^2 + F_{k+1}^2
    let c = &a * ((&b << 1u32) - &a);
    let d = &a * &a + &b * &b;
    if n.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn fibonacci(n: u64) -> Nat {
    fibonacci_pair(n).0
}

pub(crate) fn binomial(n: u64, k: u64) -> Nat {
    let mut acc = Nat::one();
    for i in 0..k {
        acc = acc * nat(n - i) / nat(i + 1);
    }
    acc
}

/// Fibonomial coefficient `F_n F_{n-1} ... F_{n-k+1} / (F_1 ... F_k)`.
fn fibonomial(n: u64, k: u64) -> Nat {
    let num: Nat = (0..k).map(|l| fibonacci(n - l)).product();
    let den: Nat = (1..=k).map(fibonacci).product();
    num / den
}

/// `F_n^i` satisfies a linear recurrence of order `i + 1` whose coefficients
/// are signed Fibonomial coefficients.
fn fibonacci_power_recurrence(power: u32) -> PowerRecurrence {
    let order = power as u64 + 1;
    let coeffs = (1..=order)
        .map(|j| {
            let c = Int::from(fibonomial(order, j));
            // a_n = -sum_j (-1)^{j(j+1)/2} [order, j]_F a_{n-j}
            if (j * (j + 1) / 2) % 2 == 0 {
                -c
            } else {
                c
            }
        })
        .collect();
    let init = (1..=order).map(|n| Pow::pow(fibonacci(n), power)).collect();
    PowerRecurrence {
        coeffs,
        exponents: vec![1; order as usize],
        init,
    }
}

fn check_index(n: u64) -> Result<()> {
    if n == 0 {
        return domain("sequence indices start at n = 1");
    }
    Ok(())
}

/// Exact `n`-th term.
pub fn term(spec: &SequenceSpec, n: u64) -> Result<Nat> {
    Ok(terms(spec, n, 1)?.pop().expect("one term requested"))
}

/// Exact terms `a_start, ..., a_{start+count-1}`.
pub fn terms(spec: &SequenceSpec, start: u64, count: usize) -> Result<Vec<Nat>> {
    spec.validate()?;
    check_index(start)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = start + count as u64 - 1;
    let closed = |f: &dyn Fn(u64) -> Result<Nat>| (start..=last).map(f).collect::<Result<Vec<_>>>();
    match spec {
        SequenceSpec::FibonacciPower { power } => {
            let (mut a, mut b) = fibonacci_pair(start);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(Pow::pow(&a, *power));
                let next = &a + &b;
                a = std::mem::replace(&mut b, next);
            }
            Ok(out)
        }
        SequenceSpec::FibonacciLike { .. }
        | SequenceSpec::Balancing
        | SequenceSpec::LucasBalancing
        | SequenceSpec::PowerRecurrence(_) => {
            let rec = spec.recurrence().expect("recurrence family");
            recurrence_terms(&rec, start, count)
        }
        SequenceSpec::Arithmetic { p, r } => closed(&|n| Ok(p * n - r)),
        SequenceSpec::KthPower { k } => closed(&|n| Ok(Pow::pow(nat(n), *k))),
        SequenceSpec::ShiftedGeometric { a, ratio } => closed(&|n| {
            let e = n - 1;
            if ratio.bits() * e > MAX_TERM_BITS {
                return Err(Error::Resource(format!(
                    "geometric term at n = {n} exceeds {MAX_TERM_BITS} bits; use term_mod"
                )));
            }
            Ok(a * Pow::pow(ratio, e) + 1u32)
        }),
        SequenceSpec::Naturals => closed(&|n| Ok(nat(n))),
        SequenceSpec::Odds => closed(&|n| Ok(nat(2 * n - 1))),
        SequenceSpec::FactorialPower => closed(&|n| {
            if n > FACTORIAL_POWER_MAX_N {
                return Err(Error::Resource(format!(
                    "(n!)^(n!) is only materialized for n <= {FACTORIAL_POWER_MAX_N}, got n = {n}; use term_mod"
                )));
            }
            let f: u64 = (1..=n).product();
            Ok(Pow::pow(nat(f), f))
        }),
        SequenceSpec::Explicit { terms } => closed(&|n| {
            terms.get(n as usize - 1).cloned().ok_or_else(|| {
                Error::Domain(format!(
                    "explicit sequence has only {} terms, asked for n = {n}",
                    terms.len()
                ))
            })
        }),
    }
}

/// Iterates a recurrence exactly, rejecting nonpositive terms.
pub fn recurrence_terms(rec: &PowerRecurrence, start: u64, count: usize) -> Result<Vec<Nat>> {
    rec.validate()?;
    check_index(start)?;
    let s = rec.order();
    let last = start as usize + count - 1;
    let mut window: Vec<Nat> = rec.init.clone();
    let mut out = Vec::with_capacity(count);
    for (i, t) in rec.init.iter().enumerate() {
        let n = i + 1;
        if n >= start as usize && n <= last {
            out.push(t.clone());
        }
    }
    for n in s + 1..=last {
        let next = rec.next_exact(&window)?;
        if next.sign() != Sign::Plus {
            return domain(format!("recurrence term a_{n} = {next} is not positive"));
        }
        let next = to_nat(next);
        if n >= start as usize {
            out.push(next.clone());
        }
        window.remove(0);
        window.push(next);
    }
    Ok(out)
}

/// Residues `a_n mod m` for `n` in `start..start+count`, never materializing
/// the full terms of fast-growing families.
pub fn term_residues(spec: &SequenceSpec, start: u64, count: usize, m: &Nat) -> Result<Vec<Nat>> {
    spec.validate()?;
    check_index(start)?;
    if m.is_zero() {
        return domain("modulus must be >= 1");
    }
    match (spec, m.to_u64()) {
        (SequenceSpec::PowerRecurrence(rec), Some(m64)) => {
            let s = rec.order();
            let mut window: Vec<u64> = rec.init.iter().map(|t| (t % m).to_u64().unwrap()).collect();
            let last = start as usize + count - 1;
            let mut out = Vec::with_capacity(count);
            for (i, t) in window.iter().enumerate() {
                if i + 1 >= start as usize && i < last {
                    out.push(nat(*t));
                }
            }
            for n in s + 1..=last {
                let next = rec.next_mod(&window, m64);
                if n >= start as usize {
                    out.push(nat(next));
                }
                window.remove(0);
                window.push(next);
            }
            Ok(out)
        }
        _ => (start..start + count as u64).map(|n| term_mod(spec, n, m)).collect(),
    }
}

pub(crate) fn mod_pow_u64(base: u64, exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// The 1-based index from which the window is strictly increasing.
pub fn increasing_from(terms: &[Nat]) -> usize {
    let mut from = 1;
    for i in 1..terms.len() {
        if terms[i] <= terms[i - 1] {
            from = i + 1;
        }
    }
    from
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[u64]) -> Vec<Nat> {
        v.iter().copied().map(nat).collect()
    }

    #[test]
    fn term_examples() {
        assert_eq!(term(&SequenceSpec::Balancing, 3).unwrap(), nat(35));
        assert_eq!(term(&SequenceSpec::fibonacci(), 7).unwrap(), nat(13));
        let fl = SequenceSpec::FibonacciLike { t1: nat(1), t2: nat(2) };
        assert_eq!(term(&fl, 4).unwrap(), nat(5));
        assert_eq!(term(&SequenceSpec::KthPower { k: 3 }, 1).unwrap(), nat(1));
        assert_eq!(term(&SequenceSpec::LucasBalancing, 3).unwrap(), nat(99));
    }

    #[test]
    fn first_terms_of_each_family() {
        assert_eq!(
            terms(&SequenceSpec::fibonacci(), 1, 8).unwrap(),
            ns(&[1, 1, 2, 3, 5, 8, 13, 21])
        );
        assert_eq!(
            terms(&SequenceSpec::FibonacciPower { power: 2 }, 3, 3).unwrap(),
            ns(&[4, 9, 25])
        );
        assert_eq!(
            terms(&SequenceSpec::Balancing, 1, 5).unwrap(),
            ns(&[1, 6, 35, 204, 1189])
        );
        assert_eq!(
            terms(&SequenceSpec::LucasBalancing, 1, 4).unwrap(),
            ns(&[3, 17, 99, 577])
        );
        let arith = SequenceSpec::Arithmetic { p: nat(7), r: nat(2) };
        assert_eq!(terms(&arith, 1, 3).unwrap(), ns(&[5, 12, 19]));
        let geo = SequenceSpec::ShiftedGeometric {
            a: nat(3),
            ratio: nat(4),
        };
        assert_eq!(terms(&geo, 1, 3).unwrap(), ns(&[4, 13, 49]));
        assert_eq!(terms(&SequenceSpec::Odds, 2, 3).unwrap(), ns(&[3, 5, 7]));
        assert_eq!(terms(&SequenceSpec::FactorialPower, 1, 3).unwrap(), ns(&[1, 4, 46656]));
    }

    #[test]
    fn factorial_power_cap() {
        assert!(term(&SequenceSpec::FactorialPower, 6).is_ok());
        assert!(matches!(
            term(&SequenceSpec::FactorialPower, 7),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn index_zero_rejected() {
        assert!(matches!(term(&SequenceSpec::Naturals, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn validation() {
        let bad = SequenceSpec::FibonacciLike { t1: nat(4), t2: nat(6) };
        assert!(term(&bad, 1).is_err());
        let bad = SequenceSpec::Arithmetic { p: nat(3), r: nat(3) };
        assert!(term(&bad, 1).is_err());
        let neg = SequenceSpec::PowerRecurrence(PowerRecurrence {
            coeffs: vec![Int::from(1), Int::from(-3)],
            exponents: vec![1, 1],
            init: ns(&[1, 1]),
        });
        assert!(matches!(term(&neg, 3), Err(Error::Domain(_))));
        let short = SequenceSpec::Explicit { terms: ns(&[4, 5]) };
        assert!(term(&short, 3).is_err());
    }

    #[test]
    fn recurrences_reproduce_terms() {
        let specs = [
            SequenceSpec::fibonacci(),
            SequenceSpec::FibonacciPower { power: 2 },
            SequenceSpec::FibonacciPower { power: 3 },
            SequenceSpec::FibonacciPower { power: 5 },
            SequenceSpec::FibonacciLike { t1: nat(3), t2: nat(5) },
            SequenceSpec::Balancing,
            SequenceSpec::LucasBalancing,
            SequenceSpec::Arithmetic { p: nat(7), r: nat(2) },
            SequenceSpec::KthPower { k: 1 },
            SequenceSpec::KthPower { k: 4 },
            SequenceSpec::ShiftedGeometric {
                a: nat(3),
                ratio: nat(4),
            },
            SequenceSpec::Naturals,
            SequenceSpec::Odds,
        ];
        for spec in specs {
            let rec = spec.recurrence().unwrap();
            let direct = terms(&spec, 1, 40).unwrap();
            let via_rec = recurrence_terms(&rec, 1, 40).unwrap();
            assert_eq!(direct, via_rec, "{spec:?}");
        }
        assert!(SequenceSpec::FactorialPower.recurrence().is_none());
    }

    #[test]
    fn balancing_recurrence_fidelity() {
        for spec in [SequenceSpec::Balancing, SequenceSpec::LucasBalancing] {
            let t = terms(&spec, 1, 30).unwrap();
            for n in 2..30 {
                assert_eq!(&t[n], &(&t[n - 1] * 6u32 - &t[n - 2]));
            }
        }
    }

    #[test]
    fn fibonacci_like_closed_form_and_coprimality() {
        for (t1, t2) in [(1u64, 2u64), (2, 3), (3, 4), (7, 5), (1, 1)] {
            let spec = SequenceSpec::FibonacciLike {
                t1: nat(t1),
                t2: nat(t2),
            };
            let t = terms(&spec, 1, 41).unwrap();
            for n in 3..=40u64 {
                let expect = fibonacci(n - 2) * t1 + fibonacci(n - 1) * t2;
                assert_eq!(t[n as usize - 1], expect);
            }
            for n in 0..40 {
                assert!(gcd(&t[n], &t[n + 1]).unwrap().is_one());
            }
        }
    }

    #[test]
    fn slice_from_later_start() {
        let all = terms(&SequenceSpec::Balancing, 1, 20).unwrap();
        assert_eq!(terms(&SequenceSpec::Balancing, 5, 10).unwrap(), all[4..14].to_vec());
        let all = terms(&SequenceSpec::fibonacci(), 1, 20).unwrap();
        assert_eq!(terms(&SequenceSpec::fibonacci(), 7, 5).unwrap(), all[6..11].to_vec());
    }

    #[test]
    fn increasing_from_index() {
        assert_eq!(increasing_from(&ns(&[1, 1, 2, 3, 5])), 2);
        assert_eq!(increasing_from(&ns(&[1, 2, 3])), 1);
        assert_eq!(increasing_from(&ns(&[5, 4, 3])), 3);
    }
}
