//! Residues of sequence terms without materializing the terms.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{PowerRecurrence, SequenceSpec};
use crate::arith::{mod_floor_nat, mod_inverse, nat, Int, Nat};
use crate::error::{domain, Error, Result};

pub fn mod_pow(base: &Nat, exp: &Nat, m: &Nat) -> Result<Nat> {
    if m.is_zero() {
        return domain("modulus must be >= 1");
    }
    Ok(base.modpow(exp, m))
}

/// `(F_n mod m, F_{n+1} mod m)` by fast doubling.
fn fibonacci_pair_mod(n: u64, m: &Nat) -> (Nat, Nat) {
    if n == 0 {
        return (Nat::zero(), Nat::one() % m);
    }
    let (a, b) = fibonacci_pair_mod(n / 2, m);
    let two_b = (&b << 1u32) % m;
    let c = (&a * ((two_b + m - &a) % m)) % m;
    let d = (&a * &a + &b * &b) % m;
    if n.is_multiple_of(2) {
        (c, d)
    } else {
        let e = (&c + &d) % m;
        (d, e)
    }
}

type Matrix = Vec<Vec<Nat>>;

fn mat_mul(x: &Matrix, y: &Matrix, m: &Nat) -> Matrix {
    let s = x.len();
    let mut out = vec![vec![Nat::zero(); s]; s];
    for i in 0..s {
        for k in 0..s {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..s {
                out[i][j] += &x[i][k] * &y[k][j];
            }
        }
        for v in out[i].iter_mut() {
            *v %= m;
        }
    }
    out
}

/// `a_n mod m` for a linear recurrence via companion-matrix powering.
fn linear_term_mod(rec: &PowerRecurrence, n: u64, m: &Nat) -> Nat {
    let s = rec.order();
    if (n as usize) <= s {
        return &rec.init[n as usize - 1] % m;
    }
    // state (a_{j-s+1}, ..., a_j) -> (a_{j-s+2}, ..., a_{j+1})
    let mut step = vec![vec![Nat::zero(); s]; s];
    for i in 0..s - 1 {
        step[i][i + 1] = Nat::one() % m;
    }
    for (i, c) in rec.coeffs.iter().enumerate() {
        step[s - 1][s - 1 - i] = mod_floor_nat(c, m);
    }
    let mut power = n - s as u64;
    let mut acc: Matrix = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| if i == j { Nat::one() % m } else { Nat::zero() })
                .collect()
        })
        .collect();
    let mut base = step;
    while power > 0 {
        if power & 1 == 1 {
            acc = mat_mul(&acc, &base, m);
        }
        base = mat_mul(&base, &base, m);
        power >>= 1;
    }
    let mut out = Nat::zero();
    for (j, init) in rec.init.iter().enumerate() {
        out += &acc[s - 1][j] * (init % m);
    }
    out % m
}

fn nonlinear_term_mod(rec: &PowerRecurrence, n: u64, m: &Nat) -> Result<Nat> {
    let s = rec.order();
    if (n as usize) <= s {
        return Ok(&rec.init[n as usize - 1] % m);
    }
    let m64 = m
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("modulus {m} too large for nonlinear recurrence residues")))?;
    let mut window: Vec<u64> = rec.init.iter().map(|t| (t % m).to_u64().unwrap()).collect();
    for _ in s as u64 + 1..=n {
        let next = rec.next_mod(&window, m64);
        window.remove(0);
        window.push(next);
    }
    Ok(nat(*window.last().unwrap()))
}

/// `term(spec, n) mod m` computed on residues.
pub fn term_mod(spec: &SequenceSpec, n: u64, m: &Nat) -> Result<Nat> {
    spec.validate()?;
    if n == 0 {
        return domain("sequence indices start at n = 1");
    }
    if m.is_zero() {
        return domain("modulus must be >= 1");
    }
    let r = match spec {
        SequenceSpec::FibonacciPower { power } => {
            let (f, _) = fibonacci_pair_mod(n, m);
            f.modpow(&nat(*power as u64), m)
        }
        SequenceSpec::FibonacciLike { t1, t2 } => {
            if n == 1 {
                t1 % m
            } else {
                let (f0, f1) = fibonacci_pair_mod(n - 2, m);
                (f0 * t1 + f1 * t2) % m
            }
        }
        SequenceSpec::Balancing | SequenceSpec::LucasBalancing => linear_term_mod(&spec.recurrence().unwrap(), n, m),
        SequenceSpec::PowerRecurrence(rec) => {
            if rec.is_linear() {
                linear_term_mod(rec, n, m)
            } else {
                nonlinear_term_mod(rec, n, m)?
            }
        }
        SequenceSpec::Arithmetic { p, r } => (p * n - r) % m,
        SequenceSpec::KthPower { k } => nat(n).modpow(&nat(*k as u64), m),
        SequenceSpec::ShiftedGeometric { a, ratio } => (a * ratio.modpow(&nat(n - 1), m) + 1u32) % m,
        SequenceSpec::Naturals => nat(n) % m,
        SequenceSpec::Odds => nat(2 * n - 1) % m,
        SequenceSpec::FactorialPower => factorial_power_mod(n, m)?,
        SequenceSpec::Explicit { terms } => {
            let t = terms.get(n as usize - 1).ok_or_else(|| {
                Error::Domain(format!(
                    "explicit sequence has only {} terms, asked for n = {n}",
                    terms.len()
                ))
            })?;
            t % m
        }
    };
    Ok(r)
}

/// Prime-power factorization by trial division.
fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Exponent of `p` in `n!`.
fn legendre(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        v += q;
    }
    v
}

/// `n!`, saturating at `cap`.
fn factorial_saturating(n: u64, cap: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 2..=n {
        acc = acc.saturating_mul(i as u128);
        if acc >= cap {
            return cap;
        }
    }
    acc
}

fn factorial_mod(n: u64, m: u64) -> u64 {
    if m == 1 || n >= m {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 2..=n {
        acc = acc * i as u128 % m as u128;
    }
    acc as u64
}

/// `(n!)^(n!) mod m`, splitting `m` into prime powers.
///
/// For `p <= n` the base is divisible by `p` and the residue mod `p^e` is zero
/// as soon as the valuation `v_p(n!) * n!` reaches `e`. For `p > n` the base is
/// a unit and the exponent is reduced modulo `phi(p^e)`.
pub fn factorial_power_mod(n: u64, m: &Nat) -> Result<Nat> {
    if n == 0 {
        return domain("sequence indices start at n = 1");
    }
    let m64 = m
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("modulus {m} too large to factor")))?;
    if m64 == 0 {
        return domain("modulus must be >= 1");
    }
    if m64 == 1 {
        return Ok(Nat::zero());
    }
    let mut residue = Nat::zero();
    let mut modulus = Nat::one();
    for (p, e) in factor(m64) {
        let q = p.pow(e);
        let v = legendre(n, p);
        let r = if v > 0 {
            let exponent = factorial_saturating(n, e as u128 + 1);
            if (v as u128).saturating_mul(exponent) >= e as u128 {
                0
            } else {
                // exponent is tiny here: n! < e <= 63
                super::mod_pow_u64(factorial_mod(n, q), exponent as u64, q)
            }
        } else {
            let phi = q / p * (p - 1);
            let base = factorial_mod(n, q);
            let exponent = factorial_mod(n, phi);
            super::mod_pow_u64(base, exponent, q)
        };
        // CRT merge of residue (mod modulus) with r (mod q)
        let q_nat = nat(q);
        let inv = mod_inverse(&(&modulus % &q_nat), &q_nat).unwrap_or_else(|_| Nat::zero());
        let diff = Int::from(nat(r)) - Int::from(&residue % &q_nat);
        let t = mod_floor_nat(&(diff * Int::from(inv)), &q_nat);
        residue = &residue + &modulus * t;
        modulus *= q_nat;
    }
    Ok(residue.mod_floor(&modulus))
}
