//! Closed-form solutions for Fibonacci and Fibonacci-like pairs.
//!
//! Each constructor re-checks its output against the split equation and
//! reports an invariant violation instead of returning a wrong triple.

use num_bigint::Sign;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fibonacci;
use crate::arith::{decimal, gcd, mod_inverse, nat, to_nat, Int, Nat};
use crate::error::{domain, invariant, Result};
use crate::split::{SplitInstance, SplitSolution};

/// The unique odd `r` in `[1, u]` with `v*r = sign (mod u)` for odd `u`, or
/// modulo `2u` for even `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddrResult {
    #[serde(with = "decimal")]
    pub r: Nat,
    /// `+1` or `-1`.
    pub sign: i8,
}

pub fn oddr(u: &Nat, v: &Nat) -> Result<OddrResult> {
    if u.is_zero() || v.is_zero() {
        return domain(format!("oddr needs u, v >= 1, got ({u}, {v})"));
    }
    if !gcd(u, v)?.is_one() {
        return domain(format!("oddr needs gcd(u, v) = 1, got ({u}, {v})"));
    }
    if u.is_one() {
        // everything is congruent mod 1; +1 by convention
        return Ok(OddrResult { r: Nat::one(), sign: 1 });
    }
    let modulus = if u.is_odd() { u.clone() } else { u << 1u32 };
    let w = mod_inverse(v, &modulus)?;
    // candidates are w and modulus - w; exactly one is odd and in [1, u]
    for (r, sign) in [(w.clone(), 1i8), (&modulus - &w, -1i8)] {
        if r.is_odd() && !r.is_zero() && &r <= u {
            return Ok(OddrResult { r, sign });
        }
    }
    invariant(format!("no odd r in [1, {u}] with {v}*r = ±1"))
}

fn signed_fib(n: u64) -> Int {
    Int::from(fibonacci(n))
}

/// The candidate pair `(Phi, Psi)` for `variant` 0 (no leading 1) or 1.
///
/// Defined for even `n >= 2` and `u != 0`. The two inner quotients must be
/// integers; the outer halving may leave a half-integer, which is returned
/// as is so callers can reject it.
pub fn phi_psi(u: &Int, v: &Int, n: u64, r: &Int, variant: u8) -> Result<(BigRational, BigRational)> {
    if !n.is_multiple_of(2) || n < 2 {
        return domain(format!("phi_psi needs even n >= 2, got {n}"));
    }
    if u.is_zero() {
        return domain("phi_psi needs u != 0");
    }
    let (first_num, second_num): (Int, Int) = match variant {
        0 => ((u - r) * v - 1, v * r + 1),
        1 => ((u - r) * v + 1, v * r - 1),
        _ => return domain(format!("variant must be 0 or 1, got {variant}")),
    };
    let (first, rem) = first_num.div_rem(u);
    if !rem.is_zero() {
        return domain(format!(
            "inner fraction ((u - r)v {} 1)/u = {first_num}/{u} is not an integer",
            if variant == 0 { "-" } else { "+" }
        ));
    }
    let (second, rem) = second_num.div_rem(u);
    if !rem.is_zero() {
        return domain(format!(
            "inner fraction (vr {} 1)/u = {second_num}/{u} is not an integer",
            if variant == 0 { "+" } else { "-" }
        ));
    }
    let two = Int::from(2);
    let phi = (u - r) * signed_fib(n - 1) + first * signed_fib(n) - 1;
    let psi = r * signed_fib(n - 2) + second * signed_fib(n - 1) - 1;
    Ok((BigRational::new(phi, two.clone()), BigRational::new(psi, two)))
}

/// `(t_n, t_{n+1})` for the Fibonacci-like sequence with `t_1 = u`, `t_2 = v`.
pub fn fiblike_pair(u: &Nat, v: &Nat, n: u64) -> (Nat, Nat) {
    let t = |k: u64| -> Nat {
        match k {
            1 => u.clone(),
            _ => fibonacci(k - 2) * u + fibonacci(k - 1) * v,
        }
    };
    (t(n), t(n + 1))
}

fn nonneg_integer(q: &BigRational, what: &str) -> Result<Nat> {
    if !q.is_integer() {
        return invariant(format!("{what} = {q} is not an integer"));
    }
    let v = q.to_integer();
    if v.sign() == Sign::Minus {
        return invariant(format!("{what} = {v} is negative"));
    }
    Ok(to_nat(v))
}

fn checked(a: &Nat, b: &Nat, sol: SplitSolution, label: &str) -> Result<SplitSolution> {
    let inst = SplitInstance::new(a, b)?;
    if !inst.g.is_one() {
        return invariant(format!("{label}: pair ({a}, {b}) is not coprime"));
    }
    if !inst.satisfied_by(sol.delta, &sol.x, &sol.y) {
        return invariant(format!("{label}: {sol} does not solve the equation for ({a}, {b})"));
    }
    Ok(sol)
}

/// Solution for `(t_n, t_{n+1})` when `n = 4 (mod 6)`, via [`oddr`] and the
/// sign-based choice between the two candidate pairs.
pub fn closed_form_mod6_4(u: &Nat, v: &Nat, n: u64) -> Result<SplitSolution> {
    if n % 6 != 4 {
        return domain(format!("closed_form_mod6_4 needs n = 4 (mod 6), got n = {n}"));
    }
    let odd = oddr(u, v)?;
    let variant = match odd.sign {
        1 => 1,
        _ => {
            if u.is_odd() && *u < nat(3) {
                return invariant("sign -1 for u = 1 contradicts the oddr convention");
            }
            0
        }
    };
    let (phi, psi) = phi_psi(
        &Int::from(u.clone()),
        &Int::from(v.clone()),
        n,
        &Int::from(odd.r.clone()),
        variant,
    )
    .map_err(|e| crate::Error::Invariant(format!("selected candidate undefined: {e}")))?;
    let x = nonneg_integer(&phi, "Phi")?;
    let y = nonneg_integer(&psi, "Psi")?;
    let (tn, tn1) = fiblike_pair(u, v, n);
    checked(&tn, &tn1, SplitSolution::new(variant, x, y), "closed_form_mod6_4")
}

/// Solution for `(F_n, F_{n+1})` when `n = 0` or `4 (mod 6)`, `n >= 6`.
pub fn fib_identity_solution(n: u64) -> Result<SplitSolution> {
    if n < 6 || (!n.is_multiple_of(6) && n % 6 != 4) {
        return domain(format!(
            "fib_identity_solution needs n = 0 or 4 (mod 6) with n >= 6, got {n}; use solve_split"
        ));
    }
    let half = |v: Nat| (v - 1u32) >> 1u32;
    let sol = if n.is_multiple_of(6) {
        let x = half(fibonacci(n - 1));
        SplitSolution::new(0, x.clone(), x)
    } else {
        SplitSolution::new(1, half(fibonacci(n)), half(fibonacci(n - 2)))
    };
    checked(&fibonacci(n), &fibonacci(n + 1), sol, "fib_identity_solution")
}

pub fn fib_square_pair(n: u64) -> (Nat, Nat) {
    let (f, g) = super::fibonacci_pair(n);
    (&f * &f, &g * &g)
}

/// Solution for `(F_n^2, F_{n+1}^2)` when `n = 0, 2, 3, 5 (mod 6)`.
pub fn fib_square_solution(n: u64) -> Result<SplitSolution> {
    if n < 2 || ![0, 2, 3, 5].contains(&(n % 6)) {
        return domain(format!(
            "fib_square_solution needs n = 0, 2, 3, 5 (mod 6) with n >= 2, got {n}; use solve_split"
        ));
    }
    let (a, b) = fib_square_pair(n);
    let prev = fibonacci(n - 1);
    let prev_sq = &prev * &prev;
    let x = &a - ((&prev_sq + 1u32) >> 1u32);
    let y = (prev_sq - 1u32) >> 1u32;
    checked(&a, &b, SplitSolution::new(0, x, y), "fib_square_solution")
}

pub fn fib_cube_pair(m: u64) -> (Nat, Nat) {
    let (f, g) = super::fibonacci_pair(2 * m - 1);
    (&f * &f * &f, &g * &g * &g)
}

/// Solution for `(F_{2m-1}^3, F_{2m}^3)`, `m >= 2`, from the alternating and
/// plain sums of Fibonacci cubes.
pub fn fib_cube_solution(m: u64) -> Result<SplitSolution> {
    if m < 2 {
        return domain(format!("fib_cube_solution needs m >= 2, got {m}"));
    }
    let cube = |k: u64| {
        let f = fibonacci(k);
        &f * &f * &f
    };
    let mut alternating = Int::zero();
    for k in 1..=2 * m - 1 {
        let c = Int::from(cube(k));
        if k % 2 == 1 {
            alternating += c;
        } else {
            alternating -= c;
        }
    }
    if alternating.is_negative() {
        return invariant(format!("alternating cube sum is negative for m = {m}"));
    }
    let y: Nat = (2..=2 * m - 2).map(cube).sum();
    let (a, b) = fib_cube_pair(m);
    checked(
        &a,
        &b,
        SplitSolution::new(0, to_nat(alternating), y),
        "fib_cube_solution",
    )
}
