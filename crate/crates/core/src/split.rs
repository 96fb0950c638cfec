//! The split equations `delta + a*x + b*y = (a-1)(b-1)/2`, `delta` in `{0, 1}`.
//!
//! Every entry point first reduces `(a, b)` by `g = gcd(a, b)`; the classifier
//! [`gamma`] is the value of `delta` for which the reduced equation has a
//! nonnegative solution. For coprime pairs exactly one `delta` works and the
//! solution is unique, which [`brute_force_split`] checks by enumeration.

use num_integer::Integer;
use num_traits::{CheckedSub, One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{decimal, gcd, is_odd, mod_inverse, nat, Nat};
use crate::error::{domain, invariant, Error, Result};

/// Default iteration budget for the enumeration oracle.
pub const DEFAULT_ORACLE_CAP: u64 = 10_000_000;

/// A normalized instance: the reduced pair and its right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitInstance {
    pub a: Nat,
    pub b: Nat,
    pub g: Nat,
    pub a_red: Nat,
    pub b_red: Nat,
    pub rhs: Nat,
}

impl SplitInstance {
    pub fn new(a: &Nat, b: &Nat) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return domain(format!("split instance needs a, b >= 1, got ({a}, {b})"));
        }
        let g = gcd(a, b)?;
        let a_red = a / &g;
        let b_red = b / &g;
        // coprime reduced pair: at least one factor is odd, so the product is even
        let prod = (&a_red - 1u32) * (&b_red - 1u32);
        debug_assert!(prod.is_even());
        let rhs = prod >> 1;
        Ok(SplitInstance {
            a: a.clone(),
            b: b.clone(),
            g,
            a_red,
            b_red,
            rhs,
        })
    }

    /// Whether `delta + a_red*x + b_red*y == rhs`.
    pub fn satisfied_by(&self, delta: u8, x: &Nat, y: &Nat) -> bool {
        Nat::from(delta) + &self.a_red * x + &self.b_red * y == self.rhs
    }
}

/// A nonnegative solution `(delta, x, y)` of the reduced split equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSolution {
    pub delta: u8,
    #[serde(with = "decimal")]
    pub x: Nat,
    #[serde(with = "decimal")]
    pub y: Nat,
    pub unique: bool,
}

impl SplitSolution {
    pub fn new(delta: u8, x: Nat, y: Nat) -> Self {
        SplitSolution {
            delta,
            x,
            y,
            unique: true,
        }
    }

    /// Equality of `(delta, x, y)`, ignoring the uniqueness flag.
    pub fn same_triple(&self, other: &SplitSolution) -> bool {
        self.delta == other.delta && self.x == other.x && self.y == other.y
    }
}

impl std::fmt::Display for SplitSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "δ={} x={} y={}", self.delta, self.x, self.y)
    }
}

/// Inverse of `a/g` modulo `b/g`; undefined when `b/g = 1`.
pub fn theta(a: &Nat, b: &Nat) -> Result<Nat> {
    let g = gcd(a, b)?;
    let b_red = b / &g;
    if b_red.is_one() {
        return domain(format!(
            "theta({a}, {b}) is undefined: b/gcd(a,b) = 1 (take the divisibility branch)"
        ));
    }
    mod_inverse(&(a / &g), &b_red)
}

/// The classifier: `0` if the reduced equation without the extra `1` is
/// solvable, `1` otherwise.
///
/// Not assumed symmetric; `a` is the first coefficient of the equation.
pub fn gamma(a: &Nat, b: &Nat) -> Result<u8> {
    if a.is_zero() || b.is_zero() {
        return domain(format!("gamma needs a, b >= 1, got ({a}, {b})"));
    }
    if b.is_multiple_of(a) || a.is_multiple_of(b) {
        return Ok(0);
    }
    let g = gcd(a, b)?;
    let a_red = a / &g;
    // a does not divide b, so a_red > 1 and b_red > 1 here and theta is defined
    let parity_source = if is_odd(&a_red) { theta(b, a)? } else { theta(a, b)? };
    Ok(if is_odd(&parity_source) { 0 } else { 1 })
}

/// Convenience wrapper for small arguments.
pub fn gamma_u64(a: u64, b: u64) -> Result<u8> {
    gamma(&nat(a), &nat(b))
}

/// Solves the reduced split equation with one modular inverse.
///
/// `delta` comes from [`gamma`]; `x` is the least residue of
/// `(rhs - delta) * a_red^-1` modulo `b_red` and `y` follows exactly.
pub fn solve_split(a: &Nat, b: &Nat) -> Result<SplitSolution> {
    let inst = SplitInstance::new(a, b)?;
    solve_instance(&inst)
}

pub fn solve_instance(inst: &SplitInstance) -> Result<SplitSolution> {
    if inst.a_red.is_one() || inst.b_red.is_one() {
        return Ok(SplitSolution::new(0, Nat::zero(), Nat::zero()));
    }
    let delta = gamma(&inst.a, &inst.b)?;
    let target = match inst.rhs.checked_sub(&Nat::from(delta)) {
        Some(t) => t,
        None => return invariant(format!("rhs {} smaller than delta {delta}", inst.rhs)),
    };
    let inv = mod_inverse(&inst.a_red, &inst.b_red)?;
    let x = (&target * inv) % &inst.b_red;
    let ax = &inst.a_red * &x;
    let rest = match target.checked_sub(&ax) {
        Some(r) => r,
        None => {
            return invariant(format!(
                "solve_split({}, {}): a*x exceeds rhs - delta; gamma disagrees with the equation",
                inst.a, inst.b
            ))
        }
    };
    let (y, r) = rest.div_rem(&inst.b_red);
    if !r.is_zero() {
        return invariant(format!(
            "solve_split({}, {}): remainder not divisible by b/g",
            inst.a, inst.b
        ));
    }
    Ok(SplitSolution::new(delta, x, y))
}

/// Result of exhaustive enumeration over both equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of nonnegative solutions for `delta = 0` and `delta = 1`.
    pub counts: [u64; 2],
    /// The first solution found; `unique` is set when it is the only one
    /// across both equations.
    pub solution: Option<SplitSolution>,
}

impl OracleReport {
    pub fn exactly_one(&self) -> bool {
        self.counts == [1, 0] || self.counts == [0, 1]
    }
}

/// Enumerates `x` in `[0, (rhs - delta)/a_red]` for both values of `delta`,
/// testing divisibility of the remainder by `b_red`.
///
/// Fails with a resource error when the total iteration count would exceed
/// `cap`.
pub fn brute_force_split(a: &Nat, b: &Nat, cap: u64) -> Result<OracleReport> {
    let inst = SplitInstance::new(a, b)?;
    let mut needed = Nat::zero();
    for delta in 0..2u32 {
        if let Some(t) = inst.rhs.checked_sub(&Nat::from(delta)) {
            needed += t / &inst.a_red + 1u32;
        }
    }
    if needed > Nat::from(cap) {
        return Err(Error::Resource(format!(
            "brute force on ({a}, {b}) needs {needed} iterations, cap is {cap}"
        )));
    }

    let mut counts = [0u64; 2];
    let mut first: Option<SplitSolution> = None;
    for delta in 0..2u8 {
        let Some(target) = inst.rhs.checked_sub(&Nat::from(delta)) else {
            continue;
        };
        let mut rest = target;
        let mut x = Nat::zero();
        loop {
            let (y, r) = rest.div_rem(&inst.b_red);
            if r.is_zero() {
                counts[delta as usize] += 1;
                if first.is_none() {
                    first = Some(SplitSolution::new(delta, x.clone(), y));
                }
            }
            if rest < inst.a_red {
                break;
            }
            rest -= &inst.a_red;
            x += 1u32;
        }
    }
    let total = counts[0] + counts[1];
    let solution = first.map(|mut s| {
        s.unique = total == 1;
        s
    });
    Ok(OracleReport { counts, solution })
}
