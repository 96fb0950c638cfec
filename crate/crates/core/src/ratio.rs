//! Exact nonnegative rationals in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{decimal, nat, Nat};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    #[serde(with = "decimal")]
    num: Nat,
    #[serde(with = "decimal")]
    den: Nat,
}

impl Ratio {
    pub fn new(num: Nat, den: Nat) -> Result<Self> {
        if den.is_zero() {
            return domain("ratio denominator must be >= 1");
        }
        let g = num.gcd(&den);
        Ok(Ratio {
            num: num / &g,
            den: den / &g,
        })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Ratio::new(nat(num), nat(den))
    }

    pub fn zero() -> Self {
        Ratio {
            num: nat(0),
            den: nat(1),
        }
    }

    pub fn one() -> Self {
        Ratio {
            num: nat(1),
            den: nat(1),
        }
    }

    pub fn numer(&self) -> &Nat {
        &self.num
    }

    pub fn denom(&self) -> &Nat {
        &self.den
    }

    pub fn abs_diff(&self, other: &Ratio) -> Ratio {
        let l = &self.num * &other.den;
        let r = &other.num * &self.den;
        let diff = if l >= r { l - r } else { r - l };
        Ratio::new(diff, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn to_f64(&self) -> f64 {
        // exact enough for display; comparisons never go through f64
        let (n, d) = (
            self.num.to_f64().unwrap_or(f64::NAN),
            self.den.to_f64().unwrap_or(f64::NAN),
        );
        n / d
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad ratio `{s}`, expected NUM/DEN or an integer"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: Nat = n.parse().map_err(|_| bad())?;
        let d: Nat = d.parse().map_err(|_| bad())?;
        Ratio::new(n, d).map_err(|_| bad())
    }
}
