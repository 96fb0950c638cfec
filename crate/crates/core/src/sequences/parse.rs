//! Canonical text form of [`SequenceSpec`]:
//!
//! | text | family |
//! |------|--------|
//! | `fib`, `fib^2` | Fibonacci powers |
//! | `fiblike:3,5` | Fibonacci-like with `t_1 = 3, t_2 = 5` |
//! | `bal`, `lucasbal` | balancing / Lucas-balancing |
//! | `arith:7,2` | `7n - 2` |
//! | `n^3` | cubes |
//! | `geo:3,4` | `3*4^(n-1) + 1` |
//! | `nat`, `odds` | naturals / odd numbers |
//! | `powrec:c=1,1;t=1,1;init=1,1` | power recurrence |
//! | `factpow` | `(n!)^(n!)` |
//! | `list:1,2,3` | explicit terms |

use std::fmt;
use std::str::FromStr;

use super::{PowerRecurrence, SequenceSpec};
use crate::arith::{Int, Nat};
use crate::error::Error;

fn parse_err(s: &str, why: impl fmt::Display) -> Error {
    Error::Parse(format!("bad sequence spec `{s}`: {why}"))
}

fn parse_list<T: FromStr>(s: &str, field: &str, whole: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|_| parse_err(whole, format!("`{p}` in {field} is not a valid integer")))
        })
        .collect()
}

fn parse_pair(s: &str, whole: &str) -> Result<(Nat, Nat), Error> {
    let v: Vec<Nat> = parse_list(s, "arguments", whole)?;
    match <[Nat; 2]>::try_from(v) {
        Ok([x, y]) => Ok((x, y)),
        Err(_) => Err(parse_err(whole, "expected exactly two arguments")),
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let spec = match t {
            "fib" => SequenceSpec::FibonacciPower { power: 1 },
            "bal" | "balancing" => SequenceSpec::Balancing,
            "lucasbal" | "lucas-balancing" => SequenceSpec::LucasBalancing,
            "nat" => SequenceSpec::Naturals,
            "odds" => SequenceSpec::Odds,
            "factpow" => SequenceSpec::FactorialPower,
            _ => {
                if let Some(p) = t.strip_prefix("fib^") {
                    let power = p.parse().map_err(|_| parse_err(t, "power must be an integer"))?;
                    SequenceSpec::FibonacciPower { power }
                } else if let Some(k) = t.strip_prefix("n^") {
                    let k = k.parse().map_err(|_| parse_err(t, "exponent must be an integer"))?;
                    SequenceSpec::KthPower { k }
                } else if let Some(rest) = t.strip_prefix("fiblike:") {
                    let (t1, t2) = parse_pair(rest, t)?;
                    SequenceSpec::FibonacciLike { t1, t2 }
                } else if let Some(rest) = t.strip_prefix("arith:") {
                    let (p, r) = parse_pair(rest, t)?;
                    SequenceSpec::Arithmetic { p, r }
                } else if let Some(rest) = t.strip_prefix("geo:") {
                    let (a, ratio) = parse_pair(rest, t)?;
                    SequenceSpec::ShiftedGeometric { a, ratio }
                } else if let Some(rest) = t.strip_prefix("list:") {
                    SequenceSpec::Explicit {
                        terms: parse_list(rest, "terms", t)?,
                    }
                } else if let Some(rest) = t.strip_prefix("powrec:") {
                    let mut coeffs = None;
                    let mut exponents = None;
                    let mut init = None;
                    for part in rest.split(';') {
                        let (key, val) = part
                            .split_once('=')
                            .ok_or_else(|| parse_err(t, format!("`{part}` is not key=value")))?;
                        match key.trim() {
                            "c" => coeffs = Some(parse_list::<Int>(val, "c", t)?),
                            "t" => exponents = Some(parse_list::<u32>(val, "t", t)?),
                            "init" => init = Some(parse_list::<Nat>(val, "init", t)?),
                            other => return Err(parse_err(t, format!("unknown key `{other}`"))),
                        }
                    }
                    let coeffs = coeffs.ok_or_else(|| parse_err(t, "missing c="))?;
                    let exponents = exponents.unwrap_or_else(|| vec![1; coeffs.len()]);
                    let init = init.ok_or_else(|| parse_err(t, "missing init="))?;
                    SequenceSpec::PowerRecurrence(PowerRecurrence {
                        coeffs,
                        exponents,
                        init,
                    })
                } else {
                    return Err(parse_err(t, "unknown family"));
                }
            }
        };
        spec.validate().map_err(|e| parse_err(t, e))?;
        Ok(spec)
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::FibonacciPower { power: 1 } => write!(f, "fib"),
            SequenceSpec::FibonacciPower { power } => write!(f, "fib^{power}"),
            SequenceSpec::FibonacciLike { t1, t2 } => write!(f, "fiblike:{t1},{t2}"),
            SequenceSpec::Balancing => write!(f, "bal"),
            SequenceSpec::LucasBalancing => write!(f, "lucasbal"),
            SequenceSpec::Arithmetic { p, r } => write!(f, "arith:{p},{r}"),
            SequenceSpec::KthPower { k } => write!(f, "n^{k}"),
            SequenceSpec::ShiftedGeometric { a, ratio } => write!(f, "geo:{a},{ratio}"),
            SequenceSpec::Naturals => write!(f, "nat"),
            SequenceSpec::Odds => write!(f, "odds"),
            SequenceSpec::PowerRecurrence(rec) => write!(
                f,
                "powrec:c={};t={};init={}",
                join(&rec.coeffs),
                join(&rec.exponents),
                join(&rec.init)
            ),
            SequenceSpec::FactorialPower => write!(f, "factpow"),
            SequenceSpec::Explicit { terms } => write!(f, "list:{}", join(terms)),
        }
    }
}
