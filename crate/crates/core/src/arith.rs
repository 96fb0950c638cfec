//! Exact integer primitives: gcd, extended Euclid, modular inverse.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// Arbitrary-precision natural number.
pub type Nat = BigUint;
/// Arbitrary-precision signed integer.
pub type Int = BigInt;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// Greatest common divisor. `gcd(0, 0)` is rejected.
pub fn gcd(a: &Nat, b: &Nat) -> Result<Nat> {
    if a.is_zero() && b.is_zero() {
        return domain("gcd(0, 0) is undefined");
    }
    Ok(a.gcd(b))
}

/// Returns `(g, s, t)` with `g = gcd(a, b) = s*a + t*b`, `g >= 0`.
pub fn extended_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// The unique `u` in `[1, m-1]` with `a*u = 1 (mod m)`.
pub fn mod_inverse(a: &Nat, m: &Nat) -> Result<Nat> {
    if *m < nat(2) {
        return domain(format!("mod_inverse requires modulus >= 2, got {m}"));
    }
    let a_red = Int::from(a % m);
    let m_int = Int::from(m.clone());
    let (g, s, _) = extended_gcd(&a_red, &m_int);
    if !g.is_one() {
        return domain(format!("{a} is not invertible modulo {m} (gcd = {g})"));
    }
    Ok(to_nat(s.mod_floor(&m_int)))
}

/// Floor-mod of a signed integer into `[0, m)`.
pub fn mod_floor_nat(v: &Int, m: &Nat) -> Nat {
    to_nat(v.mod_floor(&Int::from(m.clone())))
}

/// Conversion for values already known to be nonnegative.
pub(crate) fn to_nat(v: Int) -> Nat {
    match v.into_parts() {
        (Sign::Minus, _) => panic!("to_nat called on a negative value"),
        (_, mag) => mag,
    }
}

pub(crate) fn is_odd(n: &Nat) -> bool {
    n.is_odd()
}

/// Serde adapters writing integers as decimal strings so that consumers
/// without big-number support keep every digit.
pub mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for item in v {
                seq.serialize_element(&item.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
        where
            T: FromStr,
            T::Err: Display,
            D: Deserializer<'de>,
        {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(de::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
        where
            T: FromStr,
            T::Err: Display,
            D: Deserializer<'de>,
        {
            match Option::<String>::deserialize(d)? {
                Some(s) if !s.is_empty() => s.parse().map(Some).map_err(de::Error::custom),
                _ => Ok(None),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        // B_4 and B_6 of the balancing sequence
        assert_eq!(gcd(&nat(204), &nat(6930)).unwrap(), nat(6));
        assert_eq!(gcd(&nat(1), &nat(987654321)).unwrap(), nat(1));
        assert_eq!(gcd(&nat(21), &nat(34)).unwrap(), nat(1));
        assert_eq!(gcd(&nat(0), &nat(9)).unwrap(), nat(9));
        assert!(matches!(gcd(&nat(0), &nat(0)), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(&nat(4), &nat(3)).unwrap(), nat(1));
        assert_eq!(mod_inverse(&nat(2), &nat(3)).unwrap(), nat(2));
        for m in 2..40u64 {
            assert_eq!(mod_inverse(&nat(1), &nat(m)).unwrap(), nat(1));
        }
        assert!(mod_inverse(&nat(6), &nat(9)).is_err());
        assert!(mod_inverse(&nat(1), &nat(1)).is_err());
        assert!(mod_inverse(&nat(1), &nat(0)).is_err());
    }

    #[test]
    fn mod_inverse_matches_exhaustive_search() {
        for m in 2..60u64 {
            for a in 0..2 * m {
                let brute = (1..m).find(|u| (a * u) % m == 1);
                let fast = mod_inverse(&nat(a), &nat(m)).ok();
                assert_eq!(fast, brute.map(nat), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn extended_gcd_bezout() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, s, t) = extended_gcd(&Int::from(a), &Int::from(b));
                assert_eq!(&s * a + &t * b, g);
                assert_eq!(g, Int::from(num_integer::gcd(a, b)));
            }
        }
    }
}
