//! Elementary arithmetic at odd primes: valuations, Legendre symbols and
//! the canonical nonresidue.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An odd prime. Construction checks primality by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 3 && p % 2 == 1 && is_prime(p) {
            Ok(OddPrime(p))
        } else {
            Err(Error::NotOddPrime(p))
        }
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    /// The set {3, 5, 7}.
    pub fn small() -> [OddPrime; 3] {
        [OddPrime(3), OddPrime(5), OddPrime(7)]
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }
}

/// Largest `e` with `p^e | n`; `Infinite` for `n = 0`.
pub fn ord_p(n: i128, p: OddPrime) -> Valuation {
    if n == 0 {
        return Valuation::Infinite;
    }
    let p = p.0 as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Splits nonzero `n` as `p^e * u` with `p ∤ u`.
pub fn split_p(n: u128, p: OddPrime) -> (u32, u128) {
    debug_assert!(n != 0);
    let p = p.0 as u128;
    let (mut n, mut e) = (n, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (e, n)
}

/// Valuation of a nonzero unsigned value.
pub fn val(n: u128, p: OddPrime) -> u32 {
    split_p(n, p).0
}

pub fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Legendre symbol of a unit, by Euler's criterion.
pub fn legendre(u: i128, p: OddPrime) -> Result<i8> {
    let pm = p.0 as i128;
    let r = u.rem_euclid(pm);
    if r == 0 {
        return Err(Error::NotUnit { value: u, p: p.0 });
    }
    let e = pow_mod(r as u128, (p.0 as u128 - 1) / 2, p.0 as u128);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Legendre symbol extended by 0 on multiples of `p`.
pub fn jacobi0(u: i128, p: OddPrime) -> i8 {
    legendre(u, p).unwrap_or(0)
}

/// Smallest positive quadratic nonresidue modulo `p`.
pub fn nonresidue(p: OddPrime) -> u64 {
    (2..p.0)
        .find(|&d| legendre(d as i128, p) == Ok(-1))
        .expect("every odd prime has a nonresidue")
}

/// Sorted distinct odd primes dividing the product of the coefficients.
pub fn odd_prime_divisors(a: &[u64]) -> Vec<OddPrime> {
    let mut out: Vec<u64> = Vec::new();
    for &c in a {
        let mut n = c;
        while n > 0 && n % 2 == 0 {
            n /= 2;
        }
        let mut d = 3u64;
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 2;
        }
        if n > 1 {
            out.push(n);
        }
    }
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(OddPrime).collect()
}

pub fn checked_pow(p: u64, e: u32) -> Result<u128> {
    (p as u128).checked_pow(e).ok_or(Error::Overflow("power"))
}
