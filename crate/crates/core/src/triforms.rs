//! Global and local representation of integers by triangular forms.
//!
//! `n` is represented by `T(a)` iff `n = Σ a_i P_3(x_i)`, equivalently
//! `Σ a_i (2x_i + 1)^2 = t(n, a)`. The global side is a reachable-sum sieve
//! over the values `a_i P_3(x)`; the local side tests `t(n, a)` at the odd
//! primes dividing the coefficients after dividing out the content.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::form::Form;
use crate::localrep::{in_q, LocalProfile};
use crate::numth::odd_prime_divisors;
use serde::{Deserialize, Serialize};

/// Largest `B * k` accepted by the sieve.
pub const SIEVE_BUDGET: u128 = 4_000_000_000;

pub const DEFAULT_PSI_BOUND: u64 = 10_000;
pub const DEFAULT_TABLE_BOUND: u64 = 20_000;

pub fn p3(x: i128) -> i128 {
    x * (x + 1) / 2
}

pub fn t_shift(n: u64, a: &Form) -> u128 {
    8 * n as u128 + a.sum()
}

pub fn delete_at(a: &Form, i: usize) -> Result<Form> {
    a.delete_at(i)
}

pub fn sort_form(a: &Form) -> Form {
    a.sorted()
}

/// Bitmap of `T(a) ∩ [0, bound]`.
pub fn represented_set(a: &Form, bound: u64) -> Result<Bits> {
    let work = (bound as u128 + 1) * a.rank() as u128;
    if work > SIEVE_BUDGET {
        return Err(Error::BudgetExceeded { what: "sieve", limit: SIEVE_BUDGET });
    }
    let len = bound as usize + 1;
    let mut reach = Bits::new(len);
    reach.set(0);
    for &c in a.iter() {
        let mut next = reach.clone();
        let mut x: u64 = 1;
        loop {
            let v = (c as u128) * (x as u128 * (x as u128 + 1) / 2);
            if v > bound as u128 {
                break;
            }
            next.or_shifted(&reach, v as usize);
            x += 1;
        }
        reach = next;
    }
    Ok(reach)
}

pub fn represents(a: &Form, n: u64) -> Result<bool> {
    Ok(represented_set(a, n)?.get(n as usize))
}

/// The odd-prime local test for one form, reusable across many `n`.
#[derive(Debug, Clone)]
pub struct LocalTest {
    content: u64,
    sum: u128,
    profiles: Vec<LocalProfile>,
}

impl LocalTest {
    pub fn new(a: &Form) -> Self {
        let (content, prim) = a.primitive_part();
        let profiles = odd_prime_divisors(&prim).into_iter().map(|p| LocalProfile::new(&prim, p)).collect();
        LocalTest { content, sum: prim.sum(), profiles }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n % self.content != 0 {
            return false;
        }
        let t = 8 * (n / self.content) as u128 + self.sum;
        self.profiles.iter().all(|pr| pr.contains(t))
    }
}

pub fn locally_represents(a: &Form, n: u64) -> bool {
    LocalTest::new(a).contains(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsiResult {
    Finite(u64),
    NoCounterexampleBelow(u64),
}

impl PsiResult {
    pub fn finite(self) -> Option<u64> {
        match self {
            PsiResult::Finite(n) => Some(n),
            PsiResult::NoCounterexampleBelow(_) => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, PsiResult::Finite(_))
    }

    /// `self > n`, reading an unresolved search as infinite.
    pub fn exceeds(self, n: u64) -> bool {
        match self {
            PsiResult::Finite(m) => m > n,
            PsiResult::NoCounterexampleBelow(_) => true,
        }
    }

    /// `n ≤ self`, reading an unresolved search as infinite.
    pub fn at_least(self, n: u64) -> bool {
        match self {
            PsiResult::Finite(m) => n <= m,
            PsiResult::NoCounterexampleBelow(_) => true,
        }
    }
}

/// Smallest `n ≤ bound` in `T^loc(a) - T(a)`.
pub fn psi(a: &Form, bound: u64) -> Result<PsiResult> {
    let bits = represented_set(a, bound)?;
    let local = LocalTest::new(a);
    Ok(first_gap(&bits, bound, |n| local.contains(n)))
}

/// `ψ` against the bare odd-prime conditions on `t(n, a)`, with no content
/// division and no 2-adic condition.
pub fn psi_odd_primes(a: &Form, bound: u64) -> Result<PsiResult> {
    let bits = represented_set(a, bound)?;
    let primes = odd_prime_divisors(a);
    Ok(first_gap(&bits, bound, |n| {
        let t = t_shift(n, a);
        primes.iter().all(|&p| in_q(a, t, p))
    }))
}

/// Smallest positive `n ≤ bound` in `S - T(a)`.
pub fn psi_over(a: &Form, s: impl Fn(u64) -> bool, bound: u64) -> Result<PsiResult> {
    let bits = represented_set(a, bound)?;
    Ok(first_gap(&bits, bound, |n| n > 0 && s(n)))
}

fn first_gap(bits: &Bits, bound: u64, member: impl Fn(u64) -> bool) -> PsiResult {
    (0..=bound)
        .find(|&n| !bits.get(n as usize) && member(n))
        .map_or(PsiResult::NoCounterexampleBelow(bound), PsiResult::Finite)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularityVerdict {
    CounterexampleAt(u64),
    PassUpTo(u64),
}

impl RegularityVerdict {
    pub fn passes(self) -> bool {
        matches!(self, RegularityVerdict::PassUpTo(_))
    }
}

pub fn regular_up_to(a: &Form, bound: u64) -> Result<RegularityVerdict> {
    Ok(match psi(a, bound)? {
        PsiResult::Finite(n) => RegularityVerdict::CounterexampleAt(n),
        PsiResult::NoCounterexampleBelow(b) => RegularityVerdict::PassUpTo(b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniversalityVerdict {
    PassUpTo(u64),
    FirstMiss(u64),
}

pub fn universal_up_to(a: &Form, bound: u64) -> Result<UniversalityVerdict> {
    let bits = represented_set(a, bound)?;
    Ok((1..=bound)
        .find(|&n| !bits.get(n as usize))
        .map_or(UniversalityVerdict::PassUpTo(bound), UniversalityVerdict::FirstMiss))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_set(a: &[u64], bound: u64) -> Vec<u64> {
        // odd-coordinate search: Σ a_i y_i^2 = 8n + Σ a_i with y_i odd positive
        let sum: u64 = a.iter().sum();
        let top = 8 * bound + sum;
        let mut hits = std::collections::BTreeSet::new();
        fn go(a: &[u64], i: usize, acc: u64, top: u64, hits: &mut std::collections::BTreeSet<u64>) {
            if i == a.len() {
                hits.insert(acc);
                return;
            }
            let mut y = 1u64;
            while acc + a[i] * y * y <= top {
                go(a, i + 1, acc + a[i] * y * y, top, hits);
                y += 2;
            }
        }
        go(a, 0, 0, top, &mut hits);
        (0..=bound).filter(|n| hits.contains(&(8 * n + sum))).collect()
    }

    fn ones(b: &Bits) -> Vec<u64> {
        b.iter_ones().map(|i| i as u64).collect()
    }

    #[test]
    fn p3_values() {
        assert_eq!(p3(0), 0);
        assert_eq!(p3(3), 6);
        assert_eq!(p3(-4), 6);
    }

    #[test]
    fn shifts() {
        assert_eq!(t_shift(0, &form![1, 1, 3]), 5);
        assert_eq!(t_shift(4, &form![1, 1, 3, 7]), 44);
        assert_eq!(t_shift(5, &form![1, 1, 3, 18]), 63);
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(ones(&represented_set(&form![1, 1, 1], 10).unwrap()), (0..=10).collect::<Vec<_>>());
        assert_eq!(ones(&represented_set(&form![3, 6, 15], 5).unwrap()), vec![0, 3]);
        assert_eq!(ones(&represented_set(&form![1, 7, 7], 6).unwrap()), vec![0, 1, 3, 6]);
        assert_eq!(brute_set(&[3, 6, 15], 5), vec![0, 3]);
        assert_eq!(brute_set(&[1, 7, 7], 6), vec![0, 1, 3, 6]);
    }

    #[test]
    fn sieve_matches_odd_coordinate_search() {
        for a in 1..=12u64 {
            for b in a..=12 {
                for c in [1u64, 5, 11, 20] {
                    let f = form![a, b, c];
                    assert_eq!(ones(&represented_set(&f, 200).unwrap()), brute_set(&f, 200), "{f}");
                }
            }
        }
    }

    #[test]
    fn representation_examples() {
        assert!(!represents(&form![1, 1, 3], 8).unwrap());
        assert!(!represents(&form![2, 3, 27], 54).unwrap());
        assert!(represents(&form![1, 1, 2], 5).unwrap());
    }

    #[test]
    fn local_examples() {
        assert!(!locally_represents(&form![1, 1, 3], 8));
        assert!(locally_represents(&form![1, 1, 3, 18], 5));
        assert!(locally_represents(&form![1, 1, 1], 1_000_000));
        // content 3: only multiples of 3
        assert!(!locally_represents(&form![3, 3, 3], 1));
        assert!(locally_represents(&form![3, 3, 3], 3));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&form![1, 6, 18], 10_000).unwrap(), PsiResult::Finite(43));
        assert_eq!(psi(&form![1, 2, 7], 10_000).unwrap(), PsiResult::Finite(11));
        assert_eq!(psi(&form![1, 2, 6, 9], 1000).unwrap(), PsiResult::Finite(4));
        assert_eq!(psi(&form![1, 1, 1], 1000).unwrap(), PsiResult::NoCounterexampleBelow(1000));
        assert_eq!(psi(&form![1, 7, 7], 10_000).unwrap(), PsiResult::Finite(41));
        assert_eq!(psi(&form![2, 6, 9, 9], 1000).unwrap(), PsiResult::Finite(3));
        assert_eq!(psi(&form![3, 50, 75, 6], 1000).unwrap(), PsiResult::Finite(2));
    }

    #[test]
    fn odd_prime_psi_ignores_content() {
        // no odd prime divides (2,2,2), so every n is locally admissible
        assert_eq!(psi_odd_primes(&form![2, 2, 2], 100).unwrap(), PsiResult::Finite(1));
        assert_eq!(psi(&form![2, 2, 2], 100).unwrap(), PsiResult::NoCounterexampleBelow(100));
        assert_eq!(psi_odd_primes(&form![1, 6, 18], 10_000).unwrap(), PsiResult::Finite(43));
    }

    #[test]
    fn psi_over_examples() {
        assert_eq!(psi_over(&form![3, 3, 3], |_| true, 100).unwrap(), PsiResult::Finite(1));
        assert_eq!(psi_over(&form![1, 1, 3, 3], |_| true, 1000).unwrap(), PsiResult::NoCounterexampleBelow(1000));
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(regular_up_to(&form![2, 3, 27, 486], 1000).unwrap(), RegularityVerdict::CounterexampleAt(54));
        assert_eq!(regular_up_to(&form![1, 1, 3, 18], 10_000).unwrap(), RegularityVerdict::PassUpTo(10_000));
        match regular_up_to(&form![1, 7, 7, 42], 1000).unwrap() {
            RegularityVerdict::CounterexampleAt(n) => assert!(n <= 41),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn universality_examples() {
        assert_eq!(universal_up_to(&form![1, 1, 1], 10_000).unwrap(), UniversalityVerdict::PassUpTo(10_000));
        assert_eq!(universal_up_to(&form![1, 1, 9], 10).unwrap(), UniversalityVerdict::FirstMiss(5));
        assert_eq!(universal_up_to(&form![1, 1, 3, 8], 10_000).unwrap(), UniversalityVerdict::PassUpTo(10_000));
    }
}
