//! Watson transformations `Λ_p`, `λ_p` on coefficient vectors, their
//! preimages, and p-stability.

use crate::error::{Error, Result};
use crate::form::Form;
use crate::localrep::{is_zp_universal, jordan_split};
use crate::numth::{legendre, odd_prime_divisors, val, OddPrime};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WatsonStep {
    pub input: Form,
    pub p: OddPrime,
    pub s_vector: Vec<u32>,
    pub s: u32,
    pub lambda_image: Form,
}

/// `s_i = 0` when `p | a_i`, else 2; `s = min ord_p(p^{s_i} a_i)`.
pub fn watson_step(a: &Form, p: OddPrime) -> Result<WatsonStep> {
    let (_, prim) = a.primitive_part();
    let s_vector: Vec<u32> = prim.iter().map(|&c| if c % p.get() == 0 { 0 } else { 2 }).collect();
    let big: Vec<u128> = prim
        .iter()
        .zip(&s_vector)
        .map(|(&c, &si)| c as u128 * (p.get() as u128).pow(si))
        .collect();
    let s = big.iter().map(|&c| val(c, p)).min().expect("nonempty");
    let scale = (p.get() as u128).pow(s);
    let image = big
        .iter()
        .map(|&c| u64::try_from(c / scale).map_err(|_| Error::Overflow("watson image")))
        .collect::<Result<Vec<_>>>()?;
    Ok(WatsonStep { input: a.clone(), p, s_vector, s, lambda_image: Form::new(image)? })
}

pub fn big_lambda(a: &Form, p: OddPrime) -> Result<Form> {
    let (_, prim) = a.primitive_part();
    let v = prim
        .iter()
        .map(|&c| {
            if c % p.get() == 0 {
                Ok(c)
            } else {
                c.checked_mul(p.get() * p.get()).ok_or(Error::Overflow("big lambda"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Form::new(v)
}

/// `λ_p(a)` in the input order.
pub fn small_lambda(a: &Form, p: OddPrime) -> Result<Form> {
    Ok(watson_step(a, p)?.lambda_image)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageOptions {
    /// Drop `b` when it is `a` itself.
    pub exclude_fixed_points: bool,
    /// Keep only `p`-unstable `b`.
    pub unstable_only: bool,
}

impl Default for PreimageOptions {
    fn default() -> Self {
        PreimageOptions { exclude_fixed_points: true, unstable_only: false }
    }
}

/// Sorted primitive `b` with all coefficients `≤ cap` and `λ_p(b) = a` up to order.
///
/// Each coefficient of `b` is `p^{δ-2} a_i` (a unit, needs `ord_p a_i = 2 - δ`)
/// or `p^δ a_i` (needs `p | p^δ a_i`), for `δ ∈ {1, 2}`.
pub fn lambda_preimage(a: &Form, p: OddPrime, cap: u64, opts: PreimageOptions) -> Result<BTreeSet<Form>> {
    if !a.is_primitive() {
        return Err(Error::InvalidForm(format!("{a} is not primitive")));
    }
    let pp = p.get() as u128;
    let k = a.rank();
    let mut out = BTreeSet::new();
    let sorted_a = a.sorted();
    for delta in 1..=2u32 {
        let opts_per_slot: Vec<Vec<(u128, bool)>> = a
            .iter()
            .map(|&c| {
                let mut o = Vec::new();
                if val(c as u128, p) == 2 - delta {
                    o.push((c as u128 / pp.pow(2 - delta), true));
                }
                o.push((c as u128 * pp.pow(delta), false));
                o
            })
            .collect();
        let mut idx = vec![0usize; k];
        'outer: loop {
            let chosen: Vec<(u128, bool)> = (0..k).map(|i| opts_per_slot[i][idx[i]]).collect();
            if chosen.iter().any(|c| c.1) && chosen.iter().all(|c| c.0 <= cap as u128) {
                let b = Form::new(chosen.iter().map(|c| c.0 as u64).collect())?;
                if b.is_primitive() && small_lambda(&b, p)? == *a {
                    let sb = b.sorted();
                    let fixed = opts.exclude_fixed_points && sb == sorted_a;
                    let keep = !opts.unstable_only || !is_p_stable(&sb, p)?;
                    if !fixed && keep {
                        out.insert(sb);
                    }
                }
            }
            for i in 0..k {
                idx[i] += 1;
                if idx[i] < opts_per_slot[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// Ternary: Jordan reading of `<1,-1> → L` or `L ≅ <1,-Δ> ⊥ <pε>`.
/// Rank at least 4: `Q(L_p) = Z_p`.
pub fn is_p_stable(a: &Form, p: OddPrime) -> Result<bool> {
    match a.rank() {
        0..=2 => Err(Error::RankTooSmall(a.rank())),
        3 => {
            let (_, prim) = a.primitive_part();
            let j = jordan_split(&prim, p);
            let u = j.unimodular();
            Ok(match u.len() {
                3 => true,
                2 => {
                    let split = legendre(-(u[0] as i128) * (u[1] as i128), p).expect("units") == 1;
                    split || prim.iter().any(|&c| val(c as u128, p) == 1)
                }
                _ => false,
            })
        }
        _ => {
            let (_, prim) = a.primitive_part();
            Ok(is_zp_universal(&prim, p))
        }
    }
}

pub fn unstable_primes(a: &Form) -> Result<Vec<OddPrime>> {
    let mut out = Vec::new();
    for p in odd_prime_divisors(a) {
        if !is_p_stable(a, p)? {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn is_stable(a: &Form) -> Result<bool> {
    Ok(unstable_primes(a)?.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalStatus {
    Stable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub step: WatsonStep,
    /// Every unstable prime available at this step.
    pub unstable: Vec<OddPrime>,
    /// Unstable primes above 7, which do not occur for regular forms.
    pub anomalies: Vec<OddPrime>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizeChain {
    pub steps: Vec<ChainStep>,
    pub terminal: Form,
    pub terminal_status: TerminalStatus,
}

/// Applies `λ_p` at the smallest unstable prime until stable; forms are kept sorted.
pub fn stabilize(a: &Form) -> Result<StabilizeChain> {
    let mut cur = a.primitive_part().1.sorted();
    let mut seen = BTreeSet::new();
    let mut steps = Vec::new();
    loop {
        if !seen.insert(cur.clone()) {
            return Err(Error::Internal(format!("Watson cycle through {cur}")));
        }
        let unstable = unstable_primes(&cur)?;
        let Some(&p) = unstable.first() else {
            return Ok(StabilizeChain { steps, terminal: cur, terminal_status: TerminalStatus::Stable });
        };
        let step = watson_step(&cur, p)?;
        let next = step.lambda_image.sorted();
        let anomalies = unstable.iter().copied().filter(|q| q.get() > 7).collect();
        steps.push(ChainStep { step, unstable, anomalies });
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(big_lambda(&form![2, 3, 3, 6], p(3)).unwrap(), form![18, 3, 3, 6]);
        assert_eq!(big_lambda(&form![1, 7, 7, 14], p(7)).unwrap(), form![49, 7, 7, 14]);
        assert_eq!(big_lambda(&form![1, 1, 2], p(3)).unwrap(), form![9, 9, 18]);
        assert_eq!(small_lambda(&form![2, 3, 3, 6], p(3)).unwrap(), form![6, 1, 1, 2]);
        assert_eq!(small_lambda(&form![1, 7, 7, 14], p(7)).unwrap().sorted(), form![1, 1, 2, 7]);
        assert_eq!(small_lambda(&form![1, 1, 2], p(3)).unwrap(), form![1, 1, 2]);
        let st = watson_step(&form![2, 3, 3, 6], p(3)).unwrap();
        assert_eq!(st.s_vector, vec![2, 0, 0, 0]);
        assert_eq!(st.s, 1);
    }

    #[test]
    fn preimage_of_unit_triple() {
        let got = lambda_preimage(&form![1, 1, 1], p(3), 10, PreimageOptions::default()).unwrap();
        assert_eq!(got, [form![1, 1, 9], form![1, 9, 9]].into_iter().collect());
    }

    /// Brute scan over sorted primitive vectors: every sorted `b ≤ cap` with
    /// some ordering mapping onto `a`.
    fn brute_preimage(a: &Form, p: OddPrime, cap: u64) -> BTreeSet<Form> {
        let k = a.rank();
        let sa = a.sorted();
        let mut out = BTreeSet::new();
        let mut b = vec![1u64; k];
        loop {
            if b.windows(2).all(|w| w[0] <= w[1]) {
                let f = Form::new(b.clone()).unwrap();
                if f.is_primitive() && f != sa && small_lambda(&f, p).unwrap().sorted() == sa {
                    out.insert(f);
                }
            }
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                b[i] += 1;
                if b[i] <= cap {
                    break;
                }
                b[i] = 1;
                i += 1;
            }
        }
    }

    #[test]
    fn preimages_match_brute_scan() {
        for a in [form![1, 1, 1], form![1, 1, 2], form![1, 2, 3], form![1, 3, 6], form![2, 3, 3]] {
            for q in [3u64, 5] {
                let cap = 60;
                let got = lambda_preimage(&a.sorted(), p(q), cap, PreimageOptions::default()).unwrap();
                assert_eq!(got, brute_preimage(&a, p(q), cap), "{a} at {q}");
            }
        }
    }

    #[test]
    fn stability_examples() {
        assert!(is_p_stable(&form![1, 1, 2], p(3)).unwrap());
        assert!(!is_p_stable(&form![1, 1, 18], p(3)).unwrap());
        assert!(!is_p_stable(&form![2, 3, 3, 6], p(3)).unwrap());
        assert!(is_p_stable(&form![1, 1, 3, 3], p(3)).unwrap());
        assert!(is_p_stable(&form![1, 2], p(3)).is_err());
    }

    #[test]
    fn stabilize_examples() {
        let c = stabilize(&form![1, 9, 18]).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.terminal, form![1, 1, 2]);
        let c = stabilize(&form![1, 1, 3, 18]).unwrap();
        assert_eq!(c.steps[0].step.lambda_image.sorted(), form![1, 3, 3, 6]);
        assert!(stabilize(&form![1, 1, 3, 3]).unwrap().steps.is_empty());
    }
}
