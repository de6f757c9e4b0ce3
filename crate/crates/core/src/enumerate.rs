//! Candidate pipelines: the leading-triple set `U` for forms of rank at least
//! 4, the quaternary candidate set `Z`, and drop-structure discovery on it.

use crate::classify::{fixtures, is_old, DropRecord, Oldness};
use crate::error::Result;
use crate::form::Form;
use crate::localrep::{in_q, is_qp_space_universal, xi};
use crate::numth::{jacobi0, odd_prime_divisors, OddPrime};
use crate::triforms::{psi, psi_odd_primes, psi_over, regular_up_to, universal_up_to, PsiResult, UniversalityVerdict};
use crate::watson::{lambda_preimage, small_lambda, unstable_primes, PreimageOptions};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Every tunable constant of the pipelines, echoed into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Search bound for every `ψ`-style scan.
    pub psi_bound: u64,
    /// `Z` keeps forms with `ψ` above this.
    pub psi_floor: u64,
    /// Residues of the coefficient sum are taken modulo this.
    pub sum_modulus: u64,
    /// Bound for deciding `ψ_N < ∞`.
    pub universality_bound: u64,
    /// Coefficient cap for preimages feeding `Y_2`.
    pub preimage_cap: u64,
    /// Regularity bound used by drop discovery and oldness checks.
    pub regular_bound: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            psi_bound: 10_000,
            psi_floor: 124,
            sum_modulus: 105,
            universality_bound: 10_000,
            preimage_cap: 1 << 20,
            regular_bound: 5000,
        }
    }
}

/// `(η_3, η_5, η_7, ᾱ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SigTuple {
    pub eta: [i8; 3],
    pub alpha_bar: u64,
}

impl SigTuple {
    pub fn all(modulus: u64) -> Vec<SigTuple> {
        let mut out = Vec::new();
        for e3 in [1i8, -1] {
            for e5 in [1i8, -1] {
                for e7 in [1i8, -1] {
                    for alpha_bar in 0..modulus {
                        out.push(SigTuple { eta: [e3, e5, e7], alpha_bar });
                    }
                }
            }
        }
        out
    }

    /// `(8n + ᾱ / p) = η_p` for `p = 3, 5, 7`.
    pub fn contains(&self, n: u64) -> bool {
        let t = 8 * n as i128 + self.alpha_bar as i128;
        OddPrime::small().iter().zip(self.eta).all(|(&p, e)| jacobi0(t, p) == e)
    }

    /// Smallest positive `d` with `(d / q) = η_q`.
    pub fn delta(&self, slot: usize) -> u64 {
        let q = OddPrime::small()[slot];
        (1..).find(|&d| jacobi0(d as i128, q) == self.eta[slot]).expect("both signs occur")
    }
}

pub fn build_s(sig: &SigTuple, count: usize) -> Vec<u64> {
    (1..).filter(|&n| sig.contains(n)).take(count).collect()
}

fn is_triangular_multiple(n: u64, b: u64) -> bool {
    if n % b != 0 {
        return false;
    }
    let m = (n / b) as u128;
    let d = 8 * m + 1;
    let r = d.isqrt();
    r * r == d
}

/// `ψ_S(b)`: least element of `S` not of the form `b P_3(x)`.
fn psi_s_unary(sig: &SigTuple, b: u64, bound: u64) -> PsiResult {
    (1..=bound)
        .find(|&n| sig.contains(n) && !is_triangular_multiple(n, b))
        .map_or(PsiResult::NoCounterexampleBelow(bound), PsiResult::Finite)
}

/// Membership in `T(b_1, b_2)`: the per-prime local test, with the extra
/// `δ_q` slot when neither coefficient has the required residue symbol.
fn in_pair_local(sig: &SigTuple, b1: u64, b2: u64, n: u64) -> bool {
    OddPrime::small().iter().enumerate().all(|(slot, &q)| {
        let e = sig.eta[slot];
        let m = 8 * n as u128 + b1 as u128 + b2 as u128;
        if jacobi0(b1 as i128, q) != e && jacobi0(b2 as i128, q) != e {
            let d = sig.delta(slot);
            in_q(&[b1, b2, d], m + d as u128, q)
        } else {
            in_q(&[b1, b2], m, q)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UReport {
    pub config: PipelineConfig,
    pub tuples: usize,
    pub u1_total: usize,
    pub u2_total: usize,
    pub u3_total: usize,
    pub u3_prime_total: usize,
    /// Searches that reached their bound; the candidates were kept.
    pub unresolved: Vec<String>,
    pub size: usize,
}

/// The set `U` of leading triples, sorted, with its report.
pub fn build_u(cfg: &PipelineConfig) -> Result<(BTreeSet<Form>, UReport)> {
    let sigs = SigTuple::all(cfg.sum_modulus);
    let per_sig: Vec<(Vec<(u64, u64, u64)>, usize, usize, Vec<String>)> = sigs
        .par_iter()
        .map(|sig| {
            let mut unresolved = Vec::new();
            let s1 = build_s(sig, 1)[0];
            let mut triples = Vec::new();
            let mut u2 = 0;
            for b1 in 1..=s1 {
                let top2 = match psi_s_unary(sig, b1, cfg.psi_bound) {
                    PsiResult::Finite(v) => v,
                    PsiResult::NoCounterexampleBelow(b) => {
                        unresolved.push(format!("{sig:?}: psi_S({b1}) beyond {b}"));
                        b
                    }
                };
                for b2 in b1..=top2 {
                    u2 += 1;
                    let pair = Form::new(vec![b1, b2])?;
                    let top3 = match psi_over(&pair, |n| in_pair_local(sig, b1, b2, n), cfg.psi_bound)? {
                        PsiResult::Finite(v) => v,
                        PsiResult::NoCounterexampleBelow(b) => {
                            unresolved.push(format!("{sig:?}: psi_T({b1},{b2}) beyond {b}"));
                            b
                        }
                    };
                    triples.extend((b2..=top3).map(|b3| (b1, b2, b3)));
                }
            }
            Ok((triples, s1 as usize, u2, unresolved))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut candidates = BTreeSet::new();
    let (mut u1, mut u2, mut u3) = (0, 0, 0);
    let mut unresolved = Vec::new();
    for (t, a, b, un) in per_sig {
        u1 += a;
        u2 += b;
        u3 += t.len();
        candidates.extend(t);
        unresolved.extend(un);
    }
    // b_3 ≤ ψ(b) depends only on the triple, so each is decided once. The
    // bare odd-prime test rejects even-content triples such as (2,2,2).
    let kept: Vec<(u64, u64, u64)> = candidates.into_par_iter().filter(|&(b1, b2, b3)| {
        let f = Form::new(vec![b1, b2, b3]).expect("positive");
        psi_odd_primes(&f, b3 - 1).map(|r| !r.is_finite()).unwrap_or(true)
    }).collect();
    let u: BTreeSet<Form> = kept.into_iter().map(|(a, b, c)| Form::new(vec![a, b, c]).expect("positive")).collect();
    let report = UReport {
        config: *cfg,
        tuples: sigs.len(),
        u1_total: u1,
        u2_total: u2,
        u3_total: u3,
        u3_prime_total: u.len(),
        unresolved,
        size: u.len(),
    };
    Ok((u, report))
}

/// Leading triple of a sorted form of rank at least 4 lies in `u`.
pub fn check_lemter(a: &Form, u: &BTreeSet<Form>) -> bool {
    a.rank() >= 4 && Form::new(a.sorted()[..3].to_vec()).is_ok_and(|t| u.contains(&t))
}

pub const X_MULTIPLIERS: [u64; 6] = [1, 3, 5, 9, 25, 27];

pub fn x_set() -> BTreeSet<u64> {
    X_MULTIPLIERS.iter().flat_map(|&n| (1..=8).map(move |x| n * x)).collect()
}

/// Tabulated regular ternary forms whose `Q_p`-space is universal at every odd `p`.
pub fn y0_set() -> BTreeSet<Form> {
    fixtures()
        .table1
        .iter()
        .map(|e| e.triple.sorted())
        .filter(|t| odd_prime_divisors(t).into_iter().all(|p| is_qp_space_universal(t, p)))
        .collect()
}

/// Membership in `Sort(W)`: some coefficient is redundant over a `Y_0` triple.
pub fn in_w(a: &Form, y0: &BTreeSet<Form>, xi_of: &BTreeMap<Form, u64>) -> bool {
    (1..=a.rank()).any(|i| {
        let rest = a.delete_at(i).expect("rank ≥ 2").sorted();
        y0.contains(&rest) && xi_of.get(&rest).is_some_and(|x| a[i - 1] % x == 0)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZReport {
    pub config: PipelineConfig,
    pub x: usize,
    pub y0: usize,
    /// `Y_0` equals the displayed 18-element set.
    pub y0_matches_listing: bool,
    pub y1: usize,
    pub y2: usize,
    pub y3: usize,
    pub z1: usize,
    pub z2: usize,
    pub z3: usize,
    pub z4: usize,
    pub w_hits: usize,
    pub unresolved: Vec<String>,
    pub z: usize,
}

#[derive(Debug, Clone)]
pub struct ZOutput {
    pub z: BTreeSet<Form>,
    pub y0: BTreeSet<Form>,
    pub y2: BTreeSet<Form>,
    pub report: ZReport,
}

pub const Y0_LISTING: [[u64; 3]; 18] = [
    [1, 1, 1],
    [1, 1, 2],
    [1, 1, 4],
    [1, 1, 5],
    [1, 1, 9],
    [1, 1, 18],
    [1, 2, 2],
    [1, 2, 3],
    [1, 2, 4],
    [1, 3, 6],
    [1, 3, 18],
    [1, 4, 9],
    [1, 5, 5],
    [1, 5, 25],
    [1, 6, 27],
    [1, 9, 9],
    [1, 9, 18],
    [2, 3, 9],
];

fn quad(x: u64, rest: &[u64]) -> Result<Form> {
    let mut v = vec![x];
    v.extend_from_slice(rest);
    Ok(Form::new(v)?.sorted())
}

pub fn build_z(cfg: &PipelineConfig) -> Result<ZOutput> {
    let x = x_set();
    let y0 = y0_set();
    let listing: BTreeSet<Form> = Y0_LISTING.iter().map(|t| Form::new(t.to_vec()).expect("positive")).collect();
    let mut xi_of = BTreeMap::new();
    for t in &y0 {
        xi_of.insert(t.clone(), xi(t)?);
    }

    let mut y1 = BTreeSet::new();
    let mut y2 = BTreeSet::new();
    let opts = PreimageOptions { exclude_fixed_points: false, unstable_only: false };
    for t in &y0 {
        for p in OddPrime::small() {
            for d in 1..=2 {
                y1.insert(t.scaled(p.get().pow(d))?);
            }
            y2.extend(lambda_preimage(t, p, cfg.preimage_cap, opts)?);
        }
    }

    let mut unresolved = Vec::new();
    let y3: Vec<(Form, u64)> = y2
        .par_iter()
        .filter_map(|t| match psi(t, cfg.psi_bound) {
            Ok(PsiResult::Finite(v)) => Some(Ok((t.clone(), v))),
            Ok(PsiResult::NoCounterexampleBelow(_)) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<Vec<_>>>()?;

    let mut z1 = BTreeSet::new();
    let mut z2 = BTreeSet::new();
    let mut z3 = BTreeSet::new();
    for &n in &x {
        for t in &y1 {
            if t.iter().fold(n, |g, &c| g.gcd(&c)) == 1 {
                z1.insert(quad(n, t)?);
            }
        }
        for t in &y2 {
            z2.insert(quad(n, t)?);
        }
    }
    for (t, v) in &y3 {
        match xi(t) {
            Ok(xv) => {
                for n in (xv..=*v).step_by(xv as usize) {
                    z3.insert(quad(n, t)?);
                }
            }
            Err(e) => unresolved.push(format!("xi{t}: {e}")),
        }
    }
    let z4: BTreeSet<Form> = z1.iter().chain(&z2).chain(&z3).cloned().collect();

    let w_hits = z4.iter().filter(|a| in_w(a, &y0, &xi_of)).count();
    let floor = cfg.psi_floor;
    let ub = cfg.universality_bound;
    let z: BTreeSet<Form> = z4
        .par_iter()
        .filter(|a| !in_w(a, &y0, &xi_of))
        .filter(|a| psi(a, floor).is_ok_and(|r| !r.is_finite()))
        .filter(|a| matches!(universal_up_to(a, ub), Ok(UniversalityVerdict::FirstMiss(_))))
        .cloned()
        .collect();

    let report = ZReport {
        config: *cfg,
        x: x.len(),
        y0: y0.len(),
        y0_matches_listing: y0 == listing,
        y1: y1.len(),
        y2: y2.len(),
        y3: y3.len(),
        z1: z1.len(),
        z2: z2.len(),
        z3: z3.len(),
        z4: z4.len(),
        w_hits,
        unresolved,
        z: z.len(),
    };
    Ok(ZOutput { z, y0, y2, report })
}

/// Drop structures with tops in `z`: `p`-unstable new regular tops whose
/// `λ_p` image is old, for `p ∈ {3, 5, 7}`.
pub fn discover_drops(z: &BTreeSet<Form>, bound: u64) -> Result<Vec<DropRecord>> {
    let known: BTreeMap<(Form, u64), u32> =
        fixtures().table3.iter().map(|d| ((d.top.sorted(), d.p.get()), d.index)).collect();
    let mut out: Vec<DropRecord> = z
        .par_iter()
        .map(|a| -> Result<Vec<DropRecord>> {
            let mut recs = Vec::new();
            let ps: Vec<OddPrime> = unstable_primes(a)?.into_iter().filter(|p| p.get() <= 7).collect();
            if ps.is_empty() || !regular_up_to(a, bound)?.passes() || is_old(a, bound)? != Oldness::New {
                return Ok(recs);
            }
            for p in ps {
                let image = small_lambda(a, p)?.sorted();
                if let Oldness::Old(i) = is_old(&image, bound)? {
                    let bottom = image.delete_at(i)?;
                    recs.push(DropRecord {
                        index: known.get(&(a.clone(), p.get())).copied().unwrap_or(0),
                        top: a.clone(),
                        p,
                        height: 1,
                        image,
                        bottom,
                    });
                }
            }
            Ok(recs)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.sort_by(|a, b| (&a.top, a.p).cmp(&(&b.top, b.p)));
    Ok(out)
}
