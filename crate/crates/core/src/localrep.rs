//! Representation by diagonal forms over the p-adic integers, p odd.
//!
//! Membership of a nonzero element in `Q(L_p)` depends only on its square
//! class, so everything here is phrased in terms of `(valuation, residue)`
//! pairs. The decision procedure walks down the Jordan layers: a step that
//! cannot conclude rescales the lattice so that the target drops one
//! valuation.

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::numth::{checked_pow, legendre, nonresidue, odd_prime_divisors, split_p, val, OddPrime};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanLayer {
    pub e: u32,
    /// Exact unit parts `a_i / p^e`, in input order.
    pub units: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanSplit {
    pub prime: OddPrime,
    pub layers: Vec<JordanLayer>,
    pub source: Vec<u64>,
}

impl JordanSplit {
    pub fn unimodular(&self) -> &[u64] {
        match self.layers.first() {
            Some(l) if l.e == 0 => &l.units,
            _ => &[],
        }
    }

    pub fn max_e(&self) -> u32 {
        self.layers.last().map_or(0, |l| l.e)
    }
}

pub fn jordan_split(a: &[u64], p: OddPrime) -> JordanSplit {
    let mut layers: Vec<JordanLayer> = Vec::new();
    let mut pairs: Vec<(u32, u64)> = a
        .iter()
        .map(|&c| {
            let (e, u) = split_p(c as u128, p);
            (e, u as u64)
        })
        .collect();
    // stable: keeps input order inside a layer
    pairs.sort_by_key(|&(e, _)| e);
    for (e, u) in pairs {
        match layers.last_mut() {
            Some(l) if l.e == e => l.units.push(u),
            _ => layers.push(JordanLayer { e, units: vec![u] }),
        }
    }
    JordanSplit { prime: p, layers, source: a.to_vec() }
}

/// Square class of an element of `Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SquareClass {
    Zero,
    NonZero { valuation: u32, residue: i8 },
}

impl SquareClass {
    pub fn of(m: u128, p: OddPrime) -> Self {
        if m == 0 {
            return SquareClass::Zero;
        }
        let (v, u) = split_p(m, p);
        let r = legendre((u % p.get() as u128) as i128, p).expect("unit");
        SquareClass::NonZero { valuation: v, residue: r }
    }

    /// Smallest positive integer in the class.
    pub fn representative(self, p: OddPrime) -> Result<u128> {
        match self {
            SquareClass::Zero => Ok(0),
            SquareClass::NonZero { valuation, residue } => {
                let base = checked_pow(p.get(), valuation)?;
                let u = if residue == 1 { 1 } else { nonresidue(p) as u128 };
                base.checked_mul(u).ok_or(Error::Overflow("square class representative"))
            }
        }
    }

    pub fn times_p2(self) -> Self {
        match self {
            SquareClass::Zero => SquareClass::Zero,
            SquareClass::NonZero { valuation, residue } => {
                SquareClass::NonZero { valuation: valuation + 2, residue }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    ZeroTarget,
    UnimodularRankAtLeast3,
    UnitTargetRank2,
    UnitTargetRank1 { symbol: i8 },
    UnitTargetRank0,
    IsotropicPlane { u1: u64, u2: u64 },
    Rescale,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Coefficients of the current lattice, as `p^e * u`.
    pub lattice: Vec<(u32, u64)>,
    pub target_valuation: u32,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub modulus: u128,
    pub s: u32,
    pub x: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMembership {
    pub represented: bool,
    pub witness: Option<Witness>,
    pub trace: Vec<TraceStep>,
}

fn lattice_of(a: &[u64], p: OddPrime) -> Vec<(u32, u64)> {
    a.iter()
        .map(|&c| {
            let (e, u) = split_p(c as u128, p);
            (e, (u % p.get() as u128) as u64)
        })
        .collect()
}

/// The layer recursion on a square class `(v, residue)` of a nonzero target.
fn decide(
    mut lat: Vec<(u32, u64)>,
    mut v: u32,
    residue: i8,
    p: OddPrime,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> bool {
    loop {
        let units: Vec<u64> = lat.iter().filter(|&&(e, _)| e == 0).map(|&(_, u)| u).collect();
        let mut push = |rule: Rule, lat: &Vec<(u32, u64)>| {
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep { lattice: lat.clone(), target_valuation: v, rule });
            }
        };
        if units.len() >= 3 {
            push(Rule::UnimodularRankAtLeast3, &lat);
            return true;
        }
        if v == 0 {
            return match units.len() {
                2 => {
                    push(Rule::UnitTargetRank2, &lat);
                    true
                }
                1 => {
                    let s = residue * legendre(units[0] as i128, p).expect("unit");
                    push(Rule::UnitTargetRank1 { symbol: s }, &lat);
                    s == 1
                }
                _ => {
                    push(Rule::UnitTargetRank0, &lat);
                    false
                }
            };
        }
        if units.len() == 2 {
            let prod = -((units[0] as i128) * (units[1] as i128));
            if legendre(prod, p).expect("unit") == 1 {
                push(Rule::IsotropicPlane { u1: units[0], u2: units[1] }, &lat);
                return true;
            }
        }
        push(Rule::Rescale, &lat);
        for c in lat.iter_mut() {
            c.0 = if c.0 == 0 { 1 } else { c.0 - 1 };
        }
        v -= 1;
    }
}

fn class_parts(m: u128, p: OddPrime) -> (u32, i8) {
    let (v, u) = split_p(m, p);
    (v, legendre((u % p.get() as u128) as i128, p).expect("unit"))
}

/// Decides `m ∈ Q(L_p)` for `L = <a_1, ..., a_k>`, with a trace of the rules used.
pub fn represents_locally(a: &[u64], m: i128, p: OddPrime) -> Result<LocalMembership> {
    if m < 0 {
        return Err(Error::NegativeTarget(m));
    }
    if a.is_empty() {
        return Err(Error::InvalidForm("rank 0".into()));
    }
    if m == 0 {
        let trace = vec![TraceStep { lattice: lattice_of(a, p), target_valuation: 0, rule: Rule::ZeroTarget }];
        return Ok(LocalMembership { represented: true, witness: None, trace });
    }
    let (v, r) = class_parts(m as u128, p);
    let mut trace = Vec::new();
    let represented = decide(lattice_of(a, p), v, r, p, Some(&mut trace));
    Ok(LocalMembership { represented, witness: None, trace })
}

/// Membership without a trace.
pub fn in_q(a: &[u64], m: u128, p: OddPrime) -> bool {
    m == 0 || {
        let (v, r) = class_parts(m, p);
        decide(lattice_of(a, p), v, r, p, None)
    }
}

/// Membership of a nonzero square class.
pub fn class_in_q(a: &[u64], v: u32, residue: i8, p: OddPrime) -> bool {
    decide(lattice_of(a, p), v, residue, p, None)
}

/// Precomputed square-class membership for one lattice at one prime.
///
/// The layer recursion only sees `(v, residue)`, and after `max_e` rescaling
/// steps the lattice alternates between two states, so the answer has period
/// 2 in `v` beyond `max_e + 4`.
#[derive(Debug, Clone)]
pub struct LocalProfile {
    pub prime: OddPrime,
    cap: u32,
    table: Vec<[bool; 2]>,
    pmod: u64,
}

impl LocalProfile {
    pub fn new(a: &[u64], p: OddPrime) -> Self {
        let lat = lattice_of(a, p);
        let max_e = lat.iter().map(|c| c.0).max().unwrap_or(0);
        let cap = max_e + 4;
        let table = (0..=cap)
            .map(|v| [decide(lat.clone(), v, 1, p, None), decide(lat.clone(), v, -1, p, None)])
            .collect();
        LocalProfile { prime: p, cap, table, pmod: p.get() }
    }

    #[inline]
    pub fn class(&self, v: u32, residue: i8) -> bool {
        let v = if v <= self.cap { v } else { self.cap - ((v - self.cap) & 1) };
        self.table[v as usize][usize::from(residue != 1)]
    }

    pub fn contains(&self, m: u128) -> bool {
        if m == 0 {
            return true;
        }
        let p = self.pmod as u128;
        let (mut v, mut u) = (0u32, m);
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        let r = if quad_residue_mod(u % p, self.pmod) { 1 } else { -1 };
        self.class(v, r)
    }
}

fn quad_residue_mod(u: u128, p: u64) -> bool {
    crate::numth::pow_mod(u, (p as u128 - 1) / 2, p as u128) == 1
}

/// `p^e Z_p ⊆ Q(L_p)`, checked on the four classes at valuations `e` and `e + 1`.
pub fn covers_from(a: &[u64], p: OddPrime, e: u32) -> bool {
    [(e, 1), (e, -1), (e + 1, 1), (e + 1, -1)].iter().all(|&(v, r)| class_in_q(a, v, r, p))
}

pub fn is_zp_universal(a: &[u64], p: OddPrime) -> bool {
    covers_from(a, p, 0)
}

fn max_ord(a: &[u64], p: OddPrime) -> u32 {
    a.iter().map(|&c| val(c as u128, p)).max().unwrap_or(0)
}

/// Every square class of `Q_p` occurs in `Q(L_p)` after scaling by an even power of `p`.
pub fn is_qp_space_universal(a: &[u64], p: OddPrime) -> bool {
    let jmax = max_ord(a, p).div_ceil(2) + 2;
    [(0, 1), (0, -1), (1, 1), (1, -1)]
        .iter()
        .all(|&(v0, r)| (0..=jmax).any(|j| class_in_q(a, v0 + 2 * j, r, p)))
}

/// Smallest `e` with `p^e Z_p ⊆ Q(L_p)`.
pub fn e_p(a: &[u64], p: OddPrime) -> Result<u32> {
    if !is_qp_space_universal(a, p) {
        return Err(Error::SpaceNotUniversal(p.get()));
    }
    let cap = max_ord(a, p) + 2;
    (0..=cap)
        .find(|&e| covers_from(a, p, e))
        .ok_or_else(|| Error::Internal(format!("no covering valuation up to {cap} at p = {p}")))
}

/// `Π p^{e_p}` over the odd primes dividing the coefficients.
pub fn xi(a: &[u64]) -> Result<u64> {
    let mut out: u64 = 1;
    for p in odd_prime_divisors(a) {
        let e = e_p(a, p)?;
        let f = p.get().checked_pow(e).ok_or(Error::Overflow("xi"))?;
        out = out.checked_mul(f).ok_or(Error::Overflow("xi"))?;
    }
    Ok(out)
}

/// An element `β ∉ Q(K_p)` with `β + γ ∈ Q((K ⊥ <γ>)_p)`.
pub fn witness_shift(k: &[u64], gamma: u128, p: OddPrime) -> Result<u128> {
    if gamma == 0 {
        return Err(Error::Domain("gamma must be positive".into()));
    }
    let (g, gr) = class_parts(gamma, p);
    if covers_from(k, p, g) {
        return Err(Error::TailCovered);
    }
    if !covers_from(k, p, g + 1) {
        for v in g + 1..=g + 2 {
            for r in [1i8, -1] {
                if !class_in_q(k, v, r, p) {
                    return SquareClass::NonZero { valuation: v, residue: r }.representative(p);
                }
            }
        }
        return Err(Error::Internal("uncovered class above gamma not found".into()));
    }
    let own = class_in_q(k, g, gr, p);
    let twisted = class_in_q(k, g, -gr, p);
    if !own && !twisted {
        return gamma.checked_mul(8).ok_or(Error::Overflow("witness shift"));
    }
    // exactly one of the two unit twists of gamma is represented
    let target = if own { -gr } else { gr };
    SquareClass::NonZero { valuation: g, residue: target }.representative(p)
}

/// Default ceiling on the number of bit operations one oracle level may spend.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 36;

/// Exhaustive Hensel search: `x mod p^(2s+1)` with `Σ a_i x_i^2 ≡ m` and
/// `min ord_p(a_i x_i) = s`, for `s ≤ (ord_p m + max ord_p a_i) / 2`.
pub fn hensel_search(a: &[u64], m: i128, p: OddPrime, budget: u128) -> Result<Option<Witness>> {
    if m < 0 {
        return Err(Error::NegativeTarget(m));
    }
    if m == 0 {
        return Ok(Some(Witness { modulus: 1, s: 0, x: vec![0; a.len()] }));
    }
    let m = m as u128;
    let smax = (val(m, p) + max_ord(a, p)) / 2;
    for s in 0..=smax {
        let q = checked_pow(p.get(), 2 * s + 1)?;
        if let Some(x) = level_search(a, m % q, p, s, q, budget)? {
            return Ok(Some(Witness { modulus: q, s, x }));
        }
    }
    Ok(None)
}

pub fn hensel_oracle(a: &[u64], m: i128, p: OddPrime) -> Result<bool> {
    Ok(hensel_search(a, m, p, DEFAULT_ORACLE_BUDGET)?.is_some())
}

/// Residues of `a x^2 mod q` with `ord(a x) ≥ s`, split by whether `ord(a x) = s`.
fn coordinate_values(a: u64, p: OddPrime, s: u32, q: u128) -> (Vec<(u128, u128)>, Vec<(u128, u128)>) {
    let mut seen_eq = std::collections::HashMap::new();
    let mut seen_gt = std::collections::HashMap::new();
    let ea = val(a as u128, p);
    for x in 0..q {
        let o = if x == 0 { u32::MAX } else { ea + val(x, p) };
        if o < s {
            continue;
        }
        let v = (a as u128 % q) * (x * x % q) % q;
        let map = if o == s { &mut seen_eq } else { &mut seen_gt };
        map.entry(v).or_insert(x);
    }
    let mut eq: Vec<_> = seen_eq.into_iter().collect();
    let mut gt: Vec<_> = seen_gt.into_iter().collect();
    eq.sort_unstable();
    gt.sort_unstable();
    (eq, gt)
}

fn level_search(a: &[u64], target: u128, p: OddPrime, s: u32, q: u128, budget: u128) -> Result<Option<Vec<u128>>> {
    let n = usize::try_from(q).map_err(|_| Error::BudgetExceeded { what: "oracle", limit: budget })?;
    let words = q.div_ceil(64);
    let vals: Vec<_> = a.iter().map(|&c| coordinate_values(c, p, s, q)).collect();
    let cost: u128 = vals.iter().map(|(e, g)| (e.len() + g.len()) as u128 * words * 2).sum();
    if cost > budget {
        return Err(Error::BudgetExceeded { what: "oracle", limit: budget });
    }
    // layers[i] = (sums with no exact-s coordinate yet, sums with one)
    let mut layers: Vec<(Bits, Bits)> = Vec::with_capacity(a.len() + 1);
    let mut r0 = Bits::new(n);
    r0.set(0);
    layers.push((r0, Bits::new(n)));
    for (eq, gt) in &vals {
        let (p0, p1) = layers.last().unwrap();
        let (mut n0, mut n1) = (Bits::new(n), Bits::new(n));
        for &(v, _) in gt {
            n0.or_rotated(p0, v as usize);
            n1.or_rotated(p1, v as usize);
        }
        let mut both = p0.clone();
        both.or_assign(p1);
        for &(v, _) in eq {
            n1.or_rotated(&both, v as usize);
        }
        layers.push((n0, n1));
    }
    let t = target as usize;
    if !layers.last().unwrap().1.get(t) {
        return Ok(None);
    }
    // walk back: `hit` says whether the remaining prefix must contain an exact-s coordinate
    let mut x = vec![0u128; a.len()];
    let (mut cur, mut hit) = (t, true);
    for i in (0..a.len()).rev() {
        let (eq, gt) = &vals[i];
        let (p0, p1) = &layers[i];
        let c0 = cur;
        let back = |v: u128| (c0 + n - v as usize) % n;
        let mut done = false;
        if hit {
            for &(v, xi) in eq {
                let b = back(v);
                if p0.get(b) || p1.get(b) {
                    x[i] = xi;
                    hit = !p0.get(b);
                    cur = b;
                    done = true;
                    break;
                }
            }
        }
        if !done {
            let want = if hit { p1 } else { p0 };
            for &(v, xi) in gt {
                let b = back(v);
                if want.get(b) {
                    x[i] = xi;
                    cur = b;
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return Err(Error::Internal("oracle backtrack failed".into()));
        }
    }
    Ok(Some(x))
}

/// Checks the Hensel certificate conditions of a witness.
pub fn check_witness(a: &[u64], m: u128, p: OddPrime, w: &Witness) -> bool {
    if w.x.len() != a.len() {
        return false;
    }
    let q = w.modulus;
    let sum = a.iter().zip(&w.x).fold(0u128, |acc, (&c, &x)| (acc + (c as u128 % q) * (x * x % q)) % q);
    if sum != m % q {
        return false;
    }
    if m == 0 {
        return true;
    }
    let min_ord = a
        .iter()
        .zip(&w.x)
        .map(|(&c, &x)| if x == 0 { u32::MAX } else { val(c as u128, p) + val(x, p) })
        .min()
        .unwrap_or(u32::MAX);
    q == checked_pow(p.get(), 2 * w.s + 1).unwrap_or(0) && min_ord == w.s
}

/// The set of square classes `(v, residue)` with `v ≤ vmax` represented by `L_p`.
pub fn class_set(a: &[u64], p: OddPrime, vmax: u32) -> Vec<(u32, i8)> {
    (0..=vmax)
        .flat_map(|v| [(v, 1i8), (v, -1i8)])
        .filter(|&(v, r)| class_in_q(a, v, r, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn jordan_examples() {
        let j = jordan_split(&[1, 3, 6], p(3));
        assert_eq!(
            j.layers,
            vec![JordanLayer { e: 0, units: vec![1] }, JordanLayer { e: 1, units: vec![1, 2] }]
        );
        let j = jordan_split(&[1, 1, 3], p(3));
        assert_eq!(
            j.layers,
            vec![JordanLayer { e: 0, units: vec![1, 1] }, JordanLayer { e: 1, units: vec![1] }]
        );
        let j = jordan_split(&[2, 3, 3, 6], p(5));
        assert_eq!(j.layers, vec![JordanLayer { e: 0, units: vec![2, 3, 3, 6] }]);
    }

    #[test]
    fn membership_examples() {
        assert!(!represents_locally(&[1, 1, 3], 69, p(3)).unwrap().represented);
        assert!(represents_locally(&[1, 1, 3], 21, p(3)).unwrap().represented);
        assert!(represents_locally(&[1, 1, 1], 30, p(5)).unwrap().represented);
        assert!(represents_locally(&[1, 1, 1], -1, p(5)).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert!(!hensel_oracle(&[1, 1, 3], 69, p(3)).unwrap());
        assert!(hensel_oracle(&[1, 2], 1, p(3)).unwrap());
        assert!(hensel_oracle(&[3, 3], 3, p(3)).unwrap());
        assert!(hensel_oracle(&[1, 1, 3], 21, p(3)).unwrap());
    }

    #[test]
    fn coverage_examples() {
        assert!(covers_from(&[1, 1, 1], p(3), 0));
        assert!(!covers_from(&[1, 3, 6], p(3), 0));
        assert!(covers_from(&[1, 3, 6], p(3), 1));
        assert!(!is_zp_universal(&[1, 1, 3], p(3)));
        assert!(is_zp_universal(&[1, 1, 1], p(3)));
        assert!(!is_zp_universal(&[1, 2, 5], p(5)));
        assert!(!in_q(&[1, 2, 5], 15, p(5)));
    }

    #[test]
    fn space_universality_examples() {
        assert!(is_qp_space_universal(&[1, 1, 2], p(3)));
        assert!(!is_qp_space_universal(&[1, 1, 3], p(3)));
        assert!(is_qp_space_universal(&[1, 3, 6], p(3)));
    }

    #[test]
    fn e_p_and_xi_examples() {
        assert_eq!(e_p(&[1, 1, 1], p(3)), Ok(0));
        assert_eq!(e_p(&[1, 3, 6], p(3)), Ok(1));
        assert_eq!(e_p(&[1, 5, 5], p(5)), Ok(1));
        assert_eq!(xi(&[1, 1, 2]), Ok(1));
        assert_eq!(xi(&[1, 3, 6]), Ok(3));
        assert_eq!(xi(&[1, 5, 5]), Ok(5));
        assert_eq!(xi(&[1, 1, 3]), Err(Error::SpaceNotUniversal(3)));
    }

    #[test]
    fn witness_shift_examples() {
        assert_eq!(witness_shift(&[1, 1], 3, p(3)), Ok(27));
        assert_eq!(witness_shift(&[1, 1, 9], 3, p(3)), Ok(24));
        assert_eq!(witness_shift(&[1, 1, 1], 3, p(3)), Err(Error::TailCovered));
        // both conclusions, checked independently
        for (k, g) in [(vec![1u64, 1], 3u128), (vec![1, 1, 9], 3)] {
            let b = witness_shift(&k, g, p(3)).unwrap();
            assert!(!hensel_oracle(&k, b as i128, p(3)).unwrap());
            let mut kg = k.clone();
            kg.push(g as u64);
            assert!(hensel_oracle(&kg, (b + g) as i128, p(3)).unwrap());
        }
    }

    #[test]
    fn profile_matches_direct_recursion() {
        for a in [vec![1u64, 1, 3], vec![1, 3, 6], vec![2, 27, 27, 486], vec![9], vec![3, 243]] {
            for q in [3u64, 5, 7] {
                let prof = LocalProfile::new(&a, p(q));
                for m in 0..5000u128 {
                    assert_eq!(prof.contains(m), in_q(&a, m, p(q)), "{a:?} {q} {m}");
                }
                for v in 0..40 {
                    for r in [1, -1] {
                        assert_eq!(prof.class(v, r), class_in_q(&a, v, r, p(q)));
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_certify() {
        for (a, m, q) in [(vec![1u64, 1, 3], 21u128, 3u64), (vec![3, 3], 3, 3), (vec![1, 1, 1], 30, 5), (vec![2, 7, 49], 98, 7)] {
            let w = hensel_search(&a, m as i128, p(q), DEFAULT_ORACLE_BUDGET).unwrap().unwrap();
            assert!(check_witness(&a, m, p(q), &w), "{a:?} {m} {w:?}");
        }
    }
}
