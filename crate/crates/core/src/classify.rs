//! Classification tables, symbolic quaternary families, the oldness test and
//! the subset criterion for regularity in higher rank.
//!
//! Tables live as CSV under `data/` and are embedded at build time. Setting
//! `TRIFORM_DATA` to a directory loads them from there instead; either way
//! every file is checked against `manifest.sha256` before parsing.

use crate::error::{Error, Result};
use crate::form::Form;
use crate::localrep::xi;
use crate::numth::OddPrime;
use crate::triforms::regular_up_to;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

pub const DATA_ENV: &str = "TRIFORM_DATA";

/// Bound used to corroborate table lookups with a direct regularity scan.
pub const DEFAULT_OLD_BOUND: u64 = 2000;

const FILES: [&str; 7] =
    ["table1.csv", "table2.csv", "table3.csv", "table4.csv", "table5.csv", "streams.csv", "river112.csv"];

const EMBEDDED: [&str; 7] = [
    include_str!("../data/table1.csv"),
    include_str!("../data/table2.csv"),
    include_str!("../data/table3.csv"),
    include_str!("../data/table4.csv"),
    include_str!("../data/table5.csv"),
    include_str!("../data/streams.csv"),
    include_str!("../data/river112.csv"),
];

const EMBEDDED_MANIFEST: &str = include_str!("../data/manifest.sha256");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryEntry {
    pub triple: Form,
    pub stable: bool,
}

/// `a_4 = c p^{α r + β}` for `r ≥ r_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTerm {
    pub c: u64,
    pub p: OddPrime,
    pub alpha: u32,
    pub beta: i32,
    pub r_min: u32,
}

impl FamilyTerm {
    pub fn exponent(&self, r: u32) -> Result<u32> {
        if r < self.r_min {
            return Err(Error::Domain(format!("r = {r} below r_min = {}", self.r_min)));
        }
        let e = self.alpha as i64 * r as i64 + self.beta as i64;
        u32::try_from(e).map_err(|_| Error::Domain(format!("negative exponent {e} at r = {r}")))
    }

    pub fn value(&self, r: u32) -> Result<u64> {
        let e = self.exponent(r)?;
        self.p
            .get()
            .checked_pow(e)
            .and_then(|q| q.checked_mul(self.c))
            .ok_or(Error::Overflow("family term"))
    }

    /// The `r ≥ r_min` with `value(r) = x`, if any.
    pub fn solve(&self, x: u64) -> Option<u32> {
        if x % self.c != 0 {
            return None;
        }
        let (e, rest) = crate::numth::split_p((x / self.c) as u128, self.p);
        if rest != 1 {
            return None;
        }
        let num = e as i64 - self.beta as i64;
        if self.alpha == 0 || num < 0 || num % self.alpha as i64 != 0 {
            return None;
        }
        let r = (num / self.alpha as i64) as u32;
        (r >= self.r_min).then_some(r)
    }

    /// Instances with value at most `cap`.
    pub fn values_up_to(&self, cap: u64) -> Vec<(u32, u64)> {
        let mut out = Vec::new();
        let mut r = self.r_min;
        while let Ok(v) = self.value(r) {
            if v > cap {
                break;
            }
            out.push((r, v));
            r += 1;
        }
        out
    }
}

/// One row of the quaternary table: a ternary base and its admissible `a_4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPattern {
    pub base: Form,
    pub terms: Vec<FamilyTerm>,
    pub finite_list: Vec<u64>,
}

/// Which admissible `a_4` of a row to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermChoice {
    Family(usize),
    Value(usize),
}

impl FamilyPattern {
    pub fn instantiate(&self, choice: TermChoice, r: u32) -> Result<Form> {
        let a4 = match choice {
            TermChoice::Family(t) => self
                .terms
                .get(t)
                .ok_or(Error::IndexOutOfRange { index: t, rank: self.terms.len() })?
                .value(r)?,
            TermChoice::Value(t) => *self
                .finite_list
                .get(t)
                .ok_or(Error::IndexOutOfRange { index: t, rank: self.finite_list.len() })?,
        };
        Ok(self.base.with(a4)?.sorted())
    }

    pub fn admits(&self, a4: u64) -> bool {
        self.finite_list.contains(&a4) || self.terms.iter().any(|t| t.solve(a4).is_some())
    }

    /// Every instance with `r ≤ r_max`, deduplicated and sorted.
    pub fn instances(&self, r_max: u32) -> BTreeSet<Form> {
        let mut out = BTreeSet::new();
        for (i, t) in self.terms.iter().enumerate() {
            for r in t.r_min..=r_max {
                if let Ok(f) = self.instantiate(TermChoice::Family(i), r) {
                    out.insert(f);
                }
            }
        }
        for i in 0..self.finite_list.len() {
            if let Ok(f) = self.instantiate(TermChoice::Value(i), 1) {
                out.insert(f);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DropRecord {
    pub index: u32,
    pub top: Form,
    pub p: OddPrime,
    pub image: Form,
    pub bottom: Form,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UEntry {
    pub triple: Form,
    /// Proof-case tag, kept verbatim.
    pub kind: String,
}

/// A row of the preimage table for `(2,3,3,2·3^{2r-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageRow {
    pub p: OddPrime,
    /// The fixed coefficients; the whole form when `c` is absent.
    pub fixed: Form,
    pub c: Option<u64>,
    pub beta: i32,
    pub r_max: Option<u32>,
    /// `None` is an infinite value.
    pub psi: Option<u64>,
}

impl PreimageRow {
    pub fn at(&self, r: u32) -> Result<Option<Form>> {
        if r == 0 || self.r_max.is_some_and(|m| r > m) {
            return Ok(None);
        }
        let Some(c) = self.c else {
            return Ok(Some(self.fixed.sorted()));
        };
        let e = u32::try_from(2 * r as i64 + self.beta as i64)
            .map_err(|_| Error::Domain(format!("negative exponent at r = {r}")))?;
        let a4 = 3u64.checked_pow(e).and_then(|q| q.checked_mul(c)).ok_or(Error::Overflow("preimage row"))?;
        Ok(Some(self.fixed.with(a4)?.sorted()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRow {
    pub index: u32,
    pub form: Form,
    pub ms: usize,
    pub pt: usize,
    pub s: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeSpec {
    Fixed(Form),
    Family { prefix: Form, term: FamilyTerm },
}

impl NodeSpec {
    pub fn nodes_up_to(&self, cap: u64) -> Vec<Form> {
        match self {
            NodeSpec::Fixed(f) => (f.largest() <= cap).then(|| f.sorted()).into_iter().collect(),
            NodeSpec::Family { prefix, term } => term
                .values_up_to(cap)
                .into_iter()
                .filter(|_| prefix.largest() <= cap)
                .filter_map(|(_, v)| prefix.with(v).ok().map(|f| f.sorted()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixtures {
    pub table1: Vec<TernaryEntry>,
    pub table2: Vec<FamilyPattern>,
    pub table3: Vec<DropRecord>,
    pub table4: Vec<PreimageRow>,
    pub table5: Vec<UEntry>,
    pub streams: Vec<StreamRow>,
    pub river112: Vec<NodeSpec>,
    pub checksums: BTreeMap<String, String>,
    table1_set: BTreeSet<Form>,
}

fn fixture_err(name: &str, msg: impl Into<String>) -> Error {
    Error::Fixture { name: name.to_string(), msg: msg.into() }
}

fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut it = line.split_whitespace();
        match (it.next(), it.next()) {
            (Some(h), Some(f)) => {
                out.insert(f.trim_start_matches('*').to_string(), h.to_ascii_lowercase());
            }
            _ => return Err(fixture_err("manifest.sha256", format!("malformed line {line:?}"))),
        }
    }
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn records(name: &str, text: &str) -> Result<Vec<csv::StringRecord>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.map_err(|e| fixture_err(name, e.to_string())))
        .collect()
}

fn field<'a>(name: &str, rec: &'a csv::StringRecord, i: usize) -> Result<&'a str> {
    rec.get(i).ok_or_else(|| fixture_err(name, format!("missing column {i} in {rec:?}")))
}

fn num<T: std::str::FromStr>(name: &str, s: &str) -> Result<T> {
    s.parse().map_err(|_| fixture_err(name, format!("bad number {s:?}")))
}

fn opt_num<T: std::str::FromStr>(name: &str, s: &str) -> Result<Option<T>> {
    if s.is_empty() {
        Ok(None)
    } else {
        num(name, s).map(Some)
    }
}

fn spaced_form(name: &str, s: &str) -> Result<Form> {
    let v = s.split_whitespace().map(|x| num(name, x)).collect::<Result<Vec<u64>>>()?;
    Form::new(v).map_err(|e| fixture_err(name, e.to_string()))
}

fn prime(name: &str, s: &str) -> Result<OddPrime> {
    OddPrime::new(num(name, s)?).map_err(|e| fixture_err(name, e.to_string()))
}

fn term(name: &str, rec: &csv::StringRecord, at: usize, r_min: u32) -> Result<FamilyTerm> {
    Ok(FamilyTerm {
        c: num(name, field(name, rec, at)?)?,
        p: prime(name, field(name, rec, at + 1)?)?,
        alpha: num(name, field(name, rec, at + 2)?)?,
        beta: num(name, field(name, rec, at + 3)?)?,
        r_min,
    })
}

impl Fixtures {
    /// Embedded tables, or the directory named by `TRIFORM_DATA`.
    pub fn load() -> Result<Fixtures> {
        match std::env::var_os(DATA_ENV) {
            Some(dir) => Self::from_dir(Path::new(&dir)),
            None => Self::from_texts(EMBEDDED_MANIFEST, &EMBEDDED),
        }
    }

    pub fn from_dir(dir: &Path) -> Result<Fixtures> {
        let read = |f: &str| {
            std::fs::read_to_string(dir.join(f)).map_err(|e| fixture_err(f, format!("{}: {e}", dir.display())))
        };
        let manifest = read("manifest.sha256")?;
        let texts = FILES.iter().map(|f| read(f)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        Self::from_texts(&manifest, &refs)
    }

    fn from_texts(manifest: &str, texts: &[&str]) -> Result<Fixtures> {
        let sums = parse_manifest(manifest)?;
        for (name, text) in FILES.iter().zip(texts) {
            let want = sums.get(*name).ok_or_else(|| fixture_err(name, "not listed in manifest"))?;
            let got = sha256_hex(text.as_bytes());
            if &got != want {
                return Err(fixture_err(name, format!("checksum mismatch: manifest {want}, file {got}")));
            }
        }
        let [t1, t2, t3, t4, t5, st, rv] = texts else {
            return Err(Error::Internal("fixture count".into()));
        };

        let table1 = records("table1.csv", t1)?
            .iter()
            .map(|r| {
                Ok(TernaryEntry {
                    triple: spaced_form("table1.csv", field("table1.csv", r, 0)?)?,
                    stable: field("table1.csv", r, 1)? == "1",
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut table2: Vec<FamilyPattern> = Vec::new();
        for r in records("table2.csv", t2)? {
            let n = "table2.csv";
            let base = spaced_form(n, field(n, &r, 0)?)?;
            if table2.last().is_none_or(|row| row.base != base) {
                table2.push(FamilyPattern { base, terms: Vec::new(), finite_list: Vec::new() });
            }
            let row = table2.last_mut().expect("pushed");
            match field(n, &r, 1)? {
                "family" => row.terms.push(term(n, &r, 2, num(n, field(n, &r, 6)?)?)?),
                "value" => row.finite_list.push(num(n, field(n, &r, 2)?)?),
                k => return Err(fixture_err(n, format!("unknown kind {k:?}"))),
            }
        }

        let table3 = records("table3.csv", t3)?
            .iter()
            .map(|r| {
                let n = "table3.csv";
                let image = spaced_form(n, field(n, r, 3)?)?;
                let bottom = spaced_form(n, field(n, r, 4)?)?;
                Ok(DropRecord {
                    index: num(n, field(n, r, 0)?)?,
                    top: spaced_form(n, field(n, r, 1)?)?,
                    p: prime(n, field(n, r, 2)?)?,
                    height: image.rank() - bottom.rank(),
                    image,
                    bottom,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let table4 = records("table4.csv", t4)?
            .iter()
            .map(|r| {
                let n = "table4.csv";
                let psi = field(n, r, 5)?;
                Ok(PreimageRow {
                    p: prime(n, field(n, r, 0)?)?,
                    fixed: spaced_form(n, field(n, r, 1)?)?,
                    c: opt_num(n, field(n, r, 2)?)?,
                    beta: opt_num(n, field(n, r, 3)?)?.unwrap_or(0),
                    r_max: opt_num(n, field(n, r, 4)?)?,
                    psi: if psi == "inf" { None } else { Some(num(n, psi)?) },
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let table5 = records("table5.csv", t5)?
            .iter()
            .map(|r| {
                Ok(UEntry {
                    triple: spaced_form("table5.csv", field("table5.csv", r, 0)?)?,
                    kind: field("table5.csv", r, 1)?.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let streams = records("streams.csv", st)?
            .iter()
            .map(|r| {
                let n = "streams.csv";
                Ok(StreamRow {
                    index: num(n, field(n, r, 0)?)?,
                    form: spaced_form(n, field(n, r, 1)?)?,
                    ms: num(n, field(n, r, 2)?)?,
                    pt: num(n, field(n, r, 3)?)?,
                    s: num(n, field(n, r, 4)?)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let river112 = records("river112.csv", rv)?
            .iter()
            .map(|r| {
                let n = "river112.csv";
                let form = spaced_form(n, field(n, r, 1)?)?;
                match field(n, r, 0)? {
                    "fixed" => Ok(NodeSpec::Fixed(form)),
                    "family" => Ok(NodeSpec::Family { prefix: form, term: term(n, r, 2, 1)? }),
                    k => Err(fixture_err(n, format!("unknown kind {k:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let table1_set = table1.iter().map(|e| e.triple.sorted()).collect();
        let checksums = FILES.iter().map(|f| (f.to_string(), sums[*f].clone())).collect();
        Ok(Fixtures { table1, table2, table3, table4, table5, streams, river112, checksums, table1_set })
    }

    pub fn in_table1(&self, a: &Form) -> bool {
        a.rank() == 3 && self.table1_set.contains(&a.sorted())
    }

    /// Some row and admissible `a_4` give `a` up to order.
    pub fn in_table2(&self, a: &Form) -> bool {
        if a.rank() != 4 {
            return false;
        }
        let s = a.sorted();
        (0..4).any(|i| {
            let rest = s.delete_at(i + 1).expect("rank 4");
            self.table2.iter().any(|row| row.base == rest && row.admits(s[i]))
        })
    }

    /// Every tabulated regular quaternary-or-larger form with `r ≤ r_max`, deduplicated.
    pub fn table2_instances(&self, r_max: u32) -> BTreeSet<Form> {
        self.table2.iter().flat_map(|row| row.instances(r_max)).collect()
    }

    pub fn table5_set(&self) -> BTreeSet<Form> {
        self.table5.iter().map(|e| e.triple.sorted()).collect()
    }
}

/// The process-wide tables. A checksum or parse failure is fatal.
pub fn fixtures() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| match Fixtures::load() {
        Ok(f) => f,
        Err(e) => panic!("fixture load failed: {e}"),
    })
}

pub fn in_table2(a: &Form) -> bool {
    fixtures().in_table2(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Oldness {
    /// Deleting the coefficient at this 1-based index leaves the represented set unchanged.
    Old(usize),
    New,
    /// `ψ` found at or below the bound.
    NotRegular(u64),
}

/// Regular by table lookup and by a direct scan up to `bound`.
pub fn is_classified_regular(a: &Form, bound: u64) -> Result<bool> {
    let by_table = match a.rank() {
        0..=2 => false,
        3 => fixtures().in_table1(a),
        4 => fixtures().in_table2(a) || matches!(thmold_regular(&a.sorted())?, ThmOld::Regular(_)),
        _ => matches!(thmold_regular(&a.sorted())?, ThmOld::Regular(_)),
    };
    Ok(by_table && regular_up_to(a, bound)?.passes())
}

pub fn is_old(a: &Form, bound: u64) -> Result<Oldness> {
    if !a.is_primitive() {
        return Err(Error::InvalidForm(format!("{a} is not primitive")));
    }
    if let crate::triforms::RegularityVerdict::CounterexampleAt(n) = regular_up_to(a, bound)? {
        return Ok(Oldness::NotRegular(n));
    }
    // a regular ternary form is never old
    if a.rank() <= 3 {
        return Ok(Oldness::New);
    }
    for i in 1..=a.rank() {
        let rest = a.delete_at(i)?;
        if !rest.is_primitive() || !is_classified_regular(&rest, bound)? {
            continue;
        }
        if let Ok(x) = xi(&rest) {
            if a[i - 1] % x == 0 {
                return Ok(Oldness::Old(i));
            }
        }
    }
    Ok(Oldness::New)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThmOld {
    /// 1-based indices of a tabulated subform whose `ξ` divides every other coefficient.
    Regular(Vec<usize>),
    Irregular(String),
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, k, size, &mut Vec::new(), &mut out);
    out
}

/// All witnesses, size 3 before size 4, each in lexicographic order.
pub fn thmold_witnesses(a: &Form) -> Result<Vec<Vec<usize>>> {
    if a.rank() < 3 {
        return Err(Error::RankTooSmall(a.rank()));
    }
    if !a.is_sorted() {
        return Err(Error::Domain(format!("{a} is not sorted ascending")));
    }
    let fx = fixtures();
    let mut out = Vec::new();
    for size in [3usize, 4] {
        for idx in subsets(a.rank(), size) {
            let sub = Form::new(idx.iter().map(|&i| a[i]).collect())?;
            let listed = if size == 3 { fx.in_table1(&sub) } else { fx.in_table2(&sub) };
            if !listed {
                continue;
            }
            let Ok(x) = xi(&sub) else { continue };
            let rest_ok = (0..a.rank()).filter(|i| !idx.contains(i)).all(|i| a[i] % x == 0);
            if rest_ok {
                out.push(idx.iter().map(|i| i + 1).collect());
            }
        }
    }
    Ok(out)
}

pub fn thmold_regular(a: &Form) -> Result<ThmOld> {
    Ok(match thmold_witnesses(a)?.into_iter().next() {
        Some(w) => ThmOld::Regular(w),
        None => ThmOld::Irregular("no tabulated ternary or quaternary subform with ξ dividing the rest".into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_counts() {
        let f = fixtures();
        assert_eq!(f.table1.len(), 49);
        assert_eq!(f.table1.iter().filter(|e| e.stable).count(), 17);
        assert_eq!(f.table2.len(), 20);
        assert_eq!(f.table3.len(), 27);
        assert_eq!(f.table5.len(), 77);
        assert_eq!(f.streams.len(), 29);
        assert!(f.table3.iter().all(|d| d.height == 1));
    }

    #[test]
    fn tampered_table_is_rejected() {
        let mut texts = EMBEDDED;
        let bad = EMBEDDED[0].replace("1 1 9,0", "1 1 9,1");
        texts[0] = &bad;
        match Fixtures::from_texts(EMBEDDED_MANIFEST, &texts) {
            Err(Error::Fixture { name, .. }) => assert_eq!(name, "table1.csv"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn instantiation() {
        let f = fixtures();
        let row = |b: Form| f.table2.iter().find(|r| r.base == b).unwrap().clone();
        let r113 = row(form![1, 1, 3]);
        let t = r113.terms.iter().position(|t| t.c == 7).unwrap();
        assert_eq!(r113.instantiate(TermChoice::Family(t), 1).unwrap(), form![1, 1, 3, 7]);
        let r169 = row(form![1, 6, 9]);
        let t = r169.terms.iter().position(|t| t.c == 2).unwrap();
        assert_eq!(r169.instantiate(TermChoice::Family(t), 2).unwrap(), form![1, 6, 9, 162]);
        let r236 = row(form![2, 3, 6]);
        assert_eq!(r236.instantiate(TermChoice::Value(1), 1).unwrap(), form![2, 3, 6, 9]);
        let bad = FamilyTerm { c: 1, p: OddPrime::new(3).unwrap(), alpha: 2, beta: -3, r_min: 1 };
        assert!(bad.value(1).is_err());
    }

    #[test]
    fn table2_membership() {
        assert!(in_table2(&form![1, 6, 9, 162]));
        assert!(!in_table2(&form![1, 6, 18, 43]));
        assert!(in_table2(&form![1, 7, 7, 14]));
        assert!(in_table2(&form![162, 9, 1, 6]));
        assert!(!in_table2(&form![1, 1, 3]));
    }

    #[test]
    fn oldness_examples() {
        assert_eq!(is_old(&form![1, 1, 2, 6], 2000).unwrap(), Oldness::Old(4));
        assert_eq!(is_old(&form![1, 1, 3, 3], 2000).unwrap(), Oldness::New);
        assert_eq!(is_old(&form![1, 1, 1, 17], 2000).unwrap(), Oldness::Old(4));
        assert_eq!(is_old(&form![1, 1, 3], 2000).unwrap(), Oldness::New);
        assert_eq!(is_old(&form![2, 3, 27, 486], 1000).unwrap(), Oldness::NotRegular(54));
    }

    #[test]
    fn subset_criterion_examples() {
        assert_eq!(thmold_regular(&form![1, 1, 2, 99, 1000]).unwrap(), ThmOld::Regular(vec![1, 2, 3]));
        assert_eq!(thmold_regular(&form![1, 5, 5, 15, 30]).unwrap(), ThmOld::Regular(vec![1, 2, 3]));
        // (1,1,5) is universal, so any extra coefficient keeps the form regular
        assert_eq!(thmold_regular(&form![1, 1, 5, 9]).unwrap(), ThmOld::Regular(vec![1, 2, 3]));
        assert!(matches!(thmold_regular(&form![1, 1, 9, 10]).unwrap(), ThmOld::Irregular(_)));
        assert!(thmold_regular(&form![1, 1, 9, 5]).is_err());
    }
}
