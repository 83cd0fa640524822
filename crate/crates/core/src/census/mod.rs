//! Census of profile space: classify every visited profile into its region
//! and evaluate the theorem checks, either exhaustively or over a seeded
//! sample.
//!
//! Work is split into contiguous cursor chunks processed in parallel. Tallies
//! merge by summing counts and keeping the least-cursor violation, so the
//! result does not depend on chunking, thread count or interruption.

pub mod generators;
mod iter;
mod theorems;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conditions::{Condition, RegionLabel};
use crate::profile::PreferenceProfile;
use crate::report::ProfileView;

pub use iter::{
    cursor_of, enumerate_profiles, enumerate_profiles_with_limit, profile_at, profile_space_size, sample_at,
    sample_profiles, EnumerationError, ProfileIterator, DEFAULT_ENUMERATION_LIMIT, MAX_ENUMERABLE_N,
};
pub use theorems::{evaluate, EvalOptions, Evaluation, Theorem, THEOREM_COUNT};

/// Largest `n` the census will sample.
pub const MAX_SAMPLED_N: usize = 8;
/// Largest `n` the census will enumerate even with an override; beyond it the
/// total no longer fits a 64-bit count.
pub const MAX_CENSUS_EXHAUSTIVE_N: usize = 4;

const CHUNK: u128 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("sampling at n = {n} exceeds the limit of {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CensusMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusOptions {
    /// NCC is evaluated when `n <= ncc_up_to`.
    pub ncc_up_to: usize,
    /// Brute-force stable enumeration runs when `n <= stable_up_to`.
    pub stable_up_to: usize,
    /// Exhaustive runs above this `n` are refused.
    pub enumeration_limit: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { ncc_up_to: 3, stable_up_to: 5, enumeration_limit: DEFAULT_ENUMERATION_LIMIT }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
struct TheoremTally {
    checked: u64,
    #[serde(with = "opt_u128_string")]
    violation: Option<u128>,
}

/// Mergeable partial result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    total: u64,
    regions: BTreeMap<u8, u64>,
    marginals: [u64; 7],
    theorems: Vec<TheoremTally>,
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            total: 0,
            regions: BTreeMap::new(),
            marginals: [0; 7],
            theorems: vec![TheoremTally::default(); THEOREM_COUNT],
        }
    }
}

impl Tally {
    fn add(&mut self, cursor: u128, e: &Evaluation) {
        self.total += 1;
        *self.regions.entry(e.label.bitmask()).or_default() += 1;
        for (slot, c) in self.marginals.iter_mut().zip(Condition::ALL) {
            *slot += u64::from(e.label.get(c) == Some(true));
        }
        for (t, r) in self.theorems.iter_mut().zip(e.results) {
            if let Some(ok) = r {
                t.checked += 1;
                if !ok && t.violation.is_none_or(|v| cursor < v) {
                    t.violation = Some(cursor);
                }
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        for (k, v) in other.regions {
            *self.regions.entry(k).or_default() += v;
        }
        for (a, b) in self.marginals.iter_mut().zip(other.marginals) {
            *a += b;
        }
        for (a, b) in self.theorems.iter_mut().zip(other.theorems) {
            a.checked += b.checked;
            a.violation = match (a.violation, b.violation) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCount {
    pub mask: u8,
    pub regions: Vec<String>,
    pub count: u64,
}

/// Per-condition membership counts; `ncc` is `None` when NCC was skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marginals {
    pub usm: u64,
    pub spc: u64,
    pub ncc: Option<u64>,
    #[serde(rename = "m-maxprop")]
    pub m_max_prop: u64,
    #[serde(rename = "w-maxprop")]
    pub w_max_prop: u64,
    #[serde(rename = "m-maxrou")]
    pub m_max_rou: u64,
    #[serde(rename = "w-maxrou")]
    pub w_max_rou: u64,
}

impl Marginals {
    fn from_array(a: [u64; 7], ncc_evaluated: bool) -> Self {
        Marginals {
            usm: a[0],
            spc: a[1],
            ncc: ncc_evaluated.then_some(a[2]),
            m_max_prop: a[3],
            w_max_prop: a[4],
            m_max_rou: a[5],
            w_max_rou: a[6],
        }
    }

    pub fn get(&self, c: Condition) -> Option<u64> {
        Some(match c {
            Condition::Usm => self.usm,
            Condition::Spc => self.spc,
            Condition::Ncc => return self.ncc,
            Condition::MMaxProp => self.m_max_prop,
            Condition::WMaxProp => self.w_max_prop,
            Condition::MMaxRou => self.m_max_rou,
            Condition::WMaxRou => self.w_max_rou,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TheoremStatus {
    Holds { checked: u64 },
    /// `cursor` is the enumeration cursor or the sample index of the least
    /// counterexample.
    Violated { checked: u64, cursor: String, profile: ProfileView },
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremEntry {
    pub id: String,
    #[serde(flatten)]
    pub status: TheoremStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTable {
    pub n: usize,
    pub mode: CensusMode,
    pub total: u64,
    pub ncc_evaluated: bool,
    pub stable_enumerated: bool,
    pub region_counts: Vec<RegionCount>,
    pub marginals: Marginals,
    pub theorems: Vec<TheoremEntry>,
}

impl CensusTable {
    pub fn region_count(&self, mask: u8) -> u64 {
        self.region_counts.iter().find(|r| r.mask == mask).map_or(0, |r| r.count)
    }

    /// Per-condition counts recomputed from the region table.
    pub fn marginals_from_regions(&self) -> Marginals {
        let mut a = [0u64; 7];
        for r in &self.region_counts {
            for (i, slot) in a.iter_mut().enumerate() {
                if r.mask & (1 << i) != 0 {
                    *slot += r.count;
                }
            }
        }
        Marginals::from_array(a, self.ncc_evaluated)
    }

    /// Number of profiles satisfying every condition in `all`.
    pub fn count_where(&self, all: &[Condition]) -> u64 {
        let want = all.iter().fold(0u8, |m, c| m | (1 << Condition::ALL.iter().position(|x| x == c).unwrap()));
        self.region_counts.iter().filter(|r| r.mask & want == want).map(|r| r.count).sum()
    }

    pub fn theorem(&self, t: Theorem) -> Option<&TheoremStatus> {
        self.theorems.iter().find(|e| e.id == t.id()).map(|e| &e.status)
    }

    pub fn violations(&self) -> impl Iterator<Item = &TheoremEntry> {
        self.theorems.iter().filter(|e| matches!(e.status, TheoremStatus::Violated { .. }))
    }

    pub fn all_hold(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    /// `region,count` rows, one per non-empty region in mask order. When NCC
    /// was skipped its bit is clear in every row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("region,count\n");
        for r in &self.region_counts {
            s.push_str(&format!("{},{}\n", r.mask, r.count));
        }
        s
    }
}

/// Serializable progress of an interrupted run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub mode: CensusMode,
    pub options: CensusOptions,
    #[serde(with = "u128_string")]
    pub next: u128,
    #[serde(with = "u128_string")]
    pub end: u128,
    tally: Tally,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// A census in progress. Drive it with [`CensusRun::advance`] and either
/// finish it or save a [`Checkpoint`].
#[derive(Debug, Clone)]
pub struct CensusRun {
    n: usize,
    mode: CensusMode,
    options: CensusOptions,
    next: u128,
    end: u128,
    tally: Tally,
}

impl CensusRun {
    pub fn start(n: usize, mode: CensusMode, options: CensusOptions) -> Result<Self, CensusError> {
        let end = match mode {
            CensusMode::Exhaustive => {
                let limit = options.enumeration_limit.min(MAX_CENSUS_EXHAUSTIVE_N);
                enumerate_profiles_with_limit(n, limit)?.end()
            }
            CensusMode::Sampled { count, .. } => {
                if n == 0 {
                    return Err(EnumerationError::Empty.into());
                }
                if n > MAX_SAMPLED_N {
                    return Err(CensusError::InstanceTooLarge { n, limit: MAX_SAMPLED_N });
                }
                if count == 0 {
                    return Err(CensusError::NoSamples);
                }
                u128::from(count)
            }
        };
        Ok(CensusRun { n, mode, options, next: 0, end, tally: Tally::default() })
    }

    pub fn resume(cp: Checkpoint) -> Result<Self, CensusError> {
        let fresh = CensusRun::start(cp.n, cp.mode, cp.options)?;
        if cp.end != fresh.end || cp.next > cp.end || cp.tally.theorems.len() != THEOREM_COUNT {
            return Err(CensusError::CheckpointMismatch("cursor range or theorem list differs".into()));
        }
        if u128::from(cp.tally.total) != cp.next {
            return Err(CensusError::CheckpointMismatch("tally total disagrees with cursor".into()));
        }
        Ok(CensusRun { next: cp.next, tally: cp.tally, ..fresh })
    }

    pub fn cursor(&self) -> u128 {
        self.next
    }

    pub fn is_done(&self) -> bool {
        self.next >= self.end
    }

    fn profile(&self, cursor: u128) -> PreferenceProfile {
        profile_for(self.n, self.mode, cursor)
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions { ncc_up_to: self.options.ncc_up_to, stable_up_to: self.options.stable_up_to }
    }

    /// Processes up to `limit` more profiles. Returns true when finished.
    pub fn advance(&mut self, limit: u128) -> bool {
        let stop = self.end.min(self.next.saturating_add(limit));
        let (n, mode, eo) = (self.n, self.mode, self.eval_options());
        let starts: Vec<u128> = (0..).map(|k| self.next + k * CHUNK).take_while(|&s| s < stop).collect();
        let part = starts
            .into_par_iter()
            .map(|s| {
                let mut t = Tally::default();
                for c in s..(s + CHUNK).min(stop) {
                    t.add(c, &evaluate(&profile_for(n, mode, c), eo));
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        self.tally = std::mem::take(&mut self.tally).merge(part);
        self.next = stop;
        self.is_done()
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            n: self.n,
            mode: self.mode,
            options: self.options,
            next: self.next,
            end: self.end,
            tally: self.tally.clone(),
        }
    }

    /// Runs to completion and builds the table.
    pub fn finish(mut self) -> CensusTable {
        self.advance(u128::MAX);
        let ncc_evaluated = self.n <= self.options.ncc_up_to;
        let stable_enumerated = self.n <= self.options.stable_up_to;
        let region_counts = self
            .tally
            .regions
            .iter()
            .map(|(&mask, &count)| RegionCount {
                mask,
                regions: RegionLabel::from_bitmask(mask, ncc_evaluated).names().into_iter().map(String::from).collect(),
                count,
            })
            .collect();
        let theorems = Theorem::ALL
            .iter()
            .zip(&self.tally.theorems)
            .map(|(&t, tally)| {
                let status = match tally.violation {
                    Some(c) => TheoremStatus::Violated {
                        checked: tally.checked,
                        cursor: c.to_string(),
                        profile: ProfileView::from(&self.profile(c)),
                    },
                    None if tally.checked == 0 && !t.applies_at(self.n, ncc_evaluated, stable_enumerated) => {
                        TheoremStatus::NotApplicable
                    }
                    None => TheoremStatus::Holds { checked: tally.checked },
                };
                TheoremEntry { id: t.id().to_string(), status }
            })
            .collect();
        CensusTable {
            n: self.n,
            mode: self.mode,
            total: self.tally.total,
            ncc_evaluated,
            stable_enumerated,
            region_counts,
            marginals: Marginals::from_array(self.tally.marginals, ncc_evaluated),
            theorems,
        }
    }
}

fn profile_for(n: usize, mode: CensusMode, cursor: u128) -> PreferenceProfile {
    match mode {
        CensusMode::Exhaustive => profile_at(n, cursor),
        CensusMode::Sampled { seed, .. } => sample_at(n, seed, cursor as u64),
    }
}

pub fn run_census(n: usize, mode: CensusMode, options: CensusOptions) -> Result<CensusTable, CensusError> {
    Ok(CensusRun::start(n, mode, options)?.finish())
}

mod u128_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

mod opt_u128_string {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
        Option::<String>::deserialize(d)?.map(|s| s.parse().map_err(D::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_exhaustive_table() {
        let t = run_census(2, CensusMode::Exhaustive, CensusOptions::default()).unwrap();
        assert_eq!(t.total, 16);
        assert!(t.all_hold(), "{}", t.to_json());
        assert!(t.ncc_evaluated);
        assert_eq!(t.region_counts.iter().map(|r| r.count).sum::<u64>(), 16);
        assert_eq!(t.marginals, t.marginals_from_regions());
        assert_eq!(t.theorem(Theorem::SpcMaxpropDisjoint), Some(&TheoremStatus::NotApplicable));
    }

    #[test]
    fn chunking_does_not_change_the_table() {
        let whole = run_census(2, CensusMode::Sampled { count: 300, seed: 9 }, CensusOptions::default()).unwrap();
        let mut run = CensusRun::start(2, CensusMode::Sampled { count: 300, seed: 9 }, CensusOptions::default()).unwrap();
        while !run.advance(7) {}
        assert_eq!(run.finish(), whole);
    }

    #[test]
    fn checkpoint_round_trip() {
        let mut run = CensusRun::start(2, CensusMode::Exhaustive, CensusOptions::default()).unwrap();
        run.advance(5);
        let cp = Checkpoint::from_json(&run.checkpoint().to_json()).unwrap();
        assert_eq!(cp.next, 5);
        let resumed = CensusRun::resume(cp).unwrap().finish();
        let direct = run_census(2, CensusMode::Exhaustive, CensusOptions::default()).unwrap();
        assert_eq!(resumed.to_json(), direct.to_json());
    }

    #[test]
    fn tampered_checkpoint_is_rejected() {
        let mut run = CensusRun::start(2, CensusMode::Exhaustive, CensusOptions::default()).unwrap();
        run.advance(5);
        let mut cp = run.checkpoint();
        cp.next = 6;
        assert!(matches!(CensusRun::resume(cp), Err(CensusError::CheckpointMismatch(_))));
    }

    #[test]
    fn limits() {
        assert!(matches!(
            run_census(4, CensusMode::Exhaustive, CensusOptions::default()),
            Err(CensusError::Enumeration(EnumerationError::InstanceTooLarge { n: 4, limit: 3 }))
        ));
        assert!(matches!(
            run_census(9, CensusMode::Sampled { count: 1, seed: 0 }, CensusOptions::default()),
            Err(CensusError::InstanceTooLarge { n: 9, limit: 8 })
        ));
        assert_eq!(
            run_census(3, CensusMode::Sampled { count: 0, seed: 0 }, CensusOptions::default()),
            Err(CensusError::NoSamples)
        );
    }

    #[test]
    fn skipped_ncc_is_marked() {
        let t = run_census(4, CensusMode::Sampled { count: 50, seed: 1 }, CensusOptions::default()).unwrap();
        assert!(!t.ncc_evaluated);
        assert_eq!(t.marginals.ncc, None);
        assert!(t.region_counts.iter().all(|r| r.mask & 4 == 0));
        assert_eq!(t.theorem(Theorem::NccImpliesSpc), Some(&TheoremStatus::NotApplicable));
    }

    #[test]
    fn csv_lists_regions() {
        let t = run_census(2, CensusMode::Exhaustive, CensusOptions::default()).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("region,count\n"));
        let sum: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
        assert_eq!(sum, 16);
    }
}
