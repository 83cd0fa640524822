//! Stability oracle: blocking pairs, brute-force enumeration of every stable
//! matching, and the unique-stable-matching test.

use rayon::prelude::*;
use thiserror::Error;

use crate::da::{run_da_dual, DaOutcome};
use crate::perm;
use crate::profile::{AgentIndex, Matching, PreferenceProfile, ProfileError, Side};

/// Largest `n` that [`enumerate_stable`] accepts unless the caller raises it.
pub const DEFAULT_BRUTE_CEILING: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("n = {n} exceeds the brute-force ceiling of {ceiling}")]
    InstanceTooLarge { n: usize, ceiling: usize },
}

/// A man and a woman who both prefer each other to their assigned partners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockingPair {
    pub man: usize,
    pub woman: usize,
}

impl BlockingPair {
    pub fn agents(&self) -> (AgentIndex, AgentIndex) {
        (AgentIndex::man(self.man), AgentIndex::woman(self.woman))
    }
}

/// Lexicographically least blocking pair `(man, woman)`, if any.
pub fn find_blocking_pair(profile: &PreferenceProfile, matching: &Matching) -> Result<Option<BlockingPair>, ProfileError> {
    if matching.n() != profile.n() {
        return Err(ProfileError::DimensionMismatch { expected: profile.n(), found: matching.n() });
    }
    Ok(blocking_pair_unchecked(profile, matching))
}

fn blocking_pair_unchecked(profile: &PreferenceProfile, matching: &Matching) -> Option<BlockingPair> {
    let women_ranks = profile.ranks(Side::Woman);
    for man in 0..profile.n() {
        // Women he strictly prefers to his wife are exactly the row prefix.
        let wife = matching.wife(man);
        let least = profile
            .row(Side::Man, man)
            .iter()
            .take_while(|&&w| w != wife)
            .filter(|&&woman| women_ranks.rank(woman, man) < women_ranks.rank(woman, matching.husband(woman)))
            .min();
        if let Some(&woman) = least {
            return Some(BlockingPair { man, woman });
        }
    }
    None
}

pub fn is_stable(profile: &PreferenceProfile, matching: &Matching) -> bool {
    matches!(find_blocking_pair(profile, matching), Ok(None))
}

/// Every stable matching, sorted by the men's assignment vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSet {
    pub matchings: Vec<Matching>,
}

impl StableSet {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    pub fn contains(&self, m: &Matching) -> bool {
        self.matchings.binary_search(m).is_ok()
    }
}

pub fn enumerate_stable(profile: &PreferenceProfile) -> Result<StableSet, StabilityError> {
    enumerate_stable_with_ceiling(profile, DEFAULT_BRUTE_CEILING)
}

/// Scans all `n!` matchings in lexicographic order. The scan is split by the
/// first man's partner; results are concatenated in shard order, which keeps
/// the output sorted.
pub fn enumerate_stable_with_ceiling(profile: &PreferenceProfile, ceiling: usize) -> Result<StableSet, StabilityError> {
    let n = profile.n();
    if n > ceiling {
        return Err(StabilityError::InstanceTooLarge { n, ceiling });
    }
    let scan_shard = |first: usize| -> Vec<Matching> {
        let mut found = Vec::new();
        let mut rest: Vec<usize> = (0..n).filter(|&w| w != first).collect();
        loop {
            let mut man_to_woman = Vec::with_capacity(n);
            man_to_woman.push(first);
            man_to_woman.extend_from_slice(&rest);
            let woman_to_man = perm::inverse(&man_to_woman);
            let m = Matching::from_parts_unchecked(man_to_woman, woman_to_man);
            if blocking_pair_unchecked(profile, &m).is_none() {
                found.push(m);
            }
            if !perm::next_permutation(&mut rest) {
                break;
            }
        }
        found
    };
    let matchings: Vec<Matching> = if n >= 6 {
        (0..n).into_par_iter().map(scan_shard).collect::<Vec<_>>().concat()
    } else {
        (0..n).flat_map(scan_shard).collect()
    };
    Ok(StableSet { matchings })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UsmWitness {
    Unique(Matching),
    /// Men-optimal and women-optimal matchings, which differ.
    Distinct { men_optimal: Matching, women_optimal: Matching },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsmVerdict {
    pub unique: bool,
    pub witness: UsmWitness,
}

/// Unique stable matching iff the two deferred-acceptance runs agree.
pub fn is_usm(profile: &PreferenceProfile) -> UsmVerdict {
    let (men, women) = run_da_dual(profile);
    usm_from_outcomes(&men, &women)
}

pub fn usm_from_outcomes(men: &DaOutcome, women: &DaOutcome) -> UsmVerdict {
    if men.matching == women.matching {
        UsmVerdict { unique: true, witness: UsmWitness::Unique(men.matching.clone()) }
    } else {
        UsmVerdict {
            unique: false,
            witness: UsmWitness::Distinct {
                men_optimal: men.matching.clone(),
                women_optimal: women.matching.clone(),
            },
        }
    }
}

/// True iff every agent on `side` weakly prefers `a` to `b`.
pub fn side_weakly_prefers(profile: &PreferenceProfile, side: Side, a: &Matching, b: &Matching) -> bool {
    (0..profile.n()).all(|i| {
        let agent = AgentIndex { side, index: i };
        profile.rank(side, i, a.partner(agent)) <= profile.rank(side, i, b.partner(agent))
    })
}
