//! Walking profile space.
//!
//! Exhaustive order: a profile is the tuple of lexicographic permutation ranks
//! of its rows, men's rows first then women's, read as a big-endian number in
//! base `n!`. The cursor is that number, so profile `c` can be rebuilt from `c`
//! alone and ranges of cursors shard the space.
//!
//! Sampling: sample `i` for seed `s` draws every row by Fisher–Yates from a
//! ChaCha8 stream keyed by `(s, i)`, which again makes any sample rebuildable
//! from its index.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm;
use crate::profile::PreferenceProfile;

/// Largest `n` enumerated without an explicit override: (3!)^6 = 46,656.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 3;
/// Hard limit: (6!)^12 still fits a `u128` cursor, (7!)^14 does not.
pub const MAX_ENUMERABLE_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("exhaustive enumeration at n = {n} exceeds the limit of {limit}; pass an override")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("n must be at least 1")]
    Empty,
}

/// Number of profiles of size `n`: (n!)^(2n). `None` past the `u128` range.
pub fn profile_space_size(n: usize) -> Option<u128> {
    let f = perm::factorial(n);
    (0..2 * n).try_fold(1u128, |acc, _| acc.checked_mul(f))
}

/// The profile at exhaustive cursor position `cursor`.
pub fn profile_at(n: usize, cursor: u128) -> PreferenceProfile {
    let f = perm::factorial(n);
    let mut digits = vec![0u128; 2 * n];
    let mut c = cursor;
    for d in digits.iter_mut().rev() {
        *d = c % f;
        c /= f;
    }
    debug_assert_eq!(c, 0, "cursor past the end of profile space");
    let mut men = Vec::with_capacity(n * n);
    let mut women = Vec::with_capacity(n * n);
    for (i, &d) in digits.iter().enumerate() {
        let row = perm::unrank(d, n);
        if i < n { men.extend(row) } else { women.extend(row) }
    }
    PreferenceProfile::from_flat_unchecked(n, men, women)
}

/// Inverse of [`profile_at`].
pub fn cursor_of(profile: &PreferenceProfile) -> u128 {
    let n = profile.n();
    let f = perm::factorial(n);
    let men = profile.rows(crate::profile::Side::Man);
    let women = profile.rows(crate::profile::Side::Woman);
    men.chain(women).fold(0u128, |acc, row| acc * f + perm::rank(row))
}

/// Restartable walk over a cursor range of profile space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileIterator {
    n: usize,
    cursor: u128,
    end: u128,
}

impl ProfileIterator {
    pub fn range(n: usize, start: u128, end: u128) -> Self {
        ProfileIterator { n, cursor: start, end }
    }

    /// Position of the next profile to be yielded.
    pub fn cursor(&self) -> u128 {
        self.cursor
    }

    pub fn end(&self) -> u128 {
        self.end
    }
}

impl Iterator for ProfileIterator {
    type Item = PreferenceProfile;

    fn next(&mut self) -> Option<Self::Item> {
        if self.cursor >= self.end {
            return None;
        }
        let p = profile_at(self.n, self.cursor);
        self.cursor += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.cursor).ok();
        (left.unwrap_or(usize::MAX), left)
    }
}

pub fn enumerate_profiles(n: usize) -> Result<ProfileIterator, EnumerationError> {
    enumerate_profiles_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_profiles_with_limit(n: usize, limit: usize) -> Result<ProfileIterator, EnumerationError> {
    if n == 0 {
        return Err(EnumerationError::Empty);
    }
    let limit = limit.min(MAX_ENUMERABLE_N);
    if n > limit {
        return Err(EnumerationError::InstanceTooLarge { n, limit });
    }
    let total = profile_space_size(n).expect("fits below MAX_ENUMERABLE_N");
    Ok(ProfileIterator::range(n, 0, total))
}

/// Sample `index` of the stream for `seed`.
pub fn sample_at(n: usize, seed: u64, index: u64) -> PreferenceProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut draw = || {
        let mut row: Vec<usize> = (0..n).collect();
        row.shuffle(&mut rng);
        row
    };
    let men: Vec<usize> = (0..n).flat_map(|_| draw()).collect();
    let women: Vec<usize> = (0..n).flat_map(|_| draw()).collect();
    PreferenceProfile::from_flat_unchecked(n, men, women)
}

/// `count` independent uniform profiles, reproducible from `(n, count, seed)`.
pub fn sample_profiles(n: usize, count: u64, seed: u64) -> impl Iterator<Item = PreferenceProfile> {
    (0..count).map(move |i| sample_at(n, seed, i))
}
