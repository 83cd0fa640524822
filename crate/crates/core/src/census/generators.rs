//! Named fixture profiles and the extremal-family construction.
//!
//! Fixtures are written with 1-based labels exactly as they are printed, then
//! converted once.

use thiserror::Error;

use crate::profile::PreferenceProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("unknown fixture `{0}` (known: {known})", known = FIXTURE_IDS.join(", "))]
    UnknownFixture(String),
    #[error("the extremal family needs n >= 2, got {0}")]
    TooSmall(usize),
}

pub const FIXTURE_IDS: &[&str] = &[
    "example-5",
    "example-8",
    "example-12",
    "tightness-1",
    "tightness-2",
    "tightness-3",
    "spc-not-maxprop",
    "thm22-profile-1",
    "thm22-profile-2",
];

fn one_based<const N: usize>(men: [[usize; N]; N], women: [[usize; N]; N]) -> PreferenceProfile {
    let shift = |rows: [[usize; N]; N]| -> Vec<Vec<usize>> {
        rows.iter().map(|r| r.iter().map(|&x| x - 1).collect()).collect()
    };
    PreferenceProfile::new(N, &shift(men), &shift(women)).expect("fixture rows are permutations")
}

/// USM but not SPC (n = 3).
pub fn no_fixed_pair_usm() -> PreferenceProfile {
    one_based([[2, 1, 3], [1, 2, 3], [1, 2, 3]], [[1, 2, 3], [2, 3, 1], [3, 2, 1]])
}

/// m-MaxProp but not m-MaxRou (n = 4).
pub fn maxprop_not_maxrou() -> PreferenceProfile {
    one_based(
        [[1, 2, 3, 4], [3, 2, 1, 4], [3, 1, 2, 4], [1, 2, 3, 4]],
        [[2, 3, 4, 1], [3, 4, 1, 2], [4, 1, 2, 3], [1, 2, 3, 4]],
    )
}

/// USM but neither MaxProp nor SPC (n = 3).
pub fn usm_not_spc() -> PreferenceProfile {
    one_based([[1, 3, 2], [2, 1, 3], [1, 2, 3]], [[2, 1, 3], [3, 1, 2], [1, 2, 3]])
}

/// Breaks the common-least-preferred condition only.
pub fn tightness_1() -> PreferenceProfile {
    one_based([[3, 1, 2], [1, 2, 3], [1, 2, 3]], [[1, 2, 3], [2, 3, 1], [1, 2, 3]])
}

/// Breaks the penultimate-preference condition only.
pub fn tightness_2() -> PreferenceProfile {
    one_based([[1, 2, 3], [2, 1, 3], [1, 2, 3]], [[1, 2, 3], [2, 3, 1], [1, 2, 3]])
}

/// Breaks the second-preference acyclicity condition only.
pub fn tightness_3() -> PreferenceProfile {
    one_based([[2, 1, 3], [1, 2, 3], [1, 2, 3]], [[1, 2, 3], [2, 1, 3], [1, 2, 3]])
}

/// SPC (and NCC) but not MaxProp at n = 2.
pub fn spc_not_maxprop() -> PreferenceProfile {
    one_based([[1, 2], [2, 1]], [[1, 2], [2, 1]])
}

/// First of the two n = 2 profiles without a mutually-top pair.
pub fn crossed_tops_1() -> PreferenceProfile {
    one_based([[1, 2], [2, 1]], [[2, 1], [1, 2]])
}

pub fn crossed_tops_2() -> PreferenceProfile {
    one_based([[2, 1], [1, 2]], [[1, 2], [2, 1]])
}

pub fn gen_fixture(name: &str) -> Result<PreferenceProfile, GeneratorError> {
    Ok(match name {
        "example-5" => no_fixed_pair_usm(),
        "example-8" => maxprop_not_maxrou(),
        "example-12" => usm_not_spc(),
        "tightness-1" => tightness_1(),
        "tightness-2" => tightness_2(),
        "tightness-3" => tightness_3(),
        "spc-not-maxprop" => spc_not_maxprop(),
        "thm22-profile-1" => crossed_tops_1(),
        "thm22-profile-2" => crossed_tops_2(),
        other => return Err(GeneratorError::UnknownFixture(other.to_string())),
    })
}

/// The profile on which men-proposing deferred acceptance makes the most
/// proposals and runs the most rounds: every man cycles through the first
/// `n-1` women before the last man settles on the last woman.
pub fn gen_extremal(n: usize) -> Result<PreferenceProfile, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall(n));
    }
    let last = n - 1;
    let mut men = Vec::with_capacity(n);
    for i in 0..last {
        let mut row: Vec<usize> = (i..last).chain(0..i).collect();
        row.push(last);
        men.push(row);
    }
    men.push((0..n).collect());
    let women: Vec<Vec<usize>> = (0..n).map(|j| (j + 1..n).chain(0..=j).collect()).collect();
    Ok(PreferenceProfile::new(n, &men, &women).expect("extremal rows are permutations"))
}

/// Man `i` and woman `i` rank each other first; everything else ascending.
pub fn aligned_diagonal(n: usize) -> PreferenceProfile {
    let row = |i: usize| -> Vec<usize> { std::iter::once(i).chain((0..n).filter(|&x| x != i)).collect() };
    let rows: Vec<Vec<usize>> = (0..n).map(row).collect();
    PreferenceProfile::new(n, &rows, &rows).expect("diagonal rows are permutations")
}

/// Everyone on both sides ranks the other side in label order.
pub fn all_aligned(n: usize) -> PreferenceProfile {
    let rows: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
    PreferenceProfile::new(n, &rows, &rows).expect("identity rows are permutations")
}
