#![allow(dead_code)]

use proptest::prelude::*;
use smlab_core::PreferenceProfile;

pub fn row(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

pub fn profile_of_size(n: usize) -> impl Strategy<Value = PreferenceProfile> {
    (proptest::collection::vec(row(n), n), proptest::collection::vec(row(n), n))
        .prop_map(move |(men, women)| PreferenceProfile::new(n, &men, &women).unwrap())
}

pub fn profile(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PreferenceProfile> {
    sizes.prop_flat_map(profile_of_size)
}

pub fn ordering(n: usize) -> impl Strategy<Value = smlab_core::ProfileOrdering> {
    (row(n), row(n)).prop_map(|(m, w)| smlab_core::ProfileOrdering::new(m, w).unwrap())
}
