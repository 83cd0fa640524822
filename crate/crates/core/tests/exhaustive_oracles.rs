//! Slow, independent oracles compared against the checkers on every n <= 3
//! profile.

use smlab_core::census::enumerate_profiles;
use smlab_core::conditions::replay::replay_ncc;
use smlab_core::conditions::{is_ncc, is_spc};
use smlab_core::perm::all_permutations;
use smlab_core::{PreferenceProfile, ProfileOrdering, Side};

/// Every maximal sequence of fixed-pair removals, in any order; returns the
/// set of outcomes (true = everyone removed).
fn spc_outcomes(p: &PreferenceProfile, men: &mut Vec<bool>, women: &mut Vec<bool>, out: &mut Vec<bool>) {
    let n = p.n();
    let top = |side: Side, a: usize, left: &[bool]| *p.row(side, a).iter().find(|&&x| left[x]).unwrap();
    let mut any = false;
    for m in 0..n {
        if !men[m] {
            continue;
        }
        let w = top(Side::Man, m, women);
        if top(Side::Woman, w, men) == m {
            any = true;
            men[m] = false;
            women[w] = false;
            spc_outcomes(p, men, women, out);
            men[m] = true;
            women[w] = true;
        }
    }
    if !any {
        out.push(men.iter().all(|&x| !x));
    }
}

#[test]
fn spc_removal_order_does_not_matter() {
    for n in 1..=3 {
        for p in enumerate_profiles(n).unwrap() {
            let mut out = Vec::new();
            spc_outcomes(&p, &mut vec![true; n], &mut vec![true; n], &mut out);
            assert!(out.iter().all(|&x| x == out[0]), "{p:?}");
            assert_eq!(is_spc(&p).verdict, out[0], "{p:?}");
        }
    }
}

#[test]
fn ncc_matches_brute_force_over_all_orderings() {
    let n = 3;
    let perms = all_permutations(n);
    let orderings: Vec<ProfileOrdering> = perms
        .iter()
        .flat_map(|m| perms.iter().map(move |w| ProfileOrdering::new(m.clone(), w.clone()).unwrap()))
        .collect();
    let mut holds = 0;
    for p in enumerate_profiles(n).unwrap() {
        let slow = orderings.iter().find(|o| replay_ncc(&p, o));
        let fast = is_ncc(&p).unwrap();
        assert_eq!(fast.verdict, slow.is_some(), "{p:?}");
        assert_eq!(fast.ordering(), slow, "{p:?}");
        holds += usize::from(fast.verdict);
    }
    assert!(holds > 0);
}
