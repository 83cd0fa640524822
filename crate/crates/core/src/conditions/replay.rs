//! Direct, unoptimised re-checks of witness orderings against the raw
//! definitions. These share no code with the checkers that produce the
//! witnesses.

use crate::da::ProposingSide;
use crate::profile::{AgentIndex, PreferenceProfile, ProfileOrdering};

fn labelled(profile: &PreferenceProfile, ordering: &ProfileOrdering) -> Option<PreferenceProfile> {
    profile.relabel(ordering).ok()
}

/// Sequential preference: man `i` prefers woman `i` to every woman `k > i`
/// and woman `i` prefers man `i` to every man `k > i`.
pub fn replay_spc(profile: &PreferenceProfile, ordering: &ProfileOrdering) -> bool {
    let Some(p) = labelled(profile, ordering) else { return false };
    let n = p.n();
    (0..n).all(|i| {
        (i + 1..n).all(|k| p.prefers(AgentIndex::man(i), i, k) && p.prefers(AgentIndex::woman(i), i, k))
    })
}

/// No crossing: for all `i < j` and `k < l`,
/// man `i` prefers `l` to `k` implies man `j` does too, and
/// woman `k` prefers `j` to `i` implies woman `l` does too.
pub fn replay_ncc(profile: &PreferenceProfile, ordering: &ProfileOrdering) -> bool {
    let Some(p) = labelled(profile, ordering) else { return false };
    let n = p.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    if p.prefers(AgentIndex::man(i), l, k) && !p.prefers(AgentIndex::man(j), l, k) {
                        return false;
                    }
                    if p.prefers(AgentIndex::woman(k), j, i) && !p.prefers(AgentIndex::woman(l), j, i) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The three structural MaxProp conditions under a labeling, read straight
/// off the relabelled rows for the given proposing side.
pub fn replay_max_prop(profile: &PreferenceProfile, ordering: &ProfileOrdering, side: ProposingSide) -> bool {
    let Some(p) = labelled(profile, ordering) else { return false };
    let n = p.n();
    if n == 1 {
        return true;
    }
    let prop = |i: usize| p.row(side.proposer(), i);
    let recv = |i: usize| p.row(side.receiver(), i);
    let last = n - 1;
    let cond1 = (0..n).all(|i| prop(i)[n - 1] == last);
    let cond2 = (0..last).all(|i| recv(i)[0] == i && prop(i)[n - 2] == i);
    let cond3 = (0..last).all(|k| recv(k)[1] > k);
    cond1 && cond2 && cond3
}

/// MaxProp plus: every receiver but the last is someone's first choice.
pub fn replay_max_rou(profile: &PreferenceProfile, ordering: &ProfileOrdering, side: ProposingSide) -> bool {
    if !replay_max_prop(profile, ordering, side) {
        return false;
    }
    let Some(p) = labelled(profile, ordering) else { return false };
    let n = p.n();
    (0..n.saturating_sub(1)).all(|r| (0..n).any(|m| p.row(side.proposer(), m)[0] == r))
}
