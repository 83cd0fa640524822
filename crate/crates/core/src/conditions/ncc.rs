use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::perm;
use crate::profile::{AgentIndex, PreferenceProfile, ProfileOrdering};

use super::{Condition, ConditionError, ConditionReport, Witness};

pub const DEFAULT_NCC_CEILING: usize = 6;

pub fn is_ncc(profile: &PreferenceProfile) -> Result<ConditionReport, ConditionError> {
    is_ncc_with_ceiling(profile, DEFAULT_NCC_CEILING)
}

/// No-crossing search. Men orders are tried in lexicographic order. Once the
/// men order is fixed, both no-crossing clauses reduce to constraints on the
/// relative order of each pair of women, so a women order exists iff the
/// forced-precedence digraph is acyclic; the least topological order is
/// taken. The first success is therefore the lexicographically least witness.
///
/// Exponential in `n` (n! men orders); refuses `n > ceiling`.
pub fn is_ncc_with_ceiling(profile: &PreferenceProfile, ceiling: usize) -> Result<ConditionReport, ConditionError> {
    let n = profile.n();
    if n > ceiling {
        return Err(ConditionError::InstanceTooLarge { n, ceiling });
    }
    let mut men_order: Vec<usize> = (0..n).collect();
    loop {
        if let Some(women_order) = women_order_for(profile, &men_order) {
            let ordering = ProfileOrdering::new(men_order, women_order).expect("permutations");
            return Ok(ConditionReport {
                condition: Condition::Ncc,
                verdict: true,
                witness: Witness::Ordering(ordering),
                queries: None,
            });
        }
        if !perm::next_permutation(&mut men_order) {
            break;
        }
    }
    Ok(ConditionReport { condition: Condition::Ncc, verdict: false, witness: Witness::None, queries: None })
}

/// True when placing woman `a` before woman `b` breaks a clause under the
/// given men order.
fn a_before_b_forbidden(profile: &PreferenceProfile, men_order: &[usize], a: usize, b: usize) -> bool {
    let man_prefers = |m: usize, x: usize, y: usize| profile.prefers(AgentIndex::man(m), x, y);
    let woman_prefers = |w: usize, x: usize, y: usize| profile.prefers(AgentIndex::woman(w), x, y);

    // Men clause: an earlier man preferring b (the later woman) forces every
    // later man to prefer b too.
    let mut earlier_prefers_b = false;
    for &m in men_order {
        if earlier_prefers_b && man_prefers(m, a, b) {
            return true;
        }
        earlier_prefers_b |= man_prefers(m, b, a);
    }
    // Women clause: if a (the earlier woman) prefers the later man, so must b.
    for (i, &mi) in men_order.iter().enumerate() {
        for &mj in &men_order[i + 1..] {
            if woman_prefers(a, mj, mi) && woman_prefers(b, mi, mj) {
                return true;
            }
        }
    }
    false
}

fn women_order_for(profile: &PreferenceProfile, men_order: &[usize]) -> Option<Vec<usize>> {
    let n = profile.n();
    // succ[x] holds women that must come after x.
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for a in 0..n {
        for b in a + 1..n {
            let ab = a_before_b_forbidden(profile, men_order, a, b);
            let ba = a_before_b_forbidden(profile, men_order, b, a);
            match (ab, ba) {
                (true, true) => return None,
                (true, false) => {
                    succ[b].push(a);
                    indegree[a] += 1;
                }
                (false, true) => {
                    succ[a].push(b);
                    indegree[b] += 1;
                }
                (false, false) => {}
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&w| indegree[w] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(w)) = ready.pop() {
        order.push(w);
        for &t in &succ[w] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(Reverse(t));
            }
        }
    }
    (order.len() == n).then_some(order)
}
