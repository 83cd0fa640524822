use crate::profile::{PreferenceProfile, ProfileOrdering, Side};

use super::{Condition, ConditionReport, Witness};

/// Sequential preference: repeatedly remove a man and woman who rank each
/// other first among the agents still present. The lowest-indexed man with
/// such a partner goes first. Succeeds iff all `n` pairs get removed; the
/// removal sequence is the witness ordering.
pub fn is_spc(profile: &PreferenceProfile) -> ConditionReport {
    let n = profile.n();
    let mut man_left = vec![true; n];
    let mut woman_left = vec![true; n];
    let mut men_order = Vec::with_capacity(n);
    let mut women_order = Vec::with_capacity(n);

    let top_remaining = |side: Side, agent: usize, left: &[bool]| -> usize {
        *profile.row(side, agent).iter().find(|&&x| left[x]).expect("some partner remains")
    };

    for _ in 0..n {
        let fixed = (0..n).filter(|&m| man_left[m]).find_map(|m| {
            let w = top_remaining(Side::Man, m, &woman_left);
            (top_remaining(Side::Woman, w, &man_left) == m).then_some((m, w))
        });
        match fixed {
            Some((m, w)) => {
                man_left[m] = false;
                woman_left[w] = false;
                men_order.push(m);
                women_order.push(w);
            }
            None => {
                let men = (0..n).filter(|&m| man_left[m]).collect();
                let women = (0..n).filter(|&w| woman_left[w]).collect();
                return ConditionReport {
                    condition: Condition::Spc,
                    verdict: false,
                    witness: Witness::NoFixedPair { men, women },
                    queries: None,
                };
            }
        }
    }
    let ordering = ProfileOrdering::new(men_order, women_order).expect("each agent removed once");
    ConditionReport { condition: Condition::Spc, verdict: true, witness: Witness::Ordering(ordering), queries: None }
}
