mod common;

use proptest::prelude::*;
use smlab_core::census::{evaluate, EvalOptions, Theorem};
use smlab_core::conditions::replay::{replay_max_prop, replay_max_rou, replay_spc};
use smlab_core::conditions::{classify, is_max_prop, is_max_rou, is_spc};
use smlab_core::format::{parse_profile, render_profile};
use smlab_core::stability::{find_blocking_pair, is_stable};
use smlab_core::{run_da, AgentIndex, DaOutcome, ProfileOrdering, ProposingSide, Side};

const SIDES: [ProposingSide; 2] = [ProposingSide::Men, ProposingSide::Women];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rows_and_ranks_are_inverse(p in common::profile(1..=8)) {
        for side in [Side::Man, Side::Woman] {
            for a in 0..p.n() {
                for (pos, &x) in p.row(side, a).iter().enumerate() {
                    prop_assert_eq!(p.rank(side, a, x), pos);
                }
            }
        }
    }

    #[test]
    fn prefers_is_a_strict_total_order(p in common::profile(1..=6)) {
        let n = p.n();
        for side in [Side::Man, Side::Woman] {
            for i in 0..n {
                let ag = AgentIndex { side, index: i };
                for a in 0..n {
                    prop_assert!(!p.prefers(ag, a, a));
                    for b in 0..n {
                        if a != b {
                            prop_assert_ne!(p.prefers(ag, a, b), p.prefers(ag, b, a));
                        }
                        for c in 0..n {
                            if p.prefers(ag, a, b) && p.prefers(ag, b, c) {
                                prop_assert!(p.prefers(ag, a, c));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relabel_commutes_with_prefers(
        (p, o) in (1..=7usize).prop_flat_map(|n| (common::profile_of_size(n), common::ordering(n)))
    ) {
        let q = p.relabel(&o).unwrap();
        let n = p.n();
        for i in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if a == b { continue; }
                    prop_assert_eq!(
                        q.prefers(AgentIndex::man(i), a, b),
                        p.prefers(AgentIndex::man(o.men_order[i]), o.women_order[a], o.women_order[b])
                    );
                    prop_assert_eq!(
                        q.prefers(AgentIndex::woman(i), a, b),
                        p.prefers(AgentIndex::woman(o.women_order[i]), o.men_order[a], o.men_order[b])
                    );
                }
            }
        }
        prop_assert_eq!(q.relabel(&o.inverse()).unwrap(), p.clone());
        prop_assert_eq!(p.relabel(&ProfileOrdering::identity(n)).unwrap(), p);
    }

    #[test]
    fn verdicts_do_not_depend_on_labels(
        (p, o) in (1..=5usize).prop_flat_map(|n| (common::profile_of_size(n), common::ordering(n)))
    ) {
        prop_assert_eq!(classify(&p).label, classify(&p.relabel(&o).unwrap()).label);
        for side in SIDES {
            let a = run_da(&p, side);
            let b = run_da(&p.relabel(&o).unwrap(), side);
            prop_assert_eq!(a.proposal_count, b.proposal_count);
            prop_assert_eq!(a.round_count, b.round_count);
        }
    }

    #[test]
    fn mirroring_swaps_the_proposing_side(p in common::profile(1..=8)) {
        let m = p.mirrored();
        prop_assert_eq!(is_max_prop(&p, ProposingSide::Men).verdict, is_max_prop(&m, ProposingSide::Women).verdict);
        prop_assert_eq!(is_max_rou(&p, ProposingSide::Women).verdict, is_max_rou(&m, ProposingSide::Men).verdict);
        let a = run_da(&p, ProposingSide::Men);
        let b = run_da(&m, ProposingSide::Women);
        prop_assert_eq!(a.matching.mirrored(), b.matching);
        prop_assert_eq!(a.proposal_count, b.proposal_count);
    }

    #[test]
    fn da_invariants(p in common::profile(1..=8)) {
        let n = p.n();
        for side in SIDES {
            let o = run_da(&p, side);
            prop_assert_eq!(o.proposal_count, o.trace.len());
            prop_assert_eq!(o.per_receiver_proposals.iter().sum::<usize>(), o.proposal_count);
            prop_assert!(o.proposal_count <= DaOutcome::max_proposals(n));
            prop_assert!(o.round_count <= DaOutcome::max_rounds(n));
            prop_assert!(o.per_receiver_proposals.contains(&1));
            prop_assert_eq!(o.trace.iter().filter(|e| e.round == 1).count(), n);
            prop_assert!(o.trace.windows(2).all(|w| w[0].round <= w[1].round));
            prop_assert!(o.round_sizes().windows(2).all(|w| w[0] >= w[1]));
            prop_assert_eq!(find_blocking_pair(&p, &o.matching).unwrap(), None);
        }
    }

    #[test]
    fn maxprop_and_maxrou_match_da_counts(p in common::profile(2..=8)) {
        for side in SIDES {
            let o = run_da(&p, side);
            prop_assert_eq!(is_max_prop(&p, side).verdict, o.is_max_proposals());
            prop_assert_eq!(is_max_rou(&p, side).verdict, o.is_max_rounds());
        }
    }

    #[test]
    fn true_witnesses_replay(p in common::profile(1..=8)) {
        let spc = is_spc(&p);
        if spc.verdict {
            prop_assert!(replay_spc(&p, spc.ordering().unwrap()));
        }
        for side in SIDES {
            let r = is_max_prop(&p, side);
            if r.verdict {
                prop_assert!(replay_max_prop(&p, r.ordering().unwrap(), side));
            }
            let r = is_max_rou(&p, side);
            if r.verdict {
                prop_assert!(replay_max_rou(&p, r.ordering().unwrap(), side));
            }
        }
    }

    #[test]
    fn every_census_check_holds_on_samples(p in common::profile(4..=8)) {
        let e = evaluate(&p, EvalOptions { ncc_up_to: 4, stable_up_to: 5 });
        for (t, r) in Theorem::ALL.iter().zip(e.results) {
            prop_assert_ne!(r, Some(false), "{} fails", t.id());
        }
    }

    #[test]
    fn file_format_round_trips(p in common::profile(1..=9)) {
        prop_assert_eq!(parse_profile(&render_profile(&p)).unwrap(), p);
    }

    #[test]
    fn stability_agrees_with_blocking_pairs(
        (p, m) in (1..=6usize).prop_flat_map(|n| (common::profile_of_size(n), common::row(n)))
    ) {
        let m = smlab_core::Matching::from_man_to_woman(m).unwrap();
        prop_assert_eq!(is_stable(&p, &m), find_blocking_pair(&p, &m).unwrap().is_none());
    }
}
