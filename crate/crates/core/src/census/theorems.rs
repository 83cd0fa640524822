//! Per-profile checks evaluated by the census.
//!
//! Each check either applies to a profile and holds or fails, or does not
//! apply (wrong `n`, or the premise is empty). Premises about MaxProp and
//! MaxRou use the deferred-acceptance counts where that keeps a check
//! independent of the structural recogniser.

use serde::{Deserialize, Serialize};

use crate::conditions::replay::{replay_max_prop, replay_max_rou, replay_ncc, replay_spc};
use crate::conditions::{classify_with_outcomes, Classification, ClassifyOptions, ConditionReport, RegionLabel};
use crate::da::{run_da_dual, DaOutcome, ProposingSide};
use crate::profile::{PreferenceProfile, Side};
use crate::stability::{enumerate_stable_with_ceiling, is_stable, side_weakly_prefers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    SingleProposalReceiver,
    ProposalRoundBounds,
    RoundSizesNonincreasing,
    TraceConsistency,
    DaOutputsStable,
    StableExtremesOpposition,
    MaxpropMatchesDaCount,
    MaxrouMatchesDaCount,
    MaxrouImpliesMaxprop,
    MaxpropImpliesUsm,
    MaxrouImpliesUsm,
    SpcMaxpropDisjoint,
    MWMaxpropDisjoint,
    N2MaxpropEqMaxrou,
    N2SpcEqNcc,
    NccImpliesSpc,
    N2SpcEqUsm,
    N2MaxpropImpliesSpc,
    N2MaxpropTopCharacterization,
    N3MaxpropEqMaxrou,
    MaxpropTraceStructure,
    MaxpropPositionStructure,
    UsmMatchesEnumeration,
    WitnessesReplay,
}

pub const THEOREM_COUNT: usize = 24;

impl Theorem {
    pub const ALL: [Theorem; THEOREM_COUNT] = [
        Theorem::SingleProposalReceiver,
        Theorem::ProposalRoundBounds,
        Theorem::RoundSizesNonincreasing,
        Theorem::TraceConsistency,
        Theorem::DaOutputsStable,
        Theorem::StableExtremesOpposition,
        Theorem::MaxpropMatchesDaCount,
        Theorem::MaxrouMatchesDaCount,
        Theorem::MaxrouImpliesMaxprop,
        Theorem::MaxpropImpliesUsm,
        Theorem::MaxrouImpliesUsm,
        Theorem::SpcMaxpropDisjoint,
        Theorem::MWMaxpropDisjoint,
        Theorem::N2MaxpropEqMaxrou,
        Theorem::N2SpcEqNcc,
        Theorem::NccImpliesSpc,
        Theorem::N2SpcEqUsm,
        Theorem::N2MaxpropImpliesSpc,
        Theorem::N2MaxpropTopCharacterization,
        Theorem::N3MaxpropEqMaxrou,
        Theorem::MaxpropTraceStructure,
        Theorem::MaxpropPositionStructure,
        Theorem::UsmMatchesEnumeration,
        Theorem::WitnessesReplay,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Theorem::SingleProposalReceiver => "single-proposal-receiver",
            Theorem::ProposalRoundBounds => "proposal-round-bounds",
            Theorem::RoundSizesNonincreasing => "round-sizes-nonincreasing",
            Theorem::TraceConsistency => "trace-consistency",
            Theorem::DaOutputsStable => "da-outputs-stable",
            Theorem::StableExtremesOpposition => "stable-extremes-opposition",
            Theorem::MaxpropMatchesDaCount => "maxprop-matches-da-count",
            Theorem::MaxrouMatchesDaCount => "maxrou-matches-da-count",
            Theorem::MaxrouImpliesMaxprop => "maxrou-implies-maxprop",
            Theorem::MaxpropImpliesUsm => "maxprop-implies-usm",
            Theorem::MaxrouImpliesUsm => "maxrou-implies-usm",
            Theorem::SpcMaxpropDisjoint => "spc-maxprop-disjoint",
            Theorem::MWMaxpropDisjoint => "m-w-maxprop-disjoint",
            Theorem::N2MaxpropEqMaxrou => "n2-maxprop-eq-maxrou",
            Theorem::N2SpcEqNcc => "n2-spc-eq-ncc",
            Theorem::NccImpliesSpc => "ncc-implies-spc",
            Theorem::N2SpcEqUsm => "n2-spc-eq-usm",
            Theorem::N2MaxpropImpliesSpc => "n2-maxprop-implies-spc",
            Theorem::N2MaxpropTopCharacterization => "n2-maxprop-top-characterization",
            Theorem::N3MaxpropEqMaxrou => "n3-maxprop-eq-maxrou",
            Theorem::MaxpropTraceStructure => "maxprop-trace-structure",
            Theorem::MaxpropPositionStructure => "maxprop-position-structure",
            Theorem::UsmMatchesEnumeration => "usm-matches-enumeration",
            Theorem::WitnessesReplay => "witnesses-replay",
        }
    }

    /// Whether the check can apply at size `n` at all.
    pub fn applies_at(self, n: usize, ncc_evaluated: bool, stable_enumerated: bool) -> bool {
        match self {
            Theorem::SpcMaxpropDisjoint | Theorem::MWMaxpropDisjoint => n >= 3,
            Theorem::N2MaxpropEqMaxrou
            | Theorem::N2SpcEqUsm
            | Theorem::N2MaxpropImpliesSpc
            | Theorem::N2MaxpropTopCharacterization => n == 2,
            Theorem::N2SpcEqNcc => n == 2 && ncc_evaluated,
            Theorem::NccImpliesSpc => ncc_evaluated,
            Theorem::N3MaxpropEqMaxrou => n == 3,
            Theorem::UsmMatchesEnumeration => stable_enumerated,
            _ => true,
        }
    }

    pub fn from_id(id: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.id() == id)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub ncc_up_to: usize,
    pub stable_up_to: usize,
}

/// Everything the census learns from one profile.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub label: RegionLabel,
    /// `None`: the check does not apply to this profile.
    pub results: [Option<bool>; THEOREM_COUNT],
}

pub fn evaluate(profile: &PreferenceProfile, opts: EvalOptions) -> Evaluation {
    let n = profile.n();
    let (men_run, women_run) = run_da_dual(profile);
    let class = classify_with_outcomes(profile, &men_run, &women_run, ClassifyOptions { ncc_ceiling: opts.ncc_up_to });
    let ctx = Ctx { profile, n, men_run: &men_run, women_run: &women_run, class: &class, opts };
    let mut results = [None; THEOREM_COUNT];
    for (slot, t) in results.iter_mut().zip(Theorem::ALL) {
        *slot = ctx.check(t);
    }
    Evaluation { label: class.label, results }
}

struct Ctx<'a> {
    profile: &'a PreferenceProfile,
    n: usize,
    men_run: &'a DaOutcome,
    women_run: &'a DaOutcome,
    class: &'a Classification,
    opts: EvalOptions,
}

const SIDES: [ProposingSide; 2] = [ProposingSide::Men, ProposingSide::Women];

impl Ctx<'_> {
    fn run(&self, side: ProposingSide) -> &DaOutcome {
        match side {
            ProposingSide::Men => self.men_run,
            ProposingSide::Women => self.women_run,
        }
    }

    fn max_prop(&self, side: ProposingSide) -> bool {
        match side {
            ProposingSide::Men => self.class.label.m_max_prop,
            ProposingSide::Women => self.class.label.w_max_prop,
        }
    }

    fn max_rou(&self, side: ProposingSide) -> bool {
        match side {
            ProposingSide::Men => self.class.label.m_max_rou,
            ProposingSide::Women => self.class.label.w_max_rou,
        }
    }

    fn both(&self, f: impl Fn(ProposingSide) -> bool) -> bool {
        SIDES.into_iter().all(f)
    }

    fn check(&self, t: Theorem) -> Option<bool> {
        let n = self.n;
        let label = &self.class.label;
        if !t.applies_at(n, label.ncc.is_some(), n <= self.opts.stable_up_to) {
            return None;
        }
        Some(match t {
            Theorem::SingleProposalReceiver => self.both(|s| self.run(s).per_receiver_proposals.contains(&1)),
            Theorem::ProposalRoundBounds => self.both(|s| {
                let r = self.run(s);
                r.round_count >= 1
                    && r.proposal_count <= DaOutcome::max_proposals(n)
                    && r.round_count <= DaOutcome::max_rounds(n)
            }),
            Theorem::RoundSizesNonincreasing => {
                self.both(|s| self.run(s).round_sizes().windows(2).all(|w| w[0] >= w[1]))
            }
            Theorem::TraceConsistency => self.both(|s| trace_consistent(self.run(s), n)),
            Theorem::DaOutputsStable => self.both(|s| is_stable(self.profile, &self.run(s).matching)),
            Theorem::StableExtremesOpposition => self.opposition(),
            Theorem::MaxpropMatchesDaCount => self.both(|s| self.max_prop(s) == self.run(s).is_max_proposals()),
            Theorem::MaxrouMatchesDaCount => self.both(|s| self.max_rou(s) == self.run(s).is_max_rounds()),
            Theorem::MaxrouImpliesMaxprop => self.both(|s| !self.max_rou(s) || self.max_prop(s)),
            Theorem::MaxpropImpliesUsm => self.both(|s| !self.max_prop(s) || label.usm),
            Theorem::MaxrouImpliesUsm => self.both(|s| !self.max_rou(s) || label.usm),
            Theorem::SpcMaxpropDisjoint => !(label.spc && (label.m_max_prop || label.w_max_prop)),
            Theorem::MWMaxpropDisjoint => !(label.m_max_prop && label.w_max_prop),
            Theorem::N2MaxpropEqMaxrou | Theorem::N3MaxpropEqMaxrou => {
                self.both(|s| self.max_prop(s) == self.max_rou(s))
            }
            Theorem::N2SpcEqNcc => label.ncc == Some(label.spc),
            Theorem::NccImpliesSpc => label.ncc != Some(true) || label.spc,
            Theorem::N2SpcEqUsm => label.spc == label.usm,
            Theorem::N2MaxpropImpliesSpc => !(label.m_max_prop || label.w_max_prop) || label.spc,
            Theorem::N2MaxpropTopCharacterization => {
                let same_top = |side: Side| self.profile.row(side, 0)[0] == self.profile.row(side, 1)[0];
                let men_share = same_top(Side::Man);
                let women_share = same_top(Side::Woman);
                label.m_max_prop == men_share
                    && label.w_max_prop == women_share
                    && (label.m_max_prop && label.w_max_prop) == (men_share && women_share)
            }
            Theorem::MaxpropTraceStructure => {
                let hit: Vec<_> = SIDES.into_iter().filter(|&s| self.run(s).is_max_proposals()).collect();
                if hit.is_empty() {
                    return None;
                }
                hit.into_iter().all(|s| self.trace_structure(s))
            }
            Theorem::MaxpropPositionStructure => {
                let hit: Vec<_> = SIDES.into_iter().filter(|&s| self.run(s).is_max_proposals()).collect();
                if hit.is_empty() {
                    return None;
                }
                hit.into_iter().all(|s| self.position_structure(s))
            }
            Theorem::UsmMatchesEnumeration => {
                let stable = enumerate_stable_with_ceiling(self.profile, n).expect("n within ceiling");
                label.usm == (stable.len() == 1)
                    && stable.contains(&self.men_run.matching)
                    && stable.contains(&self.women_run.matching)
            }
            Theorem::WitnessesReplay => self.witnesses_replay(),
        })
    }

    /// Men weakly prefer the men-optimal matching to the women-optimal one
    /// and women the reverse; with enumeration available, every comparable
    /// pair of stable matchings shows the same opposition.
    fn opposition(&self) -> bool {
        let (mo, wo) = (&self.men_run.matching, &self.women_run.matching);
        let p = self.profile;
        if !(side_weakly_prefers(p, Side::Man, mo, wo) && side_weakly_prefers(p, Side::Woman, wo, mo)) {
            return false;
        }
        if self.n > self.opts.stable_up_to {
            return true;
        }
        let stable = enumerate_stable_with_ceiling(p, self.n).expect("n within ceiling");
        stable.matchings.iter().all(|a| {
            stable.matchings.iter().all(|b| {
                side_weakly_prefers(p, Side::Man, a, b) == side_weakly_prefers(p, Side::Woman, b, a)
            })
        })
    }

    /// Every proposer proposes to every receiver except the common last one,
    /// and every other receiver ends with her top proposer.
    fn trace_structure(&self, side: ProposingSide) -> bool {
        let n = self.n;
        let run = self.run(side);
        let last = self.profile.row(side.proposer(), 0)[n - 1];
        let mut proposed = vec![vec![false; n]; n];
        for ev in &run.trace {
            proposed[ev.proposer.index][ev.target.index] = true;
        }
        let all_proposed = (0..n).all(|p| (0..n).filter(|&r| r != last).all(|r| proposed[p][r]));
        let tops_matched = (0..n).filter(|&r| r != last).all(|r| {
            let top = self.profile.row(side.receiver(), r)[0];
            let partner = match side {
                ProposingSide::Men => run.matching.husband(r),
                ProposingSide::Women => run.matching.wife(r),
            };
            partner == top
        });
        all_proposed && tops_matched
    }

    /// Every proposer ranks the same receiver last, and every other
    /// receiver's top proposer ranks her penultimate.
    fn position_structure(&self, side: ProposingSide) -> bool {
        let n = self.n;
        let p = self.profile;
        let last = p.row(side.proposer(), 0)[n - 1];
        if !(0..n).all(|m| p.row(side.proposer(), m)[n - 1] == last) {
            return false;
        }
        if n < 2 {
            return true;
        }
        (0..n).filter(|&r| r != last).all(|r| {
            let top = p.row(side.receiver(), r)[0];
            p.row(side.proposer(), top)[n - 2] == r
        })
    }

    fn witnesses_replay(&self) -> bool {
        let p = self.profile;
        let ok = |r: &ConditionReport, replay: &dyn Fn(&crate::profile::ProfileOrdering) -> bool| {
            !r.verdict || r.ordering().is_some_and(replay)
        };
        let c = self.class;
        ok(&c.spc, &|o| replay_spc(p, o))
            && c.ncc.as_ref().is_none_or(|r| ok(r, &|o| replay_ncc(p, o)))
            && ok(&c.m_max_prop, &|o| replay_max_prop(p, o, ProposingSide::Men))
            && ok(&c.w_max_prop, &|o| replay_max_prop(p, o, ProposingSide::Women))
            && ok(&c.m_max_rou, &|o| replay_max_rou(p, o, ProposingSide::Men))
            && ok(&c.w_max_rou, &|o| replay_max_rou(p, o, ProposingSide::Women))
    }
}

/// Count fields agree with the trace, round 1 has every proposer, rounds
/// never go backwards and no proposal is repeated.
fn trace_consistent(run: &DaOutcome, n: usize) -> bool {
    let mut seen = vec![vec![false; n]; n];
    let mut received = vec![0usize; n];
    let mut prev_round = 1;
    for ev in &run.trace {
        if ev.round < prev_round || seen[ev.proposer.index][ev.target.index] {
            return false;
        }
        prev_round = ev.round;
        seen[ev.proposer.index][ev.target.index] = true;
        received[ev.target.index] += 1;
    }
    run.proposal_count == run.trace.len()
        && received == run.per_receiver_proposals
        && run.per_receiver_proposals.iter().sum::<usize>() == run.proposal_count
        && run.trace.iter().filter(|e| e.round == 1).count() == n
        && run.trace.last().is_none_or(|e| e.round == run.round_count)
}
