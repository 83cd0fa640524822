//! Instrumented deferred acceptance.
//!
//! A round is one pass in which every proposer that is unmatched at the start
//! of the round makes exactly one proposal, in ascending index order. A
//! proposer displaced during a round waits for the next one. Proposal and
//! round totals do not depend on the within-round order; the trace does.

use serde::{Deserialize, Serialize};

use crate::profile::{AgentIndex, Matching, PreferenceProfile, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposingSide {
    Men,
    Women,
}

impl ProposingSide {
    pub fn proposer(self) -> Side {
        match self {
            ProposingSide::Men => Side::Man,
            ProposingSide::Women => Side::Woman,
        }
    }

    pub fn receiver(self) -> Side {
        self.proposer().other()
    }

    pub fn other(self) -> ProposingSide {
        match self {
            ProposingSide::Men => ProposingSide::Women,
            ProposingSide::Women => ProposingSide::Men,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            ProposingSide::Men => "m",
            ProposingSide::Women => "w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProposalResult {
    /// The target was free and holds the proposer.
    AcceptedTentatively,
    Rejected,
    /// The target traded up; carries the proposer she let go.
    DisplacedPrevious(AgentIndex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProposalEvent {
    /// 1-based round number.
    pub round: usize,
    pub proposer: AgentIndex,
    pub target: AgentIndex,
    pub result: ProposalResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaOutcome {
    pub proposing: ProposingSide,
    pub matching: Matching,
    pub proposal_count: usize,
    pub round_count: usize,
    /// Proposals received by each member of the receiving side.
    pub per_receiver_proposals: Vec<usize>,
    pub trace: Vec<ProposalEvent>,
}

impl DaOutcome {
    /// Number of proposals made in each round, first round first.
    pub fn round_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.round_count];
        for ev in &self.trace {
            sizes[ev.round - 1] += 1;
        }
        sizes
    }

    /// Bound on proposals over all profiles of size `n`.
    pub fn max_proposals(n: usize) -> usize {
        n * n - n + 1
    }

    /// Bound on rounds over all profiles of size `n`.
    pub fn max_rounds(n: usize) -> usize {
        n * n + 2 - 2 * n
    }

    pub fn is_max_proposals(&self) -> bool {
        self.proposal_count == Self::max_proposals(self.matching.n())
    }

    pub fn is_max_rounds(&self) -> bool {
        self.round_count == Self::max_rounds(self.matching.n())
    }
}

pub fn run_da(profile: &PreferenceProfile, proposing: ProposingSide) -> DaOutcome {
    let n = profile.n();
    let proposer_side = proposing.proposer();
    let receiver_side = proposing.receiver();
    let receiver_ranks = profile.ranks(receiver_side);

    // next_choice[p]: position in p's row of the next receiver to try.
    let mut next_choice = vec![0usize; n];
    let mut holder: Vec<Option<usize>> = vec![None; n];
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut received = vec![0usize; n];
    let mut trace = Vec::new();
    let mut round = 0;
    let mut free: Vec<usize> = (0..n).collect();

    while !free.is_empty() {
        round += 1;
        for &p in &free {
            let target = profile.row(proposer_side, p)[next_choice[p]];
            next_choice[p] += 1;
            received[target] += 1;
            let result = match holder[target] {
                None => {
                    holder[target] = Some(p);
                    partner[p] = Some(target);
                    ProposalResult::AcceptedTentatively
                }
                Some(current) if receiver_ranks.rank(target, p) < receiver_ranks.rank(target, current) => {
                    holder[target] = Some(p);
                    partner[p] = Some(target);
                    partner[current] = None;
                    ProposalResult::DisplacedPrevious(AgentIndex { side: proposer_side, index: current })
                }
                Some(_) => ProposalResult::Rejected,
            };
            trace.push(ProposalEvent {
                round,
                proposer: AgentIndex { side: proposer_side, index: p },
                target: AgentIndex { side: receiver_side, index: target },
                result,
            });
        }
        free = (0..n).filter(|&p| partner[p].is_none()).collect();
    }

    let proposer_to_receiver: Vec<usize> = partner.into_iter().map(|x| x.expect("every proposer matched")).collect();
    let receiver_to_proposer: Vec<usize> = holder.into_iter().map(|x| x.expect("every receiver matched")).collect();
    let matching = match proposing {
        ProposingSide::Men => Matching::from_parts_unchecked(proposer_to_receiver, receiver_to_proposer),
        ProposingSide::Women => Matching::from_parts_unchecked(receiver_to_proposer, proposer_to_receiver),
    };
    DaOutcome {
        proposing,
        matching,
        proposal_count: trace.len(),
        round_count: round,
        per_receiver_proposals: received,
        trace,
    }
}

/// Men-proposing and women-proposing outcomes, in that order.
pub fn run_da_dual(profile: &PreferenceProfile) -> (DaOutcome, DaOutcome) {
    (run_da(profile, ProposingSide::Men), run_da(profile, ProposingSide::Women))
}
