//! Sufficient conditions for a unique stable matching, each checked directly
//! from preference structure and reported with a replayable witness.
//!
//! * MaxProp / MaxRou: recognised from a handful of preference positions
//!   (each proposer's first, penultimate and last entry, each receiver's first
//!   and second), without running deferred acceptance.
//! * SPC: iterated removal of mutually-top pairs.
//! * NCC: exhaustive ordering search below a size ceiling.

mod maxprop;
mod ncc;
pub mod replay;
mod spc;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::da::{run_da_dual, DaOutcome, ProposingSide};
use crate::profile::{AgentIndex, PreferenceProfile, ProfileError, ProfileOrdering};
use crate::stability::{usm_from_outcomes, UsmWitness};

pub use maxprop::{
    build_second_pref_digraph, check_max_prop, check_max_rou, is_max_prop, is_max_rou, Counted, OrientedProfile,
    PartialProfile, PositionAccess, SecondPrefDigraph,
};
pub use ncc::{is_ncc, is_ncc_with_ceiling, DEFAULT_NCC_CEILING};
pub use spc::is_spc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("n = {n} exceeds the search ceiling of {ceiling}")]
    InstanceTooLarge { n: usize, ceiling: usize },
    #[error("labeling does not satisfy the structural conditions: {0}")]
    LabelingInvalid(String),
    #[error("partial profile does not supply position {position} of {agent}")]
    MissingPosition { agent: AgentIndex, position: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "m-maxprop")]
    MMaxProp,
    #[serde(rename = "w-maxprop")]
    WMaxProp,
    #[serde(rename = "m-maxrou")]
    MMaxRou,
    #[serde(rename = "w-maxrou")]
    WMaxRou,
    #[serde(rename = "spc")]
    Spc,
    #[serde(rename = "ncc")]
    Ncc,
    #[serde(rename = "usm")]
    Usm,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::Usm,
        Condition::Spc,
        Condition::Ncc,
        Condition::MMaxProp,
        Condition::WMaxProp,
        Condition::MMaxRou,
        Condition::WMaxRou,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::MMaxProp => "m-maxprop",
            Condition::WMaxProp => "w-maxprop",
            Condition::MMaxRou => "m-maxrou",
            Condition::WMaxRou => "w-maxrou",
            Condition::Spc => "spc",
            Condition::Ncc => "ncc",
            Condition::Usm => "usm",
        }
    }

    pub(crate) fn max_prop(side: ProposingSide) -> Self {
        match side {
            ProposingSide::Men => Condition::MMaxProp,
            ProposingSide::Women => Condition::WMaxProp,
        }
    }

    pub(crate) fn max_rou(side: ProposingSide) -> Self {
        match side {
            ProposingSide::Men => Condition::MMaxRou,
            ProposingSide::Women => Condition::WMaxRou,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Condition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Condition::ALL
            .into_iter()
            .find(|c| c.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

/// Which of the structural conditions behind MaxProp / MaxRou failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailedCondition {
    LeastPreferred,
    Penultimate,
    SecondPrefAcyclic,
    OntoTopPrefs,
}

/// Evidence for a negative MaxProp / MaxRou verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxPropFailure {
    /// Two proposers with different least-preferred receivers.
    LeastPreferred { first: AgentIndex, first_last: AgentIndex, other: AgentIndex, other_last: AgentIndex },
    /// `receiver`'s top proposer does not rank her penultimate.
    Penultimate { receiver: AgentIndex, top: AgentIndex, penultimate: AgentIndex },
    /// Receivers whose second choices form a directed cycle, in cycle order.
    SecondPrefCycle { cycle: Vec<AgentIndex> },
    /// `receiver` is nobody's first choice.
    NotATopChoice { receiver: AgentIndex },
}

impl MaxPropFailure {
    pub fn failed_condition(&self) -> FailedCondition {
        match self {
            MaxPropFailure::LeastPreferred { .. } => FailedCondition::LeastPreferred,
            MaxPropFailure::Penultimate { .. } => FailedCondition::Penultimate,
            MaxPropFailure::SecondPrefCycle { .. } => FailedCondition::SecondPrefAcyclic,
            MaxPropFailure::NotATopChoice { .. } => FailedCondition::OntoTopPrefs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    /// Labeling under which the condition holds.
    Ordering(ProfileOrdering),
    MaxProp(MaxPropFailure),
    /// SPC elimination stalled: the surviving agents have no mutually-top pair.
    NoFixedPair { men: Vec<usize>, women: Vec<usize> },
    Usm(UsmWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: bool,
    pub witness: Witness,
    /// Preference-position lookups, for checkers that count them.
    pub queries: Option<usize>,
}

impl ConditionReport {
    pub fn ordering(&self) -> Option<&ProfileOrdering> {
        match &self.witness {
            Witness::Ordering(o) => Some(o),
            _ => None,
        }
    }

    pub fn failed_condition(&self) -> Option<FailedCondition> {
        match &self.witness {
            Witness::MaxProp(f) => Some(f.failed_condition()),
            _ => None,
        }
    }
}

pub fn usm_report(profile: &PreferenceProfile) -> ConditionReport {
    let (m, w) = run_da_dual(profile);
    usm_report_from(&m, &w)
}

fn usm_report_from(m: &DaOutcome, w: &DaOutcome) -> ConditionReport {
    let v = usm_from_outcomes(m, w);
    ConditionReport { condition: Condition::Usm, verdict: v.unique, witness: Witness::Usm(v.witness), queries: None }
}

/// Verdicts for all seven conditions; `ncc` is `None` when NCC was skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionLabel {
    pub usm: bool,
    pub spc: bool,
    pub ncc: Option<bool>,
    pub m_max_prop: bool,
    pub w_max_prop: bool,
    pub m_max_rou: bool,
    pub w_max_rou: bool,
}

impl RegionLabel {
    /// Bit order follows [`Condition::ALL`]: USM = 1, SPC = 2, NCC = 4,
    /// m-MaxProp = 8, w-MaxProp = 16, m-MaxRou = 32, w-MaxRou = 64. A skipped
    /// NCC contributes 0.
    pub fn bitmask(&self) -> u8 {
        self.flags().iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i))
    }

    pub fn from_bitmask(mask: u8, ncc_evaluated: bool) -> Self {
        let bit = |i: u8| mask & (1 << i) != 0;
        RegionLabel {
            usm: bit(0),
            spc: bit(1),
            ncc: ncc_evaluated.then(|| bit(2)),
            m_max_prop: bit(3),
            w_max_prop: bit(4),
            m_max_rou: bit(5),
            w_max_rou: bit(6),
        }
    }

    pub fn flags(&self) -> [bool; 7] {
        [
            self.usm,
            self.spc,
            self.ncc.unwrap_or(false),
            self.m_max_prop,
            self.w_max_prop,
            self.m_max_rou,
            self.w_max_rou,
        ]
    }

    pub fn get(&self, c: Condition) -> Option<bool> {
        match c {
            Condition::Ncc => self.ncc,
            other => Some(self.flags()[Condition::ALL.iter().position(|&x| x == other).unwrap()]),
        }
    }

    /// Names of the conditions that hold, e.g. `["usm", "m-maxprop"]`.
    pub fn names(&self) -> Vec<&'static str> {
        Condition::ALL.into_iter().filter(|&c| self.get(c) == Some(true)).map(Condition::id).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// NCC is evaluated only when `n <= ncc_ceiling`.
    pub ncc_ceiling: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { ncc_ceiling: DEFAULT_NCC_CEILING }
    }
}

/// All seven reports for one profile.
#[derive(Debug, Clone)]
pub struct Classification {
    pub label: RegionLabel,
    pub usm: ConditionReport,
    pub spc: ConditionReport,
    pub ncc: Option<ConditionReport>,
    pub m_max_prop: ConditionReport,
    pub w_max_prop: ConditionReport,
    pub m_max_rou: ConditionReport,
    pub w_max_rou: ConditionReport,
}

impl Classification {
    pub fn reports(&self) -> Vec<&ConditionReport> {
        let mut v = vec![&self.usm, &self.spc];
        v.extend(self.ncc.as_ref());
        v.extend([&self.m_max_prop, &self.w_max_prop, &self.m_max_rou, &self.w_max_rou]);
        v
    }
}

pub fn classify(profile: &PreferenceProfile) -> Classification {
    classify_with(profile, ClassifyOptions::default())
}

pub fn classify_with(profile: &PreferenceProfile, opts: ClassifyOptions) -> Classification {
    let (m, w) = run_da_dual(profile);
    classify_with_outcomes(profile, &m, &w, opts)
}

/// Classification reusing deferred-acceptance runs the caller already has.
/// Only the USM verdict reads them.
pub fn classify_with_outcomes(
    profile: &PreferenceProfile,
    men_run: &DaOutcome,
    women_run: &DaOutcome,
    opts: ClassifyOptions,
) -> Classification {
    let usm = usm_report_from(men_run, women_run);
    let spc = is_spc(profile);
    let ncc = (profile.n() <= opts.ncc_ceiling)
        .then(|| is_ncc_with_ceiling(profile, opts.ncc_ceiling).expect("n within ceiling"));
    let m_max_prop = is_max_prop(profile, ProposingSide::Men);
    let w_max_prop = is_max_prop(profile, ProposingSide::Women);
    let m_max_rou = is_max_rou(profile, ProposingSide::Men);
    let w_max_rou = is_max_rou(profile, ProposingSide::Women);
    let label = RegionLabel {
        usm: usm.verdict,
        spc: spc.verdict,
        ncc: ncc.as_ref().map(|r| r.verdict),
        m_max_prop: m_max_prop.verdict,
        w_max_prop: w_max_prop.verdict,
        m_max_rou: m_max_rou.verdict,
        w_max_rou: w_max_rou.verdict,
    };
    Classification { label, usm, spc, ncc, m_max_prop, w_max_prop, m_max_rou, w_max_rou }
}

/// Convenience for a single condition.
pub fn check(profile: &PreferenceProfile, condition: Condition) -> Result<ConditionReport, ConditionError> {
    Ok(match condition {
        Condition::MMaxProp => is_max_prop(profile, ProposingSide::Men),
        Condition::WMaxProp => is_max_prop(profile, ProposingSide::Women),
        Condition::MMaxRou => is_max_rou(profile, ProposingSide::Men),
        Condition::WMaxRou => is_max_rou(profile, ProposingSide::Women),
        Condition::Spc => is_spc(profile),
        Condition::Ncc => is_ncc(profile)?,
        Condition::Usm => usm_report(profile),
    })
}
