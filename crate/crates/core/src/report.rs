//! JSON views of results. Agents are written as 1-based labels (`m1`, `w3`)
//! and partner lists as 1-based indices. Objects built here have sorted keys.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::conditions::{Classification, ConditionReport, MaxPropFailure, Witness};
use crate::da::{DaOutcome, ProposalResult};
use crate::profile::{AgentIndex, Matching, PreferenceProfile, ProfileError, ProfileOrdering};
use crate::stability::{StableSet, UsmWitness};

/// A profile as 1-based rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileView {
    pub n: usize,
    pub men: Vec<Vec<usize>>,
    pub women: Vec<Vec<usize>>,
}

impl From<&PreferenceProfile> for ProfileView {
    fn from(p: &PreferenceProfile) -> Self {
        let one_based = |rows: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
            rows.into_iter().map(|r| r.into_iter().map(|x| x + 1).collect()).collect()
        };
        ProfileView { n: p.n(), men: one_based(p.men_rows()), women: one_based(p.women_rows()) }
    }
}

impl TryFrom<&ProfileView> for PreferenceProfile {
    type Error = ProfileError;

    fn try_from(v: &ProfileView) -> Result<Self, Self::Error> {
        let zero_based = |rows: &[Vec<usize>]| -> Vec<Vec<usize>> {
            // 0 maps past the end so validation reports it as out of range.
            rows.iter().map(|r| r.iter().map(|&x| x.checked_sub(1).unwrap_or(usize::MAX)).collect()).collect()
        };
        PreferenceProfile::new(v.n, &zero_based(&v.men), &zero_based(&v.women))
    }
}

fn label(a: AgentIndex) -> String {
    a.to_string()
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

pub fn matching_json(m: &Matching) -> Value {
    json!({ "man_to_woman": one_based(m.man_to_woman()) })
}

pub fn ordering_json(o: &ProfileOrdering) -> Value {
    json!({ "men_order": one_based(&o.men_order), "women_order": one_based(&o.women_order) })
}

fn failure_json(f: &MaxPropFailure) -> Value {
    let kind = match f.failed_condition() {
        crate::conditions::FailedCondition::LeastPreferred => "least-preferred",
        crate::conditions::FailedCondition::Penultimate => "penultimate",
        crate::conditions::FailedCondition::SecondPrefAcyclic => "second-pref-acyclic",
        crate::conditions::FailedCondition::OntoTopPrefs => "onto-top-prefs",
    };
    let detail = match f {
        MaxPropFailure::LeastPreferred { first, first_last, other, other_last } => json!({
            "first": label(*first), "first_last": label(*first_last),
            "other": label(*other), "other_last": label(*other_last),
        }),
        MaxPropFailure::Penultimate { receiver, top, penultimate } => json!({
            "receiver": label(*receiver), "top": label(*top), "penultimate": label(*penultimate),
        }),
        MaxPropFailure::SecondPrefCycle { cycle } => json!({ "cycle": cycle.iter().map(|&a| label(a)).collect::<Vec<_>>() }),
        MaxPropFailure::NotATopChoice { receiver } => json!({ "receiver": label(*receiver) }),
    };
    json!({ "kind": "failed-condition", "failed_condition": kind, "detail": detail })
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Ordering(o) => {
            let mut v = ordering_json(o);
            v["kind"] = json!("ordering");
            v
        }
        Witness::MaxProp(f) => failure_json(f),
        Witness::NoFixedPair { men, women } => json!({
            "kind": "no-fixed-pair",
            "men": one_based(men),
            "women": one_based(women),
        }),
        Witness::Usm(UsmWitness::Unique(m)) => json!({ "kind": "unique", "matching": matching_json(m) }),
        Witness::Usm(UsmWitness::Distinct { men_optimal, women_optimal }) => json!({
            "kind": "distinct",
            "men_optimal": matching_json(men_optimal),
            "women_optimal": matching_json(women_optimal),
        }),
    }
}

pub fn condition_report_json(r: &ConditionReport) -> Value {
    json!({
        "condition": r.condition.id(),
        "verdict": r.verdict,
        "witness": witness_json(&r.witness),
        "queries": r.queries,
    })
}

pub fn classification_json(c: &Classification) -> Value {
    json!({
        "region": { "mask": c.label.bitmask(), "regions": c.label.names(), "ncc_evaluated": c.label.ncc.is_some() },
        "reports": c.reports().into_iter().map(condition_report_json).collect::<Vec<_>>(),
    })
}

pub fn da_outcome_json(o: &DaOutcome, with_trace: bool) -> Value {
    let n = o.matching.n();
    let mut v = json!({
        "proposing": o.proposing,
        "n": n,
        "matching": matching_json(&o.matching),
        "proposal_count": o.proposal_count,
        "round_count": o.round_count,
        "max_proposals": DaOutcome::max_proposals(n),
        "max_rounds": DaOutcome::max_rounds(n),
        "per_receiver_proposals": o.per_receiver_proposals,
        "round_sizes": o.round_sizes(),
    });
    if with_trace {
        let trace: Vec<Value> = o
            .trace
            .iter()
            .map(|ev| {
                let mut e = json!({
                    "round": ev.round,
                    "proposer": label(ev.proposer),
                    "target": label(ev.target),
                });
                match ev.result {
                    ProposalResult::AcceptedTentatively => e["result"] = json!("accepted"),
                    ProposalResult::Rejected => e["result"] = json!("rejected"),
                    ProposalResult::DisplacedPrevious(prev) => {
                        e["result"] = json!("displaced");
                        e["displaced"] = json!(label(prev));
                    }
                }
                e
            })
            .collect();
        v["trace"] = Value::Array(trace);
    }
    v
}

pub fn stable_set_json(s: &StableSet) -> Value {
    json!({
        "count": s.len(),
        "matchings": s.matchings.iter().map(matching_json).collect::<Vec<_>>(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}
