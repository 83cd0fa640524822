//! Stable marriage toolkit: instrumented deferred acceptance, checkers for
//! sufficient conditions of a unique stable matching, and a census engine
//! that classifies whole profile spaces.

pub mod census;
pub mod conditions;
pub mod da;
pub mod format;
pub mod perm;
pub mod profile;
pub mod report;
pub mod stability;

pub use census::generators as fixtures;
pub use conditions::{check, classify, Condition, ConditionReport, RegionLabel};
pub use da::{run_da, run_da_dual, DaOutcome, ProposingSide};
pub use profile::{AgentIndex, Matching, PreferenceProfile, ProfileOrdering, Side};
