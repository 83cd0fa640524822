//! Linear-query recognition of MaxProp and MaxRou.
//!
//! A profile is MaxProp for a proposing side iff, under some labeling of both
//! sides:
//!
//! 1. every proposer ranks the same receiver `r_last` last;
//! 2. every other receiver `r` has a top proposer `t(r)` who ranks `r`
//!    penultimate (so `t` is injective and leaves exactly one proposer over);
//! 3. the second-preference digraph on the receivers other than `r_last` (edge
//!    `r -> r'` when `r`'s second choice is `t(r')`) is acyclic.
//!
//! MaxRou additionally needs every receiver other than `r_last` to be some
//! proposer's first choice.
//!
//! The checker only ever reads five positions per agent pair of sides, through
//! [`PositionAccess`], so it also runs on partial preference data.

use std::cell::Cell;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::da::ProposingSide;
use crate::profile::{AgentIndex, PreferenceProfile, ProfileOrdering};

use super::{Condition, ConditionError, ConditionReport, MaxPropFailure, Witness};

/// Read access to individual preference positions, phrased in terms of the
/// proposing and receiving sides. `None` means the position is unknown.
pub trait PositionAccess {
    fn n(&self) -> usize;
    /// Receiver at `position` of `proposer`'s list (0 = most preferred).
    fn proposer_entry(&self, proposer: usize, position: usize) -> Option<usize>;
    /// Proposer at `position` of `receiver`'s list.
    fn receiver_entry(&self, receiver: usize, position: usize) -> Option<usize>;
}

/// A full profile viewed from one proposing side.
#[derive(Debug, Clone, Copy)]
pub struct OrientedProfile<'a> {
    profile: &'a PreferenceProfile,
    side: ProposingSide,
}

impl<'a> OrientedProfile<'a> {
    pub fn new(profile: &'a PreferenceProfile, side: ProposingSide) -> Self {
        OrientedProfile { profile, side }
    }
}

impl PositionAccess for OrientedProfile<'_> {
    fn n(&self) -> usize {
        self.profile.n()
    }

    fn proposer_entry(&self, proposer: usize, position: usize) -> Option<usize> {
        self.profile.row(self.side.proposer(), proposer).get(position).copied()
    }

    fn receiver_entry(&self, receiver: usize, position: usize) -> Option<usize> {
        self.profile.row(self.side.receiver(), receiver).get(position).copied()
    }
}

/// Only the positions the recognisers look at: each proposer's first,
/// penultimate and last choice, each receiver's first and second choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProfile {
    n: usize,
    proposer_first: Vec<usize>,
    proposer_penultimate: Vec<usize>,
    proposer_last: Vec<usize>,
    receiver_first: Vec<usize>,
    receiver_second: Vec<usize>,
}

impl PartialProfile {
    /// Panics if any vector does not have length `n`.
    pub fn new(
        n: usize,
        proposer_first: Vec<usize>,
        proposer_penultimate: Vec<usize>,
        proposer_last: Vec<usize>,
        receiver_first: Vec<usize>,
        receiver_second: Vec<usize>,
    ) -> Self {
        for v in [&proposer_first, &proposer_penultimate, &proposer_last, &receiver_first, &receiver_second] {
            assert_eq!(v.len(), n, "partial profile columns must have n entries");
        }
        PartialProfile { n, proposer_first, proposer_penultimate, proposer_last, receiver_first, receiver_second }
    }

    pub fn from_profile(profile: &PreferenceProfile, side: ProposingSide) -> Self {
        let n = profile.n();
        let p = |pos: usize| -> Vec<usize> {
            profile.rows(side.proposer()).map(|row| row[pos.min(n - 1)]).collect()
        };
        let r = |pos: usize| -> Vec<usize> {
            profile.rows(side.receiver()).map(|row| row[pos.min(n - 1)]).collect()
        };
        PartialProfile::new(n, p(0), p(n.saturating_sub(2)), p(n - 1), r(0), r(1))
    }
}

impl PositionAccess for PartialProfile {
    fn n(&self) -> usize {
        self.n
    }

    fn proposer_entry(&self, proposer: usize, position: usize) -> Option<usize> {
        let n = self.n;
        if position == n - 1 {
            Some(self.proposer_last[proposer])
        } else if n >= 2 && position == n - 2 {
            Some(self.proposer_penultimate[proposer])
        } else if position == 0 {
            Some(self.proposer_first[proposer])
        } else {
            None
        }
    }

    fn receiver_entry(&self, receiver: usize, position: usize) -> Option<usize> {
        match position {
            0 => Some(self.receiver_first[receiver]),
            1 if self.n >= 2 => Some(self.receiver_second[receiver]),
            _ => None,
        }
    }
}

/// Wraps an accessor and counts every lookup.
#[derive(Debug)]
pub struct Counted<A> {
    inner: A,
    queries: Cell<usize>,
}

impl<A> Counted<A> {
    pub fn new(inner: A) -> Self {
        Counted { inner, queries: Cell::new(0) }
    }

    pub fn queries(&self) -> usize {
        self.queries.get()
    }
}

impl<A: PositionAccess> PositionAccess for Counted<A> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn proposer_entry(&self, proposer: usize, position: usize) -> Option<usize> {
        self.queries.set(self.queries.get() + 1);
        self.inner.proposer_entry(proposer, position)
    }

    fn receiver_entry(&self, receiver: usize, position: usize) -> Option<usize> {
        self.queries.set(self.queries.get() + 1);
        self.inner.receiver_entry(receiver, position)
    }
}

/// Second-preference digraph over labelled receivers `0..n-1` (the receiver
/// ranked last by everyone is excluded). Vertex `i` is the receiver labelled
/// `i`; its single out-edge, if any, points at the label whose top proposer is
/// `i`'s second choice. Proposer `n-1` (the unpaired one) is a sink and gets no
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondPrefDigraph {
    /// Label -> receiver index.
    receivers: Vec<usize>,
    out_edge: Vec<Option<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    White,
    Gray,
    Black,
}

impl SecondPrefDigraph {
    pub fn vertex_count(&self) -> usize {
        self.out_edge.len()
    }

    pub fn out_edge(&self, v: usize) -> Option<usize> {
        self.out_edge[v]
    }

    /// Receiver index carried by label `v`.
    pub fn receiver(&self, v: usize) -> usize {
        self.receivers[v]
    }

    /// First cycle found scanning start vertices in ascending order, as a list
    /// of labels in edge order.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let mut mark = vec![Mark::White; self.vertex_count()];
        for start in 0..self.vertex_count() {
            if mark[start] != Mark::White {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = Some(start);
            while let Some(v) = cur {
                match mark[v] {
                    Mark::White => {
                        mark[v] = Mark::Gray;
                        path.push(v);
                        cur = self.out_edge[v];
                    }
                    Mark::Gray => {
                        let at = path.iter().position(|&x| x == v).expect("gray vertex is on the current path");
                        return Some(path[at..].to_vec());
                    }
                    Mark::Black => break,
                }
            }
            for v in path {
                mark[v] = Mark::Black;
            }
        }
        None
    }

    /// Lexicographically least order in which every edge goes forward, or
    /// `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let k = self.vertex_count();
        let mut indegree = vec![0usize; k];
        for t in self.out_edge.iter().flatten() {
            indegree[*t] += 1;
        }
        let mut ready: BinaryHeap<Reverse<usize>> = (0..k).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            if let Some(t) = self.out_edge[v] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    ready.push(Reverse(t));
                }
            }
        }
        (order.len() == k).then_some(order)
    }
}

/// What conditions 1 and 2 pin down.
struct Skeleton {
    last: usize,
    /// Receivers other than `last`, ascending.
    receivers: Vec<usize>,
    /// Top proposer of each entry of `receivers`.
    tops: Vec<usize>,
    /// Proposer -> label of the receiver he tops, if any.
    owner: Vec<Option<usize>>,
    leftover: usize,
}

fn entry_p<A: PositionAccess>(a: &A, side: ProposingSide, p: usize, pos: usize) -> Result<usize, ConditionError> {
    a.proposer_entry(p, pos).ok_or(ConditionError::MissingPosition {
        agent: AgentIndex { side: side.proposer(), index: p },
        position: pos,
    })
}

fn entry_r<A: PositionAccess>(a: &A, side: ProposingSide, r: usize, pos: usize) -> Result<usize, ConditionError> {
    a.receiver_entry(r, pos).ok_or(ConditionError::MissingPosition {
        agent: AgentIndex { side: side.receiver(), index: r },
        position: pos,
    })
}

fn skeleton<A: PositionAccess>(a: &A, side: ProposingSide) -> Result<Result<Skeleton, MaxPropFailure>, ConditionError> {
    let n = a.n();
    let prop = |i| AgentIndex { side: side.proposer(), index: i };
    let recv = |i| AgentIndex { side: side.receiver(), index: i };

    let last = entry_p(a, side, 0, n - 1)?;
    for p in 1..n {
        let lp = entry_p(a, side, p, n - 1)?;
        if lp != last {
            return Ok(Err(MaxPropFailure::LeastPreferred {
                first: prop(0),
                first_last: recv(last),
                other: prop(p),
                other_last: recv(lp),
            }));
        }
    }

    let receivers: Vec<usize> = (0..n).filter(|&r| r != last).collect();
    let mut tops = Vec::with_capacity(n - 1);
    let mut owner = vec![None; n];
    for (label, &r) in receivers.iter().enumerate() {
        let top = entry_r(a, side, r, 0)?;
        let pen = entry_p(a, side, top, n - 2)?;
        if pen != r {
            return Ok(Err(MaxPropFailure::Penultimate { receiver: recv(r), top: prop(top), penultimate: recv(pen) }));
        }
        // A proposer has one penultimate entry, so `owner` cannot collide.
        owner[top] = Some(label);
        tops.push(top);
    }
    let leftover = owner.iter().position(Option::is_none).expect("n-1 distinct tops leave one proposer");
    Ok(Ok(Skeleton { last, receivers, tops, owner, leftover }))
}

fn digraph_from<A: PositionAccess>(
    a: &A,
    side: ProposingSide,
    receivers: &[usize],
    owner: &[Option<usize>],
) -> Result<SecondPrefDigraph, ConditionError> {
    let mut out_edge = Vec::with_capacity(receivers.len());
    for &r in receivers {
        let second = entry_r(a, side, r, 1)?;
        out_edge.push(owner[second]);
    }
    Ok(SecondPrefDigraph { receivers: receivers.to_vec(), out_edge })
}

fn oriented_ordering(side: ProposingSide, proposers: Vec<usize>, receivers: Vec<usize>) -> ProfileOrdering {
    let (men_order, women_order) = match side {
        ProposingSide::Men => (proposers, receivers),
        ProposingSide::Women => (receivers, proposers),
    };
    ProfileOrdering::new(men_order, women_order).expect("orderings built from permutations")
}

/// MaxProp recognition result plus the labeling that proves it.
struct Recognised {
    skeleton: Skeleton,
    ordering: ProfileOrdering,
}

fn recognise<A: PositionAccess>(a: &A, side: ProposingSide) -> Result<Result<Recognised, MaxPropFailure>, ConditionError> {
    let n = a.n();
    if n == 1 {
        let skeleton = Skeleton { last: 0, receivers: vec![], tops: vec![], owner: vec![None], leftover: 0 };
        return Ok(Ok(Recognised { skeleton, ordering: ProfileOrdering::identity(1) }));
    }
    let sk = match skeleton(a, side)? {
        Ok(sk) => sk,
        Err(f) => return Ok(Err(f)),
    };
    let graph = digraph_from(a, side, &sk.receivers, &sk.owner)?;
    if let Some(cycle) = graph.find_cycle() {
        let cycle = cycle
            .into_iter()
            .map(|l| AgentIndex { side: side.receiver(), index: graph.receiver(l) })
            .collect();
        return Ok(Err(MaxPropFailure::SecondPrefCycle { cycle }));
    }
    let topo = graph.topological_order().expect("acyclic graph has a topological order");
    let mut receivers: Vec<usize> = topo.iter().map(|&l| sk.receivers[l]).collect();
    let mut proposers: Vec<usize> = topo.iter().map(|&l| sk.tops[l]).collect();
    receivers.push(sk.last);
    proposers.push(sk.leftover);
    let ordering = oriented_ordering(side, proposers, receivers);
    Ok(Ok(Recognised { skeleton: sk, ordering }))
}

/// MaxProp on any position source. Errors only when a needed position is
/// missing from partial data.
pub fn check_max_prop<A: PositionAccess>(access: &A, side: ProposingSide) -> Result<ConditionReport, ConditionError> {
    let counted = Counted::new(access);
    let outcome = recognise(&counted, side)?;
    if counted.n() == 2 {
        // With two proposers, MaxProp is exactly "both proposers share a top".
        let same_top = entry_p(&counted, side, 0, 0)? == entry_p(&counted, side, 1, 0)?;
        debug_assert_eq!(same_top, outcome.is_ok(), "n = 2 shortcut disagrees with the structural test");
    }
    let (verdict, witness) = match outcome {
        Ok(rec) => (true, Witness::Ordering(rec.ordering)),
        Err(f) => (false, Witness::MaxProp(f)),
    };
    Ok(ConditionReport { condition: Condition::max_prop(side), verdict, witness, queries: Some(counted.queries()) })
}

pub fn check_max_rou<A: PositionAccess>(access: &A, side: ProposingSide) -> Result<ConditionReport, ConditionError> {
    let counted = Counted::new(access);
    let condition = Condition::max_rou(side);
    let rec = match recognise(&counted, side)? {
        Ok(rec) => rec,
        Err(f) => {
            return Ok(ConditionReport {
                condition,
                verdict: false,
                witness: Witness::MaxProp(f),
                queries: Some(counted.queries()),
            })
        }
    };
    let n = counted.n();
    let mut is_top = vec![false; n];
    for p in 0..n {
        is_top[entry_p(&counted, side, p, 0)?] = true;
    }
    let uncovered = rec.skeleton.receivers.iter().copied().find(|&r| !is_top[r]);
    let (verdict, witness) = match uncovered {
        None => (true, Witness::Ordering(rec.ordering)),
        Some(r) => (
            false,
            Witness::MaxProp(MaxPropFailure::NotATopChoice { receiver: AgentIndex { side: side.receiver(), index: r } }),
        ),
    };
    Ok(ConditionReport { condition, verdict, witness, queries: Some(counted.queries()) })
}

pub fn is_max_prop(profile: &PreferenceProfile, side: ProposingSide) -> ConditionReport {
    check_max_prop(&OrientedProfile::new(profile, side), side).expect("full profiles supply every position")
}

pub fn is_max_rou(profile: &PreferenceProfile, side: ProposingSide) -> ConditionReport {
    check_max_rou(&OrientedProfile::new(profile, side), side).expect("full profiles supply every position")
}

impl<A: PositionAccess> PositionAccess for &A {
    fn n(&self) -> usize {
        (**self).n()
    }

    fn proposer_entry(&self, proposer: usize, position: usize) -> Option<usize> {
        (**self).proposer_entry(proposer, position)
    }

    fn receiver_entry(&self, receiver: usize, position: usize) -> Option<usize> {
        (**self).receiver_entry(receiver, position)
    }
}

/// Builds the second-preference digraph under a caller-supplied labeling,
/// after checking that the labeling satisfies conditions 1 and 2: everyone
/// on the proposing side ranks the last-labelled receiver last, and for every
/// other label `i` the receiver `i` ranks proposer `i` first while proposer
/// `i` ranks receiver `i` penultimate.
pub fn build_second_pref_digraph(
    profile: &PreferenceProfile,
    labeling: &ProfileOrdering,
    side: ProposingSide,
) -> Result<SecondPrefDigraph, ConditionError> {
    let n = profile.n();
    if labeling.n() != n {
        return Err(ConditionError::Profile(crate::profile::ProfileError::DimensionMismatch {
            expected: n,
            found: labeling.n(),
        }));
    }
    if n < 2 {
        return Err(ConditionError::LabelingInvalid("the digraph needs n >= 2".into()));
    }
    let a = OrientedProfile::new(profile, side);
    let proposers = labeling.order(side.proposer());
    let receivers = labeling.order(side.receiver());
    let last = receivers[n - 1];
    for p in 0..n {
        if a.proposer_entry(p, n - 1) != Some(last) {
            return Err(ConditionError::LabelingInvalid(format!(
                "{} does not rank {} last",
                AgentIndex { side: side.proposer(), index: p },
                AgentIndex { side: side.receiver(), index: last }
            )));
        }
    }
    let mut owner = vec![None; n];
    for i in 0..n - 1 {
        let (r, p) = (receivers[i], proposers[i]);
        if a.receiver_entry(r, 0) != Some(p) || a.proposer_entry(p, n - 2) != Some(r) {
            return Err(ConditionError::LabelingInvalid(format!(
                "{} and {} are not a top / penultimate pair",
                AgentIndex { side: side.receiver(), index: r },
                AgentIndex { side: side.proposer(), index: p }
            )));
        }
        owner[p] = Some(i);
    }
    digraph_from(&a, side, &receivers[..n - 1], &owner)
}
