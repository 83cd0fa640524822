//! Domain types shared by every module: strict preference profiles over two
//! equal-sized sides, perfect matchings, and agent orderings.
//!
//! Indices are 0-based everywhere in this crate. Human-facing text (error
//! messages, files, reports) uses 1-based `m1..mn` / `w1..wn` labels.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Man,
    Woman,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Man => Side::Woman,
            Side::Woman => Side::Man,
        }
    }

    fn letter(self) -> char {
        match self {
            Side::Man => 'm',
            Side::Woman => 'w',
        }
    }
}

/// One agent of a market: `m{index+1}` or `w{index+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentIndex {
    pub side: Side,
    pub index: usize,
}

impl AgentIndex {
    pub fn man(index: usize) -> Self {
        AgentIndex { side: Side::Man, index }
    }

    pub fn woman(index: usize) -> Self {
        AgentIndex { side: Side::Woman, index }
    }
}

impl fmt::Display for AgentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side.letter(), self.index + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("profile size must be at least 1")]
    Empty,
    #[error("expected {expected} {side:?} rows, found {found}")]
    RowCountMismatch { side: Side, expected: usize, found: usize },
    #[error("row of {agent} has {found} entries, expected {expected}")]
    RowLengthMismatch { agent: AgentIndex, expected: usize, found: usize },
    #[error("row of {agent} contains out-of-range entry {value}")]
    OutOfRange { agent: AgentIndex, value: usize },
    #[error("row of {agent} lists {} more than once", AgentIndex { side: agent.side.other(), index: *value })]
    DuplicateEntry { agent: AgentIndex, value: usize },
    #[error("dimension mismatch: expected n = {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} is not a permutation of 0..{n}")]
    NotAPermutation { what: &'static str, n: usize },
}

/// Position of every partner in one side's preference rows; `rank(a, p) = k`
/// iff `p` sits at position `k` of `a`'s row (0 = most preferred).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankTable {
    n: usize,
    ranks: Vec<usize>,
}

impl RankTable {
    fn from_rows(n: usize, rows: &[usize]) -> Self {
        let mut ranks = vec![0; n * n];
        for agent in 0..n {
            for (pos, &partner) in rows[agent * n..(agent + 1) * n].iter().enumerate() {
                ranks[agent * n + partner] = pos;
            }
        }
        RankTable { n, ranks }
    }

    #[inline]
    pub fn rank(&self, agent: usize, partner: usize) -> usize {
        assert!(partner < self.n, "partner index {partner} out of range");
        self.ranks[agent * self.n + partner]
    }
}

/// Complete strict preferences of `n` men over `n` women and vice versa.
/// Immutable once validated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    n: usize,
    men: Vec<usize>,
    women: Vec<usize>,
    men_ranks: RankTable,
    women_ranks: RankTable,
}

impl PreferenceProfile {
    /// Validates `2n` rows and builds the profile. Rows list partners most
    /// preferred first.
    pub fn new(n: usize, men_rows: &[Vec<usize>], women_rows: &[Vec<usize>]) -> Result<Self, ProfileError> {
        if n == 0 {
            return Err(ProfileError::Empty);
        }
        let men = flatten(n, Side::Man, men_rows)?;
        let women = flatten(n, Side::Woman, women_rows)?;
        Ok(Self::from_flat_unchecked(n, men, women))
    }

    /// Builds a profile from row-major data that the caller guarantees is
    /// valid (every row a permutation). Used by the enumerators.
    pub(crate) fn from_flat_unchecked(n: usize, men: Vec<usize>, women: Vec<usize>) -> Self {
        debug_assert!(men.chunks(n).all(perm::is_permutation));
        debug_assert!(women.chunks(n).all(perm::is_permutation));
        let men_ranks = RankTable::from_rows(n, &men);
        let women_ranks = RankTable::from_rows(n, &women);
        PreferenceProfile { n, men, women, men_ranks, women_ranks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Preference row of `agent` on `side`, most preferred first.
    #[inline]
    pub fn row(&self, side: Side, agent: usize) -> &[usize] {
        let data = match side {
            Side::Man => &self.men,
            Side::Woman => &self.women,
        };
        &data[agent * self.n..(agent + 1) * self.n]
    }

    pub fn rows(&self, side: Side) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.n).map(move |a| self.row(side, a))
    }

    pub fn ranks(&self, side: Side) -> &RankTable {
        match side {
            Side::Man => &self.men_ranks,
            Side::Woman => &self.women_ranks,
        }
    }

    #[inline]
    pub fn rank(&self, side: Side, agent: usize, partner: usize) -> usize {
        self.ranks(side).rank(agent, partner)
    }

    /// True iff `agent` ranks partner `a` strictly above partner `b`.
    #[inline]
    pub fn prefers(&self, agent: AgentIndex, a: usize, b: usize) -> bool {
        assert!(agent.index < self.n, "agent {agent} out of range for n = {}", self.n);
        let ranks = self.ranks(agent.side);
        ranks.rank(agent.index, a) < ranks.rank(agent.index, b)
    }

    /// The same market with the roles of men and women exchanged, so that a
    /// women-proposing run is a men-proposing run on the mirror.
    pub fn mirrored(&self) -> PreferenceProfile {
        PreferenceProfile {
            n: self.n,
            men: self.women.clone(),
            women: self.men.clone(),
            men_ranks: self.women_ranks.clone(),
            women_ranks: self.men_ranks.clone(),
        }
    }

    /// Renames agents by `ordering`: new man `i` is old man
    /// `ordering.men_order[i]`, and likewise for women. Row contents are
    /// translated into the new labels.
    pub fn relabel(&self, ordering: &ProfileOrdering) -> Result<PreferenceProfile, ProfileError> {
        if ordering.n() != self.n {
            return Err(ProfileError::DimensionMismatch { expected: self.n, found: ordering.n() });
        }
        let n = self.n;
        let new_man = perm::inverse(&ordering.men_order);
        let new_woman = perm::inverse(&ordering.women_order);
        let mut men = Vec::with_capacity(n * n);
        for &old in &ordering.men_order {
            men.extend(self.row(Side::Man, old).iter().map(|&w| new_woman[w]));
        }
        let mut women = Vec::with_capacity(n * n);
        for &old in &ordering.women_order {
            women.extend(self.row(Side::Woman, old).iter().map(|&m| new_man[m]));
        }
        Ok(Self::from_flat_unchecked(n, men, women))
    }

    pub fn men_rows(&self) -> Vec<Vec<usize>> {
        self.rows(Side::Man).map(<[usize]>::to_vec).collect()
    }

    pub fn women_rows(&self) -> Vec<Vec<usize>> {
        self.rows(Side::Woman).map(<[usize]>::to_vec).collect()
    }
}

fn flatten(n: usize, side: Side, rows: &[Vec<usize>]) -> Result<Vec<usize>, ProfileError> {
    if rows.len() != n {
        return Err(ProfileError::RowCountMismatch { side, expected: n, found: rows.len() });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (index, row) in rows.iter().enumerate() {
        let agent = AgentIndex { side, index };
        if row.len() != n {
            return Err(ProfileError::RowLengthMismatch { agent, expected: n, found: row.len() });
        }
        let mut seen = vec![false; n];
        for &value in row {
            if value >= n {
                return Err(ProfileError::OutOfRange { agent, value });
            }
            if std::mem::replace(&mut seen[value], true) {
                return Err(ProfileError::DuplicateEntry { agent, value });
            }
        }
        flat.extend_from_slice(row);
    }
    Ok(flat)
}

/// A perfect matching; `woman_to_man` is always the inverse of `man_to_woman`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    man_to_woman: Vec<usize>,
    woman_to_man: Vec<usize>,
}

impl Matching {
    pub fn from_man_to_woman(man_to_woman: Vec<usize>) -> Result<Self, ProfileError> {
        if !perm::is_permutation(&man_to_woman) {
            return Err(ProfileError::NotAPermutation { what: "matching", n: man_to_woman.len() });
        }
        let woman_to_man = perm::inverse(&man_to_woman);
        Ok(Matching { man_to_woman, woman_to_man })
    }

    pub(crate) fn from_parts_unchecked(man_to_woman: Vec<usize>, woman_to_man: Vec<usize>) -> Self {
        debug_assert_eq!(perm::inverse(&man_to_woman), woman_to_man);
        Matching { man_to_woman, woman_to_man }
    }

    pub fn n(&self) -> usize {
        self.man_to_woman.len()
    }

    #[inline]
    pub fn wife(&self, man: usize) -> usize {
        self.man_to_woman[man]
    }

    #[inline]
    pub fn husband(&self, woman: usize) -> usize {
        self.woman_to_man[woman]
    }

    pub fn partner(&self, agent: AgentIndex) -> usize {
        match agent.side {
            Side::Man => self.wife(agent.index),
            Side::Woman => self.husband(agent.index),
        }
    }

    pub fn man_to_woman(&self) -> &[usize] {
        &self.man_to_woman
    }

    pub fn woman_to_man(&self) -> &[usize] {
        &self.woman_to_man
    }

    /// The same pairs seen from the other side (men become women).
    pub fn mirrored(&self) -> Matching {
        Matching { man_to_woman: self.woman_to_man.clone(), woman_to_man: self.man_to_woman.clone() }
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (m, &w) in self.man_to_woman.iter().enumerate() {
            if m > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}-{}", AgentIndex::man(m), AgentIndex::woman(w))?;
        }
        f.write_str("}")
    }
}

/// Orderings of both sides: position `i` holds the agent labelled `m_{i+1}`
/// (resp. `w_{i+1}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileOrdering {
    pub men_order: Vec<usize>,
    pub women_order: Vec<usize>,
}

impl ProfileOrdering {
    pub fn new(men_order: Vec<usize>, women_order: Vec<usize>) -> Result<Self, ProfileError> {
        if men_order.len() != women_order.len() {
            return Err(ProfileError::DimensionMismatch { expected: men_order.len(), found: women_order.len() });
        }
        if !perm::is_permutation(&men_order) {
            return Err(ProfileError::NotAPermutation { what: "men order", n: men_order.len() });
        }
        if !perm::is_permutation(&women_order) {
            return Err(ProfileError::NotAPermutation { what: "women order", n: women_order.len() });
        }
        Ok(ProfileOrdering { men_order, women_order })
    }

    pub fn identity(n: usize) -> Self {
        ProfileOrdering { men_order: (0..n).collect(), women_order: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.men_order.len()
    }

    /// The ordering that undoes `self` under [`PreferenceProfile::relabel`].
    pub fn inverse(&self) -> Self {
        ProfileOrdering { men_order: perm::inverse(&self.men_order), women_order: perm::inverse(&self.women_order) }
    }

    pub fn order(&self, side: Side) -> &[usize] {
        match side {
            Side::Man => &self.men_order,
            Side::Woman => &self.women_order,
        }
    }

    /// Swap the roles of the two orders (used when a checker ran on the
    /// mirrored profile).
    pub fn mirrored(&self) -> Self {
        ProfileOrdering { men_order: self.women_order.clone(), women_order: self.men_order.clone() }
    }
}
