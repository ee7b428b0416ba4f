//! Deterministic, fractional and randomized allocations.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::instance::ValuationProfile;
use crate::rational::{
    format_rational, int, serde_rational, serde_rational_matrix, zero, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("item {item} assigned to agent {agent}, but there are only {n_agents} agents")]
    OwnerOutOfRange {
        item: usize,
        agent: usize,
        n_agents: usize,
    },
    #[error("probability {0} is not strictly positive")]
    NonPositiveProbability(String),
    #[error("probabilities sum to {0}, not 1")]
    ProbabilitiesDoNotSumToOne(String),
    #[error("empty support")]
    EmptySupport,
    #[error("support allocations disagree on shape")]
    ShapeMismatch,
    #[error("fractional row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: String },
    #[error("fractional share {0} outside [0, 1]")]
    ShareOutOfRange(String),
}

/// A complete assignment of every item to one agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeterministicAllocation {
    n_agents: usize,
    owners: Vec<usize>,
}

impl DeterministicAllocation {
    pub fn new(n_agents: usize, owners: Vec<usize>) -> Result<Self, AllocationError> {
        for (item, &agent) in owners.iter().enumerate() {
            if agent >= n_agents {
                return Err(AllocationError::OwnerOutOfRange {
                    item,
                    agent,
                    n_agents,
                });
            }
        }
        Ok(Self { n_agents, owners })
    }

    pub(crate) fn from_owners_unchecked(n_agents: usize, owners: Vec<usize>) -> Self {
        debug_assert!(owners.iter().all(|&a| a < n_agents));
        Self { n_agents, owners }
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_items(&self) -> usize {
        self.owners.len()
    }

    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn owner(&self, item: usize) -> usize {
        self.owners[item]
    }

    pub fn bundle(&self, agent: usize) -> Vec<usize> {
        self.owners
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == agent)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn bundles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_agents];
        for (j, &a) in self.owners.iter().enumerate() {
            out[a].push(j);
        }
        out
    }

    /// `v_i(A_i)` for every agent.
    pub fn utilities(&self, profile: &ValuationProfile) -> Vec<Rational> {
        let mut out = vec![zero(); self.n_agents];
        for (j, &a) in self.owners.iter().enumerate() {
            out[a] += profile.value(a, j);
        }
        out
    }

    pub fn to_fractional(&self) -> FractionalAllocation {
        let shares = self
            .owners
            .iter()
            .map(|&owner| {
                (0..self.n_agents)
                    .map(|i| if i == owner { int(1) } else { zero() })
                    .collect()
            })
            .collect();
        FractionalAllocation {
            n_agents: self.n_agents,
            shares,
        }
    }
}

/// Item-by-agent shares; each row sums to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalAllocation {
    n_agents: usize,
    #[serde(with = "serde_rational_matrix")]
    shares: Vec<Vec<Rational>>,
}

impl FractionalAllocation {
    pub fn new(n_agents: usize, shares: Vec<Vec<Rational>>) -> Result<Self, AllocationError> {
        for (row, r) in shares.iter().enumerate() {
            if r.len() != n_agents {
                return Err(AllocationError::ShapeMismatch);
            }
            for s in r {
                if s.is_negative() || *s > Rational::one() {
                    return Err(AllocationError::ShareOutOfRange(format_rational(s)));
                }
            }
            let sum: Rational = r.iter().fold(zero(), |a, b| a + b);
            if !sum.is_one() {
                return Err(AllocationError::RowSum {
                    row,
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(Self { n_agents, shares })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_items(&self) -> usize {
        self.shares.len()
    }

    pub fn share(&self, item: usize, agent: usize) -> &Rational {
        &self.shares[item][agent]
    }

    pub fn shares(&self) -> &[Vec<Rational>] {
        &self.shares
    }

    /// `v_viewer` of `holder`'s fractional bundle.
    pub fn bundle_value(
        &self,
        profile: &ValuationProfile,
        viewer: usize,
        holder: usize,
    ) -> Rational {
        self.shares
            .iter()
            .enumerate()
            .fold(zero(), |acc, (j, row)| {
                if row[holder].is_zero() {
                    acc
                } else {
                    acc + &row[holder] * profile.value(viewer, j)
                }
            })
    }

    pub fn utilities(&self, profile: &ValuationProfile) -> Vec<Rational> {
        (0..self.n_agents)
            .map(|i| self.bundle_value(profile, i, i))
            .collect()
    }
}

/// One atom of a lottery over deterministic allocations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportAtom {
    #[serde(with = "serde_rational")]
    pub probability: Rational,
    pub allocation: DeterministicAllocation,
}

/// A finite lottery. The support is merged and sorted by owner sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizedAllocation {
    support: Vec<SupportAtom>,
}

impl RandomizedAllocation {
    /// Merges duplicate allocations and checks that probabilities are positive
    /// and sum to one.
    pub fn from_atoms<I>(atoms: I) -> Result<Self, AllocationError>
    where
        I: IntoIterator<Item = (Rational, DeterministicAllocation)>,
    {
        let mut merged: BTreeMap<DeterministicAllocation, Rational> = BTreeMap::new();
        let mut shape: Option<(usize, usize)> = None;
        for (p, alloc) in atoms {
            if !p.is_positive() {
                return Err(AllocationError::NonPositiveProbability(format_rational(&p)));
            }
            let s = (alloc.n_agents(), alloc.n_items());
            if *shape.get_or_insert(s) != s {
                return Err(AllocationError::ShapeMismatch);
            }
            *merged.entry(alloc).or_insert_with(zero) += p;
        }
        if merged.is_empty() {
            return Err(AllocationError::EmptySupport);
        }
        let total = merged.values().fold(zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(AllocationError::ProbabilitiesDoNotSumToOne(
                format_rational(&total),
            ));
        }
        Ok(Self {
            support: merged
                .into_iter()
                .map(|(allocation, probability)| SupportAtom {
                    probability,
                    allocation,
                })
                .collect(),
        })
    }

    pub fn point(alloc: DeterministicAllocation) -> Self {
        Self {
            support: vec![SupportAtom {
                probability: int(1),
                allocation: alloc,
            }],
        }
    }

    pub fn support(&self) -> &[SupportAtom] {
        &self.support
    }

    pub fn n_agents(&self) -> usize {
        self.support[0].allocation.n_agents()
    }

    pub fn n_items(&self) -> usize {
        self.support[0].allocation.n_items()
    }

    /// Expected `v_i(A_i)` computed atom by atom.
    pub fn expected_utilities(&self, profile: &ValuationProfile) -> Vec<Rational> {
        let mut out = vec![zero(); self.n_agents()];
        for atom in &self.support {
            for (i, u) in atom.allocation.utilities(profile).into_iter().enumerate() {
                out[i] += &atom.probability * u;
            }
        }
        out
    }
}

/// Ownership probability of every item for every agent.
pub fn implemented_fraction(r: &RandomizedAllocation) -> FractionalAllocation {
    let n = r.n_agents();
    let mut shares = vec![vec![zero(); n]; r.n_items()];
    for atom in r.support() {
        for (j, &owner) in atom.allocation.owners().iter().enumerate() {
            shares[j][owner] += &atom.probability;
        }
    }
    FractionalAllocation {
        n_agents: n,
        shares,
    }
}
