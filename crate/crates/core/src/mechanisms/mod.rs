//! Allocation mechanisms with exact output distributions.
//!
//! Each randomized mechanism exposes three views of the same lottery: the fully
//! enumerated distribution, closed-form expected utilities, and a seeded
//! simulation that draws one allocation.

mod fewest_zeros;
mod rand_chore;
mod rand_mixed;
mod sampling;
mod seqpick;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocation::{AllocationError, DeterministicAllocation, RandomizedAllocation};
use crate::exec::Limits;
use crate::instance::{Instance, InstanceKind, ValuationProfile};
use crate::rational::Rational;

pub use fewest_zeros::{fewest_zeros, fewest_zeros_expected_utilities};
pub use rand_chore::{
    chore_partition, rand_chore, rand_chore_expected_utilities, rand_chore_with_order,
    simulate_rand_chore, ChorePartition,
};
pub use rand_mixed::{
    mixed_partition, rand_mixed, rand_mixed_expected_utilities, simulate_rand_mixed, MixedPartition,
};
pub use sampling::{sample_allocation, seeded_rng};
pub use seqpick::{sequential_picking, PickSequence};

/// The mechanisms the verifiers can query by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MechanismId {
    RandChore,
    RandMixed,
    /// Negative control: every item goes to the agent reporting the fewest zeros,
    /// ties to the lowest index. Manipulable by construction.
    FewestZeros,
}

impl MechanismId {
    pub fn name(self) -> &'static str {
        match self {
            MechanismId::RandChore => "randchore",
            MechanismId::RandMixed => "randmixed",
            MechanismId::FewestZeros => "fewest-zeros",
        }
    }

    pub fn check_instance(self, inst: &Instance) -> Result<(), MechanismError> {
        let ok = match self {
            MechanismId::RandChore => inst.kind().is_single_value_chores(),
            MechanismId::RandMixed => inst.kind() == InstanceKind::Mixed2,
            MechanismId::FewestZeros => true,
        };
        if ok {
            Ok(())
        } else {
            Err(MechanismError::WrongInstanceKind {
                mechanism: self.name(),
                kind: inst.kind(),
            })
        }
    }

    /// The exact output lottery.
    pub fn run(
        self,
        inst: &Instance,
        reported: &ValuationProfile,
        limits: &Limits,
    ) -> Result<MechanismOutput, MechanismError> {
        match self {
            MechanismId::RandChore => rand_chore(inst, reported, limits),
            MechanismId::RandMixed => rand_mixed(inst, reported, limits),
            MechanismId::FewestZeros => fewest_zeros(inst, reported),
        }
    }

    /// Expected truth-utility of every agent under the given reports, without
    /// enumerating the support.
    pub fn expected_utilities(
        self,
        inst: &Instance,
        reported: &ValuationProfile,
        truth: &ValuationProfile,
    ) -> Result<Vec<Rational>, MechanismError> {
        match self {
            MechanismId::RandChore => rand_chore_expected_utilities(inst, reported, truth),
            MechanismId::RandMixed => rand_mixed_expected_utilities(inst, reported, truth),
            MechanismId::FewestZeros => fewest_zeros_expected_utilities(inst, reported, truth),
        }
    }

    /// One draw of the mechanism's own randomness from `seed`.
    pub fn simulate(
        self,
        inst: &Instance,
        reported: &ValuationProfile,
        seed: u64,
    ) -> Result<DeterministicAllocation, MechanismError> {
        let mut rng = seeded_rng(seed);
        match self {
            MechanismId::RandChore => simulate_rand_chore(inst, reported, &mut rng),
            MechanismId::RandMixed => simulate_rand_mixed(inst, reported, &mut rng),
            MechanismId::FewestZeros => Ok(fewest_zeros(inst, reported)?.distribution.support()[0]
                .allocation
                .clone()),
        }
    }
}

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "randchore" => Ok(MechanismId::RandChore),
            "randmixed" => Ok(MechanismId::RandMixed),
            "fewest-zeros" => Ok(MechanismId::FewestZeros),
            other => Err(format!("unknown mechanism `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MechanismError {
    #[error("{mechanism} is not defined on {kind} instances")]
    WrongInstanceKind {
        mechanism: &'static str,
        kind: InstanceKind,
    },
    #[error("support would have {atoms} atoms, above the cap of {cap}")]
    SupportTooLarge { atoms: u128, cap: u64 },
    #[error("pick sequence has {got_len} entries summing to {got_sum}; need {n_agents} entries summing to {n_items}")]
    SequenceLengthMismatch {
        n_agents: usize,
        n_items: usize,
        got_len: usize,
        got_sum: usize,
    },
    #[error("agent order is not a permutation of 0..{0}")]
    InvalidOrder(usize),
    #[error("profile shape {got_agents}x{got_items} does not match instance {n_agents}x{n_items}")]
    ProfileShape {
        n_agents: usize,
        n_items: usize,
        got_agents: usize,
        got_items: usize,
    },
    #[error(transparent)]
    Allocation(#[from] AllocationError),
}

/// The index sets a mechanism computed from the reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionTrace {
    /// `zero_reported` is Q (someone reported zero), `shared` is its complement.
    Chores {
        zero_reported: Vec<usize>,
        shared: Vec<usize>,
    },
    Mixed {
        q0: Vec<usize>,
        q1: Vec<usize>,
        q2: Vec<usize>,
        q3: Vec<usize>,
    },
    Control {
        recipient: usize,
    },
    /// Sequential picking; `strategy` names the picking convention used.
    Picking {
        sequence: Vec<usize>,
        order: Vec<usize>,
        strategy: String,
    },
}

impl PartitionTrace {
    /// The sets of the trace, which partition the items.
    pub fn sets(&self) -> Vec<&[usize]> {
        match self {
            PartitionTrace::Chores {
                zero_reported,
                shared,
            } => vec![zero_reported, shared],
            PartitionTrace::Mixed { q0, q1, q2, q3 } => vec![q0, q1, q2, q3],
            PartitionTrace::Control { .. } | PartitionTrace::Picking { .. } => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismOutput {
    pub mechanism: String,
    pub trace: PartitionTrace,
    pub distribution: RandomizedAllocation,
}

pub(crate) fn check_shape(inst: &Instance, p: &ValuationProfile) -> Result<(), MechanismError> {
    let got_agents = p.n_agents();
    let got_items = if got_agents == 0 { 0 } else { p.n_items() };
    if got_agents != inst.n_agents() || got_items != inst.n_items() {
        return Err(MechanismError::ProfileShape {
            n_agents: inst.n_agents(),
            n_items: inst.n_items(),
            got_agents,
            got_items,
        });
    }
    Ok(())
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// The `rank`-th permutation of `0..n` in lexicographic order.
pub(crate) fn nth_permutation(n: usize, mut rank: u128) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Deals `items` in order to `order[0], order[1], .., order[n-1], order[0], ..`.
pub(crate) fn deal_round_robin(items: &[usize], order: &[usize], owners: &mut [usize]) {
    for (pos, &item) in items.iter().enumerate() {
        owners[item] = order[pos % order.len()];
    }
}
