use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    check_shape, deal_round_robin, MechanismError, MechanismId, MechanismOutput, PartitionTrace,
};
use crate::allocation::{DeterministicAllocation, RandomizedAllocation};
use crate::exec::Limits;
use crate::instance::{Instance, ValuationProfile};
use crate::rational::{ratio, Rational};

/// The four-way split of items by the two reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedPartition {
    /// Both reported zero.
    pub q0: Vec<usize>,
    /// Agent 0 reported strictly more.
    pub q1: Vec<usize>,
    /// Agent 1 reported strictly more.
    pub q2: Vec<usize>,
    /// Equal nonzero reports.
    pub q3: Vec<usize>,
    /// Q3 in dealing order: common reported value descending, then smallest index.
    pub dealing_order: Vec<usize>,
}

pub fn mixed_partition(
    inst: &Instance,
    reported: &ValuationProfile,
) -> Result<MixedPartition, MechanismError> {
    MechanismId::RandMixed.check_instance(inst)?;
    check_shape(inst, reported)?;
    let mut part = MixedPartition {
        q0: vec![],
        q1: vec![],
        q2: vec![],
        q3: vec![],
        dealing_order: vec![],
    };
    for j in 0..inst.n_items() {
        let (a, b) = (reported.value(0, j), reported.value(1, j));
        if a > b {
            part.q1.push(j);
        } else if a < b {
            part.q2.push(j);
        } else if a.is_zero() {
            part.q0.push(j);
        } else {
            part.q3.push(j);
        }
    }
    part.dealing_order = part.q3.clone();
    part.dealing_order.sort_by(|&a, &b| {
        reported
            .value(0, b)
            .cmp(reported.value(0, a))
            .then(a.cmp(&b))
    });
    Ok(part)
}

impl MixedPartition {
    fn trace(&self) -> PartitionTrace {
        PartitionTrace::Mixed {
            q0: self.q0.clone(),
            q1: self.q1.clone(),
            q2: self.q2.clone(),
            q3: self.q3.clone(),
        }
    }

    fn base_owners(&self, m: usize, order: &[usize]) -> Vec<usize> {
        let mut owners = vec![0usize; m];
        for &j in &self.q2 {
            owners[j] = 1;
        }
        deal_round_robin(&self.dealing_order, order, &mut owners);
        owners
    }
}

/// The exact lottery: a fair coin per Q0 item, Q1 to agent 0, Q2 to agent 1, Q3
/// dealt round-robin along a uniformly random agent order.
pub fn rand_mixed(
    inst: &Instance,
    reported: &ValuationProfile,
    limits: &Limits,
) -> Result<MechanismOutput, MechanismError> {
    let part = mixed_partition(inst, reported)?;
    let coins = part.q0.len() as u32;
    let atoms = 2u128.checked_pow(coins + 1).unwrap_or(u128::MAX);
    if atoms > limits.support_cap as u128 {
        return Err(MechanismError::SupportTooLarge {
            atoms,
            cap: limits.support_cap,
        });
    }
    let p = Rational::new(BigInt::from(1), BigInt::from(atoms));
    let mut out = Vec::with_capacity(atoms as usize);
    for order in [[0usize, 1], [1, 0]] {
        let base = part.base_owners(inst.n_items(), &order);
        for flips in 0..(1u128 << coins) {
            let mut owners = base.clone();
            // First Q0 item is the most significant coin.
            for (k, &j) in part.q0.iter().enumerate() {
                owners[j] = ((flips >> (part.q0.len() - 1 - k)) & 1) as usize;
            }
            out.push((
                p.clone(),
                DeterministicAllocation::from_owners_unchecked(2, owners),
            ));
        }
    }
    Ok(MechanismOutput {
        mechanism: MechanismId::RandMixed.name().to_string(),
        trace: part.trace(),
        distribution: RandomizedAllocation::from_atoms(out)?,
    })
}

/// Closed form: `truth_i(Q0 u Q3)/2 + truth_i(Q_i)`.
pub fn rand_mixed_expected_utilities(
    inst: &Instance,
    reported: &ValuationProfile,
    truth: &ValuationProfile,
) -> Result<Vec<Rational>, MechanismError> {
    let part = mixed_partition(inst, reported)?;
    check_shape(inst, truth)?;
    let half = ratio(1, 2);
    let own = [&part.q1, &part.q2];
    Ok((0..2)
        .map(|i| {
            let split = truth.bundle_value(i, part.q0.iter().chain(&part.q3).copied());
            let mut u = truth.bundle_value(i, own[i].iter().copied());
            if !split.is_zero() {
                u += split * &half;
            }
            u
        })
        .collect())
}

/// Draws the agent order first, then one coin per Q0 item in item order.
pub fn simulate_rand_mixed(
    inst: &Instance,
    reported: &ValuationProfile,
    rng: &mut ChaCha8Rng,
) -> Result<DeterministicAllocation, MechanismError> {
    let part = mixed_partition(inst, reported)?;
    let mut order = [0usize, 1];
    order.shuffle(rng);
    let mut owners = part.base_owners(inst.n_items(), &order);
    for &j in &part.q0 {
        owners[j] = rng.gen_range(0..2);
    }
    Ok(DeterministicAllocation::from_owners_unchecked(2, owners))
}
