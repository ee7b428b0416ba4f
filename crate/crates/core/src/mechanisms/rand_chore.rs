use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    check_shape, deal_round_robin, factorial, nth_permutation, MechanismError, MechanismId,
    MechanismOutput, PartitionTrace,
};
use crate::allocation::{DeterministicAllocation, RandomizedAllocation};
use crate::exec::{map_range, Limits};
use crate::instance::{Instance, ValuationProfile};
use crate::rational::{ratio, zero, Rational};

/// Items split by whether any agent reported zero on them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChorePartition {
    /// Q in increasing index order.
    pub zero_reported: Vec<usize>,
    /// For each entry of `zero_reported`, the agents who reported zero.
    pub zero_reporters: Vec<Vec<usize>>,
    /// Q-bar in increasing index order.
    pub shared: Vec<usize>,
    /// Q-bar in dealing order: inherent value descending, then smallest index.
    pub dealing_order: Vec<usize>,
}

pub fn chore_partition(
    inst: &Instance,
    reported: &ValuationProfile,
) -> Result<ChorePartition, MechanismError> {
    MechanismId::RandChore.check_instance(inst)?;
    check_shape(inst, reported)?;
    let mut zero_reported = Vec::new();
    let mut zero_reporters = Vec::new();
    let mut shared = Vec::new();
    for j in 0..inst.n_items() {
        let zs: Vec<usize> = (0..inst.n_agents())
            .filter(|&i| reported.value(i, j).is_zero())
            .collect();
        if zs.is_empty() {
            shared.push(j);
        } else {
            zero_reported.push(j);
            zero_reporters.push(zs);
        }
    }
    let mut dealing_order = shared.clone();
    dealing_order.sort_by(|&a, &b| {
        inst.primary_inherent(b)
            .cmp(inst.primary_inherent(a))
            .then(a.cmp(&b))
    });
    Ok(ChorePartition {
        zero_reported,
        zero_reporters,
        shared,
        dealing_order,
    })
}

impl ChorePartition {
    fn trace(&self) -> PartitionTrace {
        PartitionTrace::Chores {
            zero_reported: self.zero_reported.clone(),
            shared: self.shared.clone(),
        }
    }

    fn choice_combinations(&self) -> u128 {
        self.zero_reporters
            .iter()
            .fold(1u128, |acc, z| acc.saturating_mul(z.len() as u128))
    }

    /// Owners of Q for the `index`-th joint zero-reporter choice (first item most
    /// significant).
    fn apply_choice(&self, mut index: u128, owners: &mut [usize]) {
        for (k, zs) in self.zero_reporters.iter().enumerate().rev() {
            let base = zs.len() as u128;
            owners[self.zero_reported[k]] = zs[(index % base) as usize];
            index /= base;
        }
    }
}

/// The exact lottery over allocations.
///
/// Each item in Q goes uniformly to one of its zero-reporters; Q-bar is dealt
/// round-robin in inherent-value order along a uniformly random agent order.
pub fn rand_chore(
    inst: &Instance,
    reported: &ValuationProfile,
    limits: &Limits,
) -> Result<MechanismOutput, MechanismError> {
    let part = chore_partition(inst, reported)?;
    let n = inst.n_agents();
    let perms = factorial(n);
    let choices = part.choice_combinations();
    let atoms = perms.saturating_mul(choices);
    if atoms > limits.support_cap as u128 {
        return Err(MechanismError::SupportTooLarge {
            atoms,
            cap: limits.support_cap,
        });
    }

    // Dealing outcomes of Q-bar, merged across agent orders.
    let dealt = map_range(limits, perms as usize, |rank| {
        let order = nth_permutation(n, rank as u128);
        let mut owners = vec![0usize; inst.n_items()];
        deal_round_robin(&part.dealing_order, &order, &mut owners);
        part.shared.iter().map(|&j| owners[j]).collect::<Vec<_>>()
    });
    let mut dealing_counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
    for d in dealt {
        *dealing_counts.entry(d).or_insert(0) += 1;
    }

    let denom = BigInt::from(perms) * BigInt::from(choices);
    let mut atoms_out = Vec::with_capacity(dealing_counts.len() * choices as usize);
    for (shared_owners, count) in &dealing_counts {
        for c in 0..choices {
            let mut owners = vec![0usize; inst.n_items()];
            for (k, &j) in part.shared.iter().enumerate() {
                owners[j] = shared_owners[k];
            }
            part.apply_choice(c, &mut owners);
            atoms_out.push((
                Rational::new(BigInt::from(*count), denom.clone()),
                DeterministicAllocation::from_owners_unchecked(n, owners),
            ));
        }
    }
    Ok(MechanismOutput {
        mechanism: MechanismId::RandChore.name().to_string(),
        trace: part.trace(),
        distribution: RandomizedAllocation::from_atoms(atoms_out)?,
    })
}

/// The lottery conditioned on a fixed agent order for the round-robin step.
/// Only the zero-reporter choices remain random.
pub fn rand_chore_with_order(
    inst: &Instance,
    reported: &ValuationProfile,
    order: &[usize],
    limits: &Limits,
) -> Result<MechanismOutput, MechanismError> {
    let part = chore_partition(inst, reported)?;
    let n = inst.n_agents();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&a| a >= n || std::mem::replace(&mut seen[a], true))
    {
        return Err(MechanismError::InvalidOrder(n));
    }
    let choices = part.choice_combinations();
    if choices > limits.support_cap as u128 {
        return Err(MechanismError::SupportTooLarge {
            atoms: choices,
            cap: limits.support_cap,
        });
    }
    let mut base = vec![0usize; inst.n_items()];
    deal_round_robin(&part.dealing_order, order, &mut base);
    let p = Rational::new(BigInt::from(1), BigInt::from(choices));
    let atoms = (0..choices).map(|c| {
        let mut owners = base.clone();
        part.apply_choice(c, &mut owners);
        (
            p.clone(),
            DeterministicAllocation::from_owners_unchecked(n, owners),
        )
    });
    Ok(MechanismOutput {
        mechanism: MechanismId::RandChore.name().to_string(),
        trace: part.trace(),
        distribution: RandomizedAllocation::from_atoms(atoms)?,
    })
}

/// Closed form: `sum_{q in Q, i in Z_q} truth_i(e_q)/|Z_q| + truth_i(Q-bar)/n`.
pub fn rand_chore_expected_utilities(
    inst: &Instance,
    reported: &ValuationProfile,
    truth: &ValuationProfile,
) -> Result<Vec<Rational>, MechanismError> {
    let part = chore_partition(inst, reported)?;
    check_shape(inst, truth)?;
    let n = inst.n_agents();
    let mut out = vec![zero(); n];
    for (k, &j) in part.zero_reported.iter().enumerate() {
        let zs = &part.zero_reporters[k];
        let share = ratio(1, zs.len() as i64);
        for &i in zs {
            let v = truth.value(i, j);
            if !v.is_zero() {
                out[i] += v * &share;
            }
        }
    }
    let per_agent = ratio(1, n as i64);
    for (i, u) in out.iter_mut().enumerate() {
        let shared = truth.bundle_value(i, part.shared.iter().copied());
        if !shared.is_zero() {
            *u += shared * &per_agent;
        }
    }
    Ok(out)
}

/// Draws the agent order first, then each zero-reporter choice in item order.
pub fn simulate_rand_chore(
    inst: &Instance,
    reported: &ValuationProfile,
    rng: &mut ChaCha8Rng,
) -> Result<DeterministicAllocation, MechanismError> {
    let part = chore_partition(inst, reported)?;
    let n = inst.n_agents();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut owners = vec![0usize; inst.n_items()];
    deal_round_robin(&part.dealing_order, &order, &mut owners);
    for (k, &j) in part.zero_reported.iter().enumerate() {
        let zs = &part.zero_reporters[k];
        owners[j] = zs[rng.gen_range(0..zs.len())];
    }
    Ok(DeterministicAllocation::from_owners_unchecked(n, owners))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn profile(inst: &Instance, rows: &[&[i64]]) -> ValuationProfile {
        inst.validate_profile(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn owners(out: &MechanismOutput) -> Vec<(Rational, Vec<usize>)> {
        out.distribution
            .support()
            .iter()
            .map(|a| (a.probability.clone(), a.allocation.owners().to_vec()))
            .collect()
    }

    #[test]
    fn no_items_single_empty_allocation() {
        let inst = Instance::chores(3, vec![]).unwrap();
        let p = profile(&inst, &[&[], &[], &[]]);
        let out = rand_chore(&inst, &p, &Limits::default()).unwrap();
        assert_eq!(owners(&out), vec![(int(1), vec![])]);
    }

    #[test]
    fn two_identical_chores_split_evenly() {
        let inst = Instance::chores(2, vec![int(-1), int(-1)]).unwrap();
        let p = profile(&inst, &[&[-1, -1], &[-1, -1]]);
        let out = rand_chore(&inst, &p, &Limits::default()).unwrap();
        assert_eq!(
            owners(&out),
            vec![(ratio(1, 2), vec![0, 1]), (ratio(1, 2), vec![1, 0])]
        );
        assert_eq!(
            rand_chore_expected_utilities(&inst, &p, &p).unwrap(),
            vec![int(-1), int(-1)]
        );
    }

    #[test]
    fn zero_reports_route_items() {
        // Agent 0 reports zero on e0, e1; both report -1 on e2, e3.
        let inst = Instance::chores(2, vec![int(-1); 4]).unwrap();
        let p = profile(&inst, &[&[0, 0, -1, -1], &[-1, -1, -1, -1]]);
        let out = rand_chore(&inst, &p, &Limits::default()).unwrap();
        assert_eq!(
            owners(&out),
            vec![
                (ratio(1, 2), vec![0, 0, 0, 1]),
                (ratio(1, 2), vec![0, 0, 1, 0])
            ]
        );
        assert_eq!(
            out.trace,
            PartitionTrace::Chores {
                zero_reported: vec![0, 1],
                shared: vec![2, 3]
            }
        );
    }

    #[test]
    fn all_zero_reports_give_zero_utility() {
        let inst = Instance::chores(3, vec![int(-2), int(-5)]).unwrap();
        let p = profile(&inst, &[&[0, 0], &[0, 0], &[0, 0]]);
        assert_eq!(
            rand_chore_expected_utilities(&inst, &p, &p).unwrap(),
            vec![int(0); 3]
        );
    }

    #[test]
    fn hiding_a_chore_backfires() {
        let inst = Instance::chores(2, vec![int(-1)]).unwrap();
        let truth = profile(&inst, &[&[-1], &[-1]]);
        let lie = profile(&inst, &[&[0], &[-1]]);
        let honest = rand_chore_expected_utilities(&inst, &truth, &truth).unwrap();
        let deviated = rand_chore_expected_utilities(&inst, &lie, &truth).unwrap();
        assert_eq!(honest[0], ratio(-1, 2));
        assert_eq!(deviated[0], int(-1));
    }

    #[test]
    fn dealing_order_breaks_ties_by_index() {
        let inst = Instance::chores(2, vec![int(-3), int(-1), int(-3), int(-1)]).unwrap();
        let p = profile(&inst, &[&[-3, -1, -3, -1], &[-3, -1, -3, -1]]);
        let part = chore_partition(&inst, &p).unwrap();
        assert_eq!(part.dealing_order, vec![1, 3, 0, 2]);
        let pinned = rand_chore_with_order(&inst, &p, &[0, 1], &Limits::default()).unwrap();
        assert_eq!(owners(&pinned), vec![(int(1), vec![0, 0, 1, 1])]);
    }

    #[test]
    fn support_cap_enforced() {
        let inst = Instance::chores(4, vec![int(-1)]).unwrap();
        let p = profile(&inst, &[&[-1], &[-1], &[-1], &[-1]]);
        let limits = Limits {
            support_cap: 23,
            ..Limits::default()
        };
        assert_eq!(
            rand_chore(&inst, &p, &limits).unwrap_err(),
            MechanismError::SupportTooLarge { atoms: 24, cap: 23 }
        );
    }

    #[test]
    fn wrong_kind_rejected() {
        let inst = Instance::mixed(vec![(int(1), int(1))]).unwrap();
        let p = profile(&inst, &[&[1], &[1]]);
        assert!(matches!(
            rand_chore(&inst, &p, &Limits::default()),
            Err(MechanismError::WrongInstanceKind { .. })
        ));
    }
}
