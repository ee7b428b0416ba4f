use serde::{Deserialize, Serialize};

use super::MechanismError;
use crate::allocation::DeterministicAllocation;
use crate::instance::ValuationProfile;

/// How many items each agent picks, indexed by agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PickSequence(pub Vec<usize>);

impl PickSequence {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Every sequence of `n_agents` counts summing to `n_items`, in lexicographic order.
    pub fn all(n_agents: usize, n_items: usize) -> Vec<PickSequence> {
        fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<PickSequence>) {
            if slots == 1 {
                cur.push(left);
                out.push(PickSequence(cur.clone()));
                cur.pop();
                return;
            }
            for t in 0..=left {
                cur.push(t);
                rec(left - t, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n_agents > 0 {
            rec(n_items, n_agents, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Agents take turns in `order`; on its turn agent `i` greedily takes `seq[i]`
/// items, each time the remaining item it reports highest, ties to the smallest
/// index.
pub fn sequential_picking(
    reported: &ValuationProfile,
    seq: &PickSequence,
    order: &[usize],
) -> Result<DeterministicAllocation, MechanismError> {
    let n = reported.n_agents();
    let m = if n == 0 { 0 } else { reported.n_items() };
    if seq.0.len() != n || seq.total() != m {
        return Err(MechanismError::SequenceLengthMismatch {
            n_agents: n,
            n_items: m,
            got_len: seq.0.len(),
            got_sum: seq.total(),
        });
    }
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&a| a >= n || std::mem::replace(&mut seen[a], true))
    {
        return Err(MechanismError::InvalidOrder(n));
    }
    let mut owners: Vec<Option<usize>> = vec![None; m];
    for &agent in order {
        for _ in 0..seq.0[agent] {
            let mut best: Option<usize> = None;
            for j in (0..m).filter(|&j| owners[j].is_none()) {
                if best.is_none_or(|b| reported.value(agent, j) > reported.value(agent, b)) {
                    best = Some(j);
                }
            }
            let j = best.expect("sequence total equals item count");
            owners[j] = Some(agent);
        }
    }
    Ok(DeterministicAllocation::new(
        n,
        owners
            .into_iter()
            .map(|o| o.expect("every item picked"))
            .collect(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn profile(rows: &[&[i64]]) -> ValuationProfile {
        ValuationProfile::unrestricted(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn binary_chores_tie_break() {
        let p = profile(&[&[0, 0], &[-1, -1]]);
        let a = sequential_picking(&p, &PickSequence(vec![1, 1]), &[0, 1]).unwrap();
        assert_eq!(a.owners(), &[0, 1]);
    }

    #[test]
    fn first_agent_takes_all() {
        let p = profile(&[&[-1, -2, -3], &[0, 0, 0], &[-1, 0, -1]]);
        let a = sequential_picking(&p, &PickSequence(vec![3, 0, 0]), &[0, 1, 2]).unwrap();
        assert_eq!(a.owners(), &[0, 0, 0]);
    }

    #[test]
    fn goods_picked_greedily() {
        let p = profile(&[&[3, 1], &[1, 3]]);
        let a = sequential_picking(&p, &PickSequence(vec![1, 1]), &[0, 1]).unwrap();
        assert_eq!(a.owners(), &[0, 1]);
    }

    #[test]
    fn bad_sequence_rejected() {
        let p = profile(&[&[0, 0], &[0, 0]]);
        assert!(matches!(
            sequential_picking(&p, &PickSequence(vec![1, 0]), &[0, 1]),
            Err(MechanismError::SequenceLengthMismatch { .. })
        ));
        assert!(matches!(
            sequential_picking(&p, &PickSequence(vec![1, 1]), &[0, 0]),
            Err(MechanismError::InvalidOrder(2))
        ));
    }

    #[test]
    fn all_sequences() {
        let all = PickSequence::all(2, 3);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].0, vec![0, 3]);
        assert_eq!(PickSequence::all(3, 2).len(), 6);
    }
}
