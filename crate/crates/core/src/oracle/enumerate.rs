use super::OracleError;
use crate::allocation::DeterministicAllocation;
use crate::exec::Limits;

/// `n^m`, saturating.
pub fn allocation_count(n_agents: usize, n_items: usize) -> u128 {
    (0..n_items).fold(1u128, |acc, _| acc.saturating_mul(n_agents as u128))
}

pub(crate) fn check_cap(count: u128, limits: &Limits) -> Result<(), OracleError> {
    if count > limits.enumeration_cap as u128 {
        return Err(OracleError::EnumerationTooLarge {
            count,
            cap: limits.enumeration_cap,
        });
    }
    Ok(())
}

/// The `index`-th owner sequence in lexicographic order (item 0 most significant).
pub fn allocation_at(n_agents: usize, n_items: usize, mut index: u64) -> DeterministicAllocation {
    let mut owners = vec![0usize; n_items];
    for slot in owners.iter_mut().rev() {
        *slot = (index % n_agents as u64) as usize;
        index /= n_agents as u64;
    }
    DeterministicAllocation::from_owners_unchecked(n_agents, owners)
}

/// All `n^m` allocations in lexicographic order of owner sequences.
pub fn enumerate_allocations(
    n_agents: usize,
    n_items: usize,
    limits: &Limits,
) -> Result<AllocationIter, OracleError> {
    let count = allocation_count(n_agents, n_items);
    check_cap(count, limits)?;
    Ok(AllocationIter {
        n_agents,
        next: if n_agents == 0 {
            None
        } else {
            Some(vec![0; n_items])
        },
    })
}

/// Odometer over owner sequences.
#[derive(Debug, Clone)]
pub struct AllocationIter {
    n_agents: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AllocationIter {
    type Item = DeterministicAllocation;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.n_agents {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(DeterministicAllocation::from_owners_unchecked(
            self.n_agents,
            current,
        ))
    }
}
