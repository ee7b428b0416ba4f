use std::collections::HashMap;

use super::enumerate::{allocation_at, allocation_count, check_cap};
use super::OracleError;
use crate::allocation::DeterministicAllocation;
use crate::exec::{map_chunks, Limits};
use crate::instance::ValuationProfile;
use crate::properties::{Verdict, WelfareKind, Witness};
use crate::rational::{zero, Rational};

const CHUNK: usize = 4096;

/// Every attainable utility vector of a profile, each with the lexicographically
/// smallest allocation attaining it.
#[derive(Debug, Clone)]
pub struct UtilityTable {
    n_agents: usize,
    n_items: usize,
    /// Sorted by allocation index.
    entries: Vec<(u64, Vec<Rational>)>,
}

impl UtilityTable {
    pub fn new(profile: &ValuationProfile, limits: &Limits) -> Result<Self, OracleError> {
        let n = profile.n_agents();
        let m = if n == 0 { 0 } else { profile.n_items() };
        let count = allocation_count(n, m);
        check_cap(count, limits)?;
        if n == 0 {
            return Ok(Self {
                n_agents: 0,
                n_items: 0,
                entries: vec![],
            });
        }
        let partial = map_chunks(limits, count as usize, CHUNK, |range| {
            let mut seen: HashMap<Vec<Rational>, u64> = HashMap::new();
            for k in range {
                let u = allocation_at(n, m, k as u64).utilities(profile);
                seen.entry(u).or_insert(k as u64);
            }
            seen
        });
        let mut merged: HashMap<Vec<Rational>, u64> = HashMap::new();
        for chunk in partial {
            for (u, k) in chunk {
                merged
                    .entry(u)
                    .and_modify(|best| *best = (*best).min(k))
                    .or_insert(k);
            }
        }
        let mut entries: Vec<(u64, Vec<Rational>)> =
            merged.into_iter().map(|(u, k)| (k, u)).collect();
        entries.sort_by_key(|e| e.0);
        Ok(Self {
            n_agents: n,
            n_items: m,
            entries,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }

    pub fn distinct(&self) -> &[(u64, Vec<Rational>)] {
        &self.entries
    }

    pub fn allocation(&self, index: u64) -> DeterministicAllocation {
        allocation_at(self.n_agents, self.n_items, index)
    }

    /// The smallest-index allocation Pareto-dominating `utilities`.
    pub fn dominating(
        &self,
        utilities: &[Rational],
    ) -> Option<(DeterministicAllocation, Vec<Rational>)> {
        self.entries
            .iter()
            .find(|(_, u)| dominates(u, utilities))
            .map(|(k, u)| (self.allocation(*k), u.clone()))
    }

    pub fn pareto_verdict(&self, utilities: &[Rational]) -> Verdict {
        Verdict::from_witness(self.dominating(utilities).map(|(by, dominating)| {
            Witness::Dominated {
                by,
                utilities: utilities.to_vec(),
                dominating,
            }
        }))
    }

    /// Optimal welfare with the smallest-index allocation attaining it.
    pub fn optimum(&self, kind: WelfareKind) -> (Rational, DeterministicAllocation) {
        if self.n_agents == 0 {
            return (
                zero(),
                DeterministicAllocation::from_owners_unchecked(0, vec![]),
            );
        }
        let mut best: Option<(Rational, u64)> = None;
        for (k, u) in &self.entries {
            let w = crate::properties::welfare_of(kind, u);
            if best.as_ref().is_none_or(|(b, _)| w > *b) {
                best = Some((w, *k));
            }
        }
        let (w, k) = best.expect("at least one allocation");
        (w, self.allocation(k))
    }
}

/// Weakly better for everyone, strictly for someone.
pub fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

pub fn opt_welfare(
    kind: WelfareKind,
    profile: &ValuationProfile,
    limits: &Limits,
) -> Result<(Rational, DeterministicAllocation), OracleError> {
    Ok(UtilityTable::new(profile, limits)?.optimum(kind))
}

pub fn is_pareto_optimal(
    alloc: &DeterministicAllocation,
    profile: &ValuationProfile,
    limits: &Limits,
) -> Result<Verdict, OracleError> {
    let table = UtilityTable::new(profile, limits)?;
    Ok(table.pareto_verdict(&alloc.utilities(profile)))
}
