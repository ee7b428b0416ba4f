//! Instances, restricted valuation domains and valuation profiles.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, serde_rational_matrix, serde_rational_vec, zero, Rational};

/// Which restricted valuation domain an instance lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InstanceKind {
    /// Chores with one inherent value each; an agent values a chore at 0 or at that value.
    ChoresRestricted1,
    /// Chores with `k` inherent values each.
    ChoresRestrictedK(usize),
    /// Two agents, items with a cost `-c(e)` and a benefit `v(e)`.
    Mixed2,
}

impl InstanceKind {
    /// True for the domain the chore mechanism is defined on.
    pub fn is_single_value_chores(self) -> bool {
        matches!(
            self,
            InstanceKind::ChoresRestricted1 | InstanceKind::ChoresRestrictedK(1)
        )
    }

    pub fn is_chores(self) -> bool {
        !matches!(self, InstanceKind::Mixed2)
    }

    fn expected_value_count(self) -> Option<usize> {
        match self {
            InstanceKind::ChoresRestricted1 => Some(1),
            InstanceKind::ChoresRestrictedK(k) => Some(k),
            InstanceKind::Mixed2 => Some(2),
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceKind::ChoresRestricted1 => write!(f, "chores1"),
            InstanceKind::ChoresRestrictedK(k) => write!(f, "choresk {k}"),
            InstanceKind::Mixed2 => write!(f, "mixed2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ItemSpec {
    pub id: usize,
    /// Chores: the negative inherent values. Mixed: `[-c(e), v(e)]`.
    #[serde(with = "serde_rational_vec")]
    pub inherent_values: Vec<Rational>,
}

/// An unvalidated instance, as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n_agents: usize,
    pub items: Vec<ItemSpec>,
    pub kind: InstanceKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum InstanceError {
    #[error("an instance needs at least one agent")]
    NoAgents,
    #[error("mixed-item instances require exactly two agents, got {0}")]
    MixedRequiresTwoAgents(usize),
    #[error("k-restricted chores need k >= 1")]
    ZeroRestriction,
    #[error("item id {0} appears more than once")]
    DuplicateItemId(usize),
    #[error("item ids must be 0..m in order; position {position} holds id {id}")]
    NonContiguousItemIds { position: usize, id: usize },
    #[error("item {item}: expected {expected} inherent values, got {got}")]
    WrongInherentValueCount {
        item: usize,
        expected: usize,
        got: usize,
    },
    #[error("item {item}: chore inherent value {value} must be negative")]
    NonNegativeInherentChoreValue { item: usize, value: String },
    #[error("item {item}: mixed item needs a negative cost and a positive benefit")]
    InvalidMixedValues { item: usize },
}

/// A validated instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n_agents: usize,
    items: Vec<ItemSpec>,
    kind: InstanceKind,
}

/// Checks every invariant and reports all violations, not just the first.
pub fn validate_instance(raw: InstanceSpec) -> Result<Instance, Vec<InstanceError>> {
    let mut errors = Vec::new();
    if raw.n_agents == 0 {
        errors.push(InstanceError::NoAgents);
    }
    match raw.kind {
        InstanceKind::Mixed2 if raw.n_agents != 2 => {
            errors.push(InstanceError::MixedRequiresTwoAgents(raw.n_agents))
        }
        InstanceKind::ChoresRestrictedK(0) => errors.push(InstanceError::ZeroRestriction),
        _ => {}
    }

    let mut seen = BTreeSet::new();
    for (position, item) in raw.items.iter().enumerate() {
        if !seen.insert(item.id) {
            errors.push(InstanceError::DuplicateItemId(item.id));
        } else if item.id != position {
            errors.push(InstanceError::NonContiguousItemIds {
                position,
                id: item.id,
            });
        }
        if let Some(expected) = raw.kind.expected_value_count() {
            if expected > 0 && item.inherent_values.len() != expected {
                errors.push(InstanceError::WrongInherentValueCount {
                    item: item.id,
                    expected,
                    got: item.inherent_values.len(),
                });
                continue;
            }
        }
        match raw.kind {
            InstanceKind::Mixed2 => {
                let (cost, benefit) = (&item.inherent_values[0], &item.inherent_values[1]);
                if !cost.is_negative() || !benefit.is_positive() {
                    errors.push(InstanceError::InvalidMixedValues { item: item.id });
                }
            }
            _ => {
                for v in &item.inherent_values {
                    if !v.is_negative() {
                        errors.push(InstanceError::NonNegativeInherentChoreValue {
                            item: item.id,
                            value: format_rational(v),
                        });
                    }
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(Instance {
            n_agents: raw.n_agents,
            items: raw.items,
            kind: raw.kind,
        })
    } else {
        Err(errors)
    }
}

impl Instance {
    pub fn new(raw: InstanceSpec) -> Result<Self, Vec<InstanceError>> {
        validate_instance(raw)
    }

    /// 1-restricted chores from their inherent values.
    pub fn chores(n_agents: usize, inherent: Vec<Rational>) -> Result<Self, Vec<InstanceError>> {
        Self::new(InstanceSpec {
            n_agents,
            items: inherent
                .into_iter()
                .enumerate()
                .map(|(id, v)| ItemSpec {
                    id,
                    inherent_values: vec![v],
                })
                .collect(),
            kind: InstanceKind::ChoresRestricted1,
        })
    }

    /// Two-agent mixed items from `(c(e), v(e))` magnitudes.
    pub fn mixed(items: Vec<(Rational, Rational)>) -> Result<Self, Vec<InstanceError>> {
        Self::new(InstanceSpec {
            n_agents: 2,
            items: items
                .into_iter()
                .enumerate()
                .map(|(id, (c, v))| ItemSpec {
                    id,
                    inherent_values: vec![-c, v],
                })
                .collect(),
            kind: InstanceKind::Mixed2,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn items(&self) -> &[ItemSpec] {
        &self.items
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            n_agents: self.n_agents,
            items: self.items.clone(),
            kind: self.kind,
        }
    }

    /// The first inherent value, which orders chores for round-robin.
    pub fn primary_inherent(&self, item: usize) -> &Rational {
        &self.items[item].inherent_values[0]
    }

    /// Allowed reports for one item, in a fixed order: chores `0, v^1, .., v^k`,
    /// mixed `-c, 0, v`.
    pub fn allowed_values(&self, item: usize) -> Vec<Rational> {
        let values = &self.items[item].inherent_values;
        match self.kind {
            InstanceKind::Mixed2 => vec![values[0].clone(), zero(), values[1].clone()],
            _ => {
                let mut out = vec![zero()];
                for v in values {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                out
            }
        }
    }

    pub fn is_allowed(&self, item: usize, value: &Rational) -> bool {
        if value.is_zero() {
            return true;
        }
        self.items[item].inherent_values.contains(value)
    }

    /// Number of distinct reports one agent can make; saturates.
    pub fn report_domain_size(&self) -> u128 {
        (0..self.n_items()).fold(1u128, |acc, j| {
            acc.saturating_mul(self.allowed_values(j).len() as u128)
        })
    }

    /// The `index`-th report in the agent's domain, item 0 most significant.
    pub fn report_at(&self, mut index: u128) -> Vec<Rational> {
        let allowed: Vec<Vec<Rational>> = (0..self.n_items())
            .map(|j| self.allowed_values(j))
            .collect();
        let mut out = vec![zero(); self.n_items()];
        for j in (0..self.n_items()).rev() {
            let base = allowed[j].len() as u128;
            out[j] = allowed[j][(index % base) as usize].clone();
            index /= base;
        }
        out
    }

    pub fn validate_profile(
        &self,
        raw: Vec<Vec<Rational>>,
    ) -> Result<ValuationProfile, Vec<ProfileError>> {
        validate_profile(self, raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum ProfileError {
    #[error("profile has {got} rows, instance has {expected} agents")]
    WrongAgentCount { expected: usize, got: usize },
    #[error("agent {agent}: {got} values for {expected} items")]
    WrongItemCount {
        agent: usize,
        expected: usize,
        got: usize,
    },
    #[error("agent {agent}, item {item}: value {value} outside the allowed report set")]
    ValueOutsideAllowedSet {
        agent: usize,
        item: usize,
        value: String,
    },
}

/// An n x m matrix of additive item values.
///
/// Profiles built through [`validate_profile`] are guaranteed to lie in the
/// instance's restricted domain; [`ValuationProfile::unrestricted`] skips that
/// check for general additive valuations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValuationProfile {
    #[serde(with = "serde_rational_matrix")]
    values: Vec<Vec<Rational>>,
}

pub fn validate_profile(
    inst: &Instance,
    raw: Vec<Vec<Rational>>,
) -> Result<ValuationProfile, Vec<ProfileError>> {
    let mut errors = Vec::new();
    if raw.len() != inst.n_agents() {
        errors.push(ProfileError::WrongAgentCount {
            expected: inst.n_agents(),
            got: raw.len(),
        });
    }
    for (agent, row) in raw.iter().enumerate() {
        if row.len() != inst.n_items() {
            errors.push(ProfileError::WrongItemCount {
                agent,
                expected: inst.n_items(),
                got: row.len(),
            });
            continue;
        }
        for (item, value) in row.iter().enumerate() {
            if !inst.is_allowed(item, value) {
                errors.push(ProfileError::ValueOutsideAllowedSet {
                    agent,
                    item,
                    value: format_rational(value),
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(ValuationProfile { values: raw })
    } else {
        Err(errors)
    }
}

impl ValuationProfile {
    /// A profile outside any restricted domain. Rows must have equal length.
    pub fn unrestricted(values: Vec<Vec<Rational>>) -> Result<Self, ProfileError> {
        let m = values.first().map_or(0, Vec::len);
        for (agent, row) in values.iter().enumerate() {
            if row.len() != m {
                return Err(ProfileError::WrongItemCount {
                    agent,
                    expected: m,
                    got: row.len(),
                });
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_rows_unchecked(values: Vec<Vec<Rational>>) -> Self {
        Self { values }
    }

    pub fn n_agents(&self) -> usize {
        self.values.len()
    }

    pub fn n_items(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn value(&self, agent: usize, item: usize) -> &Rational {
        &self.values[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.values[agent]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// Additive bundle value; the empty bundle is worth zero.
    pub fn bundle_value<I>(&self, agent: usize, bundle: I) -> Rational
    where
        I: IntoIterator<Item = usize>,
    {
        bundle
            .into_iter()
            .fold(zero(), |acc, j| acc + &self.values[agent][j])
    }

    pub fn total_value(&self, agent: usize) -> Rational {
        self.bundle_value(agent, 0..self.n_items())
    }

    /// Same profile with one agent's row replaced. Domain membership is preserved
    /// when `row` is drawn from the same instance's report domain.
    pub fn with_row(&self, agent: usize, row: Vec<Rational>) -> Self {
        let mut values = self.values.clone();
        values[agent] = row;
        Self { values }
    }
}

pub fn bundle_value(profile: &ValuationProfile, agent: usize, bundle: &[usize]) -> Rational {
    profile.bundle_value(agent, bundle.iter().copied())
}
