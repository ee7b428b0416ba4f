//! Fairness and efficiency predicates on deterministic and fractional allocations.

mod evaluate;
mod fairness;
mod welfare;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocation::{DeterministicAllocation, FractionalAllocation};
use crate::instance::ValuationProfile;
use crate::rational::{format_rational, serde_rational, serde_rational_vec, Rational};

pub use evaluate::{
    evaluate_mechanism, evaluate_randomized, Criterion, CriterionVerdict, EvaluationReport,
    SupportEvaluation,
};
pub use fairness::check_fair;
pub(crate) use welfare::welfare_of;
pub use welfare::{is_uwm, itemwise_max_welfare, welfare, WelfareKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FairnessNotion {
    Ef,
    Ef1,
    Eq,
    Eq1,
    Prop,
    Prop1,
}

impl FairnessNotion {
    pub const ALL: [FairnessNotion; 6] = [
        FairnessNotion::Ef,
        FairnessNotion::Ef1,
        FairnessNotion::Eq,
        FairnessNotion::Eq1,
        FairnessNotion::Prop,
        FairnessNotion::Prop1,
    ];

    /// Up-to-one-item notions only make sense for deterministic allocations.
    pub fn requires_deterministic(self) -> bool {
        matches!(
            self,
            FairnessNotion::Ef1 | FairnessNotion::Eq1 | FairnessNotion::Prop1
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            FairnessNotion::Ef => "ef",
            FairnessNotion::Ef1 => "ef1",
            FairnessNotion::Eq => "eq",
            FairnessNotion::Eq1 => "eq1",
            FairnessNotion::Prop => "prop",
            FairnessNotion::Prop1 => "prop1",
        }
    }
}

impl fmt::Display for FairnessNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FairnessNotion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FairnessNotion::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| format!("unknown fairness notion `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PropertyError {
    #[error("{0} is only defined for deterministic allocations")]
    NotionRequiresDeterministic(FairnessNotion),
    #[error(
        "allocation is {alloc_agents}x{alloc_items}, profile is {profile_agents}x{profile_items}"
    )]
    ShapeMismatch {
        alloc_agents: usize,
        alloc_items: usize,
        profile_agents: usize,
        profile_items: usize,
    },
    #[error(transparent)]
    Mechanism(#[from] crate::mechanisms::MechanismError),
}

/// Why a predicate failed, with the concrete numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// `lhs >= rhs` fails for the pair, including after every admissible removal.
    Pair {
        agent: usize,
        other: usize,
        #[serde(with = "serde_rational")]
        lhs: Rational,
        #[serde(with = "serde_rational")]
        rhs: Rational,
    },
    /// The agent's value is below its proportional share.
    Share {
        agent: usize,
        #[serde(with = "serde_rational")]
        value: Rational,
        #[serde(with = "serde_rational")]
        share: Rational,
    },
    /// Welfare below the attainable bound.
    Welfare {
        #[serde(with = "serde_rational")]
        value: Rational,
        #[serde(with = "serde_rational")]
        bound: Rational,
    },
    /// A Pareto-dominating allocation.
    Dominated {
        by: DeterministicAllocation,
        #[serde(with = "serde_rational_vec")]
        utilities: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        dominating: Vec<Rational>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair {
                agent,
                other,
                lhs,
                rhs,
            } => write!(
                f,
                "agents ({agent}, {other}): {} < {}",
                format_rational(lhs),
                format_rational(rhs)
            ),
            Witness::Share {
                agent,
                value,
                share,
            } => write!(
                f,
                "agent {agent}: {} < share {}",
                format_rational(value),
                format_rational(share)
            ),
            Witness::Welfare { value, bound } => write!(
                f,
                "welfare {} < bound {}",
                format_rational(value),
                format_rational(bound)
            ),
            Witness::Dominated {
                by,
                utilities,
                dominating,
            } => write!(
                f,
                "dominated by owners [{}]: ({}) -> ({})",
                by.owners()
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                utilities
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", "),
                dominating
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Verdict {
    Holds,
    Fails { witness: Witness },
    NotEvaluated { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub(crate) fn from_witness(w: Option<Witness>) -> Self {
        match w {
            None => Verdict::Holds,
            Some(witness) => Verdict::Fails { witness },
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "TRUE"),
            Verdict::Fails { witness } => write!(f, "FALSE ({witness})"),
            Verdict::NotEvaluated { reason } => write!(f, "NOT-EVALUATED ({reason})"),
        }
    }
}

/// Either allocation form; exact notions accept both.
#[derive(Debug, Clone, Copy)]
pub enum AllocationView<'a> {
    Deterministic(&'a DeterministicAllocation),
    Fractional(&'a FractionalAllocation),
}

impl<'a> From<&'a DeterministicAllocation> for AllocationView<'a> {
    fn from(a: &'a DeterministicAllocation) -> Self {
        AllocationView::Deterministic(a)
    }
}

impl<'a> From<&'a FractionalAllocation> for AllocationView<'a> {
    fn from(a: &'a FractionalAllocation) -> Self {
        AllocationView::Fractional(a)
    }
}

impl AllocationView<'_> {
    pub fn n_agents(&self) -> usize {
        match self {
            AllocationView::Deterministic(a) => a.n_agents(),
            AllocationView::Fractional(a) => a.n_agents(),
        }
    }

    pub fn n_items(&self) -> usize {
        match self {
            AllocationView::Deterministic(a) => a.n_items(),
            AllocationView::Fractional(a) => a.n_items(),
        }
    }

    /// `cross[i][j] = v_i(A_j)`.
    pub fn cross_values(&self, profile: &ValuationProfile) -> Vec<Vec<Rational>> {
        let n = self.n_agents();
        match self {
            AllocationView::Deterministic(a) => {
                let bundles = a.bundles();
                (0..n)
                    .map(|i| {
                        bundles
                            .iter()
                            .map(|b| profile.bundle_value(i, b.iter().copied()))
                            .collect()
                    })
                    .collect()
            }
            AllocationView::Fractional(a) => (0..n)
                .map(|i| (0..n).map(|j| a.bundle_value(profile, i, j)).collect())
                .collect(),
        }
    }

    pub(crate) fn check_shape(&self, profile: &ValuationProfile) -> Result<(), PropertyError> {
        let profile_items = if profile.n_agents() == 0 {
            0
        } else {
            profile.n_items()
        };
        if self.n_agents() != profile.n_agents() || self.n_items() != profile_items {
            return Err(PropertyError::ShapeMismatch {
                alloc_agents: self.n_agents(),
                alloc_items: self.n_items(),
                profile_agents: profile.n_agents(),
                profile_items,
            });
        }
        Ok(())
    }
}
