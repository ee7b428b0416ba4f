use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AllocationView, PropertyError, Verdict, Witness};
use crate::instance::ValuationProfile;
use crate::rational::{zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WelfareKind {
    /// Utilitarian: sum of own-bundle values.
    Uw,
    /// Egalitarian: minimum own-bundle value.
    Ew,
}

impl fmt::Display for WelfareKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WelfareKind::Uw => "uw",
            WelfareKind::Ew => "ew",
        })
    }
}

impl FromStr for WelfareKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uw" => Ok(WelfareKind::Uw),
            "ew" => Ok(WelfareKind::Ew),
            other => Err(format!("unknown welfare kind `{other}`")),
        }
    }
}

pub(crate) fn welfare_of(kind: WelfareKind, utilities: &[Rational]) -> Rational {
    match kind {
        WelfareKind::Uw => utilities.iter().sum(),
        WelfareKind::Ew => utilities.iter().min().cloned().unwrap_or_else(zero),
    }
}

pub fn welfare<'a>(
    kind: WelfareKind,
    alloc: impl Into<AllocationView<'a>>,
    profile: &ValuationProfile,
) -> Result<Rational, PropertyError> {
    let view = alloc.into();
    view.check_shape(profile)?;
    let utilities = match view {
        AllocationView::Deterministic(a) => a.utilities(profile),
        AllocationView::Fractional(a) => a.utilities(profile),
    };
    Ok(welfare_of(kind, &utilities))
}

/// `sum_j max_i v_i(e_j)`, the utilitarian optimum over deterministic and fractional
/// allocations alike.
pub fn itemwise_max_welfare(profile: &ValuationProfile) -> Rational {
    if profile.n_agents() == 0 {
        return zero();
    }
    (0..profile.n_items())
        .map(|j| {
            (0..profile.n_agents())
                .map(|i| profile.value(i, j))
                .max()
                .cloned()
                .unwrap_or_else(zero)
        })
        .sum()
}

pub fn is_uwm<'a>(
    alloc: impl Into<AllocationView<'a>>,
    profile: &ValuationProfile,
) -> Result<Verdict, PropertyError> {
    let value = welfare(WelfareKind::Uw, alloc, profile)?;
    let bound = itemwise_max_welfare(profile);
    Ok(Verdict::from_witness(
        (value < bound).then_some(Witness::Welfare { value, bound }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::{DeterministicAllocation, FractionalAllocation};
    use crate::rational::{int, ratio};

    fn profile(rows: &[&[i64]]) -> ValuationProfile {
        ValuationProfile::unrestricted(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_instance() {
        let p = ValuationProfile::unrestricted(vec![vec![], vec![]]).unwrap();
        let a = DeterministicAllocation::new(2, vec![]).unwrap();
        assert_eq!(welfare(WelfareKind::Uw, &a, &p).unwrap(), int(0));
        assert_eq!(welfare(WelfareKind::Ew, &a, &p).unwrap(), int(0));
        assert!(is_uwm(&a, &p).unwrap().holds());
    }

    #[test]
    fn two_two_split() {
        let p = profile(&[&[-1; 4], &[-1; 4]]);
        let a = DeterministicAllocation::new(2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(welfare(WelfareKind::Uw, &a, &p).unwrap(), int(-4));
        assert_eq!(welfare(WelfareKind::Ew, &a, &p).unwrap(), int(-2));
    }

    #[test]
    fn equal_fractional_split() {
        let p = profile(&[&[-3, -4], &[-3, -4], &[-3, -4]]);
        let third = ratio(1, 3);
        let f = FractionalAllocation::new(3, vec![vec![third.clone(); 3], vec![third; 3]]).unwrap();
        assert_eq!(welfare(WelfareKind::Ew, &f, &p).unwrap(), ratio(-7, 3));
    }

    #[test]
    fn uwm_needs_itemwise_maximisers() {
        // Agent 0 values both chores at 0, agent 1 at -1.
        let p = profile(&[&[0, 0], &[-1, -1]]);
        let good = DeterministicAllocation::new(2, vec![0, 0]).unwrap();
        let bad = DeterministicAllocation::new(2, vec![0, 1]).unwrap();
        assert!(is_uwm(&good, &p).unwrap().holds());
        assert_eq!(
            is_uwm(&bad, &p).unwrap(),
            Verdict::Fails {
                witness: Witness::Welfare {
                    value: int(-1),
                    bound: int(0)
                }
            }
        );
    }
}
