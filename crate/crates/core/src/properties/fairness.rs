use super::{AllocationView, FairnessNotion, PropertyError, Verdict, Witness};
use crate::allocation::DeterministicAllocation;
use crate::instance::ValuationProfile;
use crate::rational::{ratio, Rational};

/// Literal evaluation of a fairness notion.
///
/// Up-to-one relaxations look for a removable item in `A_i u A_j`; when that union
/// is empty the unrelaxed inequality decides. Pairs with `i == j` are skipped.
pub fn check_fair<'a>(
    notion: FairnessNotion,
    alloc: impl Into<AllocationView<'a>>,
    profile: &ValuationProfile,
) -> Result<Verdict, PropertyError> {
    let view = alloc.into();
    view.check_shape(profile)?;
    match (notion, view) {
        (FairnessNotion::Ef, v) => Ok(envy_free(&v.cross_values(profile))),
        (FairnessNotion::Eq, v) => Ok(equitable(&v.cross_values(profile))),
        (FairnessNotion::Prop, v) => Ok(proportional(&v.cross_values(profile), profile)),
        (n, AllocationView::Fractional(_)) => Err(PropertyError::NotionRequiresDeterministic(n)),
        (FairnessNotion::Ef1, AllocationView::Deterministic(a)) => Ok(ef1(a, profile)),
        (FairnessNotion::Eq1, AllocationView::Deterministic(a)) => Ok(eq1(a, profile)),
        (FairnessNotion::Prop1, AllocationView::Deterministic(a)) => Ok(prop1(a, profile)),
    }
}

fn envy_free(cross: &[Vec<Rational>]) -> Verdict {
    let n = cross.len();
    let witness = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && cross[i][i] < cross[i][j])
        .map(|(i, j)| Witness::Pair {
            agent: i,
            other: j,
            lhs: cross[i][i].clone(),
            rhs: cross[i][j].clone(),
        });
    Verdict::from_witness(witness)
}

fn equitable(cross: &[Vec<Rational>]) -> Verdict {
    let n = cross.len();
    let witness = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && cross[i][i] < cross[j][j])
        .map(|(i, j)| Witness::Pair {
            agent: i,
            other: j,
            lhs: cross[i][i].clone(),
            rhs: cross[j][j].clone(),
        });
    Verdict::from_witness(witness)
}

fn proportional(cross: &[Vec<Rational>], profile: &ValuationProfile) -> Verdict {
    let n = cross.len();
    let witness = (0..n).find_map(|i| {
        let share = profile.total_value(i) * ratio(1, n as i64);
        (cross[i][i] < share).then(|| Witness::Share {
            agent: i,
            value: cross[i][i].clone(),
            share,
        })
    });
    Verdict::from_witness(witness)
}

/// `lhs >= rhs` after removing one item from `own` (lowering lhs by its `own_value`)
/// or from `theirs` (lowering rhs by its `their_value`).
fn relaxed_holds(
    lhs: &Rational,
    rhs: &Rational,
    own: impl Iterator<Item = Rational>,
    theirs: impl Iterator<Item = Rational>,
) -> bool {
    let mut any = false;
    for v in own {
        any = true;
        if lhs - v >= *rhs {
            return true;
        }
    }
    for v in theirs {
        any = true;
        if *lhs >= rhs - v {
            return true;
        }
    }
    !any && lhs >= rhs
}

fn ef1(a: &DeterministicAllocation, profile: &ValuationProfile) -> Verdict {
    let bundles = a.bundles();
    let n = a.n_agents();
    for i in 0..n {
        let lhs = profile.bundle_value(i, bundles[i].iter().copied());
        for j in (0..n).filter(|&j| j != i) {
            let rhs = profile.bundle_value(i, bundles[j].iter().copied());
            let ok = relaxed_holds(
                &lhs,
                &rhs,
                bundles[i].iter().map(|&e| profile.value(i, e).clone()),
                bundles[j].iter().map(|&e| profile.value(i, e).clone()),
            );
            if !ok {
                return Verdict::Fails {
                    witness: Witness::Pair {
                        agent: i,
                        other: j,
                        lhs,
                        rhs,
                    },
                };
            }
        }
    }
    Verdict::Holds
}

fn eq1(a: &DeterministicAllocation, profile: &ValuationProfile) -> Verdict {
    let bundles = a.bundles();
    let n = a.n_agents();
    let own: Vec<Rational> = (0..n)
        .map(|i| profile.bundle_value(i, bundles[i].iter().copied()))
        .collect();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let ok = relaxed_holds(
                &own[i],
                &own[j],
                bundles[i].iter().map(|&e| profile.value(i, e).clone()),
                bundles[j].iter().map(|&e| profile.value(j, e).clone()),
            );
            if !ok {
                return Verdict::Fails {
                    witness: Witness::Pair {
                        agent: i,
                        other: j,
                        lhs: own[i].clone(),
                        rhs: own[j].clone(),
                    },
                };
            }
        }
    }
    Verdict::Holds
}

fn prop1(a: &DeterministicAllocation, profile: &ValuationProfile) -> Verdict {
    let n = a.n_agents();
    let frac = ratio(1, n as i64);
    for i in 0..n {
        let value = profile.bundle_value(i, a.bundle(i));
        let share = profile.total_value(i) * &frac;
        let ok = value >= share
            || (0..a.n_items()).any(|e| {
                if a.owner(e) == i {
                    &value - profile.value(i, e) >= share
                } else {
                    &value + profile.value(i, e) >= share
                }
            });
        if !ok {
            return Verdict::Fails {
                witness: Witness::Share {
                    agent: i,
                    value,
                    share,
                },
            };
        }
    }
    Verdict::Holds
}
