use num_traits::Zero;

use super::{check_shape, MechanismError, MechanismId, MechanismOutput, PartitionTrace};
use crate::allocation::{DeterministicAllocation, RandomizedAllocation};
use crate::instance::{Instance, ValuationProfile};
use crate::rational::{zero, Rational};

fn recipient(reported: &ValuationProfile) -> usize {
    (0..reported.n_agents())
        .min_by_key(|&i| reported.row(i).iter().filter(|v| v.is_zero()).count())
        .unwrap_or(0)
}

/// Deterministic control mechanism: everything to the agent with the fewest
/// zero reports, ties to the lowest index.
pub fn fewest_zeros(
    inst: &Instance,
    reported: &ValuationProfile,
) -> Result<MechanismOutput, MechanismError> {
    check_shape(inst, reported)?;
    let r = recipient(reported);
    let alloc =
        DeterministicAllocation::from_owners_unchecked(inst.n_agents(), vec![r; inst.n_items()]);
    Ok(MechanismOutput {
        mechanism: MechanismId::FewestZeros.name().to_string(),
        trace: PartitionTrace::Control { recipient: r },
        distribution: RandomizedAllocation::point(alloc),
    })
}

pub fn fewest_zeros_expected_utilities(
    inst: &Instance,
    reported: &ValuationProfile,
    truth: &ValuationProfile,
) -> Result<Vec<Rational>, MechanismError> {
    check_shape(inst, reported)?;
    check_shape(inst, truth)?;
    let r = recipient(reported);
    let mut out = vec![zero(); inst.n_agents()];
    out[r] = truth.total_value(r);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn hiding_the_chore_pays_off() {
        let inst = Instance::chores(2, vec![int(-1)]).unwrap();
        let truth = inst
            .validate_profile(vec![vec![int(-1)], vec![int(-1)]])
            .unwrap();
        let lie = truth.with_row(0, vec![int(0)]);
        assert_eq!(
            fewest_zeros_expected_utilities(&inst, &truth, &truth).unwrap(),
            vec![int(-1), int(0)]
        );
        assert_eq!(
            fewest_zeros_expected_utilities(&inst, &lie, &truth).unwrap(),
            vec![int(0), int(-1)]
        );
    }
}
