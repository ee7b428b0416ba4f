mod common;

use common::*;
use fairmech_core::allocation::{implemented_fraction, DeterministicAllocation};
use fairmech_core::exec::Limits;
use fairmech_core::instance::{bundle_value, Instance};
use fairmech_core::mechanisms::{rand_mixed, MechanismId};
use fairmech_core::oracle::is_pareto_optimal;
use fairmech_core::properties::{
    check_fair, evaluate_mechanism, is_uwm, welfare, Criterion, FairnessNotion, Verdict,
    WelfareKind, Witness,
};
use fairmech_core::rational::{int, ratio};
use fairmech_core::ValuationProfile;
use proptest::prelude::*;

fn holds(n: FairnessNotion, a: &DeterministicAllocation, p: &ValuationProfile) -> bool {
    check_fair(n, a, p).unwrap().holds()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn relaxations_are_implied((p, owners, n) in profile_and_allocation(4, 6)) {
        let a = DeterministicAllocation::new(n, owners).unwrap();
        use FairnessNotion::*;
        if holds(Ef, &a, &p) {
            prop_assert!(holds(Ef1, &a, &p));
            prop_assert!(holds(Prop, &a, &p));
        }
        if holds(Eq, &a, &p) {
            prop_assert!(holds(Eq1, &a, &p));
        }
        if holds(Prop, &a, &p) {
            prop_assert!(holds(Prop1, &a, &p));
        }
        if holds(Ef1, &a, &p) {
            prop_assert!(holds(Prop1, &a, &p));
        }
    }

    #[test]
    fn uwm_implies_po((p, owners, n) in profile_and_allocation(3, 5)) {
        let a = DeterministicAllocation::new(n, owners).unwrap();
        if is_uwm(&a, &p).unwrap().holds() {
            prop_assert!(is_pareto_optimal(&a, &p, &Limits::default()).unwrap().holds());
        }
    }

    #[test]
    fn bundle_value_is_additive((p, owners, n) in profile_and_allocation(3, 6)) {
        let a = DeterministicAllocation::new(n, owners).unwrap();
        let all: Vec<usize> = (0..a.n_items()).collect();
        for i in 0..n {
            let parts: Vec<_> = a.bundles().iter().map(|b| bundle_value(&p, i, b)).collect();
            let sum = parts.iter().fold(int(0), |acc, v| acc + v);
            prop_assert_eq!(sum, bundle_value(&p, i, &all));
        }
    }

    #[test]
    fn support_expectation_matches_fraction((inst, reported, truth) in chores_with_profiles(4, 5)) {
        let out = MechanismId::RandChore.run(&inst, &reported, &Limits::default()).unwrap();
        let fraction = implemented_fraction(&out.distribution);
        prop_assert_eq!(out.distribution.expected_utilities(&truth), fraction.utilities(&truth));
    }

    #[test]
    fn randchore_truthful_bundle((inst, _, _) in chores_with_profiles(3, 5)) {
        let p = inherent_profile(&inst);
        let r = evaluate_mechanism(MechanismId::RandChore, &inst, &p, &p, &Limits::default()).unwrap();
        prop_assert!(r.no_failures());
    }
}

#[test]
fn welfare_examples() {
    let p = ValuationProfile::unrestricted(vec![vec![int(-1); 4]; 2]).unwrap();
    let a = DeterministicAllocation::new(2, vec![0, 0, 1, 1]).unwrap();
    assert_eq!(welfare(WelfareKind::Uw, &a, &p).unwrap(), int(-4));
    assert_eq!(welfare(WelfareKind::Ew, &a, &p).unwrap(), int(-2));
}

#[test]
fn implemented_fraction_examples() {
    let inst = Instance::chores(2, vec![int(-1), int(-1)]).unwrap();
    let p = inherent_profile(&inst);
    let out = MechanismId::RandChore
        .run(&inst, &p, &Limits::default())
        .unwrap();
    let f = implemented_fraction(&out.distribution);
    for row in f.shares() {
        assert_eq!(row, &vec![ratio(1, 2), ratio(1, 2)]);
    }

    let inst = Instance::mixed(vec![(int(1), int(1)), (int(2), int(2))]).unwrap();
    let p = inst
        .validate_profile(vec![vec![int(1), int(2)], vec![int(-1), int(2)]])
        .unwrap();
    let out = rand_mixed(&inst, &p, &Limits::default()).unwrap();
    let f = implemented_fraction(&out.distribution);
    assert_eq!(f.shares()[0], vec![int(1), int(0)]);
    assert_eq!(f.shares()[1], vec![ratio(1, 2), ratio(1, 2)]);
}

/// Q3 holding a good and a chore: the round-robin hands one to each agent, and
/// whoever takes the chore envies the other beyond one item.
#[test]
fn randmixed_ex_post_ef1_counterexample() {
    let inst = Instance::mixed(vec![(int(1), int(1)), (int(5), int(5))]).unwrap();
    let p = inst
        .validate_profile(vec![vec![int(1), int(-5)], vec![int(1), int(-5)]])
        .unwrap();
    let r = evaluate_mechanism(MechanismId::RandMixed, &inst, &p, &p, &Limits::default()).unwrap();
    assert_eq!(r.ex_post.len(), 2);
    for s in &r.ex_post {
        let ef1 = &s
            .verdicts
            .iter()
            .find(|v| v.criterion == Criterion::Ef1)
            .unwrap()
            .verdict;
        let chore_holder = s.allocation.owner(1);
        assert_eq!(
            ef1,
            &Verdict::Fails {
                witness: Witness::Pair {
                    agent: chore_holder,
                    other: 1 - chore_holder,
                    lhs: int(-5),
                    rhs: int(1),
                }
            }
        );
    }
    // The ex-ante and efficiency guarantees still hold.
    for c in [
        Criterion::Ef,
        Criterion::Prop,
        Criterion::Uwm,
        Criterion::Po,
        Criterion::Prop1,
    ] {
        assert!(r.holds(c), "{c}");
    }
}

#[test]
fn check_fair_examples() {
    let p = ValuationProfile::unrestricted(vec![vec![int(-1); 4]; 2]).unwrap();
    let a = DeterministicAllocation::new(2, vec![0, 0, 1, 1]).unwrap();
    assert!(holds(FairnessNotion::Ef1, &a, &p));
    assert!(holds(FairnessNotion::Eq1, &a, &p));

    let p = ValuationProfile::unrestricted(vec![vec![int(1); 2], vec![int(-1); 2]]).unwrap();
    let a = DeterministicAllocation::new(2, vec![0, 0]).unwrap();
    assert!(!holds(FairnessNotion::Eq1, &a, &p));
}
