use fairmech_core::exec::Limits;
use fairmech_core::oracle::{
    replay, Certificate, ReplayCase, ReplayVerdict, Theorem2Config, Theorem2Slice,
};
use fairmech_core::properties::{check_fair, FairnessNotion};
use fairmech_core::rational::{int, ratio};
use fairmech_core::OracleError;

#[test]
fn theorem1_every_sequence_fails_somewhere() {
    let r = replay(ReplayCase::Theorem1, &Limits::default()).unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::Theorem1 { rows, .. } = &r.certificate else {
        panic!("wrong certificate");
    };
    // 4 sequences x 2 orders
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert!(row.pareto.iter().any(|v| v.fails()));
    }
}

#[test]
fn theorem2_slice_is_unsat() {
    let r = replay(
        ReplayCase::Theorem2(Theorem2Config::default()),
        &Limits::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::Theorem2 {
        profiles,
        with_sp,
        without_sp,
        without_sp_witness,
        single_profile_domain,
        single_profile,
        sp_constraints,
        ..
    } = &r.certificate
    else {
        panic!("wrong certificate");
    };
    assert_eq!(profiles.len(), 16);
    assert_eq!(*sp_constraints, 120);
    assert!(with_sp.solution.is_none());
    assert!(without_sp.solution.is_some());
    assert_eq!(single_profile_domain.len(), 6);
    for a in single_profile_domain {
        assert!(check_fair(FairnessNotion::Eq1, a, single_profile)
            .unwrap()
            .holds());
    }
    // The unconstrained witness is EQ1 on its own profile.
    for (p, a) in profiles.iter().zip(without_sp_witness.as_ref().unwrap()) {
        assert!(check_fair(FairnessNotion::Eq1, a, p).unwrap().holds());
    }
}

#[test]
fn theorem2_with_other_notions_makes_no_claim() {
    for notion in [FairnessNotion::Ef1, FairnessNotion::Prop1] {
        let r = replay(
            ReplayCase::Theorem2(Theorem2Config {
                slice: Theorem2Slice::Pinned,
                notion,
            }),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, ReplayVerdict::NoClaim);
    }
}

#[test]
fn theorem2_full_grid_is_unsat() {
    let r = replay(
        ReplayCase::Theorem2(Theorem2Config {
            slice: Theorem2Slice::Full,
            notion: FairnessNotion::Eq1,
        }),
        &Limits::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::Theorem2 { profiles, .. } = &r.certificate else {
        panic!("wrong certificate");
    };
    assert_eq!(profiles.len(), 256);
}

#[test]
fn freeman_has_no_fair_efficient_allocation() {
    let r = replay(ReplayCase::Freeman, &Limits::default()).unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::Freeman {
        allocations,
        ef1_and_eq1,
        all_three,
        refutations,
        ..
    } = &r.certificate
    else {
        panic!("wrong certificate");
    };
    assert_eq!(*allocations, 65_536);
    assert_eq!(*all_three, 0);
    assert_eq!(refutations.len() as u64, *ef1_and_eq1);
}

#[test]
fn ewm_bound_for_three_agents() {
    let r = replay(ReplayCase::EwmBound(3), &Limits::default()).unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::EwmBound {
        ew,
        opt_e,
        ratio: got,
        ..
    } = &r.certificate
    else {
        panic!("wrong certificate");
    };
    assert_eq!(*ew, int(-5));
    assert_eq!(*opt_e, int(-3));
    assert_eq!(*got, ratio(5, 3));
}

#[test]
fn ewm_bound_for_two_agents() {
    let r = replay(ReplayCase::EwmBound(2), &Limits::default()).unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
}

#[test]
fn ewm_bound_beyond_the_cap() {
    assert!(matches!(
        replay(ReplayCase::EwmBound(4), &Limits::default()),
        Err(OracleError::EnumerationTooLarge { .. })
    ));
}

#[test]
fn mixed_eq_every_po_allocation_is_unequal() {
    let r = replay(ReplayCase::MixedEq, &Limits::default()).unwrap();
    assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    let Certificate::MixedEq { rows, .. } = &r.certificate else {
        panic!("wrong certificate");
    };
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().any(|r| r.pareto.holds()));
}

#[test]
fn replays_agree_across_execution_modes() {
    for case in [
        ReplayCase::Theorem1,
        ReplayCase::MixedEq,
        ReplayCase::EwmBound(3),
    ] {
        let a = replay(case, &Limits::sequential()).unwrap();
        let b = replay(case, &Limits::default()).unwrap();
        assert_eq!(a, b);
    }
}
