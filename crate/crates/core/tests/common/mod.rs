#![allow(dead_code)]

use fairmech_core::instance::{Instance, ValuationProfile};
use fairmech_core::rational::{ratio, Rational};
use proptest::prelude::*;

fn value(num: i64, den: i64) -> Rational {
    ratio(num, den)
}

/// A profile whose entry `(i, j)` is `allowed(j)[picks[i][j] % len]`.
pub fn pick_profile(inst: &Instance, picks: &[Vec<usize>]) -> ValuationProfile {
    let rows = picks
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &k)| {
                    let allowed = inst.allowed_values(j);
                    allowed[k % allowed.len()].clone()
                })
                .collect()
        })
        .collect();
    inst.validate_profile(rows).unwrap()
}

/// The instance's own values with no zero reports.
pub fn inherent_profile(inst: &Instance) -> ValuationProfile {
    let row: Vec<Rational> = (0..inst.n_items())
        .map(|j| inst.primary_inherent(j).clone())
        .collect();
    inst.validate_profile(vec![row; inst.n_agents()]).unwrap()
}

pub fn picks(n: usize, m: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..6, m), n)
}

/// Single-value chores with `n <= max_n`, `m <= max_m`.
pub fn chores_instance(max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n, 0..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec((1i64..=4, 1i64..=2), m).prop_map(move |vals| {
            Instance::chores(n, vals.into_iter().map(|(a, d)| value(-a, d)).collect()).unwrap()
        })
    })
}

pub fn chores_with_profiles(
    max_n: usize,
    max_m: usize,
) -> impl Strategy<Value = (Instance, ValuationProfile, ValuationProfile)> {
    chores_instance(max_n, max_m).prop_flat_map(|inst| {
        let (n, m) = (inst.n_agents(), inst.n_items());
        (Just(inst), picks(n, m), picks(n, m)).prop_map(|(inst, a, b)| {
            let reported = pick_profile(&inst, &a);
            let truth = pick_profile(&inst, &b);
            (inst, reported, truth)
        })
    })
}

pub fn mixed_instance(max_m: usize) -> impl Strategy<Value = Instance> {
    prop::collection::vec((1i64..=4, 1i64..=4), 0..=max_m).prop_map(|vals| {
        Instance::mixed(
            vals.into_iter()
                .map(|(c, v)| (value(c, 1), value(v, 1)))
                .collect(),
        )
        .unwrap()
    })
}

pub fn mixed_with_profiles(
    max_m: usize,
) -> impl Strategy<Value = (Instance, ValuationProfile, ValuationProfile)> {
    mixed_instance(max_m).prop_flat_map(|inst| {
        let m = inst.n_items();
        (Just(inst), picks(2, m), picks(2, m)).prop_map(|(inst, a, b)| {
            let reported = pick_profile(&inst, &a);
            let truth = pick_profile(&inst, &b);
            (inst, reported, truth)
        })
    })
}

/// An unrestricted profile with values in `-3..=3` and an allocation of its items.
pub fn profile_and_allocation(
    max_n: usize,
    max_m: usize,
) -> impl Strategy<Value = (ValuationProfile, Vec<usize>, usize)> {
    (1..=max_n, 0..=max_m).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, m), n),
            prop::collection::vec(0..n, m),
            Just(n),
        )
            .prop_map(|(rows, owners, n)| {
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| value(v, 1)).collect())
                    .collect();
                (ValuationProfile::unrestricted(rows).unwrap(), owners, n)
            })
    })
}
