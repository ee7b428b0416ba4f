use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::csp::{BinaryCsp, CspOutcome};
use super::enumerate::{allocation_at, allocation_count, check_cap};
use super::table::UtilityTable;
use super::OracleError;
use crate::allocation::DeterministicAllocation;
use crate::exec::{map_chunks, Limits};
use crate::instance::{Instance, InstanceKind, InstanceSpec, ItemSpec, ValuationProfile};
use crate::mechanisms::{rand_chore_with_order, sequential_picking, PickSequence};
use crate::properties::{check_fair, welfare, FairnessNotion, Verdict, WelfareKind, Witness};
use crate::rational::{int, ratio, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem2Slice {
    /// Agent 1 pinned to all -1, agent 0 free: 16 profiles.
    Pinned,
    /// Both agents free: 256 profiles.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem2Config {
    pub slice: Theorem2Slice,
    pub notion: FairnessNotion,
}

impl Default for Theorem2Config {
    fn default() -> Self {
        Self {
            slice: Theorem2Slice::Pinned,
            notion: FairnessNotion::Eq1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplayCase {
    Theorem1,
    Theorem2(Theorem2Config),
    Freeman,
    EwmBound(usize),
    MixedEq,
}

impl fmt::Display for ReplayCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayCase::Theorem1 => write!(f, "theorem1"),
            ReplayCase::Theorem2(_) => write!(f, "theorem2"),
            ReplayCase::Freeman => write!(f, "freeman"),
            ReplayCase::EwmBound(n) => write!(f, "ewm-bound {n}"),
            ReplayCase::MixedEq => write!(f, "mixed-eq"),
        }
    }
}

impl FromStr for ReplayCase {
    type Err = String;

    /// Case names without parameters; `ewm-bound` defaults to three agents.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "theorem1" => Ok(ReplayCase::Theorem1),
            "theorem2" => Ok(ReplayCase::Theorem2(Theorem2Config::default())),
            "freeman" => Ok(ReplayCase::Freeman),
            "ewm-bound" => Ok(ReplayCase::EwmBound(3)),
            "mixed-eq" => Ok(ReplayCase::MixedEq),
            other => Err(format!("unknown replay case `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplayVerdict {
    Confirmed,
    Refuted,
    /// The question was posed and answered, but there is no claim to check.
    NoClaim,
}

impl fmt::Display for ReplayVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReplayVerdict::Confirmed => "CONFIRMED",
            ReplayVerdict::Refuted => "REFUTED",
            ReplayVerdict::NoClaim => "NO-CLAIM",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PickingRow {
    pub sequence: PickSequence,
    pub order: Vec<usize>,
    /// One allocation per instance, in instance order.
    pub allocations: Vec<DeterministicAllocation>,
    pub pareto: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub allocation: DeterministicAllocation,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedEqRow {
    pub allocation: DeterministicAllocation,
    pub pareto: Verdict,
    pub eq: Verdict,
    pub eq1: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    Theorem1 {
        instances: Vec<ValuationProfile>,
        rows: Vec<PickingRow>,
    },
    Theorem2 {
        config: Theorem2Config,
        profiles: Vec<ValuationProfile>,
        domain_sizes: Vec<usize>,
        sp_constraints: usize,
        with_sp: CspOutcome,
        without_sp: CspOutcome,
        /// Per-profile allocations of the unconstrained solution.
        without_sp_witness: Option<Vec<DeterministicAllocation>>,
        single_profile: ValuationProfile,
        single_profile_domain: Vec<DeterministicAllocation>,
        single_profile_outcome: CspOutcome,
    },
    Freeman {
        profile: ValuationProfile,
        allocations: u64,
        ef1: u64,
        eq1: u64,
        ef1_and_eq1: u64,
        all_three: u64,
        refutations: Vec<Refutation>,
    },
    EwmBound {
        n: usize,
        profile: ValuationProfile,
        order: Vec<usize>,
        allocation: DeterministicAllocation,
        #[serde(with = "serde_rational")]
        ew: Rational,
        #[serde(with = "serde_rational")]
        opt_e: Rational,
        opt_e_witness: DeterministicAllocation,
        #[serde(with = "serde_rational")]
        ratio: Rational,
        #[serde(with = "serde_rational")]
        expected_ratio: Rational,
    },
    MixedEq {
        profile: ValuationProfile,
        rows: Vec<MixedEqRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub case: String,
    pub verdict: ReplayVerdict,
    pub certificate: Certificate,
}

pub fn replay(case: ReplayCase, limits: &Limits) -> Result<ReplayReport, OracleError> {
    let (verdict, certificate) = match case {
        ReplayCase::Theorem1 => theorem1(limits)?,
        ReplayCase::Theorem2(config) => theorem2(config, limits)?,
        ReplayCase::Freeman => freeman(limits)?,
        ReplayCase::EwmBound(n) => ewm_bound(n, limits)?,
        ReplayCase::MixedEq => mixed_eq(limits)?,
    };
    Ok(ReplayReport {
        case: case.to_string(),
        verdict,
        certificate,
    })
}

fn confirmed(ok: bool) -> ReplayVerdict {
    if ok {
        ReplayVerdict::Confirmed
    } else {
        ReplayVerdict::Refuted
    }
}

fn rows(values: &[&[i64]]) -> Vec<Vec<Rational>> {
    values
        .iter()
        .map(|r| r.iter().map(|&v| int(v)).collect())
        .collect()
}

fn profile(inst: &Instance, values: &[&[i64]]) -> Result<ValuationProfile, OracleError> {
    inst.validate_profile(rows(values))
        .map_err(|e| OracleError::Internal(format!("{e:?}")))
}

fn binary_chores(n: usize, m: usize) -> Instance {
    Instance::chores(n, vec![int(-1); m]).expect("unit chores are valid")
}

fn theorem1(limits: &Limits) -> Result<(ReplayVerdict, Certificate), OracleError> {
    let inst = binary_chores(2, 3);
    let instances = vec![
        profile(&inst, &[&[0, 0, 0], &[-1, -1, -1]])?,
        profile(&inst, &[&[-1, -1, -1], &[0, 0, 0]])?,
    ];
    let tables = instances
        .iter()
        .map(|p| UtilityTable::new(p, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for sequence in PickSequence::all(2, 3) {
        for order in [vec![0, 1], vec![1, 0]] {
            let mut allocations = Vec::new();
            let mut pareto = Vec::new();
            for (p, t) in instances.iter().zip(&tables) {
                let a = sequential_picking(p, &sequence, &order)?;
                pareto.push(t.pareto_verdict(&a.utilities(p)));
                allocations.push(a);
            }
            out.push(PickingRow {
                sequence: sequence.clone(),
                order,
                allocations,
                pareto,
            });
        }
    }
    let ok = out.iter().all(|r| r.pareto.iter().any(Verdict::fails));
    Ok((
        confirmed(ok),
        Certificate::Theorem1 {
            instances,
            rows: out,
        },
    ))
}

/// Allocations of `profile` meeting `notion` and Pareto optimality.
fn fair_po_domain(
    profile: &ValuationProfile,
    notion: FairnessNotion,
    limits: &Limits,
) -> Result<Vec<DeterministicAllocation>, OracleError> {
    let table = UtilityTable::new(profile, limits)?;
    let n = profile.n_agents();
    let m = profile.n_items();
    let mut out = Vec::new();
    for k in 0..allocation_count(n, m) as u64 {
        let a = allocation_at(n, m, k);
        if check_fair(notion, &a, profile)?.holds()
            && table.pareto_verdict(&a.utilities(profile)).holds()
        {
            out.push(a);
        }
    }
    Ok(out)
}

fn theorem2(
    config: Theorem2Config,
    limits: &Limits,
) -> Result<(ReplayVerdict, Certificate), OracleError> {
    let inst = binary_chores(2, 4);
    let d = inst.report_domain_size();
    let pinned = vec![int(-1); 4];
    let profiles: Vec<ValuationProfile> = match config.slice {
        Theorem2Slice::Pinned => (0..d)
            .map(|k| ValuationProfile::from_rows_unchecked(vec![inst.report_at(k), pinned.clone()]))
            .collect(),
        Theorem2Slice::Full => (0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .map(|(a, b)| {
                ValuationProfile::from_rows_unchecked(vec![inst.report_at(a), inst.report_at(b)])
            })
            .collect(),
    };
    let domains = profiles
        .iter()
        .map(|p| fair_po_domain(p, config.notion, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let sizes: Vec<usize> = domains.iter().map(Vec::len).collect();

    let unconstrained = BinaryCsp::new(sizes.clone());
    let mut constrained = BinaryCsp::new(sizes.clone());
    for x in 0..profiles.len() {
        for y in (x + 1)..profiles.len() {
            let differing: Vec<usize> = (0..2)
                .filter(|&i| profiles[x].row(i) != profiles[y].row(i))
                .collect();
            let [agent] = differing[..] else { continue };
            // Neither report may profit from pretending to be the other.
            let ux: Vec<Vec<Rational>> = domains[x]
                .iter()
                .map(|a| a.utilities(&profiles[x]))
                .collect();
            let uy: Vec<Vec<Rational>> = domains[y]
                .iter()
                .map(|a| a.utilities(&profiles[y]))
                .collect();
            let (px, py) = (&profiles[x], &profiles[y]);
            constrained.add_constraint(x, y, |a, b| {
                let (ax, by) = (&domains[x][a], &domains[y][b]);
                ux[a][agent] >= px.bundle_value(agent, by.bundle(agent))
                    && uy[b][agent] >= py.bundle_value(agent, ax.bundle(agent))
            });
        }
    }
    let with_sp = constrained.solve();
    let without_sp = unconstrained.solve();
    let without_sp_witness = without_sp.solution.as_ref().map(|s| {
        s.iter()
            .enumerate()
            .map(|(v, &k)| domains[v][k].clone())
            .collect()
    });

    let single_profile = ValuationProfile::from_rows_unchecked(vec![pinned.clone(), pinned]);
    let single_profile_domain = fair_po_domain(&single_profile, config.notion, limits)?;
    let single_profile_outcome = BinaryCsp::new(vec![single_profile_domain.len()]).solve();

    let verdict = if config.notion == FairnessNotion::Eq1 {
        confirmed(
            with_sp.solution.is_none()
                && without_sp.solution.is_some()
                && single_profile_outcome.solution.is_some(),
        )
    } else {
        ReplayVerdict::NoClaim
    };
    Ok((
        verdict,
        Certificate::Theorem2 {
            config,
            profiles,
            domain_sizes: sizes,
            sp_constraints: constrained.n_constraints(),
            with_sp,
            without_sp,
            without_sp_witness,
            single_profile,
            single_profile_domain,
            single_profile_outcome,
        },
    ))
}

fn freeman_instance() -> Instance {
    let items = (0..8)
        .map(|id| ItemSpec {
            id,
            inherent_values: vec![int(-10), int(if id == 0 { -73 } else { -1 })],
        })
        .collect();
    Instance::new(InstanceSpec {
        n_agents: 4,
        items,
        kind: InstanceKind::ChoresRestrictedK(2),
    })
    .expect("freeman instance is valid")
}

fn freeman(limits: &Limits) -> Result<(ReplayVerdict, Certificate), OracleError> {
    let inst = freeman_instance();
    let far = [-10; 8];
    let near = [-73, -1, -1, -1, -1, -1, -1, -1];
    let p = profile(&inst, &[&far, &far, &near, &near])?;
    let (n, m) = (4, 8);
    let total = allocation_count(n, m);
    check_cap(total, limits)?;

    struct Tally {
        ef1: u64,
        eq1: u64,
        both: Vec<u64>,
    }
    let chunks = map_chunks(limits, total as usize, 4096, |range| {
        let mut t = Tally {
            ef1: 0,
            eq1: 0,
            both: vec![],
        };
        for k in range {
            let a = allocation_at(n, m, k as u64);
            let ef1 = check_fair(FairnessNotion::Ef1, &a, &p).is_ok_and(|v| v.holds());
            let eq1 = check_fair(FairnessNotion::Eq1, &a, &p).is_ok_and(|v| v.holds());
            t.ef1 += ef1 as u64;
            t.eq1 += eq1 as u64;
            if ef1 && eq1 {
                t.both.push(k as u64);
            }
        }
        t
    });
    let (mut ef1, mut eq1, mut both) = (0, 0, Vec::new());
    for t in chunks {
        ef1 += t.ef1;
        eq1 += t.eq1;
        both.extend(t.both);
    }
    let table = UtilityTable::new(&p, limits)?;
    let mut all_three = 0;
    let mut refutations = Vec::new();
    for &k in &both {
        let a = allocation_at(n, m, k);
        match table.pareto_verdict(&a.utilities(&p)) {
            Verdict::Fails { witness } => refutations.push(Refutation {
                allocation: a,
                witness,
            }),
            _ => all_three += 1,
        }
    }
    Ok((
        confirmed(all_three == 0),
        Certificate::Freeman {
            profile: p,
            allocations: total as u64,
            ef1,
            eq1,
            ef1_and_eq1: both.len() as u64,
            all_three,
            refutations,
        },
    ))
}

fn ewm_bound(n: usize, limits: &Limits) -> Result<(ReplayVerdict, Certificate), OracleError> {
    if n < 2 {
        return Err(OracleError::Internal(
            "ewm-bound needs at least two agents".into(),
        ));
    }
    let units = n * (n - 1);
    let mut inherent = vec![int(-1); units];
    inherent.push(int(-(n as i64)));
    let m = inherent.len();
    check_cap(allocation_count(n, m), limits)?;
    let inst = Instance::chores(n, inherent.clone())
        .map_err(|e| OracleError::Internal(format!("{e:?}")))?;
    let p = inst
        .validate_profile(vec![inherent; n])
        .map_err(|e| OracleError::Internal(format!("{e:?}")))?;
    let order: Vec<usize> = (0..n).collect();
    let out = rand_chore_with_order(&inst, &p, &order, limits)?;
    let allocation = out.distribution.support()[0].allocation.clone();
    let ew = welfare(WelfareKind::Ew, &allocation, &p)?;
    let (opt_e, opt_e_witness) = UtilityTable::new(&p, limits)?.optimum(WelfareKind::Ew);
    let ratio_value = &ew / &opt_e;
    let expected_ratio = int(2) - ratio(1, n as i64);
    let ok = ew == int(-(2 * n as i64 - 1))
        && opt_e == int(-(n as i64))
        && ratio_value == expected_ratio;
    Ok((
        confirmed(ok),
        Certificate::EwmBound {
            n,
            profile: p,
            order,
            allocation,
            ew,
            opt_e,
            opt_e_witness,
            ratio: ratio_value,
            expected_ratio,
        },
    ))
}

fn mixed_eq(limits: &Limits) -> Result<(ReplayVerdict, Certificate), OracleError> {
    let inst = Instance::mixed(vec![(int(1), int(1)), (int(1), int(1))])
        .map_err(|e| OracleError::Internal(format!("{e:?}")))?;
    let p = profile(&inst, &[&[1, 1], &[-1, -1]])?;
    let table = UtilityTable::new(&p, limits)?;
    let mut out = Vec::new();
    for k in 0..allocation_count(2, 2) as u64 {
        let a = allocation_at(2, 2, k);
        out.push(MixedEqRow {
            pareto: table.pareto_verdict(&a.utilities(&p)),
            eq: check_fair(FairnessNotion::Eq, &a, &p)?,
            eq1: check_fair(FairnessNotion::Eq1, &a, &p)?,
            allocation: a,
        });
    }
    let po: Vec<&MixedEqRow> = out.iter().filter(|r| r.pareto.holds()).collect();
    let ok = !po.is_empty() && po.iter().all(|r| r.eq.fails() && r.eq1.fails());
    Ok((
        confirmed(ok),
        Certificate::MixedEq {
            profile: p,
            rows: out,
        },
    ))
}
