use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::welfare::welfare_of;
use super::{check_fair, is_uwm, FairnessNotion, PropertyError, Verdict, WelfareKind, Witness};
use crate::allocation::{
    implemented_fraction, DeterministicAllocation, FractionalAllocation, RandomizedAllocation,
};
use crate::exec::{map_range, Limits};
use crate::instance::{Instance, ValuationProfile};
use crate::mechanisms::MechanismId;
use crate::oracle::{OracleError, UtilityTable};
use crate::rational::{int, ratio, serde_opt_rational, serde_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    Ef,
    Ef1,
    Eq,
    Eq1,
    Prop,
    Prop1,
    Po,
    Uwm,
    Ewm,
    /// `EW(A) >= 2 * OPT_E` on a support element.
    EwmTwoApprox,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::Ef,
        Criterion::Ef1,
        Criterion::Eq,
        Criterion::Eq1,
        Criterion::Prop,
        Criterion::Prop1,
        Criterion::Po,
        Criterion::Uwm,
        Criterion::Ewm,
        Criterion::EwmTwoApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ef => "ef",
            Criterion::Ef1 => "ef1",
            Criterion::Eq => "eq",
            Criterion::Eq1 => "eq1",
            Criterion::Prop => "prop",
            Criterion::Prop1 => "prop1",
            Criterion::Po => "po",
            Criterion::Uwm => "uwm",
            Criterion::Ewm => "ewm",
            Criterion::EwmTwoApprox => "ewm2",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown criterion `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEvaluation {
    #[serde(with = "serde_rational")]
    pub probability: Rational,
    pub allocation: DeterministicAllocation,
    #[serde(with = "serde_rational")]
    pub uw: Rational,
    #[serde(with = "serde_rational")]
    pub ew: Rational,
    #[serde(with = "serde_rational")]
    pub opt_e: Rational,
    /// `EW / OPT_E`; absent when `OPT_E` is zero.
    #[serde(with = "serde_opt_rational")]
    pub ewm_ratio: Option<Rational>,
    pub verdicts: Vec<CriterionVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub mechanism: Option<String>,
    pub fraction: FractionalAllocation,
    #[serde(with = "serde_rational")]
    pub uw: Rational,
    #[serde(with = "serde_rational")]
    pub ew: Rational,
    pub ex_ante: Vec<CriterionVerdict>,
    pub ex_post: Vec<SupportEvaluation>,
}

impl EvaluationReport {
    fn verdicts(&self, c: Criterion) -> impl Iterator<Item = &Verdict> {
        self.ex_ante
            .iter()
            .chain(self.ex_post.iter().flat_map(|s| s.verdicts.iter()))
            .filter(move |v| v.criterion == c)
            .map(|v| &v.verdict)
    }

    /// The criterion was evaluated somewhere and holds wherever it was evaluated.
    pub fn holds(&self, c: Criterion) -> bool {
        let mut evaluated = false;
        for v in self.verdicts(c) {
            match v {
                Verdict::Holds => evaluated = true,
                Verdict::Fails { .. } => return false,
                Verdict::NotEvaluated { .. } => {}
            }
        }
        evaluated
    }

    /// No verdict anywhere is FALSE.
    pub fn no_failures(&self) -> bool {
        Criterion::ALL
            .into_iter()
            .all(|c| self.verdicts(c).all(|v| !v.fails()))
    }

    pub fn first_failure(&self, c: Criterion) -> Option<&Witness> {
        self.verdicts(c).find_map(|v| match v {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        })
    }
}

fn not_evaluated(reason: &str) -> Verdict {
    Verdict::NotEvaluated {
        reason: reason.to_string(),
    }
}

/// Egalitarian optimum over fractional allocations for single-value chores: the
/// shared chores split evenly.
fn fractional_opt_e(inst: &Instance, profile: &ValuationProfile) -> Rational {
    let n = profile.n_agents();
    let shared: Rational = (0..profile.n_items())
        .filter(|&j| (0..n).all(|i| !profile.value(i, j).is_zero()))
        .map(|j| inst.primary_inherent(j).clone())
        .sum();
    shared * ratio(1, n as i64)
}

fn ex_ante_verdicts(
    inst: &Instance,
    fraction: &FractionalAllocation,
    profile: &ValuationProfile,
    ew: &Rational,
) -> Result<Vec<CriterionVerdict>, PropertyError> {
    let mut out = Vec::new();
    for (criterion, notion) in [
        (Criterion::Ef, FairnessNotion::Ef),
        (Criterion::Eq, FairnessNotion::Eq),
        (Criterion::Prop, FairnessNotion::Prop),
    ] {
        out.push(CriterionVerdict {
            criterion,
            verdict: check_fair(notion, fraction, profile)?,
        });
    }
    let uwm = is_uwm(fraction, profile)?;
    let po = if uwm.holds() {
        Verdict::Holds
    } else {
        not_evaluated("fractional PO is certified only through UWM")
    };
    out.push(CriterionVerdict {
        criterion: Criterion::Uwm,
        verdict: uwm,
    });
    out.push(CriterionVerdict {
        criterion: Criterion::Po,
        verdict: po,
    });
    let ewm = if inst.kind().is_single_value_chores() {
        let bound = fractional_opt_e(inst, profile);
        Verdict::from_witness((*ew < bound).then(|| Witness::Welfare {
            value: ew.clone(),
            bound,
        }))
    } else {
        not_evaluated("fractional EWM is evaluated only for single-value chores")
    };
    out.push(CriterionVerdict {
        criterion: Criterion::Ewm,
        verdict: ewm,
    });
    Ok(out)
}

fn support_evaluation(
    inst: &Instance,
    probability: &Rational,
    alloc: &DeterministicAllocation,
    profile: &ValuationProfile,
    table: &UtilityTable,
    opt_e: &Rational,
) -> Result<SupportEvaluation, PropertyError> {
    let utilities = alloc.utilities(profile);
    let uw = welfare_of(WelfareKind::Uw, &utilities);
    let ew = welfare_of(WelfareKind::Ew, &utilities);
    let mut verdicts = Vec::new();
    for (criterion, notion) in [
        (Criterion::Ef1, FairnessNotion::Ef1),
        (Criterion::Eq1, FairnessNotion::Eq1),
        (Criterion::Prop1, FairnessNotion::Prop1),
    ] {
        verdicts.push(CriterionVerdict {
            criterion,
            verdict: check_fair(notion, alloc, profile)?,
        });
    }
    verdicts.push(CriterionVerdict {
        criterion: Criterion::Po,
        verdict: table.pareto_verdict(&utilities),
    });
    verdicts.push(CriterionVerdict {
        criterion: Criterion::Uwm,
        verdict: is_uwm(alloc, profile)?,
    });
    let two_approx = if inst.kind().is_chores() {
        let bound = int(2) * opt_e;
        Verdict::from_witness((ew < bound).then(|| Witness::Welfare {
            value: ew.clone(),
            bound,
        }))
    } else {
        not_evaluated("the 2-approximation of EWM concerns chores only")
    };
    verdicts.push(CriterionVerdict {
        criterion: Criterion::EwmTwoApprox,
        verdict: two_approx,
    });
    let ewm_ratio = (!opt_e.is_zero()).then(|| &ew / opt_e);
    Ok(SupportEvaluation {
        probability: probability.clone(),
        allocation: alloc.clone(),
        uw,
        ew,
        opt_e: opt_e.clone(),
        ewm_ratio,
        verdicts,
    })
}

/// Ex-ante verdicts on the implemented fraction and ex-post verdicts on every
/// support element, all measured with `profile`.
pub fn evaluate_randomized(
    inst: &Instance,
    dist: &RandomizedAllocation,
    profile: &ValuationProfile,
    limits: &Limits,
) -> Result<EvaluationReport, OracleError> {
    let fraction = implemented_fraction(dist);
    super::AllocationView::from(&fraction).check_shape(profile)?;
    let utilities = fraction.utilities(profile);
    let uw = welfare_of(WelfareKind::Uw, &utilities);
    let ew = welfare_of(WelfareKind::Ew, &utilities);
    let ex_ante = ex_ante_verdicts(inst, &fraction, profile, &ew)?;
    let table = UtilityTable::new(profile, limits)?;
    let (opt_e, _) = table.optimum(WelfareKind::Ew);
    let ex_post = map_range(limits, dist.support().len(), |k| {
        let atom = &dist.support()[k];
        support_evaluation(
            inst,
            &atom.probability,
            &atom.allocation,
            profile,
            &table,
            &opt_e,
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(EvaluationReport {
        mechanism: None,
        fraction,
        uw,
        ew,
        ex_ante,
        ex_post,
    })
}

/// Runs `mech` on `reported` and evaluates the output against `truth`.
pub fn evaluate_mechanism(
    mech: MechanismId,
    inst: &Instance,
    reported: &ValuationProfile,
    truth: &ValuationProfile,
    limits: &Limits,
) -> Result<EvaluationReport, OracleError> {
    let out = mech.run(inst, reported, limits)?;
    let mut report = evaluate_randomized(inst, &out.distribution, truth, limits)?;
    report.mechanism = Some(out.mechanism);
    Ok(report)
}
