use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::enumerate::check_cap;
use super::OracleError;
use crate::exec::{find_first, Limits};
use crate::instance::{Instance, ValuationProfile};
use crate::mechanisms::{check_shape, MechanismError, MechanismId};
use crate::rational::{serde_rational_vec, Rational};

/// Which reports the agents outside the deviating group make.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Others {
    /// Every report profile in the restricted domain.
    All,
    /// Their true values.
    Truthful,
}

impl fmt::Display for Others {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Others::All => "all",
            Others::Truthful => "truthful",
        })
    }
}

impl FromStr for Others {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Others::All),
            "truthful" => Ok(Others::Truthful),
            other => Err(format!("unknown others mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeviationVerdict {
    TruthfulOptimal,
    Violation,
}

impl fmt::Display for DeviationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviationVerdict::TruthfulOptimal => "TRUTHFUL-OPTIMAL",
            DeviationVerdict::Violation => "VIOLATION",
        })
    }
}

/// A profitable deviation. `honest` has the coalition reporting truthfully,
/// `deviating` differs from it only on coalition rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationWitness {
    pub coalition: Vec<usize>,
    pub truth: ValuationProfile,
    pub honest: ValuationProfile,
    pub deviating: ValuationProfile,
    #[serde(with = "serde_rational_vec")]
    pub before: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub after: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub mode: String,
    pub others: Others,
    pub max_coalition: usize,
    /// Reports available to one agent.
    pub report_domain: u128,
    /// Deviations in the full search space, whether or not the search stopped early.
    pub planned_checks: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub mechanism: MechanismId,
    pub verdict: DeviationVerdict,
    pub witness: Option<DeviationWitness>,
    pub bounds: SearchBounds,
}

impl DeviationReport {
    /// Recomputes both utility vectors and the gain condition from scratch.
    pub fn reverify(&self, inst: &Instance) -> Result<bool, OracleError> {
        let Some(w) = &self.witness else {
            return Ok(self.verdict == DeviationVerdict::TruthfulOptimal);
        };
        let before = self
            .mechanism
            .expected_utilities(inst, &w.honest, &w.truth)?;
        let after = self
            .mechanism
            .expected_utilities(inst, &w.deviating, &w.truth)?;
        let rows_ok = (0..inst.n_agents()).all(|i| {
            if w.coalition.contains(&i) {
                w.honest.row(i) == w.truth.row(i)
            } else {
                w.honest.row(i) == w.deviating.row(i)
            }
        });
        Ok(self.verdict == DeviationVerdict::Violation
            && rows_ok
            && before == w.before
            && after == w.after
            && group_gain(&w.coalition, &before, &after))
    }
}

fn group_gain(coalition: &[usize], before: &[Rational], after: &[Rational]) -> bool {
    coalition.iter().all(|&i| after[i] >= before[i])
        && coalition.iter().any(|&i| after[i] > before[i])
}

fn pow(base: u128, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Fills `rows[agents[k]]` from `index` in base `domain.len()`, first agent most
/// significant.
fn decode_into(
    rows: &mut [Vec<Rational>],
    agents: &[usize],
    mut index: usize,
    domain: &[Vec<Rational>],
) {
    let d = domain.len();
    for &a in agents.iter().rev() {
        rows[a] = domain[index % d].clone();
        index /= d;
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

struct Search<'a> {
    mech: MechanismId,
    inst: &'a Instance,
    truth: &'a ValuationProfile,
    others: Others,
    domain: Vec<Vec<Rational>>,
}

impl Search<'_> {
    /// First profitable joint deviation of `coalition` against the `k`-th report
    /// profile of the remaining agents.
    fn probe(
        &self,
        coalition: &[usize],
        k: usize,
    ) -> Option<Result<DeviationWitness, MechanismError>> {
        let n = self.inst.n_agents();
        let outside: Vec<usize> = (0..n).filter(|i| !coalition.contains(i)).collect();
        let mut rows: Vec<Vec<Rational>> = self.truth.rows().to_vec();
        if self.others == Others::All {
            decode_into(&mut rows, &outside, k, &self.domain);
        }
        let honest = ValuationProfile::from_rows_unchecked(rows.clone());
        let before = match self.mech.expected_utilities(self.inst, &honest, self.truth) {
            Ok(u) => u,
            Err(e) => return Some(Err(e)),
        };
        let joint = pow(self.domain.len() as u128, coalition.len()) as usize;
        for d in 0..joint {
            decode_into(&mut rows, coalition, d, &self.domain);
            if coalition.iter().all(|&i| rows[i] == self.truth.row(i)) {
                continue;
            }
            let deviating = ValuationProfile::from_rows_unchecked(rows.clone());
            let after = match self
                .mech
                .expected_utilities(self.inst, &deviating, self.truth)
            {
                Ok(u) => u,
                Err(e) => return Some(Err(e)),
            };
            if group_gain(coalition, &before, &after) {
                return Some(Ok(DeviationWitness {
                    coalition: coalition.to_vec(),
                    truth: self.truth.clone(),
                    honest,
                    deviating,
                    before,
                    after,
                }));
            }
        }
        None
    }

    fn others_count(&self, coalition_size: usize) -> u128 {
        match self.others {
            Others::All => pow(
                self.domain.len() as u128,
                self.inst.n_agents() - coalition_size,
            ),
            Others::Truthful => 1,
        }
    }
}

fn prepare<'a>(
    mech: MechanismId,
    inst: &'a Instance,
    truth: &'a ValuationProfile,
    others: Others,
    limits: &Limits,
) -> Result<Search<'a>, OracleError> {
    mech.check_instance(inst)?;
    check_shape(inst, truth)?;
    let d = inst.report_domain_size();
    check_cap(d, limits)?;
    Ok(Search {
        mech,
        inst,
        truth,
        others,
        domain: (0..d).map(|k| inst.report_at(k)).collect(),
    })
}

fn run(
    search: &Search<'_>,
    coalitions: &[Vec<usize>],
    bounds: SearchBounds,
    limits: &Limits,
) -> Result<DeviationReport, OracleError> {
    check_cap(bounds.planned_checks, limits)?;
    for s in coalitions {
        let k = search.others_count(s.len()) as usize;
        if let Some(found) = find_first(limits, k, |idx| search.probe(s, idx)) {
            return Ok(DeviationReport {
                mechanism: search.mech,
                verdict: DeviationVerdict::Violation,
                witness: Some(found?),
                bounds,
            });
        }
    }
    Ok(DeviationReport {
        mechanism: search.mech,
        verdict: DeviationVerdict::TruthfulOptimal,
        witness: None,
        bounds,
    })
}

/// Unilateral deviations: for each agent, each report of the others, each
/// alternative report. Reports the first strict gain in (agent, others, report)
/// order.
pub fn verify_spie(
    mech: MechanismId,
    inst: &Instance,
    truth: &ValuationProfile,
    others: Others,
    limits: &Limits,
) -> Result<DeviationReport, OracleError> {
    let search = prepare(mech, inst, truth, others, limits)?;
    let n = inst.n_agents();
    let d = search.domain.len() as u128;
    let planned = (n as u128)
        .saturating_mul(search.others_count(1))
        .saturating_mul(d);
    let coalitions: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let bounds = SearchBounds {
        mode: "spie".into(),
        others,
        max_coalition: 1,
        report_domain: d,
        planned_checks: planned,
    };
    run(&search, &coalitions, bounds, limits)
}

/// Coalitional deviations up to `max_coalition` members, coalitions in (size,
/// lexicographic) order. A violation needs every member to weakly gain and one to
/// strictly gain.
pub fn verify_gspie(
    mech: MechanismId,
    inst: &Instance,
    truth: &ValuationProfile,
    max_coalition: usize,
    others: Others,
    limits: &Limits,
) -> Result<DeviationReport, OracleError> {
    let search = prepare(mech, inst, truth, others, limits)?;
    let n = inst.n_agents();
    let d = search.domain.len() as u128;
    let coalitions: Vec<Vec<usize>> = (1..=max_coalition.min(n))
        .flat_map(|k| combinations(n, k))
        .collect();
    let planned = coalitions.iter().fold(0u128, |acc, s| {
        acc.saturating_add(search.others_count(s.len()).saturating_mul(pow(d, s.len())))
    });
    let bounds = SearchBounds {
        mode: "gspie".into(),
        others,
        max_coalition,
        report_domain: d,
        planned_checks: planned,
    };
    run(&search, &coalitions, bounds, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn chores(n: usize, values: &[i64]) -> Instance {
        Instance::chores(n, values.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn truth(inst: &Instance, rows: &[&[i64]]) -> ValuationProfile {
        inst.validate_profile(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn combinations_in_lex_order() {
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn rand_chore_small_is_truthful_optimal() {
        let inst = chores(2, &[-1, -2, -1]);
        let t = truth(&inst, &[&[-1, 0, -1], &[-1, -2, 0]]);
        let r = verify_spie(
            MechanismId::RandChore,
            &inst,
            &t,
            Others::All,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, DeviationVerdict::TruthfulOptimal);
        assert_eq!(r.bounds.planned_checks, 2 * 8 * 8);
    }

    #[test]
    fn fewest_zeros_is_manipulable() {
        let inst = chores(2, &[-1]);
        let t = truth(&inst, &[&[-1], &[-1]]);
        let spie = verify_spie(
            MechanismId::FewestZeros,
            &inst,
            &t,
            Others::Truthful,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(spie.verdict, DeviationVerdict::Violation);
        let w = spie.witness.as_ref().unwrap();
        assert_eq!(w.coalition, vec![0]);
        assert_eq!(w.before[0], int(-1));
        assert_eq!(w.after[0], int(0));
        assert!(spie.reverify(&inst).unwrap());

        let gspie = verify_gspie(
            MechanismId::FewestZeros,
            &inst,
            &t,
            2,
            Others::Truthful,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(gspie.witness.as_ref().unwrap().coalition, vec![0]);
        assert!(gspie.reverify(&inst).unwrap());
    }

    #[test]
    fn tampered_witness_fails_reverify() {
        let inst = chores(2, &[-1]);
        let t = truth(&inst, &[&[-1], &[-1]]);
        let mut r = verify_spie(
            MechanismId::FewestZeros,
            &inst,
            &t,
            Others::All,
            &Limits::default(),
        )
        .unwrap();
        r.witness.as_mut().unwrap().after[0] = int(-2);
        assert!(!r.reverify(&inst).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let inst = chores(2, &[-1, -1, -1]);
        let t = truth(&inst, &[&[-1; 3], &[-1; 3]]);
        let limits = Limits {
            enumeration_cap: 100,
            ..Limits::default()
        };
        assert!(matches!(
            verify_spie(MechanismId::RandChore, &inst, &t, Others::All, &limits),
            Err(OracleError::EnumerationTooLarge {
                count: 128,
                cap: 100
            })
        ));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let inst = chores(3, &[-1, -1]);
        let t = truth(&inst, &[&[-1, -1], &[0, -1], &[-1, 0]]);
        for mech in [MechanismId::RandChore, MechanismId::FewestZeros] {
            let a = verify_gspie(mech, &inst, &t, 3, Others::All, &Limits::sequential()).unwrap();
            let b = verify_gspie(mech, &inst, &t, 3, Others::All, &Limits::default()).unwrap();
            assert_eq!(a, b);
        }
    }
}
