//! The `fairmech` command line: gen, run, check, verify and replay.
//!
//! Exit codes: 0 success or confirmed, 1 a property violation or unconfirmed
//! claim, 2 usage or instance-kind errors, 3 an enumeration cap was hit.

pub mod args;

use std::fmt;
use std::fs;
use std::path::Path;

use fairmech_core::allocation::{DeterministicAllocation, RandomizedAllocation};
use fairmech_core::exec::{Execution, Limits};
use fairmech_core::format::{
    parse_allocation, parse_instance_document, parse_mechanism_output, parse_profile,
    write_allocation, write_deviation_report, write_evaluation_report, write_instance_document,
    write_mechanism_output, write_replay_report, InstanceDocument,
};
use fairmech_core::instance::{Instance, InstanceKind, InstanceSpec, ItemSpec, ValuationProfile};
use fairmech_core::mechanisms::{seeded_rng, sequential_picking, MechanismId, PickSequence};
use fairmech_core::oracle::{
    replay, verify_gspie, verify_spie, DeviationVerdict, ReplayCase, ReplayVerdict, Theorem2Config,
    Theorem2Slice,
};
use fairmech_core::properties::{
    evaluate_mechanism, evaluate_randomized, Criterion, EvaluationReport,
};
use fairmech_core::rational::{ratio, Rational};
use fairmech_core::{MechanismError, MechanismOutput, OracleError, PartitionTrace, Verdict};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use args::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Cap(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Cap(_) => EXIT_CAP,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Cap(m) => f.write_str(m),
        }
    }
}

impl From<MechanismError> for Failure {
    fn from(e: MechanismError) -> Self {
        match e {
            MechanismError::SupportTooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::EnumerationTooLarge { .. } => Failure::Cap(e.to_string()),
            OracleError::Mechanism(m) => m.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// What a command produced: the report text and the exit code it implies.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub code: u8,
}

/// Machine form of `gen`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub instance: InstanceSpec,
    pub true_profile: Option<ValuationProfile>,
}

/// Machine form of `run`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub output: MechanismOutput,
    pub seed: Option<u64>,
    pub sampled: Option<DeterministicAllocation>,
}

/// Machine form of `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub required: Vec<Criterion>,
    pub failed: Vec<Criterion>,
    pub evaluation: EvaluationReport,
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let limits = Limits {
        support_cap: cli.global.support_cap,
        enumeration_cap: cli.global.enum_cap,
        execution: if cli.global.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
    };
    let fmt = cli.global.format;
    match &cli.command {
        Command::Gen(a) => gen(a, fmt),
        Command::Run(a) => run(a, fmt, &limits),
        Command::Check(a) => check(a, fmt, &limits),
        Command::Verify(a) => verify(a, fmt, &limits),
        Command::Replay(a) => replay_cmd(a, fmt, &limits),
    }
}

fn machine<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<InstanceDocument, Failure> {
    parse_instance_document(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_profile(inst: &Instance, path: &Path) -> Result<ValuationProfile, Failure> {
    let raw = parse_profile(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    inst.validate_profile(raw.rows().to_vec()).map_err(|errs| {
        usage(format!(
            "{}: {}",
            path.display(),
            errs.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ))
    })
}

/// Every agent values every chore at its first inherent value.
fn inherent_profile(inst: &Instance) -> Result<ValuationProfile, Failure> {
    if !inst.kind().is_chores() {
        return Err(usage("mixed2 instances need an explicit true profile"));
    }
    let row: Vec<Rational> = (0..inst.n_items())
        .map(|j| inst.primary_inherent(j).clone())
        .collect();
    inst.validate_profile(vec![row; inst.n_agents()])
        .map_err(|_| usage("inherent profile is invalid"))
}

struct Loaded {
    inst: Instance,
    reported: ValuationProfile,
    truth: ValuationProfile,
}

fn load(p: &ProfileArgs) -> Result<Loaded, Failure> {
    let doc = load_document(&p.instance)?;
    let truth = match &p.truth {
        Some(path) => load_profile(&doc.instance, path)?,
        None => match &doc.true_profile {
            Some(t) => t.clone(),
            None => inherent_profile(&doc.instance)?,
        },
    };
    let reported = match &p.reports {
        Some(path) => load_profile(&doc.instance, path)?,
        None => doc
            .reported_profile
            .clone()
            .unwrap_or_else(|| truth.clone()),
    };
    Ok(Loaded {
        inst: doc.instance,
        reported,
        truth,
    })
}

enum Mechanism {
    Core(MechanismId),
    SeqPick,
}

fn mechanism(name: &str) -> Result<Mechanism, Failure> {
    if name == "seqpick" {
        return Ok(Mechanism::SeqPick);
    }
    name.parse().map(Mechanism::Core).map_err(usage)
}

fn seqpick(
    inst: &Instance,
    reported: &ValuationProfile,
    seq: &[usize],
    order: &[usize],
) -> Result<MechanismOutput, Failure> {
    if seq.is_empty() {
        return Err(usage("seqpick needs --seq"));
    }
    let order: Vec<usize> = if order.is_empty() {
        (0..inst.n_agents()).collect()
    } else {
        order.to_vec()
    };
    let alloc = sequential_picking(reported, &PickSequence(seq.to_vec()), &order)?;
    Ok(MechanismOutput {
        mechanism: "seqpick".into(),
        trace: PartitionTrace::Picking {
            sequence: seq.to_vec(),
            order,
            strategy: "greedy".into(),
        },
        distribution: RandomizedAllocation::point(alloc),
    })
}

fn gen(a: &GenArgs, fmt: Format) -> Result<Outcome, Failure> {
    let seed = a.seed.ok_or_else(|| usage("gen needs --seed"))?;
    let n = match (a.kind, a.n) {
        (GenKind::Mixed2, None) => 2,
        (_, Some(n)) => n,
        (_, None) => return Err(usage("--n is required")),
    };
    if a.min < 1 || a.max < a.min || a.den < 1 {
        return Err(usage("value range needs 1 <= min <= max and den >= 1"));
    }
    let span = (a.max - a.min + 1) as usize;
    let (kind, per_item) = match a.kind {
        GenKind::Chores1 => (InstanceKind::ChoresRestricted1, 1),
        GenKind::Choresk => (InstanceKind::ChoresRestrictedK(a.k), a.k),
        GenKind::Mixed2 => (InstanceKind::Mixed2, 2),
    };
    if a.kind == GenKind::Choresk && (a.k == 0 || a.k > span) {
        return Err(usage(format!(
            "choresk needs 1 <= k <= {span} distinct magnitudes"
        )));
    }
    let mut rng = seeded_rng(seed);
    let value = |num: i64| ratio(num, a.den);
    let items: Vec<ItemSpec> = (0..a.m)
        .map(|id| {
            let inherent_values = match a.kind {
                GenKind::Mixed2 => vec![
                    value(-rng.gen_range(a.min..=a.max)),
                    value(rng.gen_range(a.min..=a.max)),
                ],
                _ => {
                    let mut picks: Vec<i64> = sample(&mut rng, span, per_item)
                        .into_iter()
                        .map(|k| a.min + k as i64)
                        .collect();
                    picks.sort_unstable_by(|x, y| y.cmp(x));
                    picks.into_iter().map(|v| value(-v)).collect()
                }
            };
            ItemSpec {
                id,
                inherent_values,
            }
        })
        .collect();
    let inst = Instance::new(InstanceSpec {
        n_agents: n,
        items,
        kind,
    })
    .map_err(|errs| {
        usage(format!(
            "invalid spec: {}",
            errs.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ))
    })?;
    let truth = if a.no_truth {
        None
    } else {
        let rows = (0..n)
            .map(|_| {
                (0..inst.n_items())
                    .map(|j| {
                        let allowed = inst.allowed_values(j);
                        allowed[rng.gen_range(0..allowed.len())].clone()
                    })
                    .collect()
            })
            .collect();
        Some(
            inst.validate_profile(rows)
                .expect("drawn from allowed sets"),
        )
    };
    let report = match fmt {
        Format::Human => write_instance_document(&InstanceDocument {
            instance: inst.clone(),
            true_profile: truth.clone(),
            reported_profile: None,
        }),
        Format::Machine => machine(&GenReport {
            instance: inst.to_spec(),
            true_profile: truth,
        }),
    };
    Ok(Outcome {
        report,
        code: EXIT_OK,
    })
}

fn run(a: &RunArgs, fmt: Format, limits: &Limits) -> Result<Outcome, Failure> {
    let l = load(&a.profiles)?;
    let (output, sampled) = match mechanism(&a.mechanism)? {
        Mechanism::SeqPick => {
            let out = seqpick(&l.inst, &l.reported, &a.seq, &a.order)?;
            let sampled = a
                .seed
                .map(|_| out.distribution.support()[0].allocation.clone());
            (out, sampled)
        }
        Mechanism::Core(id) => {
            let out = id.run(&l.inst, &l.reported, limits)?;
            let sampled = match a.seed {
                Some(s) => Some(id.simulate(&l.inst, &l.reported, s)?),
                None => None,
            };
            (out, sampled)
        }
    };
    let report = match fmt {
        Format::Human => {
            let mut s = write_mechanism_output(&output);
            if let (Some(seed), Some(alloc)) = (a.seed, &sampled) {
                s.push_str(&format!("seed: {seed}\nsampled:\n"));
                s.push_str(&write_allocation(alloc));
            }
            s
        }
        Format::Machine => machine(&RunReport {
            output,
            seed: a.seed,
            sampled,
        }),
    };
    Ok(Outcome {
        report,
        code: EXIT_OK,
    })
}

fn check(a: &CheckArgs, fmt: Format, limits: &Limits) -> Result<Outcome, Failure> {
    let l = load(&a.profiles)?;
    let evaluation = if let Some(path) = &a.allocation {
        let alloc = parse_allocation(&read(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        evaluate_randomized(
            &l.inst,
            &RandomizedAllocation::point(alloc),
            &l.truth,
            limits,
        )?
    } else if let Some(path) = &a.output {
        let out = parse_mechanism_output(&read(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let mut r = evaluate_randomized(&l.inst, &out.distribution, &l.truth, limits)?;
        r.mechanism = Some(out.mechanism);
        r
    } else if let Some(name) = &a.mechanism {
        match mechanism(name)? {
            Mechanism::Core(id) => evaluate_mechanism(id, &l.inst, &l.reported, &l.truth, limits)?,
            Mechanism::SeqPick => {
                let out = seqpick(&l.inst, &l.reported, &a.seq, &a.order)?;
                let mut r = evaluate_randomized(&l.inst, &out.distribution, &l.truth, limits)?;
                r.mechanism = Some(out.mechanism);
                r
            }
        }
    } else {
        return Err(usage("check needs --allocation, --output or --mechanism"));
    };
    let evaluated = |c: Criterion| {
        evaluation
            .ex_ante
            .iter()
            .chain(evaluation.ex_post.iter().flat_map(|s| &s.verdicts))
            .any(|v| v.criterion == c && !matches!(v.verdict, Verdict::NotEvaluated { .. }))
    };
    let required: Vec<Criterion> = if a.notions.is_empty() {
        Criterion::ALL
            .into_iter()
            .filter(|&c| evaluated(c))
            .collect()
    } else {
        a.notions.clone()
    };
    if let Some(c) = required.iter().find(|&&c| !evaluated(c)) {
        return Err(usage(format!("{c} does not apply to this input")));
    }
    let failed: Vec<Criterion> = required
        .iter()
        .copied()
        .filter(|&c| !evaluation.holds(c))
        .collect();
    let code = if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let report = match fmt {
        Format::Human => {
            let mut s = write_evaluation_report(&evaluation);
            let names =
                |cs: &[Criterion]| cs.iter().map(|c| c.name()).collect::<Vec<_>>().join(" ");
            s.push_str(&format!("required: {}\n", names(&required)));
            s.push_str(&format!("failed: {}\n", names(&failed)));
            for &c in &failed {
                if let Some(w) = evaluation.first_failure(c) {
                    s.push_str(&format!("witness {c}: {w}\n"));
                }
            }
            s
        }
        Format::Machine => machine(&CheckReport {
            required,
            failed,
            evaluation,
        }),
    };
    Ok(Outcome { report, code })
}

fn verify(a: &VerifyArgs, fmt: Format, limits: &Limits) -> Result<Outcome, Failure> {
    let doc = load_document(&a.instance)?;
    let inst = &doc.instance;
    let truth = match &a.truth {
        Some(path) => load_profile(inst, path)?,
        None => match &doc.true_profile {
            Some(t) => t.clone(),
            None => inherent_profile(inst)?,
        },
    };
    let Mechanism::Core(id) = mechanism(&a.mechanism)? else {
        return Err(usage(
            "verify supports randchore, randmixed and fewest-zeros",
        ));
    };
    let r = match a.mode {
        VerifyMode::Spie => verify_spie(id, inst, &truth, a.others, limits)?,
        VerifyMode::Gspie => {
            let k = a.max_coalition.unwrap_or(inst.n_agents());
            verify_gspie(id, inst, &truth, k, a.others, limits)?
        }
    };
    let reverified = r.reverify(inst)?;
    if !reverified {
        return Err(Failure::Usage("witness failed to re-verify".into()));
    }
    let code = match r.verdict {
        DeviationVerdict::TruthfulOptimal => EXIT_OK,
        DeviationVerdict::Violation => EXIT_VIOLATION,
    };
    let report = match fmt {
        Format::Human => {
            let mut s = write_deviation_report(&r);
            if r.witness.is_some() {
                s.push_str("reverified: true\n");
            }
            s
        }
        Format::Machine => machine(&r),
    };
    Ok(Outcome { report, code })
}

fn replay_cmd(a: &ReplayArgs, fmt: Format, limits: &Limits) -> Result<Outcome, Failure> {
    let case = match a.case {
        ReplayName::Theorem1 => ReplayCase::Theorem1,
        ReplayName::Theorem2 => ReplayCase::Theorem2(Theorem2Config {
            slice: match a.slice {
                SliceArg::Pinned => Theorem2Slice::Pinned,
                SliceArg::Full => Theorem2Slice::Full,
            },
            notion: a.notion,
        }),
        ReplayName::Freeman => ReplayCase::Freeman,
        ReplayName::EwmBound => ReplayCase::EwmBound(a.n),
        ReplayName::MixedEq => ReplayCase::MixedEq,
    };
    let r = replay(case, limits)?;
    let code = if r.verdict == ReplayVerdict::Confirmed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let report = match fmt {
        Format::Human => write_replay_report(&r),
        Format::Machine => machine(&r),
    };
    Ok(Outcome { report, code })
}
