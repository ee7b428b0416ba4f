//! Canonical line-oriented text format.
//!
//! Every record is `key: value` on its own line. Rationals are always written as
//! `p/q` in lowest terms; the parser also accepts a bare integer. Blank lines and
//! lines starting with `#` are ignored.
//!
//! ```text
//! kind: chores1
//! agents: 2
//! items: 2
//! item 0: -1/1
//! item 1: -2/1
//! true_profile:
//! agent 0: -1/1 0/1
//! agent 1: -1/1 -2/1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::allocation::{DeterministicAllocation, RandomizedAllocation};
use crate::instance::{Instance, InstanceKind, InstanceSpec, ItemSpec, ValuationProfile};
use crate::mechanisms::{MechanismOutput, PartitionTrace};
use crate::oracle::{Certificate, DeviationReport, ReplayReport};
use crate::properties::{CriterionVerdict, EvaluationReport};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, field `{field}`: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the document as a whole.
    pub line: usize,
    pub field: String,
    pub message: String,
}

fn err(line: usize, field: &str, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

/// An instance with optional true and reported profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub true_profile: Option<ValuationProfile>,
    pub reported_profile: Option<ValuationProfile>,
}

impl InstanceDocument {
    pub fn new(instance: Instance) -> Self {
        Self {
            instance,
            true_profile: None,
            reported_profile: None,
        }
    }
}

fn join_rationals(values: &[Rational]) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_indices(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_profile(profile: &ValuationProfile) -> String {
    let mut out = String::new();
    for (i, row) in profile.rows().iter().enumerate() {
        let _ = writeln!(out, "agent {i}: {}", join_rationals(row));
    }
    out
}

pub fn write_instance_document(doc: &InstanceDocument) -> String {
    let inst = &doc.instance;
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", inst.kind());
    let _ = writeln!(out, "agents: {}", inst.n_agents());
    let _ = writeln!(out, "items: {}", inst.n_items());
    for item in inst.items() {
        let _ = writeln!(
            out,
            "item {}: {}",
            item.id,
            join_rationals(&item.inherent_values)
        );
    }
    for (name, p) in [
        ("true_profile", &doc.true_profile),
        ("reported_profile", &doc.reported_profile),
    ] {
        if let Some(p) = p {
            let _ = writeln!(out, "{name}:");
            out.push_str(&write_profile(p));
        }
    }
    out
}

/// `(line number, key, value)` for every meaningful line.
fn records(text: &str) -> impl Iterator<Item = Result<(usize, &str, &str), ParseError>> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        Some(match line.split_once(':') {
            Some((key, value)) => Ok((k + 1, key.trim(), value.trim())),
            None => Err(err(k + 1, line, "expected `key: value`")),
        })
    })
}

fn parse_rationals(line: usize, field: &str, value: &str) -> Result<Vec<Rational>, ParseError> {
    value
        .split_whitespace()
        .map(|tok| parse_rational(tok).map_err(|e| err(line, field, format!("`{tok}`: {e}"))))
        .collect()
}

fn parse_indices(line: usize, field: &str, value: &str) -> Result<Vec<usize>, ParseError> {
    value
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| err(line, field, format!("`{tok}` is not an index")))
        })
        .collect()
}

fn parse_usize(line: usize, field: &str, value: &str) -> Result<usize, ParseError> {
    value
        .parse()
        .map_err(|_| err(line, field, format!("`{value}` is not a count")))
}

fn indexed<'a>(key: &'a str, prefix: &str) -> Option<&'a str> {
    key.strip_prefix(prefix)
        .and_then(|rest| rest.strip_prefix(' '))
        .map(str::trim)
}

fn parse_kind(line: usize, value: &str) -> Result<InstanceKind, ParseError> {
    let mut parts = value.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("chores1"), None, _) => Ok(InstanceKind::ChoresRestricted1),
        (Some("mixed2"), None, _) => Ok(InstanceKind::Mixed2),
        (Some("choresk"), Some(k), None) => Ok(InstanceKind::ChoresRestrictedK(parse_usize(
            line, "kind", k,
        )?)),
        _ => Err(err(line, "kind", format!("unknown kind `{value}`"))),
    }
}

/// Collects `agent i: ...` rows in order.
fn push_row(
    rows: &mut Vec<Vec<Rational>>,
    line: usize,
    field: &str,
    index: &str,
    value: &str,
) -> Result<(), ParseError> {
    let i = parse_usize(line, field, index)?;
    if i != rows.len() {
        return Err(err(
            line,
            field,
            format!("expected agent {}, got agent {i}", rows.len()),
        ));
    }
    rows.push(parse_rationals(line, field, value)?);
    Ok(())
}

/// Rows of `agent i: ...` lines without any instance context.
pub fn parse_profile(text: &str) -> Result<ValuationProfile, ParseError> {
    let mut rows = Vec::new();
    for rec in records(text) {
        let (line, key, value) = rec?;
        let Some(index) = indexed(key, "agent") else {
            return Err(err(line, key, "expected `agent i: ...`"));
        };
        push_row(&mut rows, line, "agent", index, value)?;
    }
    ValuationProfile::unrestricted(rows).map_err(|e| err(0, "profile", e.to_string()))
}

pub fn parse_instance_document(text: &str) -> Result<InstanceDocument, ParseError> {
    #[derive(PartialEq)]
    enum Section {
        Header,
        Truth,
        Reported,
    }
    let mut kind = None;
    let mut agents = None;
    let mut n_items = None;
    let mut items: Vec<ItemSpec> = Vec::new();
    let mut truth: Option<Vec<Vec<Rational>>> = None;
    let mut reported: Option<Vec<Vec<Rational>>> = None;
    let mut section = Section::Header;
    for rec in records(text) {
        let (line, key, value) = rec?;
        match key {
            "kind" if section == Section::Header => kind = Some(parse_kind(line, value)?),
            "agents" if section == Section::Header => agents = Some(parse_usize(line, key, value)?),
            "items" if section == Section::Header => n_items = Some(parse_usize(line, key, value)?),
            "true_profile" => {
                if truth.is_some() {
                    return Err(err(line, key, "repeated section"));
                }
                truth = Some(Vec::new());
                section = Section::Truth;
            }
            "reported_profile" => {
                if reported.is_some() {
                    return Err(err(line, key, "repeated section"));
                }
                reported = Some(Vec::new());
                section = Section::Reported;
            }
            _ => {
                if let (Some(index), Section::Header) = (indexed(key, "item"), &section) {
                    items.push(ItemSpec {
                        id: parse_usize(line, "item", index)?,
                        inherent_values: parse_rationals(line, "item", value)?,
                    });
                } else if let Some(index) = indexed(key, "agent") {
                    let (rows, field) = match section {
                        Section::Truth => (truth.as_mut(), "true_profile"),
                        Section::Reported => (reported.as_mut(), "reported_profile"),
                        Section::Header => (None, "agent"),
                    };
                    let rows = rows
                        .ok_or_else(|| err(line, field, "profile row outside a profile section"))?;
                    push_row(rows, line, field, index, value)?;
                } else {
                    return Err(err(line, key, "unknown field"));
                }
            }
        }
    }
    let kind = kind.ok_or_else(|| err(0, "kind", "missing"))?;
    let n_agents = agents.ok_or_else(|| err(0, "agents", "missing"))?;
    let m = n_items.ok_or_else(|| err(0, "items", "missing"))?;
    if items.len() != m {
        return Err(err(
            0,
            "items",
            format!("declared {m} items, found {}", items.len()),
        ));
    }
    let instance = Instance::new(InstanceSpec {
        n_agents,
        items,
        kind,
    })
    .map_err(|errors| {
        let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
        err(0, "instance", msgs.join("; "))
    })?;
    let check = |rows: Option<Vec<Vec<Rational>>>, field: &str| {
        rows.map(|r| {
            instance.validate_profile(r).map_err(|errors| {
                let msgs: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
                err(0, field, msgs.join("; "))
            })
        })
        .transpose()
    };
    let true_profile = check(truth, "true_profile")?;
    let reported_profile = check(reported, "reported_profile")?;
    Ok(InstanceDocument {
        instance,
        true_profile,
        reported_profile,
    })
}

pub fn write_allocation(alloc: &DeterministicAllocation) -> String {
    format!(
        "agents: {}\nowners: {}\n",
        alloc.n_agents(),
        join_indices(alloc.owners())
    )
}

pub fn parse_allocation(text: &str) -> Result<DeterministicAllocation, ParseError> {
    let mut agents = None;
    let mut owners = None;
    for rec in records(text) {
        let (line, key, value) = rec?;
        match key {
            "agents" => agents = Some(parse_usize(line, key, value)?),
            "owners" => owners = Some((line, parse_indices(line, key, value)?)),
            _ => return Err(err(line, key, "unknown field")),
        }
    }
    let n = agents.ok_or_else(|| err(0, "agents", "missing"))?;
    let (line, owners) = owners.ok_or_else(|| err(0, "owners", "missing"))?;
    DeterministicAllocation::new(n, owners).map_err(|e| err(line, "owners", e.to_string()))
}

fn write_trace(out: &mut String, trace: &PartitionTrace) {
    match trace {
        PartitionTrace::Chores {
            zero_reported,
            shared,
        } => {
            let _ = writeln!(out, "zero_reported: {}", join_indices(zero_reported));
            let _ = writeln!(out, "shared: {}", join_indices(shared));
        }
        PartitionTrace::Mixed { q0, q1, q2, q3 } => {
            for (name, set) in [("q0", q0), ("q1", q1), ("q2", q2), ("q3", q3)] {
                let _ = writeln!(out, "{name}: {}", join_indices(set));
            }
        }
        PartitionTrace::Control { recipient } => {
            let _ = writeln!(out, "recipient: {recipient}");
        }
        PartitionTrace::Picking {
            sequence,
            order,
            strategy,
        } => {
            let _ = writeln!(out, "sequence: {}", join_indices(sequence));
            let _ = writeln!(out, "order: {}", join_indices(order));
            let _ = writeln!(out, "strategy: {strategy}");
        }
    }
}

fn write_support(out: &mut String, dist: &RandomizedAllocation) {
    let _ = writeln!(out, "agents: {}", dist.n_agents());
    for atom in dist.support() {
        let _ = writeln!(
            out,
            "atom {}: {}",
            format_rational(&atom.probability),
            join_indices(atom.allocation.owners())
        );
    }
}

type Fields = BTreeMap<String, (usize, String)>;

fn take(fields: &mut Fields, name: &str) -> Result<(usize, String), ParseError> {
    fields.remove(name).ok_or_else(|| err(0, name, "missing"))
}

fn take_indices(fields: &mut Fields, name: &str) -> Result<Vec<usize>, ParseError> {
    let (line, v) = take(fields, name)?;
    parse_indices(line, name, &v)
}

/// Mechanism name, trace sets, then the support sorted by owner sequence.
pub fn write_mechanism_output(out: &MechanismOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mechanism: {}", out.mechanism);
    write_trace(&mut s, &out.trace);
    write_support(&mut s, &out.distribution);
    s
}

pub fn parse_mechanism_output(text: &str) -> Result<MechanismOutput, ParseError> {
    let mut mechanism = None;
    let mut sets = Fields::new();
    let mut agents = None;
    let mut atoms = Vec::new();
    for rec in records(text) {
        let (line, key, value) = rec?;
        if key == "mechanism" {
            mechanism = Some(value.to_string());
        } else if key == "agents" {
            agents = Some(parse_usize(line, key, value)?);
        } else if let Some(p) = key.strip_prefix("atom ") {
            let prob = parse_rational(p.trim()).map_err(|e| err(line, "atom", e.to_string()))?;
            atoms.push((line, prob, parse_indices(line, "atom", value)?));
        } else {
            sets.insert(key.to_string(), (line, value.to_string()));
        }
    }
    let mechanism = mechanism.ok_or_else(|| err(0, "mechanism", "missing"))?;
    let n = agents.ok_or_else(|| err(0, "agents", "missing"))?;
    let trace = if sets.contains_key("zero_reported") {
        PartitionTrace::Chores {
            zero_reported: take_indices(&mut sets, "zero_reported")?,
            shared: take_indices(&mut sets, "shared")?,
        }
    } else if sets.contains_key("q0") {
        PartitionTrace::Mixed {
            q0: take_indices(&mut sets, "q0")?,
            q1: take_indices(&mut sets, "q1")?,
            q2: take_indices(&mut sets, "q2")?,
            q3: take_indices(&mut sets, "q3")?,
        }
    } else if let Some((line, v)) = sets.remove("recipient") {
        PartitionTrace::Control {
            recipient: parse_usize(line, "recipient", &v)?,
        }
    } else if sets.contains_key("sequence") {
        PartitionTrace::Picking {
            sequence: take_indices(&mut sets, "sequence")?,
            order: take_indices(&mut sets, "order")?,
            strategy: take(&mut sets, "strategy")?.1,
        }
    } else {
        return Err(err(0, "trace", "no partition trace"));
    };
    if let Some((key, (line, _))) = sets.into_iter().next() {
        return Err(err(line, &key, "unknown field"));
    }
    let mut parsed = Vec::new();
    for (line, prob, owners) in atoms {
        let alloc = DeterministicAllocation::new(n, owners)
            .map_err(|e| err(line, "atom", e.to_string()))?;
        parsed.push((prob, alloc));
    }
    let distribution =
        RandomizedAllocation::from_atoms(parsed).map_err(|e| err(0, "atom", e.to_string()))?;
    Ok(MechanismOutput {
        mechanism,
        trace,
        distribution,
    })
}

fn write_verdicts(out: &mut String, indent: &str, verdicts: &[CriterionVerdict]) {
    for v in verdicts {
        let _ = writeln!(out, "{indent}{}: {}", v.criterion, v.verdict);
    }
}

pub fn write_evaluation_report(r: &EvaluationReport) -> String {
    let mut out = String::new();
    if let Some(m) = &r.mechanism {
        let _ = writeln!(out, "mechanism: {m}");
    }
    let _ = writeln!(out, "ex_ante:");
    let _ = writeln!(out, "  uw: {}", format_rational(&r.uw));
    let _ = writeln!(out, "  ew: {}", format_rational(&r.ew));
    for (j, row) in r.fraction.shares().iter().enumerate() {
        let _ = writeln!(out, "  share {j}: {}", join_rationals(row));
    }
    write_verdicts(&mut out, "  ", &r.ex_ante);
    for (k, s) in r.ex_post.iter().enumerate() {
        let _ = writeln!(
            out,
            "support {k}: p={} owners: {}",
            format_rational(&s.probability),
            join_indices(s.allocation.owners())
        );
        let _ = writeln!(out, "  uw: {}", format_rational(&s.uw));
        let _ = writeln!(out, "  ew: {}", format_rational(&s.ew));
        let _ = writeln!(out, "  opt_e: {}", format_rational(&s.opt_e));
        if let Some(ratio) = &s.ewm_ratio {
            let _ = writeln!(out, "  ewm_ratio: {}", format_rational(ratio));
        }
        write_verdicts(&mut out, "  ", &s.verdicts);
    }
    out
}

pub fn write_deviation_report(r: &DeviationReport) -> String {
    let mut out = String::new();
    let b = &r.bounds;
    let _ = writeln!(out, "mechanism: {}", r.mechanism);
    let _ = writeln!(out, "mode: {}", b.mode);
    let _ = writeln!(out, "others: {}", b.others);
    let _ = writeln!(out, "max_coalition: {}", b.max_coalition);
    let _ = writeln!(out, "report_domain: {}", b.report_domain);
    let _ = writeln!(out, "planned_checks: {}", b.planned_checks);
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "coalition: {}", join_indices(&w.coalition));
        for (name, p) in [
            ("truth", &w.truth),
            ("honest", &w.honest),
            ("deviating", &w.deviating),
        ] {
            let _ = writeln!(out, "{name}:");
            out.push_str(&write_profile(p));
        }
        let _ = writeln!(out, "before: {}", join_rationals(&w.before));
        let _ = writeln!(out, "after: {}", join_rationals(&w.after));
    }
    out
}

pub fn write_replay_report(r: &ReplayReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case: {}", r.case);
    let _ = writeln!(out, "verdict: {}", r.verdict);
    match &r.certificate {
        Certificate::Theorem1 { instances, rows } => {
            for (k, p) in instances.iter().enumerate() {
                let _ = writeln!(out, "instance {}:", k + 1);
                out.push_str(&write_profile(p));
            }
            for row in rows {
                let _ = writeln!(
                    out,
                    "sequence {} order {}:",
                    join_indices(&row.sequence.0),
                    join_indices(&row.order)
                );
                for (k, (a, v)) in row.allocations.iter().zip(&row.pareto).enumerate() {
                    let _ = writeln!(
                        out,
                        "  instance {}: owners {} po {}",
                        k + 1,
                        join_indices(a.owners()),
                        v
                    );
                }
            }
        }
        Certificate::Theorem2 {
            config,
            profiles,
            domain_sizes,
            sp_constraints,
            with_sp,
            without_sp,
            without_sp_witness,
            single_profile,
            single_profile_domain,
            single_profile_outcome,
        } => {
            let _ = writeln!(out, "slice: {:?}", config.slice);
            let _ = writeln!(out, "notion: {}", config.notion);
            let _ = writeln!(out, "profiles: {}", profiles.len());
            let _ = writeln!(out, "domain_sizes: {}", join_indices(domain_sizes));
            let _ = writeln!(out, "sp_constraints: {sp_constraints}");
            for (name, o) in [("with_sp", with_sp), ("without_sp", without_sp)] {
                let _ = writeln!(
                    out,
                    "{name}: {} nodes={} backtracks={} prunings={}",
                    if o.solution.is_some() { "SAT" } else { "UNSAT" },
                    o.stats.nodes,
                    o.stats.backtracks,
                    o.stats.prunings
                );
            }
            if let Some(w) = without_sp_witness {
                for (p, a) in profiles.iter().zip(w) {
                    let _ = writeln!(
                        out,
                        "  report {} -> owners {}",
                        join_rationals(p.row(0)),
                        join_indices(a.owners())
                    );
                }
            }
            let _ = writeln!(
                out,
                "single_profile: {} with {} allocations",
                if single_profile_outcome.solution.is_some() {
                    "SAT"
                } else {
                    "UNSAT"
                },
                single_profile_domain.len()
            );
            out.push_str(&write_profile(single_profile));
        }
        Certificate::Freeman {
            profile,
            allocations,
            ef1,
            eq1,
            ef1_and_eq1,
            all_three,
            refutations,
        } => {
            out.push_str(&write_profile(profile));
            let _ = writeln!(out, "allocations: {allocations}");
            let _ = writeln!(out, "ef1: {ef1}");
            let _ = writeln!(out, "eq1: {eq1}");
            let _ = writeln!(out, "ef1_and_eq1: {ef1_and_eq1}");
            let _ = writeln!(out, "ef1_eq1_po: {all_three}");
            for r in refutations {
                let _ = writeln!(
                    out,
                    "  owners {}: {}",
                    join_indices(r.allocation.owners()),
                    r.witness
                );
            }
        }
        Certificate::EwmBound {
            n,
            profile,
            order,
            allocation,
            ew,
            opt_e,
            opt_e_witness,
            ratio,
            expected_ratio,
        } => {
            let _ = writeln!(out, "agents: {n}");
            out.push_str(&write_profile(profile));
            let _ = writeln!(out, "order: {}", join_indices(order));
            let _ = writeln!(out, "owners: {}", join_indices(allocation.owners()));
            let _ = writeln!(out, "ew: {}", format_rational(ew));
            let _ = writeln!(out, "opt_e: {}", format_rational(opt_e));
            let _ = writeln!(
                out,
                "opt_e_owners: {}",
                join_indices(opt_e_witness.owners())
            );
            let _ = writeln!(out, "ratio: {}", format_rational(ratio));
            let _ = writeln!(out, "expected_ratio: {}", format_rational(expected_ratio));
        }
        Certificate::MixedEq { profile, rows } => {
            out.push_str(&write_profile(profile));
            for row in rows {
                let _ = writeln!(
                    out,
                    "owners {}: po {} eq {} eq1 {}",
                    join_indices(row.allocation.owners()),
                    row.pareto,
                    row.eq,
                    row.eq1
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Limits;
    use crate::mechanisms::{rand_chore, rand_mixed};
    use crate::rational::{int, ratio};

    fn sample_doc() -> InstanceDocument {
        let inst = Instance::chores(2, vec![int(-1), ratio(-3, 2)]).unwrap();
        let truth = inst
            .validate_profile(vec![vec![int(-1), int(0)], vec![int(-1), ratio(-3, 2)]])
            .unwrap();
        InstanceDocument {
            instance: inst,
            true_profile: Some(truth.clone()),
            reported_profile: Some(truth),
        }
    }

    #[test]
    fn instance_round_trip() {
        let doc = sample_doc();
        let text = write_instance_document(&doc);
        assert!(text.contains("item 1: -3/2\n"));
        assert_eq!(parse_instance_document(&text).unwrap(), doc);
    }

    #[test]
    fn comments_and_bare_integers() {
        let text =
            "# two unit chores\nkind: chores1\nagents: 2\nitems: 2\n\nitem 0: -1\nitem 1: -2/2\n";
        let doc = parse_instance_document(text).unwrap();
        assert_eq!(doc.instance.items()[1].inherent_values, vec![int(-1)]);
    }

    #[test]
    fn zero_denominator_is_reported_with_line() {
        let text = "kind: chores1\nagents: 2\nitems: 1\nitem 0: 1/0\n";
        let e = parse_instance_document(text).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (4, "item"));
    }

    #[test]
    fn invalid_instances_are_rejected() {
        let text = "kind: mixed2\nagents: 3\nitems: 0\n";
        let e = parse_instance_document(text).unwrap_err();
        assert_eq!(e.field, "instance");
        let text =
            "kind: chores1\nagents: 1\nitems: 1\nitem 0: -1/1\ntrue_profile:\nagent 0: -2/1\n";
        assert_eq!(
            parse_instance_document(text).unwrap_err().field,
            "true_profile"
        );
    }

    #[test]
    fn mixed_and_k_restricted_kinds() {
        let inst = Instance::mixed(vec![(int(3), int(5))]).unwrap();
        let doc = InstanceDocument::new(inst);
        let text = write_instance_document(&doc);
        assert!(text.contains("item 0: -3/1 5/1"));
        assert_eq!(parse_instance_document(&text).unwrap(), doc);

        let text = "kind: choresk 2\nagents: 2\nitems: 1\nitem 0: -1/1 -2/1\n";
        let doc = parse_instance_document(text).unwrap();
        assert_eq!(doc.instance.kind(), InstanceKind::ChoresRestrictedK(2));
        assert_eq!(write_instance_document(&doc), text);
    }

    #[test]
    fn allocation_round_trip() {
        let a = DeterministicAllocation::new(3, vec![2, 0, 1, 1]).unwrap();
        assert_eq!(write_allocation(&a), "agents: 3\nowners: 2 0 1 1\n");
        assert_eq!(parse_allocation(&write_allocation(&a)).unwrap(), a);
        assert!(parse_allocation("agents: 2\nowners: 0 2\n").is_err());
    }

    #[test]
    fn mechanism_output_round_trip() {
        let doc = sample_doc();
        let p = doc.true_profile.unwrap();
        let out = rand_chore(&doc.instance, &p, &Limits::default()).unwrap();
        let text = write_mechanism_output(&out);
        assert_eq!(
            text,
            "mechanism: randchore\nzero_reported: 1\nshared: 0\nagents: 2\natom 1/2: 0 0\natom 1/2: 1 0\n"
        );
        assert_eq!(parse_mechanism_output(&text).unwrap(), out);

        let inst = Instance::mixed(vec![(int(1), int(1)), (int(2), int(2))]).unwrap();
        let p = inst
            .validate_profile(vec![vec![int(1), int(2)], vec![int(-1), int(2)]])
            .unwrap();
        let out = rand_mixed(&inst, &p, &Limits::default()).unwrap();
        assert_eq!(
            parse_mechanism_output(&write_mechanism_output(&out)).unwrap(),
            out
        );
    }

    #[test]
    fn profile_rows_must_be_in_order() {
        assert!(parse_profile("agent 1: 0/1\n").is_err());
        let p = parse_profile("agent 0: 1/2\nagent 1: -1\n").unwrap();
        assert_eq!(p.value(1, 0), &int(-1));
    }
}
