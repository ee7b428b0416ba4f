use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fairmech_cli::{CheckReport, GenReport, RunReport};
use fairmech_core::format::{parse_allocation, parse_instance_document, parse_mechanism_output};
use fairmech_core::oracle::{DeviationReport, ReplayReport, ReplayVerdict};
use fairmech_core::properties::Criterion;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fairmech"))
}

fn fairmech(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SECTION5: &str = "kind: mixed2
agents: 2
items: 2
item 0: -1 1
item 1: -1 1
true_profile:
agent 0: 1 1
agent 1: -1 -1
";

const CHORES: &str = "kind: chores1
agents: 2
items: 3
item 0: -1
item 1: -2
item 2: -1
true_profile:
agent 0: -1 0 -1
agent 1: -1 -2 0
";

const BROKEN: &str = "kind: chores1
agents: 2
items: 1
item 0: -1
true_profile:
agent 0: -1
agent 1: -1
";

#[test]
fn gen_is_deterministic_and_valid() {
    let args = [
        "gen", "--kind", "chores1", "--n", "2", "--m", "4", "--seed", "7",
    ];
    let a = fairmech(&args);
    let b = fairmech(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc = parse_instance_document(&stdout(&a)).unwrap();
    assert_eq!(doc.instance.n_items(), 4);
    assert!(doc.true_profile.is_some());
    for j in 0..4 {
        assert!(doc.instance.primary_inherent(j) < &fairmech_core::rational::int(0));
    }
    let other = fairmech(&[
        "gen", "--kind", "chores1", "--n", "2", "--m", "4", "--seed", "8",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn gen_machine_round_trips() {
    let o = fairmech(&[
        "gen", "--kind", "choresk", "--k", "2", "--n", "3", "--m", "3", "--seed", "1", "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 0);
    let r: GenReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.instance.n_agents, 3);
    assert!(r
        .instance
        .items
        .iter()
        .all(|i| i.inherent_values.len() == 2));
}

#[test]
fn gen_rejects_bad_specs() {
    assert_eq!(
        code(&fairmech(&[
            "gen", "--kind", "mixed2", "--n", "3", "--m", "2", "--seed", "1"
        ])),
        2
    );
    assert_eq!(
        code(&fairmech(&[
            "gen", "--kind", "chores1", "--n", "2", "--m", "2"
        ])),
        2
    );
    assert_eq!(
        code(&fairmech(&[
            "gen", "--kind", "choresk", "--k", "5", "--max", "3", "--n", "2", "--m", "2", "--seed",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&fairmech(&[
            "gen", "--kind", "chores1", "--n", "0", "--m", "2", "--seed", "1"
        ])),
        2
    );
    assert_eq!(code(&fairmech(&["frobnicate"])), 2);
}

#[test]
fn run_reports_support_and_sample() {
    let inst = write("run_section5.txt", SECTION5);
    let o = fairmech(&["run", &inst, "--mechanism", "randmixed"]);
    assert_eq!(code(&o), 0);
    let out = parse_mechanism_output(&stdout(&o)).unwrap();
    assert_eq!(out.distribution.support().len(), 1);
    assert_eq!(out.distribution.support()[0].allocation.owners(), &[0, 0]);

    let inst = write("run_chores.txt", CHORES);
    let o = fairmech(&[
        "run",
        &inst,
        "--mechanism",
        "randchore",
        "--seed",
        "11",
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 0);
    let r: RunReport = serde_json::from_str(&stdout(&o)).unwrap();
    let sampled = r.sampled.unwrap();
    assert!(r
        .output
        .distribution
        .support()
        .iter()
        .any(|a| a.allocation == sampled));
    let again = fairmech(&[
        "run",
        &inst,
        "--mechanism",
        "randchore",
        "--seed",
        "11",
        "--format",
        "machine",
    ]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn run_exit_codes() {
    let mixed = write("kind_mixed.txt", SECTION5);
    assert_eq!(
        code(&fairmech(&["run", &mixed, "--mechanism", "randchore"])),
        2
    );
    let chores = write("kind_chores.txt", CHORES);
    assert_eq!(
        code(&fairmech(&[
            "run",
            &chores,
            "--mechanism",
            "randchore",
            "--support-cap",
            "1"
        ])),
        3
    );
    let o = bin()
        .args(["run", &chores, "--mechanism", "randchore"])
        .env("FAIRMECH_SUPPORT_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(
        code(&fairmech(&[
            "run",
            "/nonexistent",
            "--mechanism",
            "randchore"
        ])),
        2
    );
    assert_eq!(code(&fairmech(&["run", &chores, "--mechanism", "nope"])), 2);
}

#[test]
fn seqpick_is_deterministic() {
    let inst = write(
        "seqpick.txt",
        "kind: chores1\nagents: 2\nitems: 4\nitem 0: -1\nitem 1: -2\nitem 2: -3\nitem 3: -4\n",
    );
    let o = fairmech(&["run", &inst, "--mechanism", "seqpick", "--seq", "2,2"]);
    assert_eq!(code(&o), 0);
    let out = parse_mechanism_output(&stdout(&o)).unwrap();
    assert_eq!(
        out.distribution.support()[0].allocation.owners(),
        &[0, 0, 1, 1]
    );
    assert_eq!(
        code(&fairmech(&[
            "run",
            &inst,
            "--mechanism",
            "seqpick",
            "--seq",
            "3,2"
        ])),
        2
    );
    assert_eq!(
        code(&fairmech(&["run", &inst, "--mechanism", "seqpick"])),
        2
    );
}

#[test]
fn check_support_element_of_randchore() {
    let inst = write("check_chores.txt", CHORES);
    let run = fairmech(&["run", &inst, "--mechanism", "randchore"]);
    let out = parse_mechanism_output(&stdout(&run)).unwrap();
    let alloc = &out.distribution.support()[0].allocation;
    let alloc_file = write(
        "check_alloc.txt",
        &fairmech_core::format::write_allocation(alloc),
    );
    let o = fairmech(&[
        "check",
        &inst,
        "--allocation",
        &alloc_file,
        "--notions",
        "ef1,eq1,po",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let out_file = write("check_output.txt", &stdout(&run));
    let o = fairmech(&["check", &inst, "--output", &out_file, "--format", "machine"]);
    assert_eq!(code(&o), 0);
    let r: CheckReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.failed.is_empty());
    assert!(r.required.contains(&Criterion::Ewm));
}

#[test]
fn check_section5_allocation_fails_eq1() {
    let inst = write("check_s5.txt", SECTION5);
    let alloc = write("check_s5_alloc.txt", "agents: 2\nowners: 0 0\n");
    let o = fairmech(&["check", &inst, "--allocation", &alloc, "--notions", "eq1"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness eq1:"));
    assert_eq!(
        parse_allocation("agents: 2\nowners: 0 0\n")
            .unwrap()
            .owners(),
        &[0, 0]
    );
    // Not applicable on mixed items.
    assert_eq!(
        code(&fairmech(&[
            "check",
            &inst,
            "--allocation",
            &alloc,
            "--notions",
            "ewm2"
        ])),
        2
    );
}

#[test]
fn check_empty_instance() {
    let inst = write("empty.txt", "kind: chores1\nagents: 2\nitems: 0\n");
    let alloc = write("empty_alloc.txt", "agents: 2\nowners:\n");
    assert_eq!(
        code(&fairmech(&["check", &inst, "--allocation", &alloc])),
        0
    );
    assert_eq!(
        code(&fairmech(&["check", &inst, "--mechanism", "randchore"])),
        0
    );
}

#[test]
fn verify_exit_codes() {
    let inst = write("verify_chores.txt", CHORES);
    let o = fairmech(&["verify", &inst, "--mechanism", "randchore"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: TRUTHFUL-OPTIMAL"));
    assert_eq!(
        code(&fairmech(&[
            "verify",
            &inst,
            "--mechanism",
            "randchore",
            "--mode",
            "gspie"
        ])),
        0
    );

    let broken = write("verify_broken.txt", BROKEN);
    let o = fairmech(&[
        "verify",
        &broken,
        "--mechanism",
        "fewest-zeros",
        "--format",
        "machine",
    ]);
    assert_eq!(code(&o), 1);
    let r: DeviationReport = serde_json::from_str(&stdout(&o)).unwrap();
    let doc = parse_instance_document(BROKEN).unwrap();
    assert!(r.reverify(&doc.instance).unwrap());

    assert_eq!(
        code(&fairmech(&[
            "verify",
            &inst,
            "--mechanism",
            "randchore",
            "--enum-cap",
            "10"
        ])),
        3
    );
    let o = bin()
        .args(["verify", &inst, "--mechanism", "randchore"])
        .env("FAIRMECH_ENUM_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(
        code(&fairmech(&["verify", &inst, "--mechanism", "randmixed"])),
        2
    );
}

#[test]
fn replay_cases() {
    for case in ["theorem1", "theorem2", "freeman", "mixed-eq"] {
        let o = fairmech(&["replay", case, "--format", "machine"]);
        assert_eq!(code(&o), 0, "{case}");
        let r: ReplayReport = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r.verdict, ReplayVerdict::Confirmed);
    }
    let o = fairmech(&["replay", "ewm-bound", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ratio: 5/3"));
    assert_eq!(
        code(&fairmech(&["replay", "theorem2", "--notion", "ef1"])),
        1
    );
    assert_eq!(code(&fairmech(&["replay", "ewm-bound", "--n", "4"])), 3);
    assert_eq!(code(&fairmech(&["replay", "theorem9"])), 2);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("gen_out.txt");
    let o = fairmech(&[
        "gen",
        "--kind",
        "mixed2",
        "--m",
        "3",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        parse_instance_document(&text).unwrap().instance.n_items(),
        3
    );
}

#[test]
fn sequential_flag_gives_identical_bytes() {
    let inst = write("seq_chores.txt", CHORES);
    let a = fairmech(&[
        "verify",
        &inst,
        "--mechanism",
        "randchore",
        "--mode",
        "gspie",
    ]);
    let b = fairmech(&[
        "verify",
        &inst,
        "--mechanism",
        "randchore",
        "--mode",
        "gspie",
        "--sequential",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
