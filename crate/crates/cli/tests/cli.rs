//! The `relmodal` binary: outputs and exit codes.

use std::process::{Command, Output};

fn relmodal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relmodal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decide_reports_validity_with_exit_zero() {
    let o = relmodal(&["decide", "--system", "KT", "box p -> dia p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Valid"));
}

#[test]
fn decide_prints_the_smallest_countermodel() {
    let o = relmodal(&["decide", "--system", "K", "box p -> box box p"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("Invalid (2 worlds)\n"), "{out}");
    assert!(out.contains("worlds 2 real 0"), "{out}");
}

#[test]
fn exhausted_budget_is_unknown_with_exit_two() {
    let o = relmodal(&["decide", "--budget", "0", "--system", "KD45", "dia box p <-> dia box dia box p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("Unknown"));
}

#[test]
fn usage_and_input_errors_exit_three() {
    assert_eq!(relmodal(&["decide", "--system", "Q", "p"]).status.code(), Some(3));
    assert_eq!(relmodal(&["decide", "p &"]).status.code(), Some(3));
    assert_eq!(relmodal(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(relmodal(&["decide", "--system", "K", "X p"]).status.code(), Some(3));
    assert_eq!(relmodal(&["--help"]).status.code(), Some(0));
}

#[test]
fn translate_emits_tptp_at_a_world_constant() {
    let o = relmodal(&["translate", "--at", "o", "--emit", "tptp", "box p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("fof("), "{out}");
    assert!(out.contains("p(o)"), "{out}");
}

#[test]
fn translate_emits_dimacs() {
    let o = relmodal(&["translate", "--emit", "dimacs", "--size", "2", "box p -> p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("p cnf ")));
}

#[test]
fn macros_expand_only_on_request() {
    let o = relmodal(&["decide", "--macros", "--system", "KT", "Dum2 -> Dum"]);
    assert_eq!(stdout(&o).lines().next(), Some("Valid"));
    let o = relmodal(&["decide", "--system", "K", "M -> M"]);
    assert_eq!(stdout(&o).lines().next(), Some("Valid"), "M is an atom here");
}

#[test]
fn ltl_sat_finds_a_one_state_lasso() {
    let o = relmodal(&["ltl-sat", "X X box p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Satisfiable (1 state)"));
    let o = relmodal(&["ltl-sat", "X p & X ~p"]);
    assert!(stdout(&o).starts_with("Unsatisfiable"));
}

#[test]
fn bench_filters_and_prints_records() {
    let o = relmodal(&["bench", "--only", "k-four", "--records"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("result id=k-four system=K"), "{out}");
    assert!(out.contains("size=2 "), "{out}");
    assert!(out.contains("status=ok"), "{out}");
}

#[test]
fn random_bench_is_reproducible() {
    let args = ["bench", "--random", "4", "--seed", "7", "--filtered"];
    // Lines read `seed N: verdict in T: formula`; drop the timing.
    let strip = |s: String| {
        s.lines().map(|l| {
            let (head, rest) = l.split_once(" in ").unwrap();
            format!("{head}{}", &rest[rest.find(':').unwrap()..])
        }).collect::<Vec<_>>()
    };
    let first = strip(stdout(&relmodal(&args)));
    assert_eq!(first.len(), 4);
    assert!(first[0].starts_with("seed 7: "));
    assert_eq!(first, strip(stdout(&relmodal(&args))));
}
