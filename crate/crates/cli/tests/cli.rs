use std::path::PathBuf;
use std::process::{Command, Output};

fn exder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exder")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("exder-cli-{}-{}", std::process::id(), name));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn axioms_pass_on_the_bundled_corpus() {
    let o = exder(&["check-axioms"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.split('\t').nth(2) == Some("pass")));
}

#[test]
fn pair_over_point_is_a_set_equivalence() {
    let o = exder(&["check-equiv", "--theory", "set", "PAIR_ONE", "--over", "ONE"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), stdout(&o).lines().next().unwrap());
    assert!(stdout(&o).starts_with("equiv-set\tPAIR_ONE/ONE\tpass\t"));
}

#[test]
fn two_points_over_one_fail_in_set_with_a_reproducer() {
    let o = exder(&["check-equiv", "--theory", "set", "DISC2_ONE", "--over", "ONE"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("equiv-set\tDISC2_ONE/ONE\tfail"), "{}", out);
    assert!(out.contains("(2 → 1)"), "{}", out);
    assert!(out.contains("repro: exder --theory set --over ONE check-equiv DISC2_ONE"), "{}", out);
}

#[test]
fn two_points_over_one_pass_in_pos_and_prop() {
    for t in ["pos", "prop", "contr"] {
        let o = exder(&["check-equiv", "--theory", t, "DISC2_ONE", "--over", "ONE"]);
        assert_eq!(o.status.code(), Some(0), "{}", t);
    }
}

#[test]
fn empty_corpus_is_an_input_error() {
    let p = scratch("empty", "");
    let o = exder(&["--corpus", p.to_str().unwrap(), "check-axioms"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty"));
}

#[test]
fn corrupted_composite_is_an_input_error() {
    let dump = stdout(&exder(&["dump"]));
    assert!(dump.contains("compose v1 h0 d"));
    let p = scratch("bad", &dump.replace("compose v1 h0 d", "compose v1 h0 h0"));
    let o = exder(&["--corpus", p.to_str().unwrap(), "check-axioms"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("v1 ∘ h0"));
}

#[test]
fn dumped_corpus_reloads() {
    let dump = stdout(&exder(&["dump"]));
    let p = scratch("dump", &dump);
    let o = exder(&["--corpus", p.to_str().unwrap(), "dump"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), dump);
}

#[test]
fn flags_are_checked() {
    assert_eq!(exder(&["check-universality", "--theory", "sex"]).status.code(), Some(2));
    assert_eq!(exder(&["limit", "--theory", "set", "MIX_DISC2"]).status.code(), Some(2));
    assert_eq!(exder(&["limit", "NOPE"]).status.code(), Some(2));
    assert_eq!(exder(&["check-equiv", "--theory", "nope"]).status.code(), Some(2));
}

#[test]
fn report_goes_to_the_named_file() {
    let p = std::env::temp_dir().join(format!("exder-cli-{}-report.tsv", std::process::id()));
    let o = exder(&["--report", p.to_str().unwrap(), "check-asymmetry", "--only", "MIX_DISC2"]);
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(stdout(&o).is_empty());
    assert!(text.lines().all(|l| l.split('\t').nth(1) == Some("MIX_DISC2")));
    assert!(!text.is_empty());
}

#[test]
fn single_commands_report() {
    let o = exder(&["kan", "--left", "DISC2_ONE", "MIX_DISC2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kan-left-fast\tDISC2_ONE:MIX_DISC2\tpass"));
    let o = exder(&["quotient", "MIX_DISC2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}
