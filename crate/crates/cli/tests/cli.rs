use std::process::{Command, Output};

fn ffgscon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffgscon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixtures_are_listed() {
    let o = ffgscon(&["fixtures", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("blockade-3q-no   no"));
}

#[test]
fn verify_csv_is_reproducible() {
    let args = ["verify", "superposed-2q", "--adversary", "smeared_gate:0.25", "--trials", "3000", "--seed", "4", "--format", "csv"];
    let a = ffgscon(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    let b = ffgscon(&threaded);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# ffgscon-csv v1\n"));
    assert_eq!(text.lines().filter(|l| l.contains(",exact,") || l.contains(",sampled,")).count(), 18);
}

#[test]
fn verify_writes_json_to_a_file() {
    let path = std::env::temp_dir().join(format!("ffgscon-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = ffgscon(&["verify", "trivial-1q", "--mode", "exact", "--out", p]);
    assert!(o.status.success());
    let report = ffgscon::harness::parse_report(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.exact.len(), 9);
    assert!(report.sampled.is_empty());
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn lemmas_and_ledger_succeed() {
    let o = ffgscon(&["lemmas", "blockade-3q", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stderr).matches("[PASS]").count(), 9);
    let l = ffgscon(&["ledger", "blockade-4q"]);
    assert!(l.status.success());
    assert!(stdout(&l).contains("r8"));
}

#[test]
fn exit_codes() {
    assert_eq!(ffgscon(&["validate", "trivial-1q"]).status.code(), Some(0));
    assert_eq!(ffgscon(&["verify", "/no/such/instance.json"]).status.code(), Some(2));
    assert_eq!(ffgscon(&["verify", "trivial-1q", "--adversary", "wrong_start:7"]).status.code(), Some(1));
    assert_eq!(ffgscon(&["ledger", "no-such-fixture"]).status.code(), Some(1));
}
