//! End-to-end tests of the `antipower` binary.

use std::process::{Command, Output};

fn antipower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antipower"))
        .args(args)
        .env_remove("ANTIPOWER_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn gen_fibonacci_and_thue_morse() {
    let out = antipower(&[
        "gen",
        "--morphism",
        "0->01;1->0",
        "--seed",
        "0",
        "--len",
        "13",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0100101001001\n");
    let out = antipower(&["gen", "--morphism", "0->01;1->10", "-L", "16"]);
    assert_eq!(stdout(&out), "0110100110010110\n");
    let out = antipower(&["gen", "--morphism", "a->ab;b->a", "--seed", "a", "-L", "8"]);
    assert_eq!(stdout(&out), "abaababa\n");
    let out = antipower(&["gen", "-L", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "\n");
}

#[test]
fn gen_reads_morphism_files_and_writes_caches() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("tm.txt");
    std::fs::write(&rules, "# thue-morse\n0 -> 01\n1 -> 10\n").unwrap();
    let cache = dir.path().join("tm.mwpf");
    let out = antipower(&[
        "gen",
        "--morphism",
        &format!("@{}", rules.display()),
        "-L",
        "6",
        "--format",
        "binary",
        "--out",
        cache.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bytes = std::fs::read(&cache).unwrap();
    assert_eq!(&bytes[..6], b"MWPF\x01\x02");
    assert_eq!(u64::from_le_bytes(bytes[6..14].try_into().unwrap()), 6);
    assert_eq!(&bytes[14..], &[0, 1, 1, 0, 1, 0]);
}

#[test]
fn classify_reports_verdicts() {
    let out = antipower(&["classify", "--morphism", "0->01;1->10"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["periodicity"]["kind"], "aperiodic");
    assert_eq!(v["uniformly_recurrent"], "yes");

    let v = json(&antipower(&[
        "classify",
        "--morphism",
        "0->01230;1->12301;2->23012;3->30123",
    ]));
    assert_eq!(v["periodicity"]["kind"], "periodic");
    assert_eq!(v["periodicity"]["unit"], "0123");

    let v = json(&antipower(&["classify", "--morphism", "0->01;1->11"]));
    assert_eq!(v["uniformly_recurrent"], "no");

    let v = json(&antipower(&["classify", "--morphism", "0->01;1->01"]));
    assert_eq!(v["periodicity"]["kind"], "unknown");
}

#[test]
fn exit_codes() {
    assert_eq!(antipower(&["verify", "thm6"]).status.code(), Some(0));
    assert_eq!(antipower(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(
        antipower(&["gen", "--morphism", "0->0x", "-L", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        antipower(&["gen", "--morphism", "0->1;1->0", "-L", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        antipower(&["gen", "-L", "100", "--cap", "10"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(antipower(&["gen", "--indices", "x"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_antipower"))
        .args(["gen", "-L", "100"])
        .env("ANTIPOWER_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    // a periodic word fails the hypotheses of the constructive suite
    let out = antipower(&[
        "verify",
        "thm5",
        "--morphism",
        "0->01230;1->12301;2->23012;3->30123",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suites_pass_with_defaults() {
    for suite in [
        "fact14",
        "lemma8",
        "thm5",
        "prop16",
        "prop17",
        "thm6",
        "conj18",
        "complexity",
    ] {
        let out = antipower(&["verify", suite]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = json(&out);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["suite"], suite);
        assert_eq!(v["pass"], true, "{suite}");
    }
}

#[test]
fn complexity_failure_exits_one() {
    // thue-morse is not sturmian
    let out = antipower(&[
        "verify",
        "complexity",
        "--morphism",
        "0->01;1->10",
        "--sturmian",
        "true",
        "--n",
        "1..=5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn verify_csv_and_parameters() {
    let out = antipower(&[
        "verify",
        "prop17",
        "--n",
        "3,4",
        "--indices",
        "0..10",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 2 * 10, "{text}");
    let out = antipower(&["verify", "thm6", "--kmax", "20"]);
    assert_eq!(json(&out)["checked"], 20);
}

#[test]
fn gamma_table() {
    let out = antipower(&["gamma", "--indices", "0..3", "--k", "2..=4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("i,k,gamma,ratio,lower,upper\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    let out = antipower(&[
        "gamma",
        "--morphism",
        "0->01;1->10",
        "--indices",
        "0..2",
        "--k",
        "2..4",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 2 * 2);
}

#[test]
fn bench_kernels_agree() {
    let out = antipower(&[
        "bench",
        "--k",
        "2..=6",
        "--indices",
        "0..2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checked"], 2 * 5 * 2);
}

#[test]
fn reports_are_deterministic_and_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = antipower(&["verify", "lemma8", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "temporary files left behind: {names:?}");
}

#[test]
fn informational_report_never_fails_the_run() {
    let out = antipower(&["verify", "conj18", "--n", "6,9,12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hard"], false);
    for run in v["summary"]["runs"].as_array().unwrap() {
        assert!(matches!(run["verdict"].as_str(), Some("PASS" | "FAIL")));
    }
}
