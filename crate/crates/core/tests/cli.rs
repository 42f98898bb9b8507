use std::process::{Command, Output};
use std::time::Instant;

use classfield::cli::RunReport;

fn classfield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classfield")).args(args).output().expect("binary runs")
}

fn parse(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn reports_round_trip() {
    let commands: &[&[&str]] = &[
        &["arith", "factor", "-360"],
        &["arith", "crt", "2:3", "3:5", "2:7"],
        &["arith", "unit", "376"],
        &["rayclass", "--modulus", "2^3*5*inf"],
        &["rayclass", "--field", "-7", "--modulus", "2,1,1"],
        &["artin", "frobenius", "-p", "7", "-m", "20"],
        &["artin", "pattern", "--poly", "x^3-2", "-p", "31"],
        &["artin", "map", "-x", "-3/7", "-m", "10"],
        &["artin", "kernel", "-m", "12", "--samples", "200"],
        &["padic", "log", "-p", "5", "-x", "6"],
        &["padic", "sqrt", "-p", "7", "-x", "2"],
        &["padic", "hilbert", "-a", "3", "-b", "-1/2", "--place", "3"],
        &["cohom", "herbrand", "--perm", "6", "2"],
        &["cohom", "herbrand", "-n", "2", "--relations", "[[4]]", "--action", "[[-1]]"],
        &["cohom", "herbrand", "-n", "4", "--random", "500"],
        &["forms", "represent", "-p", "23", "-d", "-56"],
        &["forms", "classes", "-d", "-56"],
        &["forms", "criterion", "-p", "23", "-d", "-56"],
        &["forms", "reduce", "10", "14", "5"],
        &["density", "split", "--disc", "-4", "-X", "100000"],
        &["density", "pattern", "--poly", "x^4+1", "-X", "100000"],
        &["density", "dirichlet", "--select", "1 mod 4", "-s", "1.2", "-X", "100000"],
        &["density", "slope", "--disc", "-56", "-X", "10000"],
    ];
    for args in commands {
        let out = classfield(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        let report = parse(&out);
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again.as_bytes(), &out.stdout[..], "{args:?}");
        assert_eq!(serde_json::from_str::<RunReport>(&again).unwrap(), report);
    }
}

#[test]
fn exit_codes_follow_checks() {
    assert_eq!(classfield(&["verify", "reciprocity", "--limit", "500"]).status.code(), Some(0));
    assert_eq!(classfield(&["nonsense"]).status.code(), Some(2));
    assert_eq!(classfield(&["density", "progression", "-n", "4", "--frobs"]).status.code(), Some(2));

    let out = classfield(&["padic", "exp", "-p", "2", "-x", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "convergence_domain");

    let out = classfield(&["density", "progression", "-n", "4", "-X", "1000000000"]);
    assert_eq!(out.status.code(), Some(1));
    let out = classfield(&["density", "progression", "-n", "4", "-X", "10000", "--cap", "1000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tampered_class_polynomial_fails() {
    let good = classfield(&["verify", "x2-14y2", "--limit", "20000"]);
    assert_eq!(good.status.code(), Some(0));
    let bad = classfield(&["verify", "x2-14y2", "--limit", "20000", "--poly", "x^4+2x^2-5"]);
    assert_eq!(bad.status.code(), Some(1));
    let report = parse(&bad);
    assert!(!report.checks[0].passed);
    assert!(report.checks[0].detail.contains("disagreements"));
}

#[test]
fn output_is_byte_identical() {
    let args = ["verify", "padic", "--limit", "50", "--no-timing"];
    assert_eq!(classfield(&args).stdout, classfield(&args).stdout);
    let args = ["artin", "kernel", "-m", "15", "--seed", "5", "--no-timing"];
    let a = classfield(&args);
    assert_eq!(a.stdout, classfield(&args).stdout);
    let other = classfield(&["artin", "kernel", "-m", "15", "--seed", "6", "--no-timing"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn worker_count_does_not_change_reports() {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_classfield"))
            .args(["density", "progression", "-n", "12", "-X", "3000000", "--no-timing"])
            .env("WORKER_COUNT", workers)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one, run("8"));
}

#[test]
fn tsv_output() {
    let out = classfield(&["density", "pattern", "--poly", "x^3-2", "-X", "10000", "--format", "tsv", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\n# classes\nlabel\tcount\tfrequency\texpected\n"));
    assert!(text.lines().any(|l| l.starts_with("{1,1,1}\t")));
}

#[test]
fn quick_profile_is_fast() {
    let start = Instant::now();
    let out = classfield(&["verify", "all", "--profile", "quick"]);
    let elapsed = start.elapsed();
    let report = parse(&out);
    assert_eq!(report.checks.len(), 10);
    assert!(report.passed(), "{:#?}", report.checks);
    assert_eq!(out.status.code(), Some(0));
    assert!(elapsed.as_secs() < 10, "quick profile took {elapsed:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("running chebotarev"));
}
