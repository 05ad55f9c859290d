use std::process::Command;

use ivp::cli::{run, Outcome, COVERAGE};
use serde_json::Value;

fn fixtures() -> String {
    format!("{}/tests/fixtures", env!("CARGO_MANIFEST_DIR"))
}

fn ivp(args: &[&str]) -> Outcome {
    let fx = fixtures();
    let argv: Vec<String> = std::iter::once("ivp".to_string())
        .chain(args.iter().map(|a| a.replace("{fixtures}", &fx)))
        .collect();
    run(argv)
}

fn report(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

fn without_timing(out: &Outcome) -> Value {
    let mut v = report(out);
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn every_operation_is_reachable() {
    let mut seen = std::collections::HashSet::new();
    for row in COVERAGE {
        assert!(seen.insert(row.operation), "{} listed twice", row.operation);
        if row.argv[0] == "verify-all" {
            continue; // exercised by its own test
        }
        let out = ivp(row.argv);
        assert_eq!(
            out.code, 0,
            "{} via {:?}: {}",
            row.operation, row.argv, out.stderr
        );
        let v = report(&out);
        assert_eq!(v["schema_version"], "1");
    }
    // every public operation of every module has a row
    for op in [
        "picdvr::realize_class",
        "globalpic::globalize",
        "spectra::picpol_decomposition",
        "localize::criterion_holds",
        "intpoly::BinPoly::value_module",
    ] {
        assert!(seen.contains(op), "{op} has no subcommand");
    }
}

#[test]
fn report_shape_and_field_order() {
    let out = ivp(&[
        "localize",
        "--poly",
        "[0,-1/5,0,0,0,1/5]",
        "--overring",
        "Z_(5)",
    ]);
    assert_eq!(out.code, 0);
    let v = report(&out);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        [
            "schema_version",
            "command",
            "inputs",
            "results",
            "timing_ms"
        ]
    );
    assert_eq!(v["results"]["equal"], true);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["localize-oracle", "--seed", "9", "--count", "30"][..],
        &["global", "exactness", "--seed", "4", "--count", "4"],
        &["spectra", "example-weakjaff"],
        &["spectra", "analyze", "{fixtures}/leaves_finite.json"],
    ] {
        let a = ivp(args);
        let b = ivp(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert_eq!(without_timing(&a), without_timing(&b));
        // byte-identical apart from the timing line
        let strip = |s: &str| {
            s.lines()
                .filter(|l| !l.contains("\"timing_ms\""))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a.stdout), strip(&b.stdout));
    }
}

#[test]
fn malformed_input_exits_2_naming_the_token() {
    let cases: [(&[&str], &str); 6] = [
        (
            &["localize", "--poly", "[0,1/x]", "--overring", "Z"],
            "`1/x`",
        ),
        (
            &["localize", "--poly", "[0,1]", "--overring", "Z_(4)"],
            "`4`",
        ),
        (
            &["pic", "class-of", "--p", "2", "--ideal", "0; [0,1]"],
            "`0`",
        ),
        (
            &["global", "globalize", "--vector", "2:[0,1,1]"],
            "[0, 1, 1]",
        ),
        (
            &["spectra", "analyze", "{fixtures}/not_closed.json"],
            "not closed",
        ),
        (
            &[
                "spectra",
                "set",
                "--depth",
                "1",
                "--expr",
                "{\"cones\": []}",
            ],
            "cones",
        ),
    ];
    for (args, token) in cases {
        let out = ivp(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(out.stderr.contains(token), "{args:?}: {}", out.stderr);
    }
    assert_eq!(ivp(&["pic"]).code, 2);
    assert_eq!(ivp(&["localize-oracle"]).code, 2, "seed is mandatory");
    assert_eq!(ivp(&["no-such-command"]).code, 2);
}

#[test]
fn failed_checks_exit_1() {
    // giving up at the precision cap is a computation failure, not bad input
    let out = ivp(&[
        "pic",
        "class-of",
        "--p",
        "2",
        "--ideal",
        "1099511627776; [0,1]",
    ]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    assert!(out.stderr.contains("precision cap"));
}

#[test]
fn weak_jaffard_report() {
    let out = ivp(&["spectra", "example-weakjaff"]);
    assert_eq!(out.code, 0);
    let v = report(&out);
    let r = &v["results"];
    assert_eq!(
        r["derived_sequence"]["classification"]["kind"],
        "WeakJaffard"
    );
    assert_eq!(
        r["derived_sequence"]["classification"]["pointed_at"],
        "W_inf"
    );
    assert_eq!(r["derived_sequence"]["rank"], 2);
    assert_eq!(r["decomposition"]["outcome"], "refused");
    assert!(r["decomposition"]["message"]
        .as_str()
        .unwrap()
        .starts_with("hypothesis violated at root"));
}

#[test]
fn table_format_flattens() {
    let out = ivp(&[
        "pic",
        "ball",
        "--p",
        "2",
        "--residue",
        "1",
        "--level",
        "1",
        "--format",
        "table",
    ]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .lines()
        .any(|l| l.starts_with("results.class") && l.ends_with("p=2 n=1 [0,1]")));
}

#[test]
fn verify_all_passes() {
    let out = ivp(&["verify-all", "--seed", "7"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v = report(&out);
    assert_eq!(v["results"]["passed"], true);
    assert_eq!(v["results"]["suites"].as_array().unwrap().len(), 7);
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_ivp"))
        .args(["pic", "class-of", "--p", "2", "--ideal", "2; [-1, 1]"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["class"], "p=2 n=1 [0,1]");
    let bad = Command::new(env!("CARGO_BIN_EXE_ivp"))
        .args(["poly", "--poly", "[0"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
