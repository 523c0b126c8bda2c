//! End-to-end checks of the command-line surface: exit codes, JSON shapes,
//! file inputs, and the STAR_PRIME override.

use std::fs;
use std::process::{Command, Output};

fn starconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starconf"))
        .args(args)
        .output()
        .expect("spawning the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn classify_prints_verdict_and_case() {
    let out = starconf(&["classify", "--n", "2", "--l", "5", "--r", "4", "--d", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("GenericYes"));
    assert!(text.contains("case (v)"));

    // Infeasible is a verdict, not an error.
    let out = starconf(&["classify", "--n", "2", "--l", "5", "--r", "4", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Infeasible"));

    // A negative n-coordinate is a usage error.
    let out = starconf(&["classify", "--n", "5", "--l", "9", "--r", "5", "--d", "9"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("GenericNo"));
}

#[test]
fn classify_json_is_well_formed() {
    let out = starconf(&["classify", "--n", "4", "--l", "6", "--r", "3", "--d", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tuple"]["n"], 4);
    assert_eq!(v["verdict"], "GenericYes");
    assert_eq!(v["case"], "case (viii)");
    assert_eq!(v["bound"], 9);
}

#[test]
fn malformed_flags_exit_with_two() {
    let out = starconf(&["classify", "--n", "2", "--l", "4"]);
    assert_eq!(out.status.code(), Some(2)); // missing required flags
    let out = starconf(&["classify", "--n", "two", "--l", "4", "--r", "2", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = starconf(&["classify", "--n", "0", "--l", "4", "--r", "2", "--d", "3"]);
    assert_eq!(out.status.code(), Some(2)); // zero coordinates rejected
}

#[test]
fn certify_exit_codes_and_schema() {
    let out = starconf(&["certify", "--n", "2", "--d", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tuple"]["l"], 4);
    assert_eq!(v["verdict"], "Certified");
    assert_eq!(v["achieved_rank"], 10);
    assert_eq!(v["target_rank"], 10);
    assert!(v["witness"]["L"].as_array().unwrap().len() == 4);
    assert!(v["witness"]["M"].as_object().unwrap().contains_key("1,2,3"));
    // Key order is part of the interface.
    let text = stdout(&out);
    let order = ["\"tuple\"", "\"field\"", "\"seed\"", "\"strategy\"", "\"achieved_rank\"",
        "\"target_rank\"", "\"verdict\"", "\"retries_used\"", "\"witness\""];
    let mut last = 0;
    for key in order {
        let pos = text.find(key).unwrap_or_else(|| panic!("missing {key}"));
        assert!(pos > last, "{key} out of order");
        last = pos;
    }

    // d < r = 3 is an invalid tuple.
    let out = starconf(&["certify", "--n", "2", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_writes_the_certificate_file() {
    let dir = std::env::temp_dir().join("starconf-cli-test");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert_2_4.json");
    let path_str = path.to_str().unwrap();
    let out = starconf(&["certify", "--n", "2", "--d", "4", "--strategy", "evaluation", "--out", path_str]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["strategy"], "EvaluationMatrix");
    assert_eq!(v["target_rank"], 6);
    fs::remove_file(&path).ok();
}

#[test]
fn certify_experimental_probe() {
    // l - r + 1 = 3 > n = 2: certification must succeed for any d >= r.
    let out = starconf(&["certify", "--n", "2", "--d", "2", "--l", "4", "--r", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["tuple"]["r"], 2);
    assert_eq!(v["verdict"], "Certified");

    // The open region comes back Inconclusive, exit 1.
    let out = starconf(&["certify", "--n", "3", "--d", "3", "--l", "3", "--r", "2", "--retries", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn star_prime_env_overrides_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_starconf"))
        .args(["certify", "--n", "2", "--d", "3", "--json"])
        .env("STAR_PRIME", "2147483629")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["field"]["prime"], 2147483629u64);

    // Rejected moduli surface as usage errors.
    let out = Command::new(env!("CARGO_BIN_EXE_starconf"))
        .args(["certify", "--n", "2", "--d", "3"])
        .env("STAR_PRIME", "32004")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hilbert_matches_and_exits_zero() {
    let out = starconf(&["hilbert", "--n", "2", "--l", "4", "--tmax", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let hf: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["hf"].as_u64().unwrap())
        .collect();
    assert_eq!(hf, vec![1, 3, 6, 6, 6]);
    assert!(rows.as_array().unwrap().iter().all(|r| r["matches"] == true));
}

#[test]
fn decompose_from_files() {
    let dir = std::env::temp_dir().join("starconf-cli-decompose");
    fs::create_dir_all(&dir).unwrap();
    let forms_path = dir.join("forms.txt");
    let target_path = dir.join("target.txt");
    // Four general lines; target = (x0)(x1)(x2) + (x1)(x2)(x0+x1+x2)
    //                            = x0*x1*x2 + x0*x1*x2 + x1^2*x2 + x1*x2^2.
    fs::write(&forms_path, "x0\nx1\nx2\nx0 + x1 + x2\n").unwrap();
    fs::write(&target_path, "2*x0*x1*x2 + x1^2*x2 + x1*x2^2\n").unwrap();
    let out = starconf(&[
        "decompose",
        "--n", "2",
        "--r", "3",
        "--forms", forms_path.to_str().unwrap(),
        "--target", target_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["multipliers"].as_object().unwrap().len(), 4);

    // A target outside the ideal exits 1.
    fs::write(&target_path, "x0^3\n").unwrap();
    let out = starconf(&[
        "decompose",
        "--n", "2",
        "--r", "3",
        "--forms", forms_path.to_str().unwrap(),
        "--target", target_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not decomposable"));

    // Garbage in the forms file exits 2.
    fs::write(&forms_path, "x0 + $nope\n").unwrap();
    let out = starconf(&[
        "decompose",
        "--n", "2",
        "--r", "3",
        "--forms", forms_path.to_str().unwrap(),
        "--target", target_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn decompose_random_round_trip() {
    let out = starconf(&[
        "decompose", "--n", "2", "--r", "3", "--random", "--d", "5", "--seed", "7", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["r"], 3);
    // Deterministic per seed.
    let again = starconf(&[
        "decompose", "--n", "2", "--r", "3", "--random", "--d", "5", "--seed", "7", "--json",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn table_csv_has_stable_columns() {
    let out = starconf(&["table", "--nmax", "2", "--dmax", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,l,r,d,verdict,case,bound,certified");
    // Grid size: sum over n of sum over l of l, times dmax.
    let expected_rows = (1..=2usize)
        .map(|n| (1..=n + 6).sum::<usize>())
        .sum::<usize>()
        * 3;
    assert_eq!(text.lines().count() - 1, expected_rows);
    assert!(text.contains("2,5,4,3,Infeasible,infeasible,,"));
}

#[test]
fn table_certificates_only_attach_to_certifiable_positive_rows() {
    let out = starconf(&["table", "--nmax", "3", "--dmax", "4", "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mut attached = 0usize;
    for row in rows.as_array().unwrap() {
        match row.get("certificate") {
            None => {}
            Some(cert) => {
                attached += 1;
                assert_eq!(row["verdict"], "GenericYes", "certificate on {row}");
                assert_eq!(row["tuple"]["l"], row["tuple"]["n"].as_u64().unwrap() + 2);
                assert_eq!(row["tuple"]["r"], 3);
                assert_eq!(cert["verdict"], "Certified");
            }
        }
    }
    // (2, 4, 3, d) for d in 3..=4 and (3, 5, 3, d) for d in 3..=4.
    assert_eq!(attached, 4);
}

#[test]
fn selftest_passes() {
    let out = starconf(&["selftest", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("certification"));
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}
