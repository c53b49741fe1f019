mod common;

use common::{json_of, opcomp, stderr, stdout};

#[test]
fn check_worked_complementable() {
    let out = opcomp(&["check", "--input", "fixture:worked-complementable", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["complementable"], true);
    // 1 − 2·(1/4)·3
    assert_eq!(r["schur"][0][0], "-1/2");
    assert_eq!(r["failing_inclusion"], "none");
    assert_eq!(r["affine_intersection"]["agrees_with_schur"], true);
}

#[test]
fn check_worked_not_complementable_still_exits_zero() {
    let out = opcomp(&[
        "check",
        "--input",
        "fixture:worked-not-complementable",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["complementable"], false);
    assert_eq!(r["failing_inclusion"], "Bstar_in_Dstar");
    assert!(r["schur"].is_null());
}

#[test]
fn check_reads_files_and_inline_json() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli_instance.json");
    let inst = r#"{"operator":[["2","0"],["0","0"]],"M":{"ambient_dim":2,"span":[["1","0"]]},"N":{"ambient_dim":2,"span":[["1","0"]]}}"#;
    std::fs::write(&path, inst).unwrap();
    let from_file = opcomp(&["check", "--input", path.to_str().unwrap(), "--format", "json"]);
    let inline = opcomp(&["check", "--input", inst, "--format", "json"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, inline.stdout);
    assert_eq!(json_of(&inline)["schur"][0][0], "2");
}

#[test]
fn malformed_input_names_the_field() {
    let bad_scalar = r#"{"operator":[["1","oops"]],"M":{"ambient_dim":2,"span":[]},"N":{"ambient_dim":1,"span":[]}}"#;
    let out = opcomp(&["check", "--input", bad_scalar]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("operator[0][1]"), "{}", stderr(&out));

    let missing = r#"{"operator":[["1"]],"N":{"ambient_dim":1,"span":[]}}"#;
    let out = opcomp(&["check", "--input", missing]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('M'));

    let truncated = opcomp(&["check", "--input", "{\"operator\":"]);
    assert_eq!(truncated.status.code(), Some(2));
    assert!(stdout(&truncated).is_empty());

    let out = opcomp(&[
        "seqspace",
        "decompose",
        "--input",
        r#"{"operator":{"bands":[{"offset":"x"}]}}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("operator.bands[0]"), "{}", stderr(&out));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["verify", "--trials", "0"][..],
        &["verify", "--max-dim", "13"],
        &["verify", "--max-dim", "0"],
        &["check"],
        &["check", "--input", "fixture:missing"],
        &["check", "--input", "/nonexistent/instance.json"],
        &["seqspace", "probe", "--grid", "10,5"],
        &["seqspace", "truncate", "--grid", "1"],
        &["frobnicate"],
    ] {
        let out = opcomp(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
    assert_eq!(opcomp(&["--help"]).status.code(), Some(0));
}

#[test]
fn schur_command() {
    let out = opcomp(&["schur", "--input", "fixture:worked-complementable"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "shorted operator = [[-1/2, 0], [0, 0]]\n");
    let out = opcomp(&[
        "schur",
        "--input",
        "fixture:worked-not-complementable",
        "--format",
        "json",
    ]);
    assert_eq!(json_of(&out)["failing_inclusion"], "Bstar_in_Dstar");
}

#[test]
fn douglas_row_system() {
    let out = opcomp(&["douglas", "--input", "fixture:douglas-row", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["result"]["reduced_solution"], serde_json::json!([["1"], ["1"]]));
    assert!((r["result"]["lambda_star"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(r["result"]["minimal"], true);

    let not_included = r#"{"A":[["0"],["1"]],"B":[["1"],["0"]]}"#;
    let r = json_of(&opcomp(&["douglas", "--input", not_included, "--format", "json"]));
    assert_eq!(r["result"]["range_included"], false);
}

#[test]
fn verify_embeds_seed_and_passes() {
    let out = opcomp(&["verify", "--trials", "15", "--seed", "123", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["seed"], 123);
    assert_eq!(r["all_passed"], true);
    assert!(r["checks"].as_array().unwrap().iter().all(|t| t["passed"] == 15));
    let text = stdout(&opcomp(&["verify", "--trials", "15", "--seed", "123"]));
    assert!(text.starts_with("seed 123 trials 15"));
}

#[test]
fn sign_flipped_shorted_operator_is_caught() {
    let out = opcomp(&[
        "verify",
        "--trials",
        "20",
        "--inject-mutant",
        "schur-sign",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    let shorted = &r["checks"][0];
    assert!(shorted["failed"].as_u64().unwrap() > 0);
    let failure = &r["failures"][0];
    // the dumped instance replays through `check`
    let replay = opcomp(&["check", "--input", &failure["instance"].to_string()]);
    assert_eq!(replay.status.code(), Some(0));
}

#[test]
fn decompose_bundled_example() {
    let out = opcomp(&["seqspace", "decompose", "--grid", "1000,10000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["decision"]["verdict"], "NOT_DECOMPOSABLE");
    assert_eq!(r["witness_validation"]["validated"], true);
    assert_eq!(r["witness_terms"][1]["x_first"], "1/3");
    assert_eq!(r["complement"]["complement_verdict"], "NOT_DECOMPOSABLE");
    assert_eq!(r["probe"]["projected"]["growth"], "DIVERGENT");
}

#[test]
fn decompose_complement_gives_same_verdict() {
    let input = r#"{"operator":{"bands":[
        {"offset":0,"coeff":{"modulus":2,"pieces":[{"residue":1,"poly":["0","1"]},{"residue":0,"poly":["0"]}]}},
        {"offset":1,"coeff":{"modulus":2,"pieces":[{"residue":1,"poly":["0","-1"]},{"residue":0,"poly":["0"]}]}}
    ],"domain_op":"same"},"M":{"modulus":2,"residues":[0]}}"#;
    let r = json_of(&opcomp(&[
        "seqspace",
        "decompose",
        "--input",
        input,
        "--grid",
        "100,1000",
        "--format",
        "json",
    ]));
    assert_eq!(r["decision"]["verdict"], "NOT_DECOMPOSABLE");
    assert_eq!(r["complement"]["consistent"], true);
}

#[test]
fn probe_table_values() {
    let r = json_of(&opcomp(&[
        "seqspace",
        "probe",
        "--grid",
        "2000,20000",
        "--format",
        "json",
    ]));
    let points = &r["probe"]["projected"]["points"];
    assert_eq!(points[0]["exact"], "1000");
    assert_eq!(points[1]["exact"], "10000");
    let domain = r["probe"]["domain"]["points"][1]["value"].as_f64().unwrap();
    let oracle: f64 = (1..=10_000).map(|k| 0.25 / (k as f64 * k as f64)).sum();
    assert!((domain - oracle).abs() < 1e-12);
}

#[test]
fn truncate_and_adjoint() {
    let r = json_of(&opcomp(&["seqspace", "truncate", "--format", "json"]));
    assert_eq!(r["stability"]["stable"], true);
    assert_eq!(r["stability"]["verdicts"].as_array().unwrap().len(), 4);

    let r = json_of(&opcomp(&[
        "seqspace",
        "truncate",
        "--input",
        "fixture:parity-adversarial",
        "--grid",
        "5,6,7,8",
        "--format",
        "json",
    ]));
    assert_eq!(r["stability"]["stable"], false);

    let out = opcomp(&["seqspace", "adjoint", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["interior_equal"] == true));
}

#[test]
fn json_reports_are_byte_identical() {
    let args = ["verify", "--trials", "12", "--seed", "5", "--format", "json"];
    assert_eq!(opcomp(&args).stdout, opcomp(&args).stdout);
    let args = ["douglas", "--trials", "12", "--seed", "5", "--format", "json"];
    assert_eq!(opcomp(&args).stdout, opcomp(&args).stdout);
}

#[test]
fn library_entry_point_matches_binary() {
    let args = [
        "opcomp",
        "check",
        "--input",
        "fixture:worked-complementable",
        "--format",
        "json",
    ];
    let lib = opcomp::cli::run(args);
    let bin = opcomp(&args[1..]);
    assert_eq!(lib.code, 0);
    assert_eq!(lib.stdout.as_bytes(), bin.stdout.as_slice());
}
