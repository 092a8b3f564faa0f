//! End-to-end tests of the command-line interface: exit codes, golden
//! bytes, input format parity, and seeded determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wallcross"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args).env_remove("WALLCROSS_SEED");
    cmd.output().expect("spawn wallcross")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn analyze_matches_the_committed_golden_bytes() {
    let out = run(&[
        "analyze",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--seed",
        "25",
        "--corpus",
        "30",
    ]);
    assert!(out.status.success());
    let golden = include_str!("golden/k3_25_analyze.json");
    assert_eq!(stdout(&out), golden);
}

#[test]
fn analyze_is_byte_stable_across_runs() {
    let input = fixture("square.json");
    let args = [
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--seed",
        "7",
        "--corpus",
        "10",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_and_toml_inputs_agree() {
    let json = run(&["fan", "--input", fixture("k3_25.json").to_str().unwrap()]);
    let toml = run(&["fan", "--input", fixture("k3_25.toml").to_str().unwrap()]);
    assert!(json.status.success() && toml.status.success());
    assert_eq!(json.stdout, toml.stdout);
}

#[test]
fn validation_failures_exit_with_code_one() {
    let out = run(&["fan", "--input", fixture("not_cy.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not Calabi-Yau"), "stderr: {err}");
    assert!(out.stdout.is_empty(), "no partial output on error");

    let out = run(&["fan", "--input", fixture("rank_deficient.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "wall",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--index",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_generic_characters_exit_with_code_two() {
    // on a wall
    let out = run(&[
        "strata",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--character",
        "0,-3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // slope tie inside a chamber
    let out = run(&[
        "strata",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--character",
        "-1,-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strata_by_character_reports_the_fixture_rows() {
    let out = run(&[
        "strata",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--character",
        "-1,-5",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda=(0,-1)"), "{text}");
    assert!(text.contains("V_{yq} \\ V_{x}"), "{text}");
}

#[test]
fn strata_by_chamber_picks_a_deterministic_generic_character() {
    let out = run(&[
        "strata",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--chamber",
        "2",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let strat = &report["strata"][0];
    assert_eq!(strat["chamber"], 2);
    assert_eq!(strat["character"], serde_json::json!([-2, -1]));
    let lambdas: Vec<_> = strat["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["lambda"].clone())
        .collect();
    assert_eq!(
        lambdas,
        vec![serde_json::json!([-1, 0]), serde_json::json!([0, -1])]
    );
}

#[test]
fn horn_subcommand_prints_the_normalized_pullback() {
    let out = run(&[
        "horn",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--lambda",
        "1,0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("-4*(u+3v)/u"));
}

#[test]
fn expected_subcommand_reports_agreement() {
    // wall index 3 is the ray (0,-1) for this fixture
    let out = run(&[
        "expected",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--wall",
        "3",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let e = &report["expected"][0];
    assert_eq!(e["discriminant_length"], 3);
    assert_eq!(e["collection_length"], 3);
    assert_eq!(e["agree"], true);
}

#[test]
fn kmut_suites_run_seeded_and_honor_the_environment() {
    let explicit = run(&["kmut", "--verify", "braid", "--corpus", "40", "--seed", "11"]);
    assert!(explicit.status.success());
    let mut cmd = bin();
    cmd.args(["kmut", "--verify", "braid", "--corpus", "40"]).env("WALLCROSS_SEED", "11");
    let via_env = cmd.output().unwrap();
    assert!(via_env.status.success());
    assert_eq!(explicit.stdout, via_env.stdout);

    for check in ["311", "412"] {
        let out = run(&["kmut", "--verify", check, "--corpus", "25", "--seed", "3"]);
        assert!(out.status.success(), "verify {check} failed");
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(doc["suite"]["passed"], true);
    }
}

#[test]
fn render_formats_are_deterministic() {
    let ascii = run(&[
        "render",
        "--input",
        fixture("square.json").to_str().unwrap(),
        "--format",
        "ascii",
    ]);
    assert!(ascii.status.success());
    assert!(stdout(&ascii).contains("W1"));

    let svg1 = run(&[
        "render",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--format",
        "svg",
    ]);
    let svg2 = run(&[
        "render",
        "--input",
        fixture("k3_25.json").to_str().unwrap(),
        "--format",
        "svg",
    ]);
    assert!(svg1.status.success());
    assert_eq!(svg1.stdout, svg2.stdout);
    let text = stdout(&svg1);
    assert!(text.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""));
}

#[test]
fn reports_reparse_to_the_same_value() {
    let out = run(&[
        "wall",
        "--input",
        fixture("a1.json").to_str().unwrap(),
        "--index",
        "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed: wallcross::report::Report = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
}
