//! Command-line behaviour: golden outputs, exit codes, diagnostics.
//!
//! Golden files are rewritten with `DBR_BLESS=1 cargo test -p derived-brackets-cli --test cli`.

use std::path::Path;
use std::process::Command;

use clap::Parser;
use serde_json::Value;

use dbr_cli::bundle::{fixture_bundle, parse};
use dbr_cli::{run, Cli, Rendered};
use derived_brackets::fixtures;

fn dbr(args: &[&str]) -> Rendered {
    let cli = Cli::try_parse_from(std::iter::once("dbr").chain(args.iter().copied())).expect("valid command line");
    run(&cli)
}

fn json(r: &Rendered) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn failing(v: &Value) -> Vec<(String, u64)> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| (c["identity"].as_str().unwrap().to_string(), c["arity"].as_u64().unwrap()))
        .collect()
}

fn bless() -> bool {
    std::env::var_os("DBR_BLESS").is_some()
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = dbr(args);
    assert_eq!(out.code, code, "{}", out.stdout);
    let path = Path::new("fixtures/golden").join(name);
    if bless() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out.stdout, want, "{name} differs from its golden file");
}

#[test]
fn shipped_bundles_match_the_library_fixtures() {
    for f in fixtures::all().unwrap() {
        let path = format!("fixtures/{}.json", f.name);
        let text = serde_json::to_string_pretty(&serde_json::to_value(fixture_bundle(&f)).unwrap()).unwrap() + "\n";
        if bless() {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, text, "{path}");
        let b = parse(&on_disk, &path).unwrap();
        assert_eq!(b.gla(), Some(&f.gla), "{path}");
        assert_eq!(b.derivations, f.derivations, "{path}");
    }
}

#[test]
fn golden_outputs() {
    golden("validate_sl2_borel.json", &["validate", "fixtures/sl2_borel.json"], 0);
    golden("validate_broken_jacobi.json", &["validate", "fixtures/broken_jacobi.json"], 1);
    golden("brackets_generic6_x3x5.json", &["brackets", "fixtures/generic6.json", "--source", "x3+x5", "--arity", "2"], 0);
    golden("brackets_generic6_D0.json", &["brackets", "fixtures/generic6.json", "--source", "D0", "--arity", "2"], 0);
    golden("brackets_sl2_borel_voronov.json", &["brackets", "fixtures/sl2_borel.json", "--source", "h", "--arity", "4"], 0);
    golden(
        "brackets_sl2_nonclosed_transfer.json",
        &["brackets", "fixtures/sl2_nonclosed.json", "--source", "m", "--arity", "2", "--via-transfer"],
        0,
    );
    golden("brackets_matrices_f.json", &["brackets", "fixtures/matrices.json", "--source", "f", "--arity", "3"], 0);
    golden("cocone_sl2_borel.json", &["cocone", "fixtures/sl2_borel.json", "--arity", "3"], 0);
    golden("fiber_model_getzler6.json", &["fiber-model", "fixtures/getzler6.json", "--arity", "2"], 0);
}

#[test]
fn every_command_passes_on_every_shipped_fixture() {
    for name in fixtures::NAMES {
        let path = format!("fixtures/{name}.json");
        for args in [
            vec!["validate", path.as_str()],
            vec!["check", path.as_str(), "--suite", "all", "--arity", "3"],
            vec!["transfer-check", path.as_str(), "--arity", "3"],
            vec!["cocone", path.as_str(), "--arity", "3"],
        ] {
            let out = dbr(&args);
            assert_eq!(out.code, 0, "{args:?}: {:?}", failing(&json(&out)));
        }
    }
}

#[test]
fn broken_jacobi_names_the_witness_triple() {
    let v = json(&dbr(&["validate", "fixtures/broken_jacobi.json"]));
    let c = v["checks"].as_array().unwrap().iter().find(|c| c["identity"] == "jacobi").unwrap();
    assert_eq!(c["pass"], false);
    assert_eq!(c["word"], serde_json::json!(["x", "y", "z"]));
    // Every other command refuses to go further.
    let out = dbr(&["check", "fixtures/broken_jacobi.json", "--suite", "theorems"]);
    assert_eq!(out.code, 1);
    assert!(json(&out)["notes"][0].as_str().unwrap().contains("fails validation"));
}

#[test]
fn missing_splitting_is_a_precondition_error() {
    for args in [
        vec!["brackets", "fixtures/no_splitting.json", "--source", "x"],
        vec!["transfer-check", "fixtures/no_splitting.json"],
        vec!["cocone", "fixtures/no_splitting.json"],
        vec!["fiber-model", "fixtures/no_splitting.json"],
    ] {
        let out = dbr(&args);
        assert_eq!(out.code, 2, "{args:?}");
        let v = json(&out);
        assert_eq!(v["error"]["kind"], "precondition", "{args:?}");
        assert!(v["error"]["message"].as_str().unwrap().contains("splitting"));
    }
    assert_eq!(dbr(&["validate", "fixtures/no_splitting.json"]).code, 0);
}

#[test]
fn non_closed_complement_needs_the_transfer_route() {
    let out = dbr(&["brackets", "fixtures/sl2_nonclosed.json", "--source", "m"]);
    assert_eq!(out.code, 2);
    assert!(json(&out)["error"]["message"].as_str().unwrap().contains("--via-transfer"));

    // m = e + h/2, P projects onto span(e, f): P[m, e] - ½P[Pm, e] = e and
    // P[m, f] - ½P[Pm, f] = -f.
    let v = json(&dbr(&["brackets", "fixtures/sl2_nonclosed.json", "--source", "m", "--arity", "1", "--via-transfer"]));
    assert_eq!(v["ok"], true);
    let arity1 = &v["brackets"]["coefficients"].as_array().unwrap().iter().find(|a| a["arity"] == 1).unwrap()["entries"];
    assert_eq!(arity1, &serde_json::json!([
        {"word": ["e"], "value": [{"basis": "e", "coeff": "1"}]},
        {"word": ["f"], "value": [{"basis": "f", "coeff": "-1"}]}
    ]));
}

#[test]
fn transfer_route_agrees_with_the_definition_when_a_is_closed() {
    for source in ["x1", "x3+x5", "D0"] {
        let v = json(&dbr(&["brackets", "fixtures/generic6.json", "--source", source, "--arity", "3", "--via-transfer"]));
        assert_eq!(v["ok"], true, "{source}: {:?}", failing(&v));
        assert!(v["checks"].as_array().unwrap().iter().any(|c| c["identity"] == "transfer_vs_definition"));
    }
}

#[test]
fn trivial_complement_gives_zero_brackets() {
    let out = dbr(&["transfer-check", "fixtures/sl2_trivial_a.json"]);
    assert_eq!(out.code, 0, "{:?}", failing(&json(&out)));
    for source in ["e", "ad_h"] {
        let v = json(&dbr(&["brackets", "fixtures/sl2_trivial_a.json", "--source", source]));
        assert_eq!(v["brackets"]["coefficients"], serde_json::json!([]), "{source}");
    }
}

#[test]
fn flipped_bernoulli_number_shows_up_from_arity_three() {
    let v = json(&dbr(&["transfer-check", "fixtures/solvable3.json", "--arity", "3", "--flip-bernoulli", "2"]));
    assert_eq!(v["ok"], false);
    let bad = failing(&v);
    assert!(bad.iter().all(|(_, a)| *a == 0 || *a >= 3), "{bad:?}");
    assert!(bad.iter().any(|(id, a)| id == "section5_r_vs_closed_form" && *a == 3), "{bad:?}");
    let clean = dbr(&["transfer-check", "fixtures/solvable3.json", "--arity", "3"]);
    assert_eq!(clean.code, 0);
}

#[test]
fn square_nonzero_derivation_is_an_expected_failure() {
    let v = json(&dbr(&["check", "fixtures/linfty_expected_fail.json", "--suite", "linfty", "--arity", "3"]));
    assert_eq!(v["ok"], true, "{:?}", failing(&v));
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["identity"].as_str().unwrap()).collect();
    assert!(ids.contains(&"expected_failure/linfty[D]"));
    assert!(ids.contains(&"phi_square[D]"));
}

#[test]
fn cocone_with_a_second_algebra() {
    let v = json(&dbr(&["cocone", "fixtures/sl2_borel_pair.json", "--with-second-algebra", "--arity", "3"]));
    assert_eq!(v["ok"], true, "{:?}", failing(&v));
    let names: Vec<&str> = v["space"].as_array().unwrap().iter().map(|b| b["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"h") && names.len() > 3, "{names:?}");
    let out = dbr(&["cocone", "fixtures/sl2_borel.json", "--with-second-algebra"]);
    assert_eq!(out.code, 2);
}

#[test]
fn cocone_reports_the_fiber_model_when_there_is_a_differential() {
    let v = json(&dbr(&["cocone", "fixtures/getzler6.json", "--arity", "3"]));
    assert_eq!(v["ok"], true, "{:?}", failing(&v));
    assert!(v.get("r_d").is_some() && v.get("f_d").is_some());
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["identity"] == "twisting/r"));
}

#[test]
fn associative_bundle_gives_koszul_brackets() {
    let v = json(&dbr(&["brackets", "fixtures/matrices.json", "--source", "f", "--arity", "2"]));
    assert_eq!(v["route"], "koszul");
    assert_eq!(v["ok"], true);
    let out = dbr(&["transfer-check", "fixtures/matrices.json"]);
    assert_eq!(json(&out)["error"]["kind"], "precondition");
}

#[test]
fn arity_is_capped_with_a_warning() {
    let out = dbr(&["brackets", "fixtures/solvable3.json", "--source", "x", "--arity", "9"]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("capped at 7"), "{}", out.stderr);
    assert!(json(&out)["notes"][0].as_str().unwrap().contains("capped"));
    let zero = dbr(&["brackets", "fixtures/solvable3.json", "--source", "x", "--arity", "0"]);
    assert_eq!(json(&zero)["error"]["field"], "--arity");
}

#[test]
fn unknown_source_is_a_diagnostic() {
    let out = dbr(&["brackets", "fixtures/solvable3.json", "--source", "nope"]);
    assert_eq!(out.code, 2);
    assert_eq!(json(&out)["error"]["field"], "--source");
}

#[test]
fn reports_are_sorted_and_reproducible() {
    let args = ["check", "fixtures/generic6.json", "--suite", "theorems", "--arity", "3", "--seed", "11"];
    let a = dbr(&args);
    assert_eq!(a.stdout, dbr(&args).stdout);
    let other = dbr(&["check", "fixtures/generic6.json", "--suite", "theorems", "--arity", "3", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
    let keys: Vec<(String, u64, String)> = json(&a)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["identity"].as_str().unwrap().into(), c["arity"].as_u64().unwrap(), c["word"].to_string()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(json(&a).get("timing").is_none());
    assert!(json(&dbr(&["--timing", "validate", "fixtures/solvable3.json"]))["timing"].is_u64());
}

#[test]
fn text_format_and_output_file() {
    let out = dbr(&["--format", "text", "brackets", "fixtures/generic6.json", "--source", "x1", "--arity", "1"]);
    assert!(out.stdout.starts_with("brackets ok"), "{}", out.stdout);
    assert!(out.stdout.contains("(x3) -> -x1"), "{}", out.stdout);
    let path = std::env::temp_dir().join(format!("dbr-output-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = dbr(&["validate", "fixtures/solvable3.json", "--output", p]);
    assert_eq!(out.stdout, "");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, dbr(&["validate", "fixtures/solvable3.json"]).stdout);
}

#[test]
fn malformed_bundles_get_structured_diagnostics() {
    let mut n = 0;
    for entry in std::fs::read_dir("fixtures/malformed").unwrap() {
        let path = entry.unwrap().path();
        let out = Command::new(env!("CARGO_BIN_EXE_dbr")).arg("validate").arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{}", path.display());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let kind = v["error"]["kind"].as_str().unwrap();
        assert!(kind == "syntax" || kind == "field", "{}: {v}", path.display());
        if kind == "syntax" {
            assert!(v["error"]["line"].is_u64());
        } else {
            assert!(v["error"]["field"].is_string());
        }
        n += 1;
    }
    assert!(n >= 20);
    let out = Command::new(env!("CARGO_BIN_EXE_dbr")).args(["validate", "fixtures/does_not_exist.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"io\""));
}

#[test]
fn binary_exit_codes_follow_the_report() {
    let bin = env!("CARGO_BIN_EXE_dbr");
    let ok = Command::new(bin).args(["validate", "fixtures/sl2_borel.json"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["validate", "fixtures/broken_jacobi.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let fixture = Command::new(bin).args(["validate", "fixture:generic6"]).output().unwrap();
    assert_eq!(fixture.status.code(), Some(0));
}
