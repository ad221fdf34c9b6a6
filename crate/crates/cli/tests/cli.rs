use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn spkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spkl")).args(args).output().expect("spawn spkl")
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let out = spkl(args);
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), value)
}

fn ch_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn coeff_examples() {
    let (code, v) = json_of(&["coeff", "--m", "3", "--d", "3", "--c", "4", "--i", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["coefficient"], json!(1));
    assert_eq!(v["status"], "ok");
    assert_eq!(v["command"], "coeff");

    let (_, v) = json_of(&["coeff", "--m", "3", "--d", "3", "--c", "0"]);
    assert_eq!(v["results"]["kl_polynomial"], json!([1, 9]));
    let (_, v) = json_of(&["coeff", "--m", "0", "--d", "5", "--c", "0"]);
    assert_eq!(v["results"]["kl_polynomial"], json!([1]));
}

#[test]
fn poly_reports_both_polynomials() {
    let (code, v) = json_of(&["poly", "--m", "3", "--d", "3", "--c", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["kl_polynomial"], json!([1, 1]));
    assert_eq!(v["results"]["characteristic_polynomial"], json!([-6, 11, -6, 1]));
}

#[test]
fn bound_is_enforced_unless_unchecked() {
    let (code, v) = json_of(&["coeff", "--m", "3", "--d", "3", "--c", "6", "--i", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "bound-exceeded");
    let (code, v) = json_of(&["--unchecked", "coeff", "--m", "3", "--d", "3", "--c", "6", "--i", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["coefficient"], json!(-3));
}

#[test]
fn ch_documents() {
    let good = ch_file(r#"{"m": 3, "d": 3, "ch": [[4, 5, 6], [1, 2, 3]]}"#);
    let path = good.path().to_str().unwrap();
    let (code, v) = json_of(&["poly", "--ch-file", path]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"]["c"], json!(2));
    assert_eq!(v["inputs"]["ch"], json!({"m": 3, "d": 3, "ch": [[1, 2, 3], [4, 5, 6]]}));
    assert_eq!(v["results"]["kl_polynomial"], json!([1, 5]));

    let bad = ch_file(r#"{"m": 3, "d": 3, "ch": [[1, 2, 3], [1, 2, 4]]}"#);
    let (code, v) = json_of(&["coeff", "--ch-file", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "symmetric-difference");
    assert!(v["error"]["message"].as_str().unwrap().contains("{1,2,3}"));

    let forced_empty = ch_file(r#"{"m": 0, "d": 3, "ch": [[1, 2, 3]]}"#);
    let (code, _) = json_of(&["coeff", "--ch-file", forced_empty.path().to_str().unwrap()]);
    assert_eq!(code, 2);

    let malformed = ch_file("{ not json");
    let (code, v) = json_of(&["coeff", "--ch-file", malformed.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "input");

    let (code, _) = json_of(&["coeff", "--ch-file", path, "--c", "2"]);
    assert_eq!(code, 2);
    let (code, _) = json_of(&["coeff", "--ch-file", path, "--m", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn skyt_examples() {
    let (code, v) = json_of(&["skyt", "--a", "4", "--i", "1", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], json!(9));
    assert_eq!(v["results"]["positive"], json!(9));

    let (code, v) = json_of(&["skyt", "--a", "2", "--i", "1", "--b", "2", "--enumerate"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["enumerated"], json!(2));
    assert_eq!(v["results"]["fillings"].as_array().unwrap().len(), 2);

    let (code, v) = json_of(&["skyt", "--a", "1", "--i", "2", "--b", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], json!(0));

    let (code, v) = json_of(&["skyt", "--a", "8", "--i", "3", "--b", "8", "--enumerate"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "too-large");
}

#[test]
fn bounds_examples() {
    let (_, v) = json_of(&["bounds", "--m", "3", "--d", "3", "--exact"]);
    let r = &v["results"];
    assert_eq!((&r["coding_bound"], &r["johnson_bound"], &r["exact"]), (&json!(5), &json!(5), &json!(4)));
    assert_eq!(r["witness"].as_array().unwrap().len(), 4);

    let (_, v) = json_of(&["bounds", "--m", "4", "--d", "4"]);
    assert_eq!((&v["results"]["coding_bound"], &v["results"]["johnson_bound"]), (&json!(14), &json!(14)));

    let (_, v) = json_of(&["bounds", "--m", "2", "--d", "5"]);
    let r = &v["results"];
    assert_eq!((&r["coding_bound"], &r["johnson_bound"], &r["best_bound"]), (&json!(7), &json!(4), &json!(4)));

    let (code, v) = json_of(&["bounds", "--m", "8", "--d", "8", "--exact"]);
    assert_eq!(code, 4);
    assert!(v["error"]["message"].as_str().unwrap().contains("greedy_family"));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let (code, v) = json_of(&["verify", "--max-ground", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["passed"], json!(true));

    let args = ["verify", "--max-ground", "9", "--samples", "50", "--seed", "7"];
    let (code, a) = json_of(&args);
    assert_eq!(code, 0);
    let (_, b) = json_of(&args);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["results"]["sampled"], json!(2 * 50 * 10 - 50));

    let (_, seq) = json_of(&["verify", "--max-ground", "9", "--samples", "50", "--seed", "7", "--sequential"]);
    assert_eq!(a["results"], seq["results"]);
}

#[test]
fn corrupted_formula_fails_with_witness() {
    let (code, v) = json_of(&["verify", "--max-ground", "6", "--corrupt-formula"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "mismatch");
    let witness = &v["results"]["first_counterexample"];
    assert_eq!(witness["check"], "KlPolynomial");
    let doc = &witness["instance"];
    assert!(doc["m"].is_u64() && doc["d"].is_u64() && doc["ch"].is_array());
    assert_ne!(witness["formula"], witness["oracle"]);
}

#[test]
fn verify_cap() {
    let (code, v) = json_of(&["verify", "--max-ground", "10"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "too-large");
}

#[test]
fn table_csv_matches_json() {
    let args = ["table", "--m-range", "1..6", "--d-range", "1..6", "--c", "zero"];
    let (code, v) = json_of(&args);
    assert_eq!(code, 0);
    let mut from_json = Vec::new();
    for row in v["results"]["rows"].as_array().unwrap() {
        for (i, x) in row["coefficients"].as_array().unwrap().iter().enumerate() {
            from_json.push(format!("{},{},{},{i},{x}", row["m"], row["d"], row["c"]));
        }
    }
    let csv_args: Vec<&str> = args.iter().copied().chain(["--format", "csv"]).collect();
    let out = spkl(&csv_args);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,d,c,i,coefficient"));
    assert_eq!(lines.map(String::from).collect::<Vec<_>>(), from_json);
}

#[test]
fn table_policies() {
    let (_, v) = json_of(&["table", "--m-range", "1..6", "--d-range", "1..6", "--c", "known-bound"]);
    assert_eq!(v["results"]["any_negative"], json!(false));
    // best_bound(3, 3) = 5 is not attainable and drives the linear term negative
    let (_, v) = json_of(&["table", "--m-range", "1..6", "--d-range", "1..6", "--c", "max-bound"]);
    assert_eq!(v["results"]["any_negative"], json!(true));
    let (code, _) = json_of(&["table", "--m-range", "3", "--d-range", "3", "--c", "6"]);
    assert_eq!(code, 2);
}

#[test]
fn text_and_usage_errors() {
    let out = spkl(&["--format", "text", "coeff", "--m", "3", "--d", "3", "--c", "4", "--i", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[t^1] P(t) = 1\n");
    assert_eq!(spkl(&["coeff", "--m", "x"]).status.code(), Some(2));
    assert_eq!(spkl(&["frobnicate"]).status.code(), Some(2));
    let (code, _) = json_of(&["coeff", "--m", "3"]);
    assert_eq!(code, 2);
}
