use std::process::Command;

use serde_json::Value;

const SIX: &str = "f(z) = ((15/4)*z - 6)/(2 - z) * f(z^3) + (8 - z)/(2 - z) * f(z^9)";

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mahler-lab")).args(args).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout).to_string();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, String::from_utf8_lossy(&out.stderr).to_string())
}

#[test]
fn precalm_counterexample() {
    let (code, v, _) = run(&["precalm", "-e", SIX]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "mahler-lab/1");
    assert_eq!(v["precalm"], false);
    assert_eq!(v["violation"]["class"], "z-2");
    assert_eq!(v["violation"]["sequence"], serde_json::json!([1, 1]));
    assert_eq!(v["violation"]["clm"], -1);
}

#[test]
fn regularity_trivial() {
    let (code, v, _) = run(&["regularity", "-e", "f(z) = (1+z)*f(z^2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Regular");
    assert_eq!(v["witness_m"], 0);
}

#[test]
fn regularity_unknown_exit_code() {
    let (code, v, _) =
        run(&["regularity", "-e", "f(z) = (z-4)/(z-2)*f(z^2) + (1+z)*f(z^4)", "--degree-budget", "64"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "Unknown");
}

#[test]
fn verify_example_passes() {
    let (code, v, _) = run(&["verify-example", "--k", "3", "--alpha", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["assertions"].as_array().unwrap().len(), 5);
    let (code, _, err) = run(&["verify-example", "--k", "3", "--alpha", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("constraint violated"));
}

#[test]
fn witness_and_series() {
    let (code, v, _) = run(&["witness", "-e", "f(z) = (z-4)/(z-2)*f(z^2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness_text"], "z-4");
    let (code, v, _) = run(&["series", "-e", "f(z) = f(z^2)/(1-z)", "--terms", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "1", "2", "2", "4", "4", "6", "6"]));
    let (_, v, _) = run(&["series", "-e", "f(z) = f(z^2)/(1-z)", "--terms", "4", "--seed", "0=1/2"]);
    assert_eq!(v["coefficients"], serde_json::json!(["1/2", "1/2", "1", "1"]));
}

#[test]
fn guess_recovers_partitions() {
    let (code, v, _) = run(&["guess", "-e", "f(z) = f(z^2)/(1-z)", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["relation"]["order"], 1);
    assert_eq!(v["relation"]["text"], "f(z) = ((-1)/(z-1))*f(z^2)");
}

#[test]
fn json_input_matches_text() {
    let (_, text_report, _) = run(&["regularity", "-e", SIX]);
    let (_, analyzed, _) = run(&["analyze", "-e", SIX]);
    let dir = std::env::temp_dir().join(format!("mahler-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("six.json");
    std::fs::write(&path, analyzed["equation"]["json"].to_string()).unwrap();
    let (code, json_report, _) = run(&["regularity", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json_report, text_report);
    assert_eq!(analyzed["regularity"]["verdict"], "Regular");
}

#[test]
fn errors_exit_one() {
    let (code, _, err) = run(&["precalm", "-e", "f(z) = f(z^2) + f(z^3)"]);
    assert_eq!(code, 1);
    assert!(err.contains("radix"));
    let (code, _, err) = run(&["precalm", "-e", "f(z) = (z - zeta)*f(z^2)"]);
    assert_eq!(code, 1);
    assert!(err.contains("field mismatch"));
    let (code, v, _) = run(&["precalm", "-e", "f(z) = (z - zeta)*f(z^2)", "--field-zeta", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["precalm"], true);
    let (code, _, _) = run(&["precalm"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&["precalm", "--no-such-flag"]);
    assert_eq!(code, 1);
    assert!(err.contains("unexpected argument"));
}

#[test]
fn pretty_rendering() {
    let out = Command::new(env!("CARGO_BIN_EXE_mahler-lab"))
        .args(["precalm", "-e", SIX, "--pretty"])
        .output()
        .unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("violation.clm: -1"));
    assert!(s.contains("schema: mahler-lab/1"));
}
