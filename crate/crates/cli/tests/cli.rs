use std::path::{Path, PathBuf};
use std::process::Command;

use num_rational::BigRational;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn symtwirl<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out = Command::new(env!("CARGO_BIN_EXE_symtwirl")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn find(dir: &TempDir, d: usize, n: usize) -> (PathBuf, Run) {
    let path = dir.path().join(format!("design_{d}_{n}.json"));
    let run =
        symtwirl(["design", "find", "--d", &d.to_string(), "--n", &n.to_string(), "--out", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    (path, run)
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn verify(path: &Path) -> Run {
    symtwirl(["design", "verify", "--design", path.to_str().unwrap()])
}

fn shift_weight(entry: &mut Value, delta: &BigRational) {
    let w: BigRational = entry["w"].as_str().unwrap().parse().unwrap();
    entry["w"] = Value::String((w + delta).to_string());
}

#[test]
fn golden_design_for_two_qubits() {
    let run = symtwirl(["design", "find", "--d", "2", "--n", "2"]);
    assert_eq!(run.code, 0);
    let expected = r#"{
  "d": 2,
  "n": 2,
  "weights": [
    {
      "perm": [
        1,
        2
      ],
      "w": "1/2"
    },
    {
      "perm": [
        2,
        1
      ],
      "w": "1/2"
    }
  ]
}
"#;
    assert_eq!(run.stdout, expected);
}

#[test]
fn find_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let (path, run) = find(&dir, 2, 5);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), run.stdout);
    assert!(run.stderr.contains("[26, 1048577]"), "{}", run.stderr);

    let file = run.json();
    let support = file["weights"].as_array().unwrap().len();
    assert!((26..=120).contains(&support));

    let checked = verify(&path);
    assert_eq!(checked.code, 0, "{}", checked.stderr);
    let report = checked.json();
    assert_eq!(report["accepted"], true);
    assert_eq!(report["support"], support);
    assert!(report.get("violation").is_none());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (first, _) = find(&dir, 2, 4);
    let again = symtwirl(["design", "find", "--d", "2", "--n", "4"]);
    assert_eq!(std::fs::read_to_string(first).unwrap(), again.stdout);

    let a = symtwirl(["bounds", "--d", "2", "--n", "5", "--eps", "0.1"]);
    let b = symtwirl(["bounds", "--d", "2", "--n", "5", "--eps", "0.1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn perturbed_weights_are_rejected() {
    let dir = TempDir::new().unwrap();
    let (_, run) = find(&dir, 2, 5);
    let mut file = run.json();
    let delta = BigRational::new(1.into(), 1_000_000.into());
    let weights = file["weights"].as_array_mut().unwrap();
    shift_weight(&mut weights[0], &delta);
    shift_weight(&mut weights[1], &-delta);
    let path = write(&dir, "perturbed.json", &serde_json::to_string_pretty(&file).unwrap());

    let checked = verify(&path);
    assert_eq!(checked.code, 1, "{}", checked.stderr);
    let report = checked.json();
    assert_eq!(report["accepted"], false);
    assert!(report["violation"]["pattern"].is_string());

    let bounds = symtwirl(["bounds", "--d", "2", "--n", "5", "--design", path.to_str().unwrap()]);
    assert_eq!(bounds.code, 1);
    assert!(bounds.stdout.is_empty());
}

#[test]
fn operational_check_agrees_on_a_design() {
    let dir = TempDir::new().unwrap();
    let (path, _) = find(&dir, 2, 3);
    let run = symtwirl(["design", "verify", "--design", path.to_str().unwrap(), "--trials", "2", "--seed", "9"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.json()["operational"], true);
}

#[test]
fn invalid_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let not_normalized = write(
        &dir,
        "sum.json",
        r#"{"d": 2, "n": 2, "weights": [{"perm": [1, 2], "w": "1/2"}, {"perm": [2, 1], "w": "1/3"}]}"#,
    );
    let malformed = write(&dir, "bad.json", r#"{"d": 2, "n": 2, "weights": [{"perm": [1, 1], "w": "1"}]}"#);
    let truncated = write(&dir, "truncated.json", r#"{"d": 2, "n": 2, "weights": ["#);
    let unknown = write(&dir, "unknown.json", r#"{"d": 2, "n": 1, "weights": [{"perm": [1], "w": "1"}], "x": 0}"#);
    let negative = write(
        &dir,
        "negative.json",
        r#"{"d": 2, "n": 2, "weights": [{"perm": [1, 2], "w": "3/2"}, {"perm": [2, 1], "w": "-1/2"}]}"#,
    );
    for path in [&not_normalized, &malformed, &truncated, &unknown, &negative] {
        let run = verify(path);
        assert_eq!(run.code, 2, "{}: {}", path.display(), run.stderr);
        assert!(run.stderr.starts_with("error:"));
    }
    assert_eq!(verify(&dir.path().join("missing.json")).code, 2);
}

#[test]
fn size_limits_exit_with_two() {
    assert_eq!(symtwirl(["design", "find", "--d", "2", "--n", "9"]).code, 2);
    // the constraint system needs no dense operators, the bracket does
    let dir = TempDir::new().unwrap();
    let (path, _) = find(&dir, 2, 5);
    let run = symtwirl(["--max-dim", "16", "approx", "--design", path.to_str().unwrap()]);
    assert_eq!(run.code, 2, "{}", run.stderr);
    assert_eq!(symtwirl(["design", "find", "--d", "0", "--n", "3"]).code, 2);
}

#[test]
fn bounds_report_values() {
    let run = symtwirl(["bounds", "--d", "2", "--n", "5"]);
    assert_eq!(run.code, 0);
    let report = run.json();
    assert_eq!(report["support_lower_bound"], 26);
    assert_eq!(report["support_upper_bound"], 1_048_577);
    assert!(report.get("design").is_none());

    let report = symtwirl(["bounds", "--d", "3", "--n", "3"]).json();
    assert_eq!(report["sym_dimension"], 10);
}

#[test]
fn bounds_on_a_verified_design() {
    let dir = TempDir::new().unwrap();
    let (path, _) = find(&dir, 2, 5);
    let run = symtwirl(["bounds", "--d", "2", "--n", "5", "--eps", "0.1", "--design", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = run.json();
    assert!(report["design"].is_object());
    assert!(report["approx"].is_object());
}

#[test]
fn types_cover_all_words() {
    let run = symtwirl(["types", "--n", "4", "--d", "2"]);
    assert_eq!(run.code, 0);
    let report = run.json();
    assert_eq!(report["count"], 5);
    assert_eq!(report["total_words"], 16);
    let sizes: Vec<u64> =
        report["types"].as_array().unwrap().iter().map(|t| t["class_size"].as_u64().unwrap()).collect();
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, [1, 1, 4, 4, 6]);
}

#[test]
fn approx_report_on_design_and_point_mass() {
    let dir = TempDir::new().unwrap();
    let (path, _) = find(&dir, 2, 5);
    let run = symtwirl(["approx", "--design", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report = run.json();
    assert!(report["eps_lower"].as_f64().unwrap() < 1e-10);
    assert!(report["eps_upper"].as_f64().unwrap() > 0.0);
    assert_eq!(report["holds"], true);
    for key in ["H_rate", "rhs_at_lower", "rhs_at_upper", "vacuous"] {
        assert!(report.get(key).is_some(), "{key}");
    }

    let point = write(&dir, "point.json", r#"{"d": 2, "n": 3, "weights": [{"perm": [1, 2, 3], "w": "1"}]}"#);
    let run = symtwirl(["approx", "--design", point.to_str().unwrap()]);
    let report = run.json();
    assert_eq!(report["H_rate"], 0.0);
    assert!(report["eps_lower"].as_f64().unwrap() > 0.1);
    assert_eq!(run.code, if report["holds"] == true { 0 } else { 1 });
}

#[test]
fn channel_verification() {
    let dir = TempDir::new().unwrap();
    let (a5, _) = find(&dir, 2, 5);
    let run = symtwirl(["channel", "verify", "--design", a5.to_str().unwrap(), "--dh", "2", "--dk", "2"]);
    assert_eq!(run.code, 1);
    assert_eq!(run.json()["accepted"], false);

    let (uniform, _) = find(&dir, 4, 3);
    let run = symtwirl(["channel", "verify", "--design", uniform.to_str().unwrap(), "--dh", "2", "--dk", "2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.json()["accepted"], true);
}

#[test]
fn bounds_flag_a_design_below_the_support_floor() {
    let dir = TempDir::new().unwrap();
    let (path, _) = find(&dir, 3, 3);
    let run = symtwirl(["bounds", "--d", "3", "--n", "3", "--design", path.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let design = &run.json()["design"];
    assert_eq!(design["support"], 6);
    assert_eq!(design["support_within_bounds"], false);
    assert_eq!(design["rate_meets_lower_bound"], true);
    assert!(run.stderr.contains("note:"));
}
