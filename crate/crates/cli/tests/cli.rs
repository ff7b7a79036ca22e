use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paratele")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_problem(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn general_path_on_incompatible_pair() {
    let path = problem("compatibility_defect.txt");
    let o = run(&["run", path.to_str().unwrap(), "--verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["operator"], "16*t^4*Dt^4 + 32*t^3*Dt^3 - 24*t^2*Dt^2 + 24*t*Dt - 15");
    assert_eq!(v["order"], 4);
    assert_eq!(v["minimal"], false);
    assert_eq!(v["verified"], true);
    assert_eq!(v["certificate"][0]["term"], "h");
    assert!(v.get("timings").is_none());
}

#[test]
fn existence_subcommand_on_the_same_pair() {
    let path = problem("compatibility_defect.txt");
    let o = run(&["exists", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2*t*Dt + 1\n");
}

#[test]
fn nonexistence_exits_one() {
    let path = problem("no_telescoper.txt");
    let o = run(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no parallel telescoper exists"));
    assert!(stdout(&o).contains("exists: false"));
    let o = run(&["paratele", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no parallel telescoper exists"));
}

#[test]
fn ppv_operator_and_group() {
    let path = problem("ppv_system.txt");
    let o = run(&["run", path.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("operator: t*Dt^2\n"), "{out}");
    assert!(out.contains("group: { a ∈ F : Dt^2(a) = 0 }\n"), "{out}");
}

#[test]
fn telescope_defaults_to_file_task() {
    let path = problem("single_telescoper.txt");
    let o = run(&["telescope", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["operator"], "t*Dt - 1");
    assert_eq!(v["certificate"][0]["coeff"], "t^2/(t + x1 + x2)");
    let f = temp_problem("vars: t, x1, x2\ninput r = -(2*t + x2)/(x2 + t)^2\n");
    let o = run(&["telescope", f.path().to_str().unwrap(), "--var", "x2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["operator"], "Dt");
    assert_eq!(v["certificate"][0]["coeff"], "-t/(t^2 + 2*t*x2 + x2^2)");
}

#[test]
fn output_is_deterministic_across_runs_and_schedulers() {
    let path = problem("ppv_system.txt");
    let p = path.to_str().unwrap();
    let a = run(&["run", p, "--format", "json"]);
    let b = run(&["run", p, "--format", "json"]);
    let c = run(&["run", p, "--format", "json", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn timings_are_opt_in() {
    let path = problem("single_telescoper.txt");
    let o = run(&["run", path.to_str().unwrap(), "--format", "json", "--timings"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["timings"]["total_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn input_errors_exit_two() {
    let f = temp_problem("vars: t, x1\ninput f = (t + \ntask: ppv\n");
    let o = run(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column"), "{}", stderr(&o));

    let f = temp_problem("vars: t, x1\ninput f = y\ntask: ppv\n");
    let o = run(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown variable `y`"));

    let f = temp_problem("vars: t, x1, x2\ninput f1 = x2\ninput f2 = 0\ntask: ppv\n");
    let o = run(&["run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not compatible"));

    let o = run(&["run", "/nonexistent/problem.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_limit_exits_three() {
    let path = problem("ppv_system.txt");
    let o = run(&["run", path.to_str().unwrap(), "--max-order", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verification_never_changes_results() {
    for name in ["compatibility_defect.txt", "ppv_system.txt", "single_telescoper.txt"] {
        let path = problem(name);
        let json = |extra: &[&str]| {
            let mut args = vec!["run", path.to_str().unwrap(), "--format", "json"];
            args.extend_from_slice(extra);
            let o = run(&args);
            assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
            let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            v.as_object_mut().unwrap().remove("verified");
            v
        };
        assert_eq!(json(&[]), json(&["--verify"]), "{name}");
    }
}
