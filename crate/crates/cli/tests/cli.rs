use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TRIANGLE: &str = r#"
name = "triangle"
nodes = ["A", "B", "C"]
edges = [["A", "B"], ["B", "C"], ["A", "C"]]
k = 3
penalty = 4.0
"#;

fn qcolor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcolor"))
        .current_dir(dir)
        .env_remove("QCOLOR_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn triangle_file(dir: &TempDir) -> String {
    let path = dir.path().join("triangle.toml");
    fs::write(&path, TRIANGLE).unwrap();
    path.display().to_string()
}

#[test]
fn dump_qubo_default_penalty_is_four() {
    let dir = TempDir::new().unwrap();
    let explicit = qcolor(dir.path(), &["dump-qubo", "--case", "flight", "--penalty", "4"]);
    let default = qcolor(dir.path(), &["dump-qubo", "--case", "flight"]);
    assert_eq!(explicit.status.code(), Some(0));
    assert_eq!(stdout(&explicit), stdout(&default));
    assert!(dir.path().join("flight-qubo.json").exists());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flight-qubo.json")).unwrap()).unwrap();
    assert_eq!(json["variables"][0], "A:O");
    assert_eq!(json["constant"], 24.0);
}

#[test]
fn unknown_case_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = qcolor(dir.path(), &["dump-qubo", "--case", "airport"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown case `airport`"));
}

#[test]
fn bad_flags_exit_with_usage_code() {
    let dir = TempDir::new().unwrap();
    assert_eq!(qcolor(dir.path(), &["solve", "--method", "annealing"]).status.code(), Some(1));
    assert_eq!(qcolor(dir.path(), &["solve", "--optimizer", "slsqp"]).status.code(), Some(1));
    assert_eq!(qcolor(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn backtrack_two_colors_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let out = qcolor(dir.path(), &["solve", "--case", "flight", "--method", "backtrack", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("no proper 2-coloring"));
    let result = fs::read_to_string(dir.path().join("flight-backtrack.toml")).unwrap();
    assert!(result.contains("proper = false"));
}

#[test]
fn greedy_frequency_prints_table() {
    let dir = TempDir::new().unwrap();
    let out = qcolor(dir.path(), &["solve", "--case", "frequency", "--method", "greedy"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("color  | O R G | O R G"), "{text}");
    let result: toml::Table = fs::read_to_string(dir.path().join("frequency-greedy.toml"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(result["colors_used"].as_integer().unwrap() <= 3);
    assert_eq!(result["proper"].as_bool(), Some(true));
}

#[test]
fn brute_force_counts_register_colorings() {
    let dir = TempDir::new().unwrap();
    let out = qcolor(dir.path(), &["solve", "--case", "register", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    let result = fs::read_to_string(dir.path().join("register-brute.toml")).unwrap();
    assert!(result.contains("solutions = 48"), "{result}");
}

#[test]
fn out_dir_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("results");
    let out = Command::new(env!("CARGO_BIN_EXE_qcolor"))
        .current_dir(dir.path())
        .env("QCOLOR_OUT_DIR", &target)
        .args(["dump-ising", "--case", "register"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(target.join("register-ising.txt")).unwrap();
    assert_eq!(text, stdout(&out));
    assert!(text.lines().any(|l| l.starts_with("CONST ")));
}

#[test]
fn case_file_with_conflicting_reference_is_rejected() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(
        &path,
        format!("{TRIANGLE}\n[[references]]\nlabel = \"bad\"\nassignment = {{ A = \"O\", B = \"O\", C = \"G\" }}\n"),
    )
    .unwrap();
    let out = qcolor(dir.path(), &["dump-qubo", "--case-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("edge A-B"), "{}", stderr(&out));
}

#[test]
fn vqe_solves_a_triangle_from_file() {
    let dir = TempDir::new().unwrap();
    let case = triangle_file(&dir);
    let out = qcolor(
        dir.path(),
        &[
            "solve", "--case-file", &case, "--method", "vqe", "--optimizer", "quasi-newton-fd", "--restarts", "2",
            "--shots", "512",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let result: toml::Table = fs::read_to_string(dir.path().join("triangle-vqe.toml"))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(result["proper"].as_bool(), Some(true));
    assert_eq!(result["best_sampled_energy"].as_float(), Some(0.0));
    assert_eq!(result["depth"].as_integer(), Some(2));
    let trace = fs::read_to_string(dir.path().join("triangle-vqe-trace.csv")).unwrap();
    assert!(trace.starts_with("config,iteration,current_energy,best_energy\nvqe-d2-quasi-newton-fd,0,"));
}

#[test]
fn compare_needs_two_configurations() {
    let dir = TempDir::new().unwrap();
    let out = qcolor(dir.path(), &["compare", "--case", "flight", "--optimizer", "cobyla"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("at least two configurations"));
}

#[test]
fn compare_writes_one_series_per_configuration() {
    let dir = TempDir::new().unwrap();
    let case = triangle_file(&dir);
    let out = qcolor(
        dir.path(),
        &[
            "compare", "--case-file", &case, "--optimizer", "quasi-newton-fd,cobyla", "--restarts", "1",
            "--max-iter", "40", "--workers", "2",
        ],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(2)), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(dir.path().join("triangle-compare.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["config", "iteration", "current_energy", "best_energy"]);
    let configs: Vec<String> = reader.records().map(|r| r.unwrap()[0].to_string()).collect();
    let mut distinct = configs.clone();
    distinct.dedup();
    assert_eq!(distinct, ["vqe-d2-cobyla", "vqe-d2-quasi-newton-fd"]);
}

#[test]
fn compare_qaoa_depths_are_warm_started() {
    let dir = TempDir::new().unwrap();
    let case = triangle_file(&dir);
    let out = qcolor(
        dir.path(),
        &["compare", "--case-file", &case, "--method", "qaoa", "--p", "1,2,3", "--restarts", "2", "--max-iter", "150"],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(2)), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(dir.path().join("triangle-compare.csv")).unwrap();
    let mut finals: Vec<(String, f64)> = Vec::new();
    for record in reader.records() {
        let r = record.unwrap();
        let best: f64 = r[3].parse().unwrap();
        match finals.last_mut() {
            Some((name, value)) if name == &r[0] => *value = best,
            _ => finals.push((r[0].to_string(), best)),
        }
    }
    let names: Vec<&str> = finals.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["qaoa-p1-cobyla", "qaoa-p2-cobyla", "qaoa-p3-cobyla"]);
    assert!(finals[1].1 <= finals[0].1 + 1e-6 && finals[2].1 <= finals[1].1 + 1e-6, "{finals:?}");
}
