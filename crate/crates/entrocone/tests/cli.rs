use std::fs;
use std::path::{Path, PathBuf};

use entrocone::experiment::main_with_args;
use entrocone::qsim::{PureState, named};
use entrocone::seed;
use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> i32 {
    let mut v = vec!["entrocone".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    v.push("--out".into());
    v.push(out.display().to_string());
    main_with_args(v)
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&read(dir, "summary.json")).unwrap()
}

fn csv_rows(dir: &Path, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let text = read(dir, name);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

fn files_except_manifest(dir: &Path) -> Vec<(PathBuf, String)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (PathBuf::from(p.file_name().unwrap()), fs::read_to_string(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn usage_errors_exit_one_and_write_nothing() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["frobnicate"], &out), 1);
    assert_eq!(run(&["instances"], &out), 1);
    assert_eq!(run(&["hypergraph-verify"], &out), 1);
    assert_eq!(run(&["haar-scan", "--samples", "10"], &out), 1);
    assert_eq!(run(&["track", "--circuit", "@nope"], &out), 1);
    assert!(!out.exists());
    assert_eq!(main_with_args(["entrocone", "--help"]), 0);
}

#[test]
fn instances_writes_count_and_manifest() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(run(&["instances", "--n", "5", "--dump"], tmp.path()), 0);
    assert_eq!(summary(tmp.path())["count"], 60);
    let dump: serde_json::Value = serde_json::from_str(&read(tmp.path(), "instances.json")).unwrap();
    assert_eq!(dump.as_array().unwrap().len(), 60);
    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "instances");
    assert_eq!(manifest["status"], "success");
}

#[test]
fn runs_are_reproducible_and_replayable() {
    let tmp = TempDir::new().unwrap();
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    let args = ["violate", "--seed", "7", "--episodes", "200"];
    assert_eq!(run(&args, &a), 0);
    assert_eq!(run(&args, &b), 0);
    assert_eq!(files_except_manifest(&a), files_except_manifest(&b));
    let cfg = a.join("config.json").display().to_string();
    assert_eq!(run(&["replay", &cfg], &c), 0);
    assert_eq!(files_except_manifest(&a), files_except_manifest(&c));
}

#[test]
fn haar_scan_is_independent_of_jobs() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = ["haar-scan", "--n", "5", "--samples", "1000", "--seed", "4"];
    assert_eq!(run(&[&args[..], &["--jobs", "1"]].concat(), &a), 0);
    assert_eq!(run(&[&args[..], &["--jobs", "3"]].concat(), &b), 0);
    assert_eq!(read(&a, "gaps.csv"), read(&b, "gaps.csv"));
    assert_eq!(summary(&a), summary(&b));
    assert_eq!(summary(&a)["violations"], 0);
}

#[test]
fn track_of_an_empty_circuit_has_one_row() {
    let tmp = TempDir::new().unwrap();
    let circuit = tmp.path().join("empty.txt");
    fs::write(&circuit, "# nothing\n").unwrap();
    let init = tmp.path().join("zero.json");
    fs::write(&init, PureState::zero(4).to_json()).unwrap();
    let out = tmp.path().join("o");
    let code = run(
        &["track", "--circuit", circuit.to_str().unwrap(), "--initial", init.to_str().unwrap()],
        &out,
    );
    assert_eq!(code, 0);
    let (h, rows) = csv_rows(&out, "trajectory.csv");
    assert_eq!(rows.len(), 1);
    assert_eq!(column(&h, &rows, "gap"), vec![0.0]);
}

#[test]
fn track_of_the_violator_circuit() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(run(&["track", "--circuit", "@psi-abcdr", "--subsystems", "48,3"], tmp.path()), 0);
    let (h, rows) = csv_rows(tmp.path(), "trajectory.csv");
    assert_eq!(rows.len(), named::psi_abcdr_circuit().len() + 1);
    let s_cd = column(&h, &rows, "s_vn_48");
    assert!((s_cd.last().unwrap() - 2.0).abs() < 1e-9);
    let diff = column(&h, &rows, "difference");
    assert!(*diff.last().unwrap() > 0.12);
    assert!(summary(tmp.path())["first_violation"].is_number());
}

#[test]
fn resources_table_layout() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(run(&["resources", "--circuit", "@ghz:3", "--subsystems", "1,6"], tmp.path()), 0);
    let (h, rows) = csv_rows(tmp.path(), "resources.csv");
    assert_eq!(h, ["gate_index", "subsystem_mask", "s_vn", "capacity", "nonflatness", "witness2"]);
    assert_eq!(rows.len(), 2 * (named::ghz_circuit(3).len() + 1));
    let s = column(&h, &rows, "s_vn");
    assert!((s[s.len() - 1] - 1.0).abs() < 1e-9);
}

#[test]
fn hypergraph_from_a_state_file() {
    let tmp = TempDir::new().unwrap();
    let state = tmp.path().join("s.json");
    fs::write(&state, PureState::haar(5, &mut seed::stream(2, 0)).to_json()).unwrap();
    let out = tmp.path().join("o");
    assert_eq!(run(&["hypergraph-verify", "--state", state.to_str().unwrap()], &out), 0);
    let s = summary(&out);
    assert!(s["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(s["min_cut_matches"], 15);
    let (_, rows) = csv_rows(&out, "weights.csv");
    assert_eq!(rows.len(), 15);

    let four = tmp.path().join("four.json");
    fs::write(&four, PureState::zero(4).to_json()).unwrap();
    assert_eq!(run(&["hypergraph-verify", "--state", four.to_str().unwrap()], &tmp.path().join("p")), 1);
}

#[test]
fn budget_exhaustion_exits_two() {
    let tmp = TempDir::new().unwrap();
    let args = ["optimize", "--n", "4", "--restarts", "2", "--max-evals", "30", "--method", "cobyla"];
    assert_eq!(run(&args, tmp.path()), 2);
    let manifest: serde_json::Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["status"], "budget_exhausted");
    let (_, rows) = csv_rows(tmp.path(), "runs.csv");
    assert_eq!(rows.len(), 2);
}
