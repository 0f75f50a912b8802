//! End-to-end tests of the `msk` binary: exit-code contract, file
//! round-trips, and deterministic output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn msk(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msk"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn unit_instance(dir: &Path, name: &str, m: usize, q: u64) -> PathBuf {
    let inputs: Vec<String> = (1..=m)
        .map(|i| format!("{{\"id\": \"{i}\", \"size\": 1}}"))
        .collect();
    write(
        dir,
        name,
        &format!(
            "{{\"capacity\": {q}, \"problem\": \"a2a\", \"inputs\": [{}]}}",
            inputs.join(", ")
        ),
    )
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_au_reports_optimal_numbers() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 9, 3);
    let out = msk(
        &[
            "solve",
            "inst.json",
            "--strategy",
            "au",
            "--out",
            "schema.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let line = stdout(&out);
    assert!(line.contains("reducers=12"), "{line}");
    assert!(line.contains("cost=36"), "{line}");
    assert!(line.contains("ratio=1.000"), "{line}");

    let check = msk(&["validate", "inst.json", "schema.json"], dir.path());
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn solve_auto_picks_big_for_a_dominant_input() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "inst.json",
        r#"{"capacity": 10, "problem": "a2a",
            "inputs": [{"id": "a", "size": 8}, {"id": "b", "size": 2}, {"id": "c", "size": 1}]}"#,
    );
    let out = msk(&["solve", "inst.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("strategy=big"), "{}", stdout(&out));
}

#[test]
fn solve_rejects_impossible_pairs_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "inst.json",
        r#"{"capacity": 10, "problem": "a2a",
            "inputs": [{"id": "a", "size": 9}, {"id": "b", "size": 9}]}"#,
    );
    let out = msk(&["solve", "inst.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn solve_exit_codes_for_bad_invocations() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 4, 2);
    let unknown = msk(&["solve", "inst.json", "--strategy", "zigzag"], dir.path());
    assert_eq!(unknown.status.code(), Some(64));
    let missing = msk(&["solve", "nope.json"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
    let badflag = msk(&["solve", "inst.json", "--frobnicate"], dir.path());
    assert_eq!(badflag.status.code(), Some(64));
}

#[test]
fn validate_reports_lost_pairs_after_deleting_a_reducer() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 9, 3);
    msk(
        &[
            "solve",
            "inst.json",
            "--strategy",
            "au",
            "--out",
            "schema.json",
        ],
        dir.path(),
    );

    let text = std::fs::read_to_string(dir.path().join("schema.json")).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reducers = file["reducers"].as_array_mut().unwrap();
    reducers.pop();
    // Renumber nothing: dropping the last keeps ids sequential. Teams must
    // go, they no longer partition the reducers.
    file.as_object_mut().unwrap().remove("teams");
    std::fs::write(
        dir.path().join("broken.json"),
        serde_json::to_string(&file).unwrap(),
    )
    .unwrap();

    let out = msk(&["validate", "inst.json", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("uncovered pair"), "{}", stdout(&out));
}

#[test]
fn validate_reports_overloaded_reducers() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 4, 2);
    write(
        dir.path(),
        "fat.json",
        r#"{"reducers": [
             {"id": 0, "inputs": ["1", "2", "3"], "load": 3},
             {"id": 1, "inputs": ["1", "4"], "load": 2},
             {"id": 2, "inputs": ["2", "4"], "load": 2},
             {"id": 3, "inputs": ["3", "4"], "load": 2}],
            "stats": {"communication_cost": 9, "reducer_count": 4,
                      "replication": {}, "lower_bound_cost": 0,
                      "lower_bound_reducers": 0, "cost_ratio": null}}"#,
    );
    let out = msk(&["validate", "inst.json", "fat.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stdout(&out).contains("over capacity: reducer 0 load 3"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn validate_rejects_unknown_ids_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 2, 2);
    write(
        dir.path(),
        "ghost.json",
        r#"{"reducers": [{"id": 0, "inputs": ["1", "ghost"], "load": 2}],
            "stats": {"communication_cost": 2, "reducer_count": 1,
                      "replication": {}, "lower_bound_cost": 0,
                      "lower_bound_reducers": 0, "cost_ratio": null}}"#,
    );
    let out = msk(&["validate", "inst.json", "ghost.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_match_the_unit_input_formulas() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 15, 3);
    let out = msk(&["bounds", "inst.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("cost_bound       105"), "{text}");
    assert!(text.contains("reducer_bound    35"), "{text}");
}

#[test]
fn bounds_for_x2y_and_empty_instances() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "xy.json",
        r#"{"capacity": 10, "problem": "x2y",
            "inputs": [{"id": "x1", "size": 6}, {"id": "x2", "size": 4}],
            "y_inputs": [{"id": "y1", "size": 4}, {"id": "y2", "size": 4}, {"id": "y3", "size": 2}]}"#,
    );
    let out = msk(&["bounds", "xy.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains("cost_bound       20"),
        "{}",
        stdout(&out)
    ); // 2*10*10/10

    write(
        dir.path(),
        "empty.json",
        r#"{"capacity": 5, "problem": "a2a", "inputs": []}"#,
    );
    let out = msk(&["bounds", "empty.json"], dir.path());
    assert!(
        stdout(&out).contains("cost_bound       0"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn oracle_finds_q2_optimum_and_reports_exhaustion() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 4, 2);
    let out = msk(&["oracle", "inst.json", "--max-reducers", "8"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains("optimal_reducers=6 optimal_cost=12"),
        "{}",
        stdout(&out)
    );

    let out = msk(&["oracle", "inst.json", "--max-reducers", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("exhausted=true"));
}

#[test]
fn gen_writes_reduction_instances() {
    let dir = tempfile::tempdir().unwrap();
    let out = msk(
        &[
            "gen",
            "--reduction",
            "a2a",
            "--numbers",
            "3,1,2,2",
            "--z",
            "4",
            "--out",
            "red.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("red.json")).unwrap())
            .unwrap();
    assert_eq!(file["capacity"], 12);
    assert_eq!(file["inputs"].as_array().unwrap().len(), 6);
    assert_eq!(file["reducer_budget"], 4);
    assert_eq!(file["trivially_no"], false);

    let out = msk(
        &[
            "gen",
            "--reduction",
            "x2y",
            "--numbers",
            "2,2",
            "--z",
            "3",
            "--out",
            "xy.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("xy.json")).unwrap())
            .unwrap();
    assert_eq!(file["capacity"], 3);
    assert_eq!(file["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(file["y_inputs"].as_array().unwrap().len(), 1);
}

#[test]
fn gen_then_oracle_runs_the_reduction() {
    let dir = tempfile::tempdir().unwrap();
    msk(
        &[
            "gen",
            "--reduction",
            "a2a",
            "--numbers",
            "2,2",
            "--z",
            "3",
            "--out",
            "red.json",
        ],
        dir.path(),
    );
    let out = msk(&["oracle", "red.json", "--max-reducers", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn identical_invocations_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "inst.json", 15, 3);
    msk(
        &["solve", "inst.json", "--strategy", "q3", "--out", "a.json"],
        dir.path(),
    );
    msk(
        &["solve", "inst.json", "--strategy", "q3", "--out", "b.json"],
        dir.path(),
    );
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn solve_then_validate_pipeline_over_many_strategies() {
    let dir = tempfile::tempdir().unwrap();
    unit_instance(dir.path(), "q2.json", 8, 2);
    unit_instance(dir.path(), "q3.json", 15, 3);
    unit_instance(dir.path(), "alg3.json", 27, 3);
    unit_instance(dir.path(), "alg2.json", 31, 6);
    unit_instance(dir.path(), "alg1a.json", 23, 5);
    write(
        dir.path(),
        "mixed.json",
        r#"{"capacity": 12, "problem": "a2a",
            "inputs": [{"id": "a", "size": 6}, {"id": "b", "size": 5}, {"id": "c", "size": 4},
                       {"id": "d", "size": 3}, {"id": "e", "size": 2}, {"id": "f", "size": 1}]}"#,
    );
    write(
        dir.path(),
        "big.json",
        r#"{"capacity": 30, "problem": "a2a",
            "inputs": [{"id": "w", "size": 19}, {"id": "a", "size": 9}, {"id": "b", "size": 8},
                       {"id": "c", "size": 7}, {"id": "d", "size": 5}]}"#,
    );
    let cases = [
        ("q2.json", "q2", vec![]),
        ("q3.json", "q3", vec![]),
        ("alg3.json", "alg3", vec![]),
        ("alg2.json", "alg2", vec![]),
        ("alg1a.json", "alg1a", vec!["--k", "5"]),
        ("mixed.json", "alg4", vec![]),
        ("mixed.json", "binpack", vec![]),
        ("big.json", "big", vec![]),
    ];
    for (inst, strategy, extra) in cases {
        let mut args = vec!["solve", inst, "--strategy", strategy];
        args.extend(extra);
        args.extend(["--out", "s.json"]);
        let out = msk(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{strategy}: {out:?}");
        let check = msk(&["validate", inst, "s.json"], dir.path());
        assert_eq!(
            check.status.code(),
            Some(0),
            "{strategy} failed revalidation"
        );
    }
}

#[test]
fn solve_x2y_instances() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "xy.json",
        r#"{"capacity": 10, "problem": "x2y",
            "inputs": [{"id": "x1", "size": 5}, {"id": "x2", "size": 5}, {"id": "x3", "size": 2}],
            "y_inputs": [{"id": "y1", "size": 5}, {"id": "y2", "size": 3}]}"#,
    );
    let out = msk(&["solve", "xy.json", "--out", "schema.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).starts_with("strategy=x2y"));
    let check = msk(&["validate", "xy.json", "schema.json"], dir.path());
    assert_eq!(check.status.code(), Some(0));
}
