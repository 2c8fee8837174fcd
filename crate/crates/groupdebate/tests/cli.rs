//! End-to-end checks of the command-line binary: every subcommand, file and
//! stdout output, exit codes, and the generate → file → run loop.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_groupdebate"))
}

fn run_ok(args: &[&str]) -> Output {
    let output = binary().args(args).output().expect("spawn binary");
    assert!(
        output.status.success(),
        "`groupdebate {}` failed\nstdout: {}\nstderr: {}",
        args.join(" "),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn run_err(args: &[&str]) -> Output {
    let output = binary().args(args).output().expect("spawn binary");
    assert!(
        !output.status.success(),
        "`groupdebate {}` unexpectedly succeeded",
        args.join(" ")
    );
    output
}

/// Index of a named column in a CSV header line.
fn column(header: &str, name: &str) -> usize {
    header
        .split(',')
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no {name} column in: {header}"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("write fixture");
}

const RUN_CONFIG: &str = r#"
[debate]
mode = "gd"
agents = 5
group_sizes = [3, 2]
total_rounds = 3
intra_rounds = 2
seed = 0
task = "arithmetic"
repetitions = 2

[data]
kind = "generate"
count = 6
seed = 11

[backend]
kind = "mock"

[backend.mock]
policy = "scripted"
correct_agents = [0, 1, 2]
"#;

#[test]
fn run_writes_a_csv_report_with_perfect_scripted_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    let out = dir.path().join("report.csv");
    write(&config, RUN_CONFIG);

    run_ok(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);

    let report = std::fs::read_to_string(&out).unwrap();
    let mut lines = report.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "dataset,mode,M,N,T,R,S,seed,repetition,accuracy,prompt_tokens,\
         completion_tokens,total_tokens,api_calls,wall_ms,estimated_usage_flag"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2, "one row per repetition");
    let accuracy = column(header, "accuracy");
    let calls = column(header, "api_calls");
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[accuracy].parse::<f64>().unwrap(), 1.0);
        // 17 calls per problem, 6 problems per repetition.
        assert_eq!(fields[calls].parse::<u64>().unwrap(), 17 * 6);
    }
}

#[test]
fn repeated_runs_write_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, RUN_CONFIG);
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");

    for out in [&first, &second] {
        run_ok(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "mock runs must reproduce byte for byte"
    );
}

#[test]
fn run_emits_the_whole_report_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    write(&config, RUN_CONFIG);

    let output = run_ok(&["run", "--config", config.to_str().unwrap(), "--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
    assert_eq!(report["summary"].as_array().unwrap().len(), 1);
    assert_eq!(report["summary"][0]["accuracy_mean"], 1.0);
    assert_eq!(report["partial"], false);
}

#[test]
fn generated_problems_loop_back_through_a_file_run() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("problems.jsonl");

    run_ok(&["gen-arith", "--seed", "5", "--count", "8", "--out", data.to_str().unwrap()]);
    let text = std::fs::read_to_string(&data).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 8);
    for line in &lines {
        let problem: serde_json::Value = serde_json::from_str(line).unwrap();
        for field in ["id", "question", "answer"] {
            assert!(problem[field].is_string(), "line lacks {field}: {line}");
        }
    }

    let config = dir.path().join("run.toml");
    write(
        &config,
        &format!(
            r#"
[debate]
mode = "mad"
agents = 3
total_rounds = 2
seed = 0
task = "arithmetic"

[data]
kind = "file"
path = "{}"

[backend]
kind = "mock"

[backend.mock]
policy = "scripted"
correct_agents = [0, 1]
"#,
            data.display()
        ),
    );
    let out = dir.path().join("report.csv");
    run_ok(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let report = std::fs::read_to_string(&out).unwrap();
    let header = report.lines().next().unwrap();
    let row = report.lines().nth(1).expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[column(header, "dataset")], "problems");
    assert_eq!(fields[column(header, "accuracy")].parse::<f64>().unwrap(), 1.0);
    // 3 agents, 2 rounds, fully connected: 3*2 + 3*1 = 9 calls per problem.
    assert_eq!(fields[column(header, "api_calls")].parse::<u64>().unwrap(), 9 * 8);
}

#[test]
fn sweep_expands_cells_in_declared_order() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("sweep.toml");
    write(
        &spec,
        r#"
modes = ["gd", "mad"]
agents = [4]
strategies = [[2, 2]]
rounds = [2]
intra_rounds = [1, 2]
seeds = [0]
repetitions = 2
task = "arithmetic"

[data]
kind = "generate"
count = 3

[backend]
kind = "mock"
"#,
    );
    let out = dir.path().join("sweep.csv");
    run_ok(&["sweep", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);

    let report = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = report.lines().skip(1).collect();
    // gd expands both intra_rounds values, mad collapses that axis: 3 cells,
    // 2 repetitions each.
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("arithmetic,gd,"));
    assert!(rows[5].starts_with("arithmetic,mad,"));
}

#[test]
fn cost_tables_go_to_files_and_stdout_alike() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("axis.toml");
    write(
        &params,
        r#"
agents = [4]
group_counts = [2]
rounds = [4]
intra_rounds = [2]
question_tokens = 100
output_tokens = 50
summary_tokens = 60
"#,
    );
    let out = dir.path().join("cost.csv");
    run_ok(&["cost", "--params", params.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let on_disk = std::fs::read_to_string(&out).unwrap();

    let stdout = run_ok(&["cost", "--params", params.to_str().unwrap()]).stdout;
    assert_eq!(on_disk, String::from_utf8(stdout).unwrap());

    let header = on_disk.lines().next().unwrap();
    let row = on_disk.lines().nth(1).expect("one grid point");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[column(header, "gd_total")], "4200");
    assert_eq!(fields[column(header, "mad_total")], "7560");
}

#[test]
fn failures_exit_nonzero_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();

    let missing = dir.path().join("nowhere.toml");
    let output = run_err(&["run", "--config", missing.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("nowhere.toml"), "stderr: {stderr}");

    let broken = dir.path().join("broken.toml");
    write(
        &broken,
        r#"
[debate]
mode = "gd"
agnets = 4
total_rounds = 2
seed = 0
task = "arithmetic"
"#,
    );
    let output = run_err(&["run", "--config", broken.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("agnets"), "stderr: {stderr}");

    let data = dir.path().join("data.jsonl");
    let output = run_err(&["gen-arith", "--seed", "1", "--count", "0", "--out", data.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("count"), "stderr: {stderr}");
    assert!(!data.exists(), "no file may be written for a rejected request");
}
