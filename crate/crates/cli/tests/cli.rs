//! End-to-end tests of the `wvg` binary: stream shapes, exit codes,
//! checkpoint resume, determinism, and the interrupt contract.

use std::io::{BufRead, BufReader};
use std::process::{Command, Output, Stdio};
use std::time::Duration;

fn wvg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wvg"))
}

fn run(args: &[&str]) -> Output {
    wvg().args(args).output().expect("spawn wvg")
}

fn stdout_lines(output: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(|line| serde_json::from_str(line).expect("JSONL line"))
        .collect()
}

#[test]
fn enumerate_three_players() {
    let out = run(&["enumerate", "-n", "3"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    assert_eq!(lines.len(), 11); // 10 games + summary
    let summary = lines.last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["total"], 10);
    assert_eq!(summary["n"], 3);
    // Stream opens with the all-losing game.
    assert_eq!(lines[0]["rank"], 0);
    assert_eq!(lines[0]["weights"]["q"], "1");
}

#[test]
fn enumerate_orders_agree() {
    let bf = run(&["enumerate", "-n", "4"]);
    let df = run(&["enumerate", "-n", "4", "--order", "depth-first"]);
    assert!(bf.status.success() && df.status.success());
    let mut bf_games: Vec<String> = stdout_lines(&bf)
        .iter()
        .filter(|l| l.get("summary").is_none())
        .map(|l| l["wmin"].to_string())
        .collect();
    let mut df_games: Vec<String> = stdout_lines(&df)
        .iter()
        .filter(|l| l.get("summary").is_none())
        .map(|l| l["wmin"].to_string())
        .collect();
    assert_eq!(bf_games.len(), 27);
    bf_games.sort();
    df_games.sort();
    assert_eq!(bf_games, df_games);
}

#[test]
fn enumerate_usage_errors() {
    let out = run(&["enumerate", "-n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["enumerate", "-n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--extended"));
    let out = run(&["enumerate", "-n", "10", "--extended"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_matches_known_totals() {
    let out = run(&["count", "-n", "6"]);
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(summary["total"], 1113);
    let by_rank: Vec<u64> = summary["by_rank"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(by_rank.iter().sum::<u64>(), 1113);
    assert_eq!(by_rank[0], 1);
}

#[test]
fn checkpoint_resume_continues_the_stream() {
    let dir = tempfile::tempdir().unwrap();
    let full = run(&["enumerate", "-n", "4"]);
    let full_lines = stdout_lines(&full);

    let ck = dir.path().to_str().unwrap();
    let first = run(&["enumerate", "-n", "4", "--checkpoint-dir", ck]);
    assert!(first.status.success());
    assert_eq!(stdout_lines(&first).len(), full_lines.len());

    // Keep only the rank-2 checkpoint and resume: the stream must pick up
    // at rank 3 exactly.
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name != "checkpoint_rank_0002.json" {
            std::fs::remove_file(path).unwrap();
        }
    }
    let resumed = run(&["enumerate", "-n", "4", "--checkpoint-dir", ck, "--resume"]);
    assert!(resumed.status.success(), "{}", String::from_utf8_lossy(&resumed.stderr));
    let resumed_lines = stdout_lines(&resumed);
    let expected_tail: Vec<&serde_json::Value> = full_lines
        .iter()
        .filter(|l| l.get("summary").is_some() || l["rank"].as_u64().unwrap() > 2)
        .collect();
    assert_eq!(resumed_lines.len(), expected_tail.len());
    for (got, expect) in resumed_lines.iter().zip(expected_tail) {
        assert_eq!(got, expect);
    }
}

#[test]
fn convert_round_trips_weights() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("g.json");
    std::fs::write(
        &game,
        r#"{"n":4,"tag":"wmin","coalitions":["1100","1010","1001","0110"]}"#,
    )
    .unwrap();
    let out = run(&["convert", "-i", game.to_str().unwrap(), "--to", "weights"]);
    assert!(out.status.success());
    let value: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(value["result"], "ok");
    assert_eq!(value["game"]["tag"], "weights");

    // Converting the produced weights back to wmin (exponential route)
    // recovers the original list.
    let weights = dir.path().join("w.json");
    std::fs::write(&weights, value["game"].to_string()).unwrap();
    let back = run(&[
        "convert",
        "-i",
        weights.to_str().unwrap(),
        "--to",
        "wmin",
        "--allow-exponential",
    ]);
    assert!(back.status.success());
    let value: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&back.stdout).trim()).unwrap();
    let coalitions: Vec<&str> = value["game"]["coalitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(coalitions, vec!["1100", "1010", "1001", "0110"]);
}

#[test]
fn convert_reports_domain_failures_and_policy() {
    let dir = tempfile::tempdir().unwrap();
    let game = dir.path().join("nw.json");
    std::fs::write(&game, r#"{"n":4,"tag":"wmin","coalitions":["1100","0011"]}"#).unwrap();
    let out = run(&["convert", "-i", game.to_str().unwrap(), "--to", "weights"]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(value["result"], "not_weighted");

    let roof = dir.path().join("roof.json");
    std::fs::write(&roof, r#"{"n":4,"tag":"roof","coalitions":["0110"]}"#).unwrap();
    let out = run(&["convert", "-i", roof.to_str().unwrap(), "--to", "ceil"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exponential"));
}

#[test]
fn banzhaf_shorthand() {
    let out = run(&["banzhaf", "--weights", "2;1,1,1"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1/3,1/3,1/3");

    let out = run(&["banzhaf", "--weights", "1000;997,1,1,1", "--json"]);
    let value: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(value["raw"], serde_json::json!([1, 1, 1, 1]));
    assert_eq!(value["normalized"][0], "1/4");
}

#[test]
fn sample_is_deterministic() {
    let a = run(&["sample", "-n", "4", "--seed", "7"]);
    let b = run(&["sample", "-n", "4", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sample", "-n", "4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn solve_reaches_zero_error() {
    let out = run(&["solve", "--target-inline", "0.6,0.2,0.2"]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let report = lines.last().unwrap();
    assert_eq!(report["exhausted"], true);
    assert_eq!(report["games_scored"], 10);
    let best = report["improvements"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(best["error"], 0.0);
    // Improvement lines precede the report and strictly decrease.
    let improvements: Vec<f64> = lines[..lines.len() - 1]
        .iter()
        .map(|l| l["error"].as_f64().unwrap())
        .collect();
    assert!(improvements.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn solve_budget_run_is_not_exhausted() {
    let out = run(&[
        "solve",
        "--target-inline",
        "0.30,0.20,0.15,0.10,0.10,0.05,0.05,0.05",
        "--games-budget",
        "500",
    ]);
    assert!(out.status.success());
    let lines = stdout_lines(&out);
    let report = lines.last().unwrap();
    assert_eq!(report["exhausted"], false);
    assert_eq!(report["games_scored"], 500);
}

#[test]
fn solve_rejects_bad_targets() {
    let out = run(&["solve", "--target-inline", "0.2,0.8"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["solve", "--target-inline", "0.5,0.4"]);
    assert_eq!(out.status.code(), Some(2));
    // Sorting rescues a non-canonical target.
    let out = run(&["solve", "--target-inline", "0.2,0.8", "--sort-target"]);
    assert!(out.status.success());
}

#[test]
fn sigint_flushes_partial_output_and_exits_130() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let mut child = wvg()
        .args([
            "solve",
            "--target-inline",
            "0.30,0.20,0.15,0.10,0.10,0.05,0.05,0.05",
            "--games-budget",
            "100000000",
            "--report",
            report.to_str().unwrap(),
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("spawn wvg solve");

    // Wait for the first improvement line so the run is demonstrably
    // underway, then interrupt it.
    let stdout = child.stdout.take().unwrap();
    let mut reader = BufReader::new(stdout);
    let mut first_line = String::new();
    reader.read_line(&mut first_line).unwrap();
    assert!(first_line.contains("error"), "no improvement seen: {first_line}");
    unsafe {
        libc::kill(child.id() as i32, libc::SIGINT);
    }
    let start = std::time::Instant::now();
    let status = loop {
        match child.try_wait().unwrap() {
            Some(status) => break status,
            None if start.elapsed() > Duration::from_secs(30) => {
                let _ = child.kill();
                panic!("solver did not react to SIGINT");
            }
            None => std::thread::sleep(Duration::from_millis(20)),
        }
    };
    assert_eq!(status.code(), Some(130));
    // The partial report was still flushed, and it is valid JSON.
    let text = std::fs::read_to_string(&report).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["exhausted"], false);
}

#[test]
fn experiments_histogram_sums_to_known_total() {
    let out = run(&["experiments", "--exp", "2", "-n", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut total = 0u64;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields[0] == "4" {
            total += fields[2].parse::<u64>().unwrap();
        }
    }
    assert_eq!(total, 27);
}

#[test]
fn experiments_validation() {
    let out = run(&["experiments", "--exp", "9", "-n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["experiments", "--exp", "4", "-n", "5", "--instances", "2"]);
    assert_eq!(out.status.code(), Some(2)); // missing games budget
    let out = run(&[
        "experiments",
        "--exp",
        "4",
        "-n",
        "5",
        "--instances",
        "2",
        "--games-budget",
        "40",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("instance,"));
}
