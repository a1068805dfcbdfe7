use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dualshift(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualshift"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn dualshift")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = dualshift(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path) {
    ok(
        dir,
        &[
            "gen",
            "--m",
            "16",
            "--n",
            "12",
            "--row-communities",
            "2",
            "--col-communities",
            "3",
            "--seed",
            "2",
            "--out",
            "d",
        ],
    );
}

const GRAPHS: [&str; 4] = [
    "--row-graph",
    "d/row_graph.edges",
    "--col-graph",
    "d/col_graph.edges",
];

#[test]
fn sample_complete_eval_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generate(dir);
    for f in [
        "ratings.csv",
        "truth.csv",
        "row_graph.edges",
        "col_graph.edges",
        "row_labels.txt",
    ] {
        assert!(dir.join("d").join(f).is_file(), "{f} missing");
    }

    for (method, extra) in [
        ("gcs", vec![]),
        ("igcs", vec!["--zeta", "2"]),
        ("random", vec![]),
        ("aopt", vec!["--pool-size", "5"]),
    ] {
        let out = format!("{method}.csv");
        let mut args = vec![
            "sample", "--method", method, "--budget", "0.25", "--out", &out,
        ];
        args.extend(GRAPHS);
        args.extend(extra);
        ok(dir, &args);
        let lines = fs::read_to_string(dir.join(&out)).unwrap();
        assert_eq!(lines.lines().count(), 1 + 48, "{method}");
        let meta: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.join(format!("{method}.json"))).unwrap())
                .unwrap();
        assert_eq!(meta["method"], method);
        assert_eq!(meta["K"], 48);
    }

    let mut args = vec![
        "complete",
        "--ratings",
        "d/ratings.csv",
        "--omega",
        "gcs.csv",
        "--out",
        "x.csv",
        "--report",
        "r.json",
    ];
    args.extend(GRAPHS);
    let summary = ok(dir, &args);
    assert!(summary.contains("\"residual\""));
    assert!(dir.join("r.json").is_file());

    let all = ok(
        dir,
        &["eval", "--estimate", "x.csv", "--truth", "d/truth.csv"],
    );
    assert!(all.contains("over 192 entries"), "{all}");
    let seen = ok(
        dir,
        &[
            "eval",
            "--estimate",
            "x.csv",
            "--truth",
            "d/truth.csv",
            "--entries",
            "gcs.csv",
        ],
    );
    let rmse: f64 = seen.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(rmse < 1.0, "{seen}");
}

#[test]
fn sample_respects_pool_and_initial() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generate(dir);
    let pool: String = std::iter::once("row,col".to_string())
        .chain((0..12).flat_map(|j| (0..4).map(move |i| format!("{i},{j}"))))
        .collect::<Vec<_>>()
        .join("\n");
    fs::write(dir.join("pool.csv"), pool).unwrap();
    fs::write(dir.join("init.csv"), "row,col\n0,0\n1,1\n").unwrap();
    let mut args = vec![
        "sample",
        "--method",
        "gcs",
        "--budget",
        "10",
        "--pool",
        "pool.csv",
        "--initial",
        "init.csv",
        "--out",
        "s.csv",
    ];
    args.extend(GRAPHS);
    ok(dir, &args);
    let text = fs::read_to_string(dir.join("s.csv")).unwrap();
    for line in text.lines().skip(1) {
        let (i, j) = line.split_once(',').unwrap();
        let (i, j): (usize, usize) = (i.parse().unwrap(), j.parse().unwrap());
        assert!(i < 4, "{line} outside the pool");
        assert!(
            (i, j) != (0, 0) && (i, j) != (1, 1),
            "{line} was already observed"
        );
    }
}

#[test]
fn graph_subcommand_builds_both_kinds() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generate(dir);
    ok(
        dir,
        &[
            "graph",
            "--kind",
            "content",
            "--ratings",
            "d/ratings.csv",
            "--axis",
            "cols",
            "--out",
            "c.edges",
        ],
    );
    assert!(
        fs::read_to_string(dir.join("c.edges"))
            .unwrap()
            .lines()
            .count()
            > 0
    );
    let feats: String = (0..16).map(|i| format!("{},{}\n", i / 8, i % 3)).collect();
    fs::write(dir.join("f.csv"), feats).unwrap();
    ok(
        dir,
        &[
            "graph",
            "--kind",
            "features",
            "--features",
            "f.csv",
            "--neighbors",
            "3",
            "--out",
            "f.edges",
        ],
    );
    assert!(dir.join("f.edges").is_file());
}

#[test]
fn experiment_and_metrics_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("exp.toml"),
        r#"
seeds = [0, 1]
budgets = [6, 12]
methods = ["gcs", "random"]

[dataset]
kind = "synthetic"
m = 10
n = 8
row_communities = 2
col_communities = 2
"#,
    )
    .unwrap();
    let out = ok(dir, &["experiment", "--config", "exp.toml", "--out", "res"]);
    assert!(out.contains("8 cells succeeded, 0 failed"), "{out}");
    let summary = ok(dir, &["eval", "--metrics", "res/metrics.csv"]);
    let lines: Vec<_> = summary.lines().collect();
    assert_eq!(lines[0], "method,K,runs,mean_rmse,std_rmse");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2) == Some("2")));
}

#[test]
fn bad_input_fails_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    generate(dir);
    let mut args = vec![
        "sample", "--method", "gcs", "--budget", "5000", "--out", "s.csv",
    ];
    args.extend(GRAPHS);
    let out = dualshift(dir, &args);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = dualshift(
        dir,
        &[
            "sample", "--method", "nope", "--budget", "1", "--out", "s.csv",
        ],
    );
    assert!(!out.status.success());
    let out = dualshift(dir, &["experiment", "--config", "missing.toml"]);
    assert!(!out.status.success());
}
