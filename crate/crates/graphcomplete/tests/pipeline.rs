//! End-to-end CLI exercise on a small synthetic dataset: every subcommand
//! runs once and the produced artifacts parse.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_graphcomplete"))
        .args(args)
        .output()
        .expect("spawn cli");
    assert!(
        out.status.success(),
        "{:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn run_expect_failure(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_graphcomplete"))
        .args(args)
        .output()
        .expect("spawn cli");
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(dir: &Path, s: &str) -> String {
    dir.join(s).display().to_string()
}

#[test]
fn full_pipeline_produces_consistent_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();

    let stdout = run(&[
        "sbm", "--n", "120", "--k", "3", "--p-in", "0.25", "--p-out", "0.01",
        "--feature-dim", "4", "--feature-noise", "0.2", "--hide-frac", "0.5",
        "--sparse-frac", "0.3", "--seed", "5", "--out", &p(d, "data"),
    ]);
    assert!(stdout.contains("Sparsity"));
    assert!(d.join("data/edges.csv").exists());
    assert!(d.join("data/hidden_edges.csv").exists());

    let stdout = run(&[
        "stats", "--graph", &p(d, "data/edges.csv"), "--num-nodes", "120",
        "--out", &p(d, "stats"),
    ]);
    assert!(stdout.contains("Number of nodes              120"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("stats/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["num_nodes"], 120);

    run(&[
        "split", "--graph", &p(d, "data/edges.csv"), "--num-nodes", "120",
        "--mode", "inductive", "--val-frac", "0.1", "--test-frac", "0.1",
        "--seed", "5", "--out", &p(d, "ind"),
    ]);
    run(&[
        "train-inductive", "--split", &p(d, "ind"), "--features", &p(d, "data/features.csv"),
        "--encoder", "mlp", "--embed-dim", "12", "--epochs", "40", "--seed", "5",
        "--out", &p(d, "deal"),
    ]);
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("deal/metrics.json")).unwrap())
            .unwrap();
    assert!(metrics["test"]["roc_auc"].as_f64().unwrap() > 0.0);
    let history = std::fs::read_to_string(d.join("deal/history.csv")).unwrap();
    assert!(history.starts_with("epoch,loss,val_auc"));
    assert_eq!(history.lines().count(), 41);

    run(&[
        "evaluate", "--model-kind", "deal", "--model", &p(d, "deal"),
        "--split", &p(d, "ind"), "--features", &p(d, "data/features.csv"),
        "--out", &p(d, "deal_eval"),
    ]);
    let eval: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("deal_eval/metrics.json")).unwrap())
            .unwrap();
    // evaluate reproduces the training-time test metrics
    assert_eq!(eval["test"]["roc_auc"], metrics["test"]["roc_auc"]);

    run(&[
        "enrich", "--model", &p(d, "deal"), "--graph", &p(d, "data/edges.csv"),
        "--num-nodes", "120", "--features", &p(d, "data/features.csv"),
        "--d-max", "5", "--p-min", "0.85", "--out", &p(d, "enr"),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("enr/report.json")).unwrap())
            .unwrap();
    let added = std::fs::read_to_string(d.join("enr/added_edges.csv")).unwrap();
    assert_eq!(
        report["edges_added"].as_u64().unwrap() as usize,
        added.lines().count()
    );

    run(&[
        "split", "--graph", &p(d, "enr/enriched_edges.csv"), "--num-nodes", "120",
        "--mode", "transductive", "--val-frac", "0.1", "--test-frac", "0.1",
        "--seed", "5", "--out", &p(d, "tr"),
    ]);
    run(&[
        "train-transductive", "--split", &p(d, "tr"), "--features", &p(d, "data/features.csv"),
        "--kind", "sage", "--hidden-dim", "12", "--out-dim", "6", "--epochs", "40",
        "--seed", "5", "--out", &p(d, "gnn"),
    ]);
    run(&[
        "evaluate", "--model-kind", "gnn", "--model", &p(d, "gnn"),
        "--split", &p(d, "tr"), "--features", &p(d, "data/features.csv"),
        "--out", &p(d, "gnn_eval"),
    ]);
    let train_m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("gnn/metrics.json")).unwrap())
            .unwrap();
    let eval_m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("gnn_eval/metrics.json")).unwrap())
            .unwrap();
    assert_eq!(train_m["test"], eval_m["test"]);

    let stdout = run(&[
        "search", "--target", "gnn", "--split", &p(d, "tr"),
        "--features", &p(d, "data/features.csv"), "--trials", "3", "--seed", "1",
        "--config", &write_config(d),
        "--out", &p(d, "search"),
    ]);
    assert!(stdout.contains("best trial"));
    let trials = std::fs::read_to_string(d.join("search/trials.csv")).unwrap();
    assert!(trials.starts_with("rank,trial,val_auc,config"));
    assert_eq!(trials.lines().count(), 4);
}

/// Flat dotted-key config keeping search trials cheap.
fn write_config(d: &Path) -> String {
    let path = d.join("config.json");
    std::fs::write(
        &path,
        r#"{"gnn.epochs": 10, "gnn.hidden_dim": 8, "gnn.gat_heads": 2}"#,
    )
    .unwrap();
    path.display().to_string()
}

#[test]
fn cli_reports_diagnostics_on_bad_input() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let stderr = run_expect_failure(&[
        "stats", "--graph", &p(d, "missing.csv"), "--num-nodes", "10",
    ]);
    assert!(stderr.contains("error"));

    // malformed edge file names the offending line
    std::fs::write(d.join("bad.csv"), "0,1\n1,x\n").unwrap();
    let stderr = run_expect_failure(&[
        "stats", "--graph", &p(d, "bad.csv"), "--num-nodes", "10",
    ]);
    assert!(stderr.contains("bad.csv:2"), "{stderr}");

    // flag overriding config: invalid p_min is rejected with its value
    std::fs::write(d.join("edges.csv"), "0,1\n").unwrap();
    let stderr = run_expect_failure(&[
        "split", "--graph", &p(d, "edges.csv"), "--num-nodes", "2",
        "--mode", "sideways", "--out", &p(d, "s"),
    ]);
    assert!(stderr.contains("sideways"), "{stderr}");
}

#[test]
fn config_file_applies_and_flags_win() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    run(&[
        "sbm", "--n", "60", "--k", "2", "--p-in", "0.4", "--p-out", "0.02",
        "--feature-dim", "3", "--feature-noise", "0.1", "--hide-frac", "0.0",
        "--sparse-frac", "0.0", "--seed", "3", "--out", &p(d, "data"),
    ]);
    run(&[
        "split", "--graph", &p(d, "data/edges.csv"), "--num-nodes", "60",
        "--mode", "inductive", "--val-frac", "0.1", "--test-frac", "0.1",
        "--seed", "3", "--out", &p(d, "ind"),
    ]);
    std::fs::write(d.join("cfg.json"), r#"{"deal.epochs": 5, "deal.embed_dim": 8}"#).unwrap();

    // config alone: 5 epochs of history
    run(&[
        "--config", &p(d, "cfg.json"),
        "train-inductive", "--split", &p(d, "ind"),
        "--features", &p(d, "data/features.csv"), "--out", &p(d, "m1"),
    ]);
    let h1 = std::fs::read_to_string(d.join("m1/history.csv")).unwrap();
    assert_eq!(h1.lines().count(), 6);

    // flag overrides the config value
    run(&[
        "--config", &p(d, "cfg.json"),
        "train-inductive", "--split", &p(d, "ind"),
        "--features", &p(d, "data/features.csv"), "--epochs", "8", "--out", &p(d, "m2"),
    ]);
    let h2 = std::fs::read_to_string(d.join("m2/history.csv")).unwrap();
    assert_eq!(h2.lines().count(), 9);
}
