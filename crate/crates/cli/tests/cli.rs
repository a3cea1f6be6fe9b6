use std::process::{Command, Output};

fn homlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homlab"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("run homlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_named_graphs() {
    let o = homlab(&["count", "--graph", "C6", "--model", "Kq:3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "66");
    let o = homlab(&[
        "count", "--graph", "K1,4", "--model", "wr", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], "113");
}

#[test]
fn count_with_lists_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let lists = dir.path().join("lists.txt");
    std::fs::write(&lists, "0,2\n0,1\n1,2\n0,1,2\n0,2\n0,1,2\n").unwrap();
    let o = homlab(&[
        "count",
        "--graph",
        "C6",
        "--model",
        "Kq:3",
        "--lists",
        lists.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&o).trim(), "17");

    let g = dir.path().join("p3.txt");
    std::fs::write(&g, "3 2\n0 1\n1 2\n").unwrap();
    let o = homlab(&[
        "count",
        "--graph",
        g.to_str().unwrap(),
        "--model",
        "hardcore",
    ]);
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn verify_exit_codes() {
    let o = homlab(&[
        "verify",
        "--ineq",
        "reverse-sidorenko",
        "--graph",
        "C6",
        "--model",
        "Kq:3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holds"));
    let o = homlab(&[
        "verify",
        "--ineq",
        "clique-max",
        "--graph",
        "K1,4",
        "--model",
        "wr",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("violated"));
    let o = homlab(&[
        "verify", "--ineq", "no-such", "--graph", "C6", "--model", "wr",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn search_writes_replays_that_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let replays = dir.path().join("replays");
    let o = homlab(&[
        "search",
        "--ineq",
        "clique-max",
        "--graph",
        "S3",
        "--graph",
        "S4",
        "--model",
        "wr",
        "--replays",
        replays.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 1);
    let replay = replays.join("finding-0.json");
    let o = homlab(&[
        "verify",
        "--replay",
        replay.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let again: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(again[0]["verdict"], "violated");
    assert_eq!(again[0]["exact"], true);
}

#[test]
fn scan_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let o = homlab(&[
        "scan",
        "--ineq",
        "reverse-sidorenko",
        "--max-vertices",
        "4",
        "--no-isolated",
        "--triangle-free",
        "--complete-looped",
        "3",
        "--jobs",
        "2",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("instance_id,graph,model,verdict,exact,slack_log10")
    );
    assert!(lines.clone().count() > 0);
    assert!(lines.all(|l| !l.contains("violated")));
}

#[test]
fn scan_finding_mode() {
    let dir = tempfile::tempdir().unwrap();
    let replays = dir.path().join("f");
    let o = homlab(&[
        "scan",
        "--ineq",
        "reverse-sidorenko",
        "--graph",
        "K3",
        "--model",
        "heps:1/10",
        "--finding-mode",
        "--replays",
        replays.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["histogram"]["violated"], 1);
    assert!(replays.join("finding-0.json").is_file());
}

#[test]
fn scan_random_models_with_seed_range() {
    let o = homlab(&[
        "scan",
        "--ineq",
        "clique-max",
        "--max-vertices",
        "3",
        "--random",
        "psd",
        "--q",
        "2..3",
        "--seeds",
        "3..8",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["model_seeds"], serde_json::json!([3, 4, 5, 6, 7]));
}

#[test]
fn lemma_and_toy() {
    let o = homlab(&["lemma", "--random", "color-holder", "--seed", "4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("l.json");
    std::fs::write(
        &f,
        r#"{"lemma":"local-123","f12":[["3/2"],["2/3"]],"f23":[["1","0"]],"beta":1,"gamma":2,"delta":2}"#,
    )
    .unwrap();
    let o = homlab(&["lemma", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality"));

    let o = homlab(&["toy-c6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().nth(1).unwrap().starts_with("toy-c6,"));
}

#[test]
fn bad_lists_are_errors() {
    let o = homlab(&[
        "count", "--graph", "C4", "--model", "Kq:3", "--lists", "0;1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lists"));
}
