use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIX_A: &str = "l1 a1 a2\nl1 a2 a3\nl1 a1 a3\nl2 a1 a2\nl2 a3 a4\n";

fn mltm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mltm"))
        .args(args)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn aucs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/aucs.edges")
}

fn fix_a(dir: &Path) -> PathBuf {
    let p = dir.join("fixa.edges");
    fs::write(&p, FIX_A).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn net_info_prints_sizes() {
    let out = mltm(&["net-info", "--network", s(&aucs())]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "5 61 224 620");
}

#[test]
fn simulate_reports_fix_a_traces() {
    let dir = tempfile::tempdir().unwrap();
    let net = fix_a(dir.path());
    let out = mltm(&[
        "simulate",
        "--network",
        s(&net),
        "--seeds",
        "a1",
        "--mu",
        "0.4",
        "--protocol",
        "or",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["gain"], 100.0);
    assert_eq!(v["diffusion_length"], 3);
    assert_eq!(v["final"].as_array().unwrap().len(), 4);
    assert_eq!(v["network"], "fixa");

    let out = mltm(&[
        "simulate",
        "--network",
        s(&net),
        "--seeds",
        "a1",
        "--mu",
        "0.4",
        "--protocol",
        "and",
        "--seed",
        "9",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["final"], serde_json::json!(["a1", "a2"]));
    assert_eq!(v["diffusion_length"], 2);
    assert_eq!(v["rng_seed"], 9);
}

#[test]
fn rank_writes_csv_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let net = fix_a(dir.path());
    let out = mltm(&["rank", "--network", s(&net), "--method", "deg-c"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "position,actor,score,method,network");
    assert_eq!(lines.len(), 5);
    let out = mltm(&[
        "rank",
        "--network",
        s(&net),
        "--method",
        "greedy",
        "--mu",
        "0.4",
        "--budget",
        "25",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().nth(1).unwrap(), "1,a3,,greedy,fixa");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let net = fix_a(dir.path());
    let n = s(&net);
    assert_eq!(code(&mltm(&["rank", "--network", n, "--method", "bogus"])), 2);
    assert_eq!(code(&mltm(&["rank", "--network", n, "--method", "greedy"])), 2);
    assert_eq!(code(&mltm(&["net-info", "--network", "/nonexistent/x.edges"])), 2);
    assert_eq!(
        code(&mltm(&["simulate", "--network", n, "--seeds", "a1", "--mu", "1.5"])),
        2
    );
    assert_eq!(
        code(&mltm(&["simulate", "--network", n, "--seeds", "nobody", "--mu", "0.5"])),
        2
    );
    assert_eq!(code(&mltm(&["frobnicate"])), 2);

    let empty = dir.path().join("empty.csv");
    fs::write(
        &empty,
        "network,method,protocol,mu,s,repetition,seed_count,gain,diffusion_length,truncated,rng_seed\n",
    )
    .unwrap();
    let out_dir = dir.path().join("an");
    assert_eq!(
        code(&mltm(&["analyze", "--results", s(&empty), "--out", s(&out_dir)])),
        2
    );

    // A single method cannot be compared with anything.
    let spec = dir.path().join("grid.json");
    fs::write(
        &spec,
        r#"{"methods": ["deg-c"], "mu_values": [0.3, 0.6], "budgets_or": [25], "budgets_and": [25]}"#,
    )
    .unwrap();
    let grid_out = dir.path().join("g");
    assert_eq!(
        code(&mltm(&[
            "grid",
            "--grid",
            s(&spec),
            "--network",
            n,
            "--out",
            s(&grid_out)
        ])),
        0
    );
    let results = grid_out.join("results.csv");
    let out = mltm(&[
        "analyze",
        "--results",
        s(&results),
        "--out",
        s(&out_dir),
        "--which",
        "wilcoxon",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn full_table_for_one_method() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("grid.json");
    fs::write(&spec, r#"{"methods": ["nghb-sd"]}"#).unwrap();
    let out_dir = dir.path().join("out");
    let out = mltm(&[
        "grid",
        "--grid",
        s(&spec),
        "--network",
        s(&aucs()),
        "--out",
        s(&out_dir),
        "--seed",
        "77",
        "--parallel",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 252);
    assert!(rows.iter().all(|r| r.ends_with(",77")));
    assert_eq!(
        fs::read_to_string(out_dir.join("failures.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );
    let grid: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("grid.json")).unwrap()).unwrap();
    assert_eq!(grid["rng_seed"], 77);
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    files
}

#[test]
fn pipeline_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let nets = dir.path().join("nets");
    fs::create_dir(&nets).unwrap();
    fs::copy(aucs(), nets.join("aucs.edges")).unwrap();
    fix_a(&nets);
    let spec = dir.path().join("grid.json");
    fs::write(
        &spec,
        r#"{"methods": ["deg-c", "random", "cbim", "v-rnk-m", "kpp-sh"], "random_repetitions": 3,
            "mu_values": [0.2, 0.5, 0.8], "budgets_or": [2, 5, 10, 20], "budgets_and": [20, 30, 40]}"#,
    )
    .unwrap();
    let run = |tag: &str| {
        let out = dir.path().join(tag);
        let grid = mltm(&[
            "grid",
            "--grid",
            s(&spec),
            "--nets",
            s(&nets),
            "--out",
            s(&out),
            "--parallel",
            "3",
        ]);
        assert_eq!(code(&grid), 0, "{}", String::from_utf8_lossy(&grid.stderr));
        let an = out.join("analysis");
        let results = out.join("results.csv");
        let analyze = mltm(&["analyze", "--results", s(&results), "--out", s(&an), "--nets", s(&nets)]);
        assert_eq!(code(&analyze), 0, "{}", String::from_utf8_lossy(&analyze.stderr));
        tree(&out)
    };
    let a = run("a");
    let b = run("b");
    assert!(a.keys().any(|k| k.ends_with("analysis/curves.csv")));
    assert!(a.keys().any(|k| k.extension().is_some_and(|e| e == "svg")));
    assert_eq!(a, b);
}
