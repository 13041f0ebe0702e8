use std::path::Path;
use std::process::{Command, Output};

use rbf_adapt::{select_shape, KernelFamily, PointSet, ShapeSearchConfig, TargetFunction};
use rbf_adapt_cli::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rbf-adapt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_nodes(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn assert_distinct(nodes: &[Vec<f64>]) {
    for i in 0..nodes.len() {
        for j in 0..i {
            let d: f64 = nodes[i].iter().zip(&nodes[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            assert!(d.sqrt() > 1e-12, "nodes {i} and {j} coincide");
        }
    }
}

#[test]
fn run_f1_m4_writes_report_and_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let nodes = dir.path().join("nodes.csv");
    let o = run(&[
        "run",
        "--target",
        "f1",
        "--kernel",
        "m4",
        "--theta-refine",
        "1e-6",
        "--theta-coarse",
        "1e-8",
        "--out",
        path_str(&out),
        "--nodes",
        path_str(&nodes),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let json = std::fs::read_to_string(&out).unwrap();
    let report = RunReport::from_json(&json).unwrap();
    assert!(report.summary.converged);
    assert!(report.summary.mae <= 2e-6);
    assert_eq!(report.to_canonical_json().unwrap(), json, "re-serialization differs");
    assert_eq!(report.history.len(), report.summary.iter + 1);

    let rows = read_nodes(&nodes);
    assert_eq!(rows.len(), report.summary.n_fin);
    assert!(rows.iter().all(|r| r.len() == 1));
    assert_distinct(&rows);
}

#[test]
fn run_f5_imq_dumps_2d_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let nodes = dir.path().join("nodes.csv");
    let o = run(&[
        "run",
        "--target",
        "f5",
        "--kernel",
        "imq",
        "--theta-refine",
        "1e-3",
        "--out",
        path_str(&out),
        "--nodes",
        path_str(&nodes),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = RunReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = read_nodes(&nodes);
    assert_eq!(rows.len(), report.summary.n_fin);
    assert!(rows.iter().all(|r| r.len() == 2));
    assert_distinct(&rows);
}

#[test]
fn reports_are_identical_apart_from_wall_time() {
    let args = ["run", "--target", "f3", "--kernel", "m6", "--theta-refine", "1e-5"];
    let strip = |o: Output| {
        let mut r = RunReport::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
        r.summary.wall_time_s = 0.0;
        r.to_canonical_json().unwrap()
    };
    assert_eq!(strip(run(&args)), strip(run(&args)));
}

#[test]
fn non_convergence_has_its_own_exit_code() {
    let o = run(&[
        "run",
        "--target",
        "f1",
        "--kernel",
        "m6",
        "--theta-refine",
        "1e-9",
        "--theta-coarse",
        "1e-12",
        "--max-iter",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let report = RunReport::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(!report.summary.converged);
    assert_eq!(report.history.len(), 2);
}

#[test]
fn usage_errors() {
    for args in [
        &["run", "--target", "f9", "--kernel", "m4", "--theta-refine", "1e-6"][..],
        &["run", "--target", "f1", "--kernel", "tps", "--theta-refine", "1e-6"],
        &["run", "--target", "f1", "--kernel", "m4"],
        &["run", "--target", "f1", "--kernel", "m4", "--theta-refine", "1e-9"],
        &[
            "run",
            "--target",
            "f5",
            "--kernel",
            "m4",
            "--theta-refine",
            "1e-3",
            "--n0",
            "100",
        ],
        &["table", "--id", "99"],
        &[
            "mple-scan",
            "--target",
            "f1",
            "--kernel",
            "m6",
            "--eps-min",
            "1",
            "--eps-max",
            "1",
        ],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(3), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("mple-scan"));
}

#[test]
fn bad_thread_cap_is_usage_error() {
    let o = bin()
        .args(["table", "--id", "1"])
        .env("RBF_ADAPT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

fn table(id: &str, expected_code: i32) -> Vec<Vec<String>> {
    let o = bin()
        .args(["table", "--id", id])
        .env("RBF_ADAPT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(expected_code),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn table_one_has_four_kernel_rows() {
    let rows = table("1", 0);
    assert_eq!(rows[0].join(","), "kernel,theta_refine,iter,n_fin,mae,cond,time_s");
    let kernels: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(kernels, ["imq", "m6", "m4", "m2"]);
    assert!(rows[1..].iter().all(|r| r[1] == "1e-6"));
}

#[test]
fn table_four_sweeps_threshold() {
    // The tightest threshold keeps trading nodes back and forth until
    // max_iter, so the table reports non-convergence.
    let rows = table("4", 2);
    assert_eq!(rows.len(), 5);
    assert!(rows[1..].iter().all(|r| r[0] == "m6"));
    let thetas: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(thetas, ["1e-4", "1e-5", "1e-6", "1e-7"]);
}

fn scan(args: &[&str]) -> (Option<i32>, Vec<(f64, String)>) {
    let o = run(args);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,cost"));
    let rows = lines
        .map(|l| {
            let (e, c) = l.split_once(',').unwrap();
            (e.parse().unwrap(), c.to_string())
        })
        .collect();
    (o.status.code(), rows)
}

#[test]
fn scan_minimum_matches_selected_shape() {
    let (code, rows) = scan(&["mple-scan", "--target", "f1", "--kernel", "m6", "--n0", "13"]);
    assert_eq!(code, Some(0));
    assert_eq!(rows.len(), 33);
    let costs: Vec<f64> = rows
        .iter()
        .map(|(_, c)| if c == "inf" { f64::INFINITY } else { c.parse().unwrap() })
        .collect();
    let best = (0..costs.len()).min_by(|&i, &j| costs[i].total_cmp(&costs[j])).unwrap();

    let f = TargetFunction::F1;
    let xs = rbf_adapt::linspace(-1.0, 1.0, 13);
    let values: Vec<f64> = xs.iter().map(|&x| f.value(&[x])).collect();
    let picked = select_shape(
        KernelFamily::M6,
        &PointSet::from_1d(&xs),
        &values,
        &ShapeSearchConfig::default(),
    )
    .unwrap();
    let lo = rows[best.saturating_sub(1)].0;
    let hi = rows[(best + 1).min(rows.len() - 1)].0;
    assert!(
        lo <= picked.eps_opt && picked.eps_opt <= hi,
        "{} not in [{lo}, {hi}]",
        picked.eps_opt
    );
}

#[test]
fn all_singular_scan_prints_inf_and_fails() {
    let (code, rows) = scan(&[
        "mple-scan",
        "--target",
        "f5",
        "--kernel",
        "ga",
        "--eps-min",
        "1e-4",
        "--eps-max",
        "1e-3",
    ]);
    assert_eq!(code, Some(4));
    assert_eq!(rows.len(), 33);
    assert!(rows.iter().all(|(_, c)| c == "inf"));
}
