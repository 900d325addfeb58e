use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doob-mckean"))
        .args(args)
        .env_remove(doob_mckean_harness::SEED_ENV)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn cauchy_density_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = cli(&[
        "density",
        "--kernel",
        "cauchy",
        "--t",
        "2",
        "--x",
        "1",
        "--grid",
        "-1:3:5",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,y,t,value\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 5);
    for row in &r {
        let (x, y, t, v) = (row[0], row[1], row[2], row[3]);
        assert!((v - t / (PI * ((y - x).powi(2) + t * t))).abs() < 1e-15);
    }
    assert_eq!(r[4][1], 3.0);
}

#[test]
fn doob_mckean_and_radial_grids_agree() {
    let grid = |kernel: &str| {
        let o = cli(&[
            "density", "--kernel", kernel, "--alpha", "1.5", "--t", "1", "--x", "0.5", "--grid", "0.1:4:7",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        rows(&String::from_utf8(o.stdout).unwrap())
    };
    for (a, b) in grid("doob-mckean").iter().zip(grid("radial3")) {
        assert!((a[3] - b[3]).abs() < 1e-6, "{a:?} vs {b:?}");
    }
}

#[test]
fn cauchy_only_kernels_reject_other_alphas() {
    let o = cli(&[
        "density",
        "--kernel",
        "elliot-feller",
        "--alpha",
        "1.5",
        "--grid",
        "0:1:3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = cli(&[
        "density",
        "--kernel",
        "elliot-feller",
        "--a",
        "2",
        "--x",
        "0.5",
        "--grid",
        "0:2:5",
    ]);
    assert!(o.status.success());
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!((r[0][3], r[4][3]), (0.0, 0.0));
    let o = cli(&["density", "--kernel", "dyson", "--x", "1", "--grid", "0.5:2:4"]);
    assert!(o.status.success());
}

#[test]
fn simulation_is_reproducible_and_seed_can_come_from_the_environment() {
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_doob-mckean"));
        c.args([
            "simulate", "--target", "radial3", "--alpha", "1.5", "--x", "1", "--n", "500",
        ])
        .args(extra);
        c.env_remove(doob_mckean_harness::SEED_ENV);
        if let Some(s) = env {
            c.env(doob_mckean_harness::SEED_ENV, s);
        }
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        String::from_utf8(o.stdout).unwrap()
    };
    let a = run(&["--seed", "7"], None);
    assert!(a.starts_with("r\n"));
    assert_eq!(a.lines().count(), 501);
    assert_eq!(a, run(&["--seed", "7", "--shards", "1"], None));
    assert_eq!(a, run(&[], Some("7")));
    assert_ne!(a, run(&[], None));
}

#[test]
fn simulation_targets_write_one_column_per_dimension() {
    let o = cli(&[
        "simulate", "--target", "stable", "--alpha", "0.8", "--dim", "3", "--n", "10",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("x0,x1,x2\n"));
    assert_eq!(rows(&text).len(), 10);

    let o = cli(&["simulate", "--target", "eta", "--n", "3", "--horizon", "0.01"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("time,eta0,eta1,eta2\n"), "{text}");
    assert_eq!(rows(&text)[0][1], 0.0);

    for target in ["subordinator", "pathwise"] {
        let o = cli(&["simulate", "--target", target, "--n", "20"]);
        assert!(o.status.success(), "{target}");
        assert!(rows(&String::from_utf8(o.stdout).unwrap()).iter().all(|r| r[0] >= 0.0));
    }
    let o = cli(&["simulate", "--target", "pathwise", "--alpha", "0.5", "--n", "20"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.json");
    let o = cli(&[
        "verify",
        "--suite",
        "pv-benchmarks",
        "--seed",
        "3",
        "--out",
        path(&json),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let run: doob_mckean_harness::RunReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(run.reports.len(), 3);
    assert_eq!(run.config.seed.seed, 3);

    let o = cli(&["report", "--in", path(&json), "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("name,statistic,reference,passed,meta\n"));
    assert_eq!(text.lines().count(), 4);
    let o = cli(&["report", "--in", path(&json)]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("3 checks, 0 failed"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("bad.json");
    let o = cli(&["verify", "--suite", "nope", "--out", path(&json)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!json.exists());

    let o = cli(&[
        "verify",
        "--suite",
        "pv-benchmarks",
        "--tolerance",
        "pv.sinh-integral=-1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = cli(&["verify", "--suite", "pv-benchmarks", "--tolerance", "pv.typo=1"]);
    assert_eq!(o.status.code(), Some(2));
}
