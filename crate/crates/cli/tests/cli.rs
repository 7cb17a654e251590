use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atiyah-lab"))
        .args(args)
        .env_remove("ATIYAH_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `key = value` lines from `compute`.
fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

fn key_paths(v: &Value, prefix: &str, out: &mut BTreeSet<String>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| key_paths(v, &join(k), out)),
        Value::Array(items) => {
            let here = format!("{prefix}[]");
            if let Some(first) = items.first() {
                key_paths(first, &here, out);
            }
            out.insert(here);
        }
        _ => {
            out.insert(prefix.to_string());
        }
    }
}

#[test]
fn fixtures_are_bit_exact() {
    let cases = [
        ("figure1", "0 1 -1.32\n0 -0.5 -2\n0 1 -4\n0 2.5 -2\n"),
        ("square", "0 0 1\n0 0 0\n0 1 0\n0 1 1\n"),
        ("equilateral", "0 0 0\n0 1 0\n0 0.5 0.8660254037844386\n"),
        ("collinear3", "0 0 0\n0 1 0\n0 2 0\n"),
        ("collinear4", "0 0 0\n0 1 0\n0 2 0\n0 3 0\n"),
    ];
    for (name, expected) in cases {
        let out = lab(&["fixture", name]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), expected, "{name}");
    }
    assert_eq!(lab(&["fixture", "pentagon"]).status.code(), Some(2));
}

#[test]
fn compute_reports_determinant_and_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    for (name, d) in [
        ("collinear3", 1.0),
        ("collinear4", 1.0),
        ("equilateral", 1.125),
    ] {
        let path = dir.path().join(format!("{name}.pts"));
        fs::write(&path, stdout(&lab(&["fixture", name]))).unwrap();
        let out = lab(&["compute", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!((value(&stdout(&out), "d_re") - d).abs() < 1e-12, "{name}");
    }

    let path = dir.path().join("figure1.pts");
    fs::write(&path, stdout(&lab(&["fixture", "figure1"]))).unwrap();
    let text = stdout(&lab(&["compute", path.to_str().unwrap()]));
    assert!(value(&text, "route_rel_error") <= 1e-9);
    let p = value(&text, "p");
    assert!(
        (value(&text, "at_re") - p * value(&text, "at_ang")).abs() <= 1e-9 * value(&text, "at_re")
    );

    let path = dir.path().join("square.pts");
    fs::write(&path, stdout(&lab(&["fixture", "square"]))).unwrap();
    let text = stdout(&lab(&["compute", path.to_str().unwrap()]));
    let sqrt2 = std::f64::consts::SQRT_2;
    assert!((value(&text, "at_ang") - (48.0 + 32.0 * sqrt2)).abs() < 1e-12);
    assert!((value(&text, "e") - 8.0).abs() < 1e-12);
}

#[test]
fn compute_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    };
    assert_eq!(
        lab(&["compute", &write("bad.pts", "0 1 x\n")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["compute", &write("wide.pts", "1 2 3 4\n0 0 0\n")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["compute", &write("one.pts", "0 0 0\n")])
            .status
            .code(),
        Some(2)
    );
    let nine: String = (0..9).map(|i| format!("0 {i} 0\n")).collect();
    assert_eq!(
        lab(&["compute", &write("nine.pts", &nine)]).status.code(),
        Some(2)
    );
    assert_eq!(
        lab(&["compute", &write("dup.pts", "0 0\n1 1\n0 0\n")])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        lab(&["compute", "/nonexistent/points.pts"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        lab(&["verify", "--kind", "convex-quad", "--samples", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["verify", "--kind", "hexagon", "--samples", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&[
            "verify",
            "--kind",
            "spatial",
            "--samples",
            "5",
            "--format",
            "xml"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        lab(&[
            "verify",
            "--kind",
            "spatial",
            "--samples",
            "5",
            "--tol",
            "-1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["verify", "--kind", "spatial", "--samples", "200"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        lab(&[
            "verify",
            "--kind",
            "convex-quad",
            "--samples",
            "5",
            "--tol",
            "1e-300"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn violations_leave_reproducers() {
    let dir = tempfile::tempdir().unwrap();
    let repro = dir.path().join("repro");
    let out = lab(&[
        "verify",
        "--kind",
        "convex-quad",
        "--samples",
        "3",
        "--tol",
        "1e-300",
        "--repro-dir",
        repro.to_str().unwrap(),
        "--out",
        dir.path().join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let files: Vec<_> = fs::read_dir(&repro)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert!(!files.is_empty());
    for f in files {
        let pts = fs::read_to_string(&f).unwrap();
        let compute = lab(&["compute", f.to_str().unwrap()]);
        assert_eq!(compute.status.code(), Some(0), "{pts}");
    }
}

#[test]
fn csv_columns_match_golden() {
    let golden = include_str!("golden/verify_columns.csv");
    for kind in ["convex-quad", "spatial"] {
        let out = stdout(&lab(&[
            "verify",
            "--kind",
            kind,
            "--samples",
            "4",
            "--format",
            "csv",
        ]));
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), golden.trim_end());
        for line in lines {
            assert_eq!(line.split(',').count(), 11, "{line}");
        }
    }
    let spatial = stdout(&lab(&[
        "verify",
        "--kind",
        "spatial",
        "--samples",
        "2",
        "--format",
        "csv",
    ]));
    let row: Vec<&str> = spatial.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[4..8], ["", "", "", ""]);
    assert_eq!(row[10], "none");
}

#[test]
fn json_schema_matches_golden() {
    let golden: BTreeSet<String> = include_str!("golden/report_keys.txt")
        .lines()
        .map(str::to_string)
        .collect();
    let out = lab(&[
        "verify",
        "--kind",
        "collinear-perturbed",
        "--samples",
        "16",
        "--seed",
        "1",
        "--tol",
        "1e-300",
    ]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut keys = BTreeSet::new();
    key_paths(&doc, "", &mut keys);
    assert_eq!(keys, golden);

    let out = lab(&["verify", "--kind", "spatial", "--samples", "50"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["extremes"]["min_d_abs"].as_f64().unwrap() >= 1.0);
    assert_eq!(doc["pass_counts"]["theorem1"], Value::Null);
    assert_eq!(doc["pass_counts"]["c1"], 50);
}

#[test]
fn thread_count_comes_from_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_atiyah-lab"))
            .args(["verify", "--kind", "convex-quad", "--samples", "64"])
            .env("ATIYAH_LAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let doc: Value = serde_json::from_slice(&run("3").stdout).unwrap();
    assert_eq!(doc["run"]["threads"], 3);
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn minimize_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let square = out_dir("square");
    let out = lab(&[
        "minimize",
        "--objective",
        "D",
        "--start",
        "square",
        "--out-dir",
        &square,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let best = value(&stdout(&out), "best_value");
    assert!((1.0..=1.4572).contains(&best), "{best}");
    let trace = fs::read_to_string(format!("{square}/trace.csv")).unwrap();
    assert!(trace.starts_with("iteration,best\n0,1.457106781186547"));
    let best_pts = format!("{square}/best.pts");
    let recomputed = stdout(&lab(&["compute", &best_pts]));
    assert!((value(&recomputed, "d_re") - best).abs() <= 1e-12);

    let fig = out_dir("figure1");
    let out = lab(&[
        "minimize",
        "--objective",
        "at_ang",
        "--start",
        "figure1",
        "--out-dir",
        &fig,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(value(&stdout(&out), "best_value") >= 64.0 * (1.0 - 1e-8));

    let noop = out_dir("noop");
    let out = lab(&[
        "minimize",
        "--objective",
        "D",
        "--start",
        "seed:9",
        "--max-iter",
        "0",
        "--out-dir",
        &noop,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(value(&text, "best_value"), value(&text, "start_value"));
    assert_eq!(
        fs::read_to_string(format!("{noop}/trace.csv"))
            .unwrap()
            .lines()
            .count(),
        2
    );

    let dart = dir.path().join("dart.pts");
    fs::write(&dart, "0 0\n1 0\n0.2 0.2\n0 1\n").unwrap();
    let start = format!("file:{}", dart.display());
    let out = lab(&[
        "minimize",
        "--objective",
        "D",
        "--start",
        &start,
        "--out-dir",
        &out_dir("dart"),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        lab(&["minimize", "--objective", "E", "--out-dir", &out_dir("e")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&[
            "minimize",
            "--objective",
            "D",
            "--start",
            "seed:x",
            "--out-dir",
            &out_dir("x")
        ])
        .status
        .code(),
        Some(2)
    );
}
