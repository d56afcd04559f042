use std::path::Path;
use std::process::{Command, Output};

use strippack::{validate_packing, Instance, StripPacking};

fn strippack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strippack"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&strippack(&["gen", "uniform", "--n", "20", "--seed", "5"]));
    let b = stdout(&strippack(&["--seed", "5", "gen", "uniform", "--n", "20"]));
    assert_eq!(a, b);
    let inst = Instance::from_json(&a).unwrap();
    assert_eq!(inst.len(), 20);
    let c = stdout(&strippack(&["gen", "uniform", "--n", "20", "--seed", "6"]));
    assert_ne!(a, c);
}

#[test]
fn pack_round_trip_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("i.json");
    let pack_path = dir.path().join("p.json");
    let svg_path = dir.path().join("p.svg");
    let (i, p, s) = (
        inst_path.to_str().unwrap(),
        pack_path.to_str().unwrap(),
        svg_path.to_str().unwrap(),
    );
    stdout(&strippack(&[
        "gen", "tiling", "--n", "50", "--height", "4", "--seed", "2", "-o", i,
    ]));
    for alg in ["bp-ffd", "bp-sh:toy3", "nfdh"] {
        stdout(&strippack(&[
            "pack", "offline", "--alg", alg, "--c", "3", "-i", i, "-o", p, "--svg", s,
        ]));
        let inst = Instance::from_json(&std::fs::read_to_string(&inst_path).unwrap()).unwrap();
        let packing =
            StripPacking::from_json(&std::fs::read_to_string(&pack_path).unwrap()).unwrap();
        assert!(validate_packing(&inst, &packing).unwrap().is_ok());
        assert!(std::fs::read_to_string(&svg_path)
            .unwrap()
            .starts_with("<svg"));
    }
    let params = fixture("two_space.json");
    for args in [
        vec!["--alg", "gp", "--params", params.as_str()],
        vec!["--alg", "gp", "--eps", "0.2"],
        vec!["--alg", "shelf-harmonic:3", "--r", "0.8"],
    ] {
        let mut full = vec!["pack", "online", "-i", i, "-o", p];
        full.extend(args);
        stdout(&strippack(&full));
    }
    stdout(&strippack(&["render", "-i", i, "-p", p, "-o", s]));
}

#[test]
fn validation_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let i = dir.path().join("i.json");
    let p = dir.path().join("p.json");
    std::fs::write(
        &i,
        r#"{"name":"x","rects":[{"id":0,"w":0.6,"h":0.5},{"id":1,"w":0.6,"h":0.5}]}"#,
    )
    .unwrap();
    std::fs::write(
        &p,
        r#"{"height":0.5,"placements":[{"id":0,"x":0,"y":0},{"id":1,"x":0.3,"y":0}]}"#,
    )
    .unwrap();
    let out = strippack(&[
        "render",
        "-i",
        i.to_str().unwrap(),
        "-p",
        p.to_str().unwrap(),
        "-o",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid packing"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(strippack(&["pack", "offline"]).status.code(), Some(2));
    assert_eq!(strippack(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        strippack(&["binpack", "--alg", "bogus", "--sizes", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strippack(&["binpack", "--alg", "nf", "--sizes", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strippack(&["gen", "tiling", "--n", "2", "--height", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strippack(&["analyze", "bound", "--params", "/no/such.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn binpack_reports_bins_and_optimum() {
    let out = stdout(&strippack(&[
        "binpack",
        "--alg",
        "ffd",
        "--sizes",
        "0.6,0.5,0.4,0.3",
        "--opt",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bin_count"], 2);
    assert_eq!(v["opt"], 2);
    let csv = stdout(&strippack(&[
        "binpack",
        "--alg",
        "sh:toy3",
        "--sizes",
        "0.6,0.3,0.3",
        "--format",
        "csv",
    ]));
    assert!(csv.starts_with("bin,item,size\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn analyze_bound_and_weight() {
    let out = stdout(&strippack(&["analyze", "bound", "--params", "harmonic:2"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], 1.75);
    let out = stdout(&strippack(&[
        "analyze",
        "bound",
        "--params",
        &fixture("two_space.json"),
        "--maximal-only",
    ]));
    assert!(
        serde_json::from_str::<serde_json::Value>(&out).unwrap()["value"]
            .as_f64()
            .unwrap()
            > 1.0
    );
    assert_eq!(
        strippack(&["analyze", "bound", "--params", "harmonic:12", "--cap", "10"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let i = dir.path().join("i.json");
    std::fs::write(&i, r#"{"name":"one","rects":[{"id":0,"w":0.6,"h":0.5}]}"#).unwrap();
    let out = stdout(&strippack(&[
        "analyze",
        "weight",
        "-i",
        i.to_str().unwrap(),
        "--params",
        "harmonic:2",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["consolidated"], 0.5);
}

#[test]
fn bench_writes_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2"] {
        let path = dir.path().join(format!("t{seed}.json"));
        stdout(&strippack(&[
            "gen",
            "tiling",
            "--n",
            "80",
            "--height",
            "5",
            "--seed",
            seed,
            "-o",
            path.to_str().unwrap(),
        ]));
    }
    let pattern = dir.path().join("t*.json").display().to_string();
    let csv = stdout(&strippack(&[
        "bench",
        "--instances",
        &pattern,
        "--algs",
        "bp-ffd,nfdh,ffdh,gp",
        "--eps",
        "0.25",
        "--c",
        "3",
    ]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,algorithm,n,c,r,eps,k,height,lower_bound,known_opt,ratio,wall_ms"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert!(row[10].parse::<f64>().unwrap() >= 1.0 - 1e-9);
    }
    assert_eq!(
        strippack(&["bench", "--instances", &pattern, "--algs", "skyline"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        strippack(&[
            "bench",
            "--instances",
            "/nonexistent/*.json",
            "--algs",
            "nfdh"
        ])
        .status
        .code(),
        Some(2)
    );
}
