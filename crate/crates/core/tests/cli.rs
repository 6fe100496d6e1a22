use std::path::Path;
use std::process::{Command, Output};

use diskbsp::eval::{best_rotation_align, ErrorMode};
use diskbsp::io::{read_coeffs, read_pgm, write_pgm, PgmEncoding};
use diskbsp::testimages::smooth_blobs;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_diskbsp"));
    for (k, _) in std::env::vars() {
        if k.starts_with("DISKBSP_") {
            c.env_remove(k);
        }
    }
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn plan_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["plan", "--size", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("selective = 27"), "{text}");
    assert!(text.contains("m = 50"));
    assert!(text.contains("N_m = 10"));
    assert!(text.contains("K_n = 0:4 1:4 2:4"));
}

#[test]
fn invalid_size_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(dir.path(), &["plan", "--size", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(dir.path(), &["plan", "--size", "abc"]).status.code(),
        Some(2)
    );
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["dht", "--input", "nope.pgm", "--out", "a.csv"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn degenerate_inversion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let blank = diskbsp::transform::ImageGrid::zeros(16);
    write_pgm(&dir.path().join("z.pgm"), &blank, PgmEncoding::Binary).unwrap();
    for args in [
        &["dht", "--input", "z.pgm", "--out", "a.csv"][..],
        &["bsp", "--input", "a.csv", "--out", "b.csv"],
    ] {
        assert!(run(dir.path(), args).status.success());
    }
    let o = run(
        dir.path(),
        &["invert", "--input", "b.csv", "--out", "r.csv"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n=0"));
}

#[test]
fn dht_idht_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = smooth_blobs(28, 3);
    let raw = dir.path().join("in.f32");
    diskbsp::io::write_raw(&raw, &img).unwrap();
    assert!(
        run(dir.path(), &["dht", "--input", "in.f32", "--out", "a.csv"])
            .status
            .success()
    );
    assert!(run(
        dir.path(),
        &["idht", "--input", "a.csv", "--out", "back.f32"]
    )
    .status
    .success());
    let back = diskbsp::io::read_raw(&dir.path().join("back.f32")).unwrap();
    let reference = diskbsp::io::read_raw(&raw).unwrap();
    let err = diskbsp::eval::image_relative_error(&back, &reference, ErrorMode::Linear).unwrap();
    assert!(err < 0.05, "{err}");
}

#[test]
fn selective_pipeline_recovers_up_to_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let img = smooth_blobs(16, 5);
    write_pgm(&dir.path().join("in.pgm"), &img, PgmEncoding::Binary).unwrap();
    for args in [
        &["dht", "--input", "in.pgm", "--out", "a.csv"][..],
        &["bsp", "--selective", "--input", "a.csv", "--out", "b.csv"],
        &["invert", "--input", "b.csv", "--out", "r.csv"],
        &["idht", "--input", "r.csv", "--out", "r.pgm"],
    ] {
        let o = run(dir.path(), args);
        assert!(
            o.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let a = read_coeffs(&dir.path().join("a.csv"), None).unwrap();
    let r = read_coeffs(&dir.path().join("r.csv"), None).unwrap();
    let aligned = best_rotation_align(&r, &a).unwrap();
    assert!(
        aligned.rel_error_linear < 1e-8,
        "{}",
        aligned.rel_error_linear
    );
    assert_eq!(
        read_pgm(&dir.path().join("r.pgm")).unwrap().image.size(),
        16
    );

    let env: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("r.csv.json")).unwrap()).unwrap();
    assert!(env["inversion"]["gauge"].is_string());
    assert_eq!(env["provenance"]["flags"][0], "invert");
}

#[test]
fn full_pipeline_matches_selective() {
    let dir = tempfile::tempdir().unwrap();
    write_pgm(
        &dir.path().join("in.pgm"),
        &smooth_blobs(8, 2),
        PgmEncoding::Ascii,
    )
    .unwrap();
    for args in [
        &[
            "dht",
            "--backend",
            "fast",
            "--input",
            "in.pgm",
            "--out",
            "a.csv",
        ][..],
        &["bsp", "--full", "--input", "a.csv", "--out", "f.csv"],
        &["bsp", "--input", "a.csv", "--out", "s.csv"],
        &["invert", "--full", "--input", "f.csv", "--out", "rf.csv"],
        &["invert", "--input", "s.csv", "--out", "rs.csv"],
    ] {
        assert!(run(dir.path(), args).status.success(), "{args:?}");
    }
    let f = read_coeffs(&dir.path().join("rf.csv"), None).unwrap();
    let s = read_coeffs(&dir.path().join("rs.csv"), None).unwrap();
    assert_eq!(f.values(), s.values());
}

#[test]
fn bench_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &[
            "bench",
            "--sizes",
            "8,16",
            "--bispectra-only",
            "--out",
            "b.csv",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("speedup L=16"));
    let text = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("L,operation,backend,wall_ms,repeats,count")
    );
    assert_eq!(lines.count(), 4);
    assert!(dir.path().join("b.csv.json").exists());
    assert_eq!(
        run(dir.path(), &["bench", "--sizes", "8", "--repeats", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn mra_is_deterministic_and_configurable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--seed", "4", "mra", "--nx", "5,8", "--sigma2", "0,0.001", "--seeds", "2", "--out",
    ];
    let mut first = args.to_vec();
    first.push("one");
    let mut second = args.to_vec();
    second.push("two");
    assert!(run(dir.path(), &first).status.success());
    assert!(run(dir.path(), &second).status.success());
    let strip = |p: &str| -> Vec<String> {
        std::fs::read_to_string(dir.path().join(p).join("report.csv"))
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect()
    };
    let one = strip("one");
    assert_eq!(one[0], "nx,sigma2,seed,rel_error");
    assert_eq!(one.len(), 1 + 2 * 2 * 2);
    assert_eq!(one, strip("two"));
    assert_eq!(
        std::fs::read_dir(dir.path().join("one/estimates"))
            .unwrap()
            .count(),
        16
    );
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("one/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["provenance"]["seed"], 4);
    assert_eq!(summary["cells"].as_array().unwrap().len(), 4);

    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"nx": [6], "seeds": 1, "sigma2": [0]}"#,
    )
    .unwrap();
    let o = run(
        dir.path(),
        &["--config", "cfg.json", "mra", "--out", "three"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("three/report.csv"))
            .unwrap()
            .lines()
            .count(),
        2
    );

    let o = bin()
        .current_dir(dir.path())
        .env("DISKBSP_SEED", "4")
        .args([
            "mra", "--nx", "5,8", "--sigma2", "0,0.001", "--seeds", "2", "--out", "four",
        ])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(one, strip("four"));
}
