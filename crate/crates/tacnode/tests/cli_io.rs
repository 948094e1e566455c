use std::path::PathBuf;
use std::process::Command;

use tacnode::cache;
use tacnode::table::parse_csv;
use tacnode::KernelGrid;
use tacnode_core::{AiryResolvent, Resolution};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tacnode"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("tacnode-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn tw_writes_requested_rows() {
    let dir = scratch("tw");
    let out = dir.join("tw.csv");
    let st = bin()
        .args([
            "--no-banner",
            "tw",
            "--sigma-grid",
            "-2:2:41",
            "--m",
            "80",
            "--T",
            "16",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(header.join(","), "sigma,q,p,u,v,det");
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[20][0], 0.0);
    let r = AiryResolvent::build(0.0, &Resolution::default()).unwrap();
    assert_eq!(rows[20][1].to_bits(), r.q().to_bits());
}

#[test]
fn kernel_json_round_trips() {
    let dir = scratch("kernel");
    let out = dir.join("k.json");
    let st = bin()
        .args([
            "--no-banner",
            "kernel",
            "--lambda",
            "1",
            "--Sigma",
            "1",
            "--tau",
            "0",
            "--grid",
            "-2:2:5",
            "--format",
            "json",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let g = KernelGrid::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((g.u.len(), g.v.len(), g.values.len()), (5, 5, 25));
    assert_eq!(g.meta.lambda, 1.0);
    assert_eq!(g.meta.big_sigma, 1.0);
    assert_eq!(g.meta.m, 80);
    // λ = 1, τ = 0 kernel is symmetric.
    assert!((g.get(0, 3) - g.get(3, 0)).abs() < 1e-10);
}

#[test]
fn sigma_and_big_sigma_give_the_same_kernel() {
    let run = |flag: &str, val: &str| {
        let o = bin()
            .args([
                "--no-banner",
                "kernel",
                "--lambda",
                "2",
                flag,
                val,
                "--grid",
                "0:1:2",
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
        KernelGrid::values_from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap()
    };
    let sigma = tacnode_core::tacnode::sigma_from_big(2.0, 0.5);
    let a = run("--Sigma", "0.5");
    let b = run("--sigma", &format!("{sigma:.17e}"));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-13);
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(
        code(&["--no-banner", "tw", "--sigma-grid", "0:1:2", "--unknown"]),
        2
    );
    assert_eq!(
        code(&[
            "--no-banner",
            "gap",
            "--lambda",
            "1",
            "--Sigma",
            "1",
            "--interval",
            "1:-1"
        ]),
        2
    );
    assert_eq!(
        code(&["--no-banner", "tw", "--sigma-grid", "-7.5:-7.5:1"]),
        3
    );
    assert_eq!(
        code(&[
            "--no-banner",
            "verify",
            "--suite",
            "compat",
            "--tol-scale",
            "1e-9"
        ]),
        4
    );
    assert_eq!(code(&["--no-banner", "verify", "--suite", "compat"]), 0);
}

#[test]
fn gap_is_printed_as_csv() {
    let o = bin()
        .args([
            "--no-banner",
            "gap",
            "--lambda",
            "1",
            "--Sigma",
            "1",
            "--interval",
            "-1:1",
        ])
        .output()
        .unwrap();
    assert!(o.status.success());
    let (h, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(h, vec!["a1", "a2", "gap"]);
    assert!(rows[0][2] > 0.0 && rows[0][2] < 1.0);
}

#[test]
fn cache_directory_is_used_and_repaired() {
    let dir = scratch("cache");
    let res = Resolution::new(60, 14.0).unwrap();
    let fresh = cache::load_or_build(0.25, &res, false, Some(&dir)).unwrap();
    let path = dir.join(cache::file_name(0.25, &res));
    let text = std::fs::read_to_string(&path).unwrap();
    let loaded = cache::from_text(&text).unwrap();
    assert_eq!(loaded.q().to_bits(), fresh.q().to_bits());

    std::fs::write(&path, &text[..text.len() / 3]).unwrap();
    let rebuilt = cache::load_or_build(0.25, &res, false, Some(&dir)).unwrap();
    assert_eq!(rebuilt.q().to_bits(), fresh.q().to_bits());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn cache_env_gives_identical_output() {
    let dir = scratch("env");
    let args = [
        "--no-banner",
        "tw",
        "--sigma-grid",
        "-1:1:3",
        "--m",
        "50",
        "--T",
        "14",
    ];
    let plain = bin().args(args).output().unwrap().stdout;
    let first = bin()
        .args(args)
        .env("TACNODE_CACHE_DIR", &dir)
        .output()
        .unwrap()
        .stdout;
    let second = bin()
        .args(args)
        .env("TACNODE_CACHE_DIR", &dir)
        .output()
        .unwrap()
        .stdout;
    assert_eq!(plain, first);
    assert_eq!(first, second);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 3);
}

#[test]
fn banner_goes_to_stderr_only() {
    let o = bin()
        .args(["tw", "--sigma-grid", "0:0:1"])
        .output()
        .unwrap();
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("sigma,"));
    assert!(String::from_utf8(o.stderr).unwrap().starts_with("tacnode "));
    let o = bin()
        .args(["--no-banner", "tw", "--sigma-grid", "0:0:1"])
        .output()
        .unwrap();
    assert!(o.stderr.is_empty());
}
