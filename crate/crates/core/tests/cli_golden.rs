//! Every `<command>__<name>.json` under `tests/fixtures` must reproduce
//! `<command>__<name>.expected.json` byte for byte, both through the library
//! entry point and the `kvn` binary. Set `KVN_BLESS=1` to rewrite the
//! expected files.

use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use kvn::cli::{run, Command, Overrides};

fn fixtures() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let name = p.file_name().unwrap().to_str().unwrap();
            name.ends_with(".json") && !name.ends_with(".expected.json")
        })
        .collect();
    out.sort();
    out
}

fn command_of(path: &Path) -> (&'static str, Command) {
    let stem = path.file_stem().unwrap().to_str().unwrap();
    let name = stem.split("__").next().unwrap();
    match name {
        "check" => ("check", Command::Check),
        "extend" => ("extend", Command::Extend),
        "complete" => ("complete", Command::Complete),
        "kernel" => ("kernel", Command::Kernel),
        "functional" => ("functional", Command::Functional),
        "commutation" => ("commutation", Command::Commutation),
        "schwarz" => ("schwarz", Command::Schwarz),
        other => panic!("unknown command prefix {other}"),
    }
}

fn expected_path(path: &Path) -> PathBuf {
    path.with_extension("expected.json")
}

#[test]
fn corpus_is_large_enough() {
    let files = fixtures();
    assert!(files.len() >= 12);
    for required in ["check__halmos_counterexample", "functional__m2_vector_state"] {
        assert!(files.iter().any(|p| p.file_stem().unwrap() == required));
    }
}

#[test]
fn library_reports_match() {
    let bless = std::env::var("KVN_BLESS").is_ok();
    for path in fixtures() {
        let input = std::fs::read_to_string(&path).unwrap();
        let report = run(command_of(&path).1, &input, &Overrides::default()).render();
        let expected = expected_path(&path);
        if bless {
            std::fs::write(&expected, &report).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&expected)
            .unwrap_or_else(|_| panic!("missing {}", expected.display()));
        assert_eq!(report, want, "{}", path.display());
    }
}

#[test]
fn binary_reports_match() {
    let tmp = std::env::temp_dir().join(format!("kvn-golden-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    for path in fixtures() {
        let (name, _) = command_of(&path);
        let out = tmp.join(path.file_name().unwrap());
        let status = Proc::new(env!("CARGO_BIN_EXE_kvn"))
            .args([name, path.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env_remove("KVN_TOL_PROFILE")
            .status()
            .unwrap();
        let got = std::fs::read_to_string(&out).unwrap();
        let want = std::fs::read_to_string(expected_path(&path)).unwrap();
        assert_eq!(got, want, "{}", path.display());
        let report: serde_json::Value = serde_json::from_str(&got).unwrap();
        let code = match report["status"].as_str().unwrap() {
            "ok" => 0,
            "invalid_input" => 1,
            _ => 2,
        };
        assert_eq!(status.code(), Some(code), "{}", path.display());
        if report["status"] == "not_extendible" {
            assert!(report["result"]["witness"].is_object(), "{}", path.display());
        }
    }
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn binary_usage_and_missing_files() {
    let bin = env!("CARGO_BIN_EXE_kvn");
    let status = Proc::new(bin).arg("bogus").output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = Proc::new(bin).arg("--help").output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    let out = Proc::new(bin).args(["check", "/nonexistent/problem.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "invalid_input");
}

#[test]
fn profile_variable_is_honoured() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let input = dir.join("check__running.json");
    let out = Proc::new(env!("CARGO_BIN_EXE_kvn"))
        .args(["check", input.to_str().unwrap(), "--tol-cmp", "1e-7"])
        .env("KVN_TOL_PROFILE", "strict")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["diagnostics"][0],
        "tolerances: rank_rel_eps=1e-12 psd_tol=1e-11 cmp_tol=1e-7"
    );
    let out = Proc::new(env!("CARGO_BIN_EXE_kvn"))
        .args(["check", input.to_str().unwrap()])
        .env("KVN_TOL_PROFILE", "sloppy")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
