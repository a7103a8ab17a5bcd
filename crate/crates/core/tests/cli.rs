use std::process::Command;

fn podles(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_podles")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn verify_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout, _) = podles(&["verify", "--q", "0.5", "--shells", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["config"]["shells"], 6);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 50);
    for c in checks {
        for key in ["check", "paper_anchor", "q", "shells", "p", "z", "residual", "tolerance", "passed"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
}

#[test]
fn verify_is_deterministic() {
    let a = podles(&["verify", "--q", "0.3", "--shells", "5"]);
    let b = podles(&["verify", "--q", "0.3", "--shells", "5"]);
    assert_eq!(a, b);
}

#[test]
fn non_equivariant_j_fails_verification() {
    let (code, stdout, _) = podles(&["verify", "--q", "0.5", "--shells", "6", "--p", "1", "--format", "csv"]);
    assert_eq!(code, 1);
    assert!(stdout.lines().any(|l| l.starts_with("reality.j_equivariance.e,") && l.ends_with(",false")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# classical point\nq = 1\nshells = 2\nformat = csv\n").unwrap();
    let (code, stdout, _) = podles(&["spectrum", "--config", cfg.to_str().unwrap(), "--shells", "1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().count(), 3);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let (code, _, stderr) = podles(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(stderr.lines().count(), 1);
}

#[test]
fn overflow_and_usage_errors() {
    let (code, _, stderr) = podles(&["verify", "--q", "0.01", "--shells", "200"]);
    assert_eq!(code, 3);
    assert!(stderr.starts_with("podles: error[overflow]"));
    let (code, _, stderr) = podles(&["frobnicate"]);
    assert_eq!(code, 2);
    assert_eq!(stderr.lines().count(), 1);
    let (code, stdout, _) = podles(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("bound-scan"));
}

#[test]
fn scans_and_export() {
    let (code, stdout, _) = podles(&["bound-scan", "--q", "0.5", "--shells", "8,12"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some("shells,alpha,norm"));
    assert_eq!(stdout.lines().count(), 1 + 2 * 7);
    let (code, _, _) = podles(&["bound-scan", "--shells", "12,8"]);
    assert_eq!(code, 2);

    let (code, stdout, _) = podles(&["limit-scan", "--q", "0.9,0.99", "--shells", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 6);

    let (code, stdout, _) = podles(&["export", "--op", "D", "--q", "1", "--shells", "1"]);
    assert_eq!(code, 0);
    let mut lines: Vec<&str> = stdout.lines().collect();
    lines.sort();
    assert_eq!(lines.len(), 4);
    for l in lines {
        let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
        assert_eq!(v.len(), 4);
        assert_eq!((v[2], v[3]), (1.0, 0.0));
    }
}
