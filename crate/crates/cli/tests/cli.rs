use std::path::Path;
use std::process::{Command, Output};

use localp2::rational::q;
use localp2::solver::tables::TableKind;
use localp2_cli::{load_tables, table_from_csv};

fn localp2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localp2"))
        .args(args)
        .env_remove("LOCALP2_MAX_GENUS")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_then_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("json");
    let o = localp2(&["compute", "--max-genus", "2", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = load_tables(&out.join("tables.json")).unwrap();
    assert_eq!(t.gw_y[&(0, 1)], q(3, 1));
    assert_eq!(t.gw_y[&(2, 3)], q(3, 20));
    assert_eq!(t.gw_orb[&(0, 3)], q(1, 3));
    assert_eq!(t.gw_con[&(2, -2)], q(-1, 80));

    let csv_dir = dir.path().join("csv");
    let o = localp2(&["export", "--from", s(&out.join("tables.json")), "--format", "csv", "--out", s(&csv_dir)]);
    assert!(o.status.success());
    let gw = std::fs::read_to_string(csv_dir.join("gw_y.csv")).unwrap();
    assert_eq!(table_from_csv(&gw).unwrap(), t.gw_y);
    assert_eq!(load_tables(&csv_dir).unwrap(), t);

    let md_dir = dir.path().join("md");
    let o = localp2(&["export", "--from", s(&csv_dir), "--format", "md", "--out", s(&md_dir)]);
    assert!(o.status.success());
    let md = std::fs::read_to_string(md_dir.join("tables.md")).unwrap();
    assert!(md.contains("| 0 | 3 | -45/8 |"), "{md}");
}

#[test]
fn verify_tables_passes_at_low_genus() {
    let o = localp2(&["verify", "tables", "--max-genus", "3"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS table gw_y"));
}

#[test]
fn changed_input_reports_first_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("inputs.json");
    std::fs::write(&inputs, r#"{"2": {"gw0": "1", "gv": {"1": "-10", "2": "-102"}}}"#).unwrap();
    let o = localp2(&["verify", "tables", "--max-genus", "2", "--mode", "gw-input", "--inputs", s(&inputs)]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("first: gw_y genus 2 degree 1: expected 1/80, got -799/80"), "{stdout}");
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"max_genus": 9, "max_degree": 4, "a": "1/3", "format": "md"}"#).unwrap();
    let out = dir.path().join("out");
    let o = localp2(&["compute", "--config", s(&cfg), "--max-genus", "2", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let md = std::fs::read_to_string(out.join("tables.md")).unwrap();
    assert!(md.contains(&format!("## {}", TableKind::GwY.title())));
    assert!(!md.contains("| 5 |"));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["compute", "--a", "one/two"],
        vec!["compute", "--orders", "zz=4"],
        vec!["compute", "--max-genus", "2", "--mode", "gap", "--inputs", "/nonexistent/inputs.json"],
    ] {
        let o = localp2(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = localp2(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    for _ in 0..2 {
        let o = localp2(&["compute", "--max-genus", "3", "--cache", s(&cache), "--out", s(&dir.path().join("o"))]);
        assert!(o.status.success());
    }
    assert!(cache.join("manifest.json").exists());
    let files = std::fs::read_dir(&cache).unwrap().count();
    assert_eq!(files, 1 + 2 * 4);
}
