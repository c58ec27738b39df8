use std::process::{Command, Output};

use serde_json::Value;

fn ekd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn vertices_csv_quadrilateral() {
    let o = ekd(&["vertices", "-k", "2", "-d", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "J,v1,v2");
    let body = lines[1..].join(";");
    for v in ["0,0", "4,0", "1,3", "0,3/2"] {
        assert!(body.contains(v), "{v} missing from {body}");
    }
}

#[test]
fn vertices_interval_and_cross_check() {
    let o = ekd(&["vertices", "-k", "1", "-d", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"6\"") && text.contains("\"0\""), "{text}");
    let o = ekd(&["vertices", "-k", "3", "-d", "10", "--cross-check", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 9);
    let o = ekd(&["vertices", "-k", "5", "-d", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn member_exit_codes() {
    let o = ekd(&["member", "-k", "2", "-d", "5", "--point", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ekd(&["member", "-k", "2", "-d", "5", "--point", "1,4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ekd(&["member", "-k", "2", "-d", "5", "--point", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_verdicts() {
    let o = ekd(&["verify", "--poly", "x^5 - 10x^2 + 1", "--point", "4,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "POSITIVE");
    let o = ekd(&["verify", "--poly", "x^3 - x - 1", "--point", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "NEGATIVE");
    let o = ekd(&["verify", "--poly", "x^3 - x - 1", "--point", "2", "--precision-cap", "512"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["verdict"], "INDETERMINATE");
    let o = ekd(&["verify", "--poly", "2x^3 - 1", "--point", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_single_and_table() {
    let o = ekd(&["bounds", "-d", "10", "-k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!((j["mu"].as_u64(), j["calE"].as_str(), j["branch"].as_str()), (Some(2), Some("144"), Some("TWO_FACTOR")));
    let o = ekd(&["bounds", "--table", "20"]);
    let rows = json(&o);
    let exceptional: Vec<(u64, u64)> = rows
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["exceptional"] == true)
        .map(|r| (r["d"].as_u64().unwrap(), r["k"].as_u64().unwrap()))
        .collect();
    assert_eq!(exceptional, vec![(4, 1), (5, 1), (6, 1), (10, 1)]);
    let o = ekd(&["bounds", "-d", "9", "-k", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d > 3k"));
}

#[test]
fn scan_is_deterministic_across_jobs() {
    let dir = std::env::temp_dir().join(format!("ekd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let base = ["scan", "--d", "4..6", "--h", "3..8", "--both-signs", "--checks", "annuli,unit-gap,separation"];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--jobs", "1", "--output", a.to_str().unwrap()]);
    assert_eq!(ekd(&args).status.code(), Some(0));
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["--jobs", "3", "--output", b.to_str().unwrap()]);
    assert_eq!(ekd(&args).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), (3 + 4 + 5) * 12);
    assert_eq!(v["summary"]["fail"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scan_csv_and_config_file() {
    let dir = std::env::temp_dir().join(format!("ekd-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("scan.toml");
    std::fs::write(&cfg, "d = \"5..5\"\nj = \"2\"\nh = \"3..40\"\nchecks = [\"annuli\"]\nformat = \"json\"\n").unwrap();
    let o = ekd(&["scan", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 39);
    assert!(text.lines().skip(1).all(|l| l.contains(",PASS,")), "{text}");
    std::fs::write(&cfg, "precision-cap = 9000\n").unwrap();
    let o = ekd(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tightness_separation_irreducible() {
    let o = ekd(&["tightness", "--k-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows.as_array().unwrap().iter().all(|r| r["verdict"] == "INDETERMINATE"));
    let o = ekd(&["separation", "--poly", "x^3 - x - 1"]);
    assert_eq!(json(&o)["caseClass"], "REAL_COMPLEX");
    let o = ekd(&["irreducible", "--poly", "x^5 + x + 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "REDUCIBLE");
    let o = ekd(&["irreducible", "--poly", "x^6 - x^2 - 1"]);
    assert_eq!(json(&o)["status"], "IRREDUCIBLE");
}
