//! Exit codes, reports and figures of the `nilcone` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use nilcone_core::exact::{int, ExactMatrix};
use nilcone_core::Dataset;

fn nilcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilcone")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilcone-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn clean_suites_exit_zero() {
    for (case, suite) in [("p3p3", "relations"), ("p4p4", "gluing"), ("k3", "rays"), ("p3p3", "series")] {
        let out = nilcone(&["verify", "--case", case, "--suite", suite]);
        assert_eq!(code(&out), 0, "{case} {suite}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn flagged_records_exit_three() {
    let out = nilcone(&["verify", "--case", "p4p4", "--suite", "symplectic"]);
    assert_eq!(code(&out), 3);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("FLAGGED") && l.contains("symplectic/Ty_printed")));
    assert!(text.contains("0 fail"));
}

#[test]
fn corrupted_dataset_exits_one() {
    let ds = Dataset::bundled("p4p4").unwrap();
    let te1 = ds.named("TE1").unwrap().printed.clone().unwrap();
    let bad: ExactMatrix = te1.inverse().unwrap();
    let text = Dataset::from_file(ds.file_with_matrix("TE1", &bad).unwrap()).unwrap().to_canonical_json();
    let path = scratch("p4p4-inverted.json");
    fs::write(&path, text).unwrap();
    let out = nilcone(&["verify", "--case", "p4p4", "--suite", "relations", "--dataset", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(code(&nilcone(&["verify", "--case", "p5p5", "--suite", "rays"])), 2);
    assert_eq!(code(&nilcone(&["verify", "--case", "k3", "--suite", "everything"])), 2);
    assert_eq!(code(&nilcone(&["verify", "--case", "k3", "--suite", "rays", "--dataset", "/nonexistent.json"])), 2);
    assert_eq!(code(&nilcone(&["transport", "--case", "p3p3", "--loop", "x0", "--prec", "32"])), 2);
    assert_eq!(code(&nilcone(&["lcsl", "--case", "p3p3", "--point", "nowhere"])), 2);
}

#[test]
fn json_report_matches_the_text_report() {
    let path = scratch("lcsl.json");
    let out = nilcone(&["lcsl", "--case", "p3p3", "--point", "o", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let records = json["records"].as_array().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(records.len() + 2, text.lines().count());
    let lcsl = records.iter().find(|r| r["id"] == "lcsl/o").unwrap();
    assert_eq!(lcsl["status"], "pass");
    assert_eq!(lcsl["witness"]["verdict"], "true");
    assert_eq!(json["summary"]["fail"], 0);
}

#[test]
fn fan_figures_are_well_formed_svg() {
    for (case, side, rays) in [("p4p4", "a", 4), ("p3p3", "b", 7)] {
        let path = scratch(&format!("{case}-{side}.svg"));
        let out = nilcone(&["fan", "--case", case, "--side", side, "--depth", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let text = fs::read_to_string(&path).unwrap();
        let doc = roxmltree::Document::parse(&text).expect("valid XML");
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "svg");
        assert_eq!(root.attribute("version"), Some("1.1"));
        let group = |id: &str| root.children().find(|n| n.attribute("id") == Some(id)).unwrap_or_else(|| panic!("no {id}"));
        let ray_lines = group("rays").children().filter(|n| n.has_tag_name("line")).count();
        assert!(ray_lines >= rays, "{case} {side}: {ray_lines} rays");
        assert_eq!(group("chambers").children().filter(|n| n.has_tag_name("path")).count(), ray_lines - 1);
        assert_eq!(group("closure").children().filter(|n| n.has_tag_name("line")).count(), 2);
        let labels: Vec<&str> = group("labels").children().filter_map(|n| n.text()).filter(|t| !t.trim().is_empty()).collect();
        assert_eq!(labels.len(), 2);
        assert!(labels.iter().all(|l| l.contains('√')), "{labels:?}");
    }
}

#[test]
fn series_command_prints_the_coefficient_table() {
    let out = nilcone(&["series", "--degree", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.trim_start().starts_with("0: 1")));
    assert!(text.contains("PASS") && text.contains("series/w0"));
}

#[test]
fn single_loop_transport_passes() {
    let out = nilcone(&["transport", "--case", "p3p3", "--loop", "e1", "--prec", "128", "--tol", "1e-10"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{text}");
    assert!(text.contains("transport/charpoly/TE1"));
    assert!(text.contains("precision_bits=128"));
}

#[test]
fn corruption_survives_the_file_round_trip() {
    // the printed entries written by the corrupted file are the ones read back
    let ds = Dataset::bundled("p3p3").unwrap();
    let mut m = ds.named("TE1").unwrap().printed.clone().unwrap();
    m.set(0, 0, m.get(0, 0) + int(2));
    let file = ds.file_with_matrix("TE1", &m).unwrap();
    let back = Dataset::from_json(&serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(back.named("TE1").unwrap().printed.as_ref(), Some(&m));
}
