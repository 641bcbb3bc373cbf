//! Black-box tests of the command-line interface: output formats, exit
//! codes, determinism, and agreement between subcommands.

use std::process::{Command, Output};

use carpets::carpet::{format_matrix_text, parse_matrix_text};

fn carpets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carpets"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn carpets_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carpets"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout should be JSON")
}

#[test]
fn generation_methods_are_byte_identical() {
    for field in ["3", "3^2/1,0,1"] {
        let base = ["generate", "--field", field, "--m", "1", "--depth", "2"];
        let recurrence = carpets(&[&base[..], &["--method", "recurrence"]].concat());
        let tensor = carpets(&[&base[..], &["--method", "tensor"]].concat());
        let stream = carpets(&[&base[..], &["--method", "stream"]].concat());
        assert_eq!(recurrence.stdout, tensor.stdout, "field {field}");
        assert_eq!(recurrence.stdout, stream.stdout, "field {field}");
        assert!(recurrence.status.success());
    }
}

#[test]
fn generate_emits_the_text_format() {
    let out = carpets(&["generate", "--field", "3", "--m", "1", "--depth", "2"]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("3 1 0,1 1 2"));
    assert_eq!(lines.next(), Some("1 1 1 1 1 1 1 1 1"));
    assert_eq!(lines.next(), Some("1 0 2 1 0 2 1 0 2"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn generated_text_round_trips_through_the_parser() {
    let out = carpets(&["generate", "--field", "19^2/1,0,1", "--m", "19", "--depth", "1"]);
    let text = stdout_of(&out);
    let parsed = parse_matrix_text(&text).expect("output should parse");
    assert_eq!(parsed.side(), 19);
    assert_eq!(format_matrix_text(&parsed), text);
}

#[test]
fn classify_labels_the_klein_case() {
    let out = carpets(&["classify", "--field", "7", "--m", "3"]);
    let json = json_of(&out);
    assert_eq!(json["params"]["field"], "7");
    assert_eq!(json["params"]["m"], 3);
    assert_eq!(json["symmetry"]["label"], "KLEIN_K4");
    let isometries: Vec<&str> = json["symmetry"]["isometries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(
        isometries,
        ["identity", "rot180", "flip_main_diag", "flip_anti_diag"]
    );
}

#[test]
fn zeros_splits_regular_and_sporadic() {
    let out = carpets(&["zeros", "--field", "13", "--m", "1"]);
    let json = json_of(&out);
    assert_eq!(json["zeros"].as_array().unwrap().len(), 16);
    assert_eq!(json["regular"].as_array().unwrap().len(), 12);
    assert_eq!(
        json["sporadic"],
        serde_json::json!([[2, 2], [2, 10], [10, 2], [10, 10]])
    );
}

#[test]
fn scan_lists_canonical_multipliers() {
    let out = carpets(&["scan", "--field", "19^2/1,0,1"]);
    let json = json_of(&out);
    let scan = json["scan"].as_array().unwrap();
    assert_eq!(scan.len(), 29);
    assert_eq!(scan[0], 0);
    assert_eq!(scan[28], 168);
}

#[test]
fn dimension_reports_the_count_and_ratio() {
    let out = carpets(&["dimension", "--field", "3", "--m", "1"]);
    let json = json_of(&out);
    assert_eq!(json["dimension"]["count"], 8);
    let ratio = json["dimension"]["ln_ratio"].as_f64().unwrap();
    assert!((ratio - (8f64).ln() / (3f64).ln()).abs() < 1e-12);
}

#[test]
fn tiles_reports_catalog_and_witness() {
    let out = carpets(&["tiles", "--field", "3", "--m", "1"]);
    let json = json_of(&out);
    assert_eq!(json["case"], "m_nonzero");
    assert_eq!(json["r"], 3);
    assert_eq!(json["tiles"].as_array().unwrap().len(), 29);

    let out = carpets(&["tiles", "--field", "3", "--m", "1", "--witness", "4"]);
    let json = json_of(&out);
    assert_eq!(json["witness"], serde_json::json!([1, 3, 9, 27]));
}

#[test]
fn assembled_carpet_prints_like_the_generated_one() {
    let assembled = carpets(&["tiles", "--field", "5", "--m", "2", "--assemble", "2"]);
    let generated = carpets(&["generate", "--field", "5", "--m", "2", "--depth", "2"]);
    assert_eq!(stdout_of(&assembled), stdout_of(&generated));
}

#[test]
fn verify_passes_at_small_bounds() {
    let out = carpets(&[
        "verify",
        "--p",
        "5",
        "--dmax",
        "2",
        "--sporadic-max",
        "23",
    ]);
    let json = json_of(&out);
    assert_eq!(json["pass"], true);
    assert_eq!(json["bounds"]["max_prime"], 5);
    let checks = json["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 14);
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_filters_by_substring_and_rejects_unknown_names() {
    let out = carpets(&["verify", "--check", "tensor", "--p", "3", "--dmax", "2"]);
    let json = json_of(&out);
    let checks = json["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "tensor_equivalence");

    let out = carpets(&["verify", "--check", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage error"));
}

#[test]
fn error_classes_map_to_exit_codes() {
    let usage = carpets(&["generate", "--field", "4", "--m", "1", "--depth", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&usage.stderr).contains("usage error"));

    let capacity = carpets(&["generate", "--field", "5", "--m", "1", "--depth", "12"]);
    assert_eq!(capacity.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&capacity.stderr).contains("capacity error"));

    let domain = carpets(&["tiles", "--field", "2", "--m", "1"]);
    assert_eq!(domain.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("domain error"));

    let catalog = carpets(&["tiles", "--field", "19^2/1,0,1", "--m", "21"]);
    assert_eq!(catalog.status.code(), Some(3));
}

#[test]
fn dense_limit_override_is_respected() {
    let args = ["generate", "--field", "3", "--m", "1", "--depth", "3"];
    assert!(carpets(&args).status.success());
    let squeezed = carpets_with_env(&args, "CARPETS_MAX_DENSE_ENTRIES", "100");
    assert_eq!(squeezed.status.code(), Some(3));
}

#[test]
fn out_flag_writes_the_stdout_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.json");
    let piped = carpets(&["zeros", "--field", "13", "--m", "1"]);
    let out = carpets(&[
        "zeros",
        "--field",
        "13",
        "--m",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
}

#[test]
fn render_reproduces_the_golden_bitmap() {
    let golden = include_str!("../../carpets/tests/golden/sierpinski_d3.pbm");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("carpet.pbm");
    let out = carpets(&[
        "render",
        "--field",
        "3",
        "--m",
        "1",
        "--depth",
        "3",
        "--format",
        "pbm",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty(), "images should go to the file only");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
}

#[test]
fn symmetric_palette_folds_colors_in_the_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("block.ppm");
    let out = carpets(&[
        "render",
        "--field",
        "5",
        "--m",
        "1",
        "--depth",
        "1",
        "--format",
        "ppm",
        "--symmetric",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let bytes = std::fs::read(&path).unwrap();
    let header = b"P6\n5 5\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    let pixel = |i: usize, j: usize| {
        let at = header.len() + (i * 5 + j) * 3;
        [bytes[at], bytes[at + 1], bytes[at + 2]]
    };
    // The last row encodes (1, -1, 1, -1, 1); folded colors make the
    // encodings 1 and 4 identical.
    assert_eq!(pixel(4, 0), pixel(4, 1));
    assert_eq!(pixel(4, 0), pixel(0, 0));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["generate", "--field", "7", "--m", "5", "--depth", "2"][..],
        &["zeros", "--field", "13", "--m", "1"][..],
        &["verify", "--check", "scan_example"][..],
    ] {
        let first = carpets(args);
        let second = carpets(args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}
