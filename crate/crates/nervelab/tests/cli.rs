//! End-to-end tests of the command-line binary: exit codes, determinism of
//! emitted files, and round-trips through the on-disk formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TENT_COMPLEX: &str = r#"{"vertices":["v0","v1","v2","v3","v4","v5","v6","v7"],
 "simplices":[["v0","v1"],["v1","v2"],["v2","v3"],["v3","v4"],["v4","v5"],["v5","v6"],["v6","v7"],["v0","v7"]],
 "dim_cap":2}"#;

const TENT_VALUES: &str = r#"{"values":{"v0":0,"v1":1,"v2":2,"v3":3,"v4":4,"v5":3,"v6":2,"v7":1},
 "codomain":{"type":"real","lo":0,"hi":4}}"#;

const COVER4: &str = r#"{"codomain":{"type":"real","lo":0,"hi":4},
 "elements":[{"interval":[-0.5,1.5]},{"interval":[0.5,2.5]},{"interval":[1.5,3.5]},{"interval":[2.5,4.5]}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nervelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_inputs(dir: &Path) -> (String, String, String) {
    let complex = dir.join("complex.json");
    let values = dir.join("values.json");
    let cover = dir.join("cover.json");
    fs::write(&complex, TENT_COMPLEX).unwrap();
    fs::write(&values, TENT_VALUES).unwrap();
    fs::write(&cover, COVER4).unwrap();
    (
        complex.to_string_lossy().into_owned(),
        values.to_string_lossy().into_owned(),
        cover.to_string_lossy().into_owned(),
    )
}

#[test]
fn verify_passes_on_tent() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, values, cover) = write_inputs(dir.path());
    let out = run(&[
        "verify",
        "--complex",
        &complex,
        "--function",
        &values,
        "--cover",
        &cover,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn mapper_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, values, cover) = write_inputs(dir.path());
    let nerve_a = dir.path().join("nerve_a.json");
    let nerve_b = dir.path().join("nerve_b.json");
    let dot_a = dir.path().join("nerve_a.dot");
    let dot_b = dir.path().join("nerve_b.dot");
    for (nerve, dot) in [(&nerve_a, &dot_a), (&nerve_b, &dot_b)] {
        let out = run(&[
            "mapper",
            "--complex",
            &complex,
            "--function",
            &values,
            "--cover",
            &cover,
            "--out",
            &nerve.to_string_lossy(),
            "--dot",
            &dot.to_string_lossy(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&nerve_a).unwrap(), fs::read(&nerve_b).unwrap());
    assert_eq!(fs::read(&dot_a).unwrap(), fs::read(&dot_b).unwrap());
    assert!(fs::read_to_string(&dot_a).unwrap().starts_with("graph"));
}

#[test]
fn metric_and_diagram_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, values, _) = write_inputs(dir.path());
    let metric = dir.path().join("df.csv");
    let out = run(&[
        "metrics",
        "df",
        "--complex",
        &complex,
        "--function",
        &values,
        "--mode",
        "exact",
        "--out",
        &metric.to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&metric).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.split(',').any(|c| c == "v0"));

    // feed the emitted metric back in and persist its Cech diagram
    let diagram = dir.path().join("dg1.csv");
    let out = run(&[
        "persistence",
        "cech",
        "--metric",
        &metric.to_string_lossy(),
        "--dim",
        "1",
        "--out",
        &diagram.to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dg = fs::read_to_string(&diagram).unwrap();
    assert!(dg.lines().next().unwrap().contains("birth"));
    assert!(dg.lines().count() >= 2, "expected at least one H1 point: {dg}");

    // a diagram compared with itself is at distance zero
    let out = run(&[
        "persistence",
        "bottleneck",
        "--left",
        &diagram.to_string_lossy(),
        "--right",
        &diagram.to_string_lossy(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains('0'), "{stdout}");
}

#[test]
fn empty_complex_is_rejected_with_error_json() {
    let dir = tempfile::tempdir().unwrap();
    let (_, values, cover) = write_inputs(dir.path());
    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"vertices":[],"simplices":[]}"#).unwrap();
    let out = run(&[
        "verify",
        "--complex",
        &empty.to_string_lossy(),
        "--function",
        &values,
        "--cover",
        &cover,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("error"), "{stdout}");
    assert!(stdout.contains("no vertices"), "{stdout}");
}

#[test]
fn generators_report_expected_size() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, values, _) = write_inputs(dir.path());
    let metric = dir.path().join("df.csv");
    assert!(run(&[
        "metrics",
        "df",
        "--complex",
        &complex,
        "--function",
        &values,
        "--out",
        &metric.to_string_lossy(),
    ])
    .status
    .success());
    let basis = dir.path().join("basis.json");
    let out = run(&[
        "generators",
        "basis",
        "--complex",
        &complex,
        "--metric",
        &metric.to_string_lossy(),
        "--mode",
        "exact",
        "--out",
        &basis.to_string_lossy(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&basis).unwrap()).unwrap();
    let gens = parsed["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0]["size"].as_f64().unwrap(), 4.0);
}

#[test]
fn reeb_dot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (complex, values, _) = write_inputs(dir.path());
    let mut blobs = Vec::new();
    for name in ["r1.dot", "r2.dot"] {
        let dot = dir.path().join(name);
        let out = run(&[
            "reeb",
            "--complex",
            &complex,
            "--function",
            &values,
            "--dot",
            &dot.to_string_lossy(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        blobs.push(fs::read(&dot).unwrap());
    }
    assert_eq!(blobs[0], blobs[1]);
}
