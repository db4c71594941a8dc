use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use q2xp::input::{read_rows, OutputFormat};

fn q2xp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_q2xp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn compute(input: &Path, output: &Path, p_s: usize, p_d: usize, format: &str) -> Output {
    q2xp(&[
        "compute",
        "--input",
        input.to_str().unwrap(),
        "--ps",
        &p_s.to_string(),
        "--pd",
        &p_d.to_string(),
        "--output",
        output.to_str().unwrap(),
        "--format",
        format,
    ])
}

const REFERENCE: &str = r#"{"id": "ref", "type": "triangle", "vertices": [[0.9660254037844386, 0, 0], [0.8160254037844386, 0.08660254037844387, 0], [0.8160254037844386, -0.08660254037844387, 0]], "center": [0.8660254037844386, 0, 0]}"#;

#[test]
fn unit_triangle_degree_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("unit.jsonl");
    fs::write(&input, r#"{"id":"unit","type":"triangle","vertices":[[0,0,0],[1,0,0],[0,1,0]]}"#).unwrap();
    let output = dir.path().join("out.csv");
    let out = compute(&input, &output, 0, 0, "csv");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&output).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "id,kind,n,m,b,c,re,im");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1], "unit,L,0,0,0,0,0.039788735772973836,0.0");
    let m: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(&m[..6], &["unit", "M", "0", "0", "0", "0"]);
    assert_eq!(m[6].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn row_counts_for_reference_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ref.jsonl");
    fs::write(&input, REFERENCE).unwrap();
    let output = dir.path().join("out.json");
    assert!(compute(&input, &output, 10, 10, "json").status.success());
    let rows = read_rows(OutputFormat::Json, fs::File::open(&output).unwrap()).unwrap();
    for kind in ["L", "M"] {
        assert_eq!(rows.iter().filter(|r| r.kind == kind).count(), 121 * 66);
    }
    let (mut nm, mut bc) = (std::collections::BTreeSet::new(), std::collections::BTreeSet::new());
    for r in &rows {
        nm.insert((r.n, r.m));
        bc.insert((r.b, r.c));
    }
    assert_eq!(nm.len(), 121);
    assert_eq!(bc.len(), 66);
}

#[test]
fn malformed_vertices_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    fs::write(
        &input,
        "{\"id\":\"good\",\"type\":\"segment\",\"vertices\":[[0,0,0],[0,0,1]]}\n\
         {\"id\":\"broken-7\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0,0],[0,1]]}\n",
    )
    .unwrap();
    let out = compute(&input, &dir.path().join("o.csv"), 2, 2, "csv");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken-7"), "{err}");
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn degenerate_element_skipped_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("deg.jsonl");
    fs::write(
        &input,
        "{\"id\":\"a\",\"type\":\"segment\",\"vertices\":[[0,0,0],[0,0,1]]}\n\
         {\"id\":\"z\",\"type\":\"segment\",\"vertices\":[[1,1,1],[1,1,1]]}\n",
    )
    .unwrap();
    let output = dir.path().join("o.csv");
    let out = compute(&input, &output, 1, 1, "csv");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'z'"));
    let rows = read_rows(OutputFormat::Csv, fs::File::open(&output).unwrap()).unwrap();
    assert_eq!(rows.len(), 4 * 2);
    assert!(rows.iter().all(|r| r.id == "a" && r.kind == "K"));
}

#[test]
fn output_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("ref.jsonl");
    let seg = r#"{"id": "s1", "type": "segment", "vertices": [[0.1, 0.2, 0.3], [0.3, 0.1, 0.2]], "density": {"degree": 1, "coeffs": [1, 2]}}"#;
    fs::write(&input, format!("{seg}\n{REFERENCE}\n")).unwrap();

    let csv_out = dir.path().join("o.csv");
    let json_out = dir.path().join("o.json");
    assert!(compute(&input, &csv_out, 6, 3, "csv").status.success());
    assert!(compute(&input, &json_out, 6, 3, "json").status.success());
    let a = read_rows(OutputFormat::Csv, fs::File::open(&csv_out).unwrap()).unwrap();
    let b = read_rows(OutputFormat::Json, fs::File::open(&json_out).unwrap()).unwrap();
    assert_eq!(a, b);

    // Same values as the library, bit for bit, in (id, kind, n, m, b, c) order.
    let (tri, center) = q2xp::verify::reference_configuration();
    let (l, _) = q2xp::compute_moments_triangle(&tri, &center, 6, 3).unwrap();
    let first_l = a.iter().position(|r| r.id == "ref" && r.kind == "L").unwrap();
    for (row, (n, m, bb, c, v)) in a[first_l..].iter().zip(l.entries()) {
        assert_eq!((row.n, row.m, row.b, row.c), (n, m, bb, c));
        assert_eq!(row.re.to_bits(), v.re.to_bits());
        assert_eq!(row.im.to_bits(), v.im.to_bits());
    }
    let keys: Vec<_> = a.iter().map(|r| (r.id.clone(), r.kind.clone(), r.n, r.m, r.b, r.c)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn compute_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("many.jsonl");
    let mut text = String::new();
    for k in 0..24 {
        let x = k as f64 * 0.1;
        text.push_str(&format!(
            "{{\"id\":\"e{k:02}\",\"type\":\"triangle\",\"vertices\":[[{x},0,0],[{},0.1,0],[{x},0.05,0.1]]}}\n",
            x + 0.1
        ));
    }
    fs::write(&input, text).unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(compute(&input, &a, 8, 3, "csv").status.success());
    assert!(compute(&input, &b, 8, 3, "csv").status.success());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_reports_and_is_deterministic() {
    let args = ["verify", "--ps", "10", "--pd", "10", "--seed", "5", "--trials", "20"];
    let a = q2xp(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let b = q2xp(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("reference L vs oracle")).unwrap();
    let value: f64 = line.split_whitespace().rev().nth(2).unwrap().parse().unwrap();
    assert!(value <= 1e-12, "{line}");

    let zero = q2xp(&["verify", "--ps", "0", "--pd", "0", "--trials", "3"]);
    assert!(zero.status.success());
    assert_eq!(q2xp(&["verify", "--ps", "31", "--pd", "2"]).status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("bench.csv");
    let out = q2xp(&["bench", "--pmax", "8", "--repeats", "1", "--output", output.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&output).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p_s,p_d,seconds");
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        assert!(l.split(',').nth(2).unwrap().parse::<f64>().unwrap() > 0.0);
    }
    assert!(String::from_utf8_lossy(&out.stdout).contains("alpha"));
    assert_eq!(q2xp(&["bench", "--pmax", "44", "--output", "x.csv"]).status.code(), Some(2));
}
