//! Line-delimited JSON element files and the flat moment records written by
//! the `compute` command.
//!
//! One element per line:
//!
//! ```text
//! {"id": "t0", "type": "triangle", "vertices": [[0,0,0],[1,0,0],[0,1,0]],
//!  "center": [0.3,0.3,0], "density": {"degree": 1, "coeffs": [1, 0.5, 0.25]}}
//! ```
//!
//! `center` defaults to the centroid, `density` to the constant 1.

use std::fmt;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::PolynomialDensity;
use crate::error::Error;
use crate::geometry::{Dimension, Segment, Triangle, Vec3};
use crate::moments::{compute_moments_segment, compute_moments_triangle};
use crate::table::MomentTable;

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Triangle(Triangle),
    Segment(Segment),
}

impl Element {
    pub fn dimension(&self) -> Dimension {
        match self {
            Element::Triangle(_) => Dimension::Two,
            Element::Segment(_) => Dimension::One,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementRecord {
    pub id: String,
    pub element: Element,
    pub center: Vec3,
    pub density: PolynomialDensity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub id: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.id {
            Some(id) => write!(f, "line {} (element '{}'): {}", self.line, id, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    degree: usize,
    coeffs: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    id: String,
    #[serde(rename = "type")]
    kind: String,
    vertices: Vec<Vec3>,
    #[serde(default)]
    center: Option<Vec3>,
    #[serde(default)]
    density: Option<RawDensity>,
}

fn parse_line(line_no: usize, text: &str) -> Result<ElementRecord, ParseError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError {
        line: line_no,
        id: None,
        message: format!("invalid JSON: {e}"),
    })?;
    let id = value.get("id").and_then(|v| v.as_str()).map(str::to_owned);
    let fail = |message: String| ParseError {
        line: line_no,
        id: id.clone(),
        message,
    };
    let raw: RawRecord = serde_json::from_value(value).map_err(|e| fail(e.to_string()))?;

    let element = match (raw.kind.as_str(), raw.vertices.as_slice()) {
        ("triangle", [a, b, c]) => Element::Triangle(Triangle::new(*a, *b, *c)),
        ("segment", [a, b]) => Element::Segment(Segment::new(*a, *b)),
        ("triangle", v) | ("segment", v) => {
            return Err(fail(format!(
                "{} needs {} vertices, got {}",
                raw.kind,
                if raw.kind == "triangle" { 3 } else { 2 },
                v.len()
            )))
        }
        (other, _) => return Err(fail(format!("unknown element type '{other}'"))),
    };
    let all_finite = raw.vertices.iter().flatten().all(|x| x.is_finite());
    if !all_finite {
        return Err(fail("non-finite vertex coordinate".into()));
    }
    let center = raw.center.unwrap_or_else(|| match &element {
        Element::Triangle(t) => t.centroid(),
        Element::Segment(s) => s.midpoint(),
    });
    let density = match raw.density {
        None => PolynomialDensity::constant(element.dimension(), 1.0),
        Some(d) => PolynomialDensity::from_real(element.dimension(), d.degree, &d.coeffs)
            .map_err(|e| fail(e.to_string()))?,
    };
    Ok(ElementRecord {
        id: raw.id,
        element,
        center,
        density,
    })
}

/// Parses every non-blank line; stops at the first malformed record.
pub fn read_elements(reader: impl BufRead) -> Result<Vec<ElementRecord>, ParseError> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ParseError {
            line: k + 1,
            id: None,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_line(k + 1, &line)?);
    }
    Ok(out)
}

/// One table entry of one element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub id: String,
    pub kind: String,
    pub n: usize,
    pub m: i32,
    pub b: usize,
    pub c: usize,
    pub re: f64,
    pub im: f64,
}

fn rows_of<'a>(id: &str, table: &'a MomentTable) -> impl Iterator<Item = MomentRow> + 'a {
    let id = id.to_owned();
    let kind = table.label().to_string();
    table.entries().map(move |(n, m, b, c, v): (usize, i32, usize, usize, Complex64)| MomentRow {
        id: id.clone(),
        kind: kind.clone(),
        n,
        m,
        b,
        c,
        re: v.re,
        im: v.im,
    })
}

/// Per-element failure during `compute`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementFailure {
    pub id: String,
    pub error: Error,
}

/// Moment rows for every element, sorted by `(id, kind, n, m, b, c)`.
/// Elements whose frame cannot be built are reported and skipped.
pub fn compute_rows(
    records: &[ElementRecord],
    p_s: usize,
    p_d: usize,
) -> (Vec<MomentRow>, Vec<ElementFailure>) {
    let results: Vec<Result<Vec<MomentRow>, ElementFailure>> = records
        .par_iter()
        .map(|rec| {
            let tables = match &rec.element {
                Element::Triangle(t) => {
                    compute_moments_triangle(t, &rec.center, p_s, p_d).map(|(l, m)| vec![l, m])
                }
                Element::Segment(s) => {
                    compute_moments_segment(s, &rec.center, p_s, p_d).map(|k| vec![k])
                }
            };
            tables
                .map(|ts| ts.iter().flat_map(|t| rows_of(&rec.id, t)).collect())
                .map_err(|error| ElementFailure {
                    id: rec.id.clone(),
                    error,
                })
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(mut v) => rows.append(&mut v),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by(|a, b| {
        (&a.id, &a.kind, a.n, a.m, a.b, a.c).cmp(&(&b.id, &b.kind, b.n, b.m, b.b, b.c))
    });
    (rows, failures)
}

/// Row writer/reader failure: I/O, CSV or JSON.
pub type IoResult<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Writes rows as CSV (`id,kind,n,m,b,c,re,im`) or as a JSON array of the
/// same records. Floats use shortest round-trip formatting.
pub fn write_rows(
    rows: &[MomentRow],
    format: OutputFormat,
    writer: impl Write,
) -> IoResult<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(writer);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut writer = writer;
            serde_json::to_writer_pretty(&mut writer, rows)?;
            writeln!(writer)?;
        }
    }
    Ok(())
}

pub fn read_rows(format: OutputFormat, reader: impl std::io::Read) -> IoResult<Vec<MomentRow>> {
    Ok(match format {
        OutputFormat::Csv => csv::Reader::from_reader(reader)
            .deserialize()
            .collect::<Result<Vec<MomentRow>, _>>()?,
        OutputFormat::Json => serde_json::from_reader(reader)?,
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle_with_defaults() {
        let text = r#"{"id":"a","type":"triangle","vertices":[[0,0,0],[1,0,0],[0,1,0]]}"#;
        let recs = read_elements(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.id, "a");
        assert!((r.center[0] - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(r.density.degree(), 0);
    }

    #[test]
    fn parses_segment_with_density() {
        let text = "\n{\"id\":\"s\",\"type\":\"segment\",\"vertices\":[[0,0,0],[0,0,1]],\
                    \"center\":[0,0,0],\"density\":{\"degree\":2,\"coeffs\":[1,2,3]}}\n";
        let recs = read_elements(text.as_bytes()).unwrap();
        assert_eq!(recs[0].density.coeff(2, 0).re, 3.0);
        assert_eq!(recs[0].center, [0.0; 3]);
    }

    #[test]
    fn malformed_vertices_name_the_element() {
        let text = "{\"id\":\"ok\",\"type\":\"segment\",\"vertices\":[[0,0,0],[0,0,1]]}\n\
                    {\"id\":\"bad\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0]]}";
        let err = read_elements(text.as_bytes()).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.id.as_deref(), Some("bad"));
        assert!(err.to_string().contains("'bad'"));

        let text = "{\"id\":\"few\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0,0]]}";
        let err = read_elements(text.as_bytes()).unwrap_err();
        assert!(err.message.contains("3 vertices"));

        let text = "{\"id\":\"d\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0,0],[0,1,0]],\
                    \"density\":{\"degree\":1,\"coeffs\":[1,2]}}";
        assert!(read_elements(text.as_bytes()).is_err());
        assert!(read_elements("not json".as_bytes()).unwrap_err().id.is_none());
    }

    #[test]
    fn degenerate_element_is_skipped() {
        let text = "{\"id\":\"flat\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0,0],[2,0,0]]}\n\
                    {\"id\":\"good\",\"type\":\"triangle\",\"vertices\":[[0,0,0],[1,0,0],[0,1,0]]}";
        let recs = read_elements(text.as_bytes()).unwrap();
        let (rows, failures) = compute_rows(&recs, 1, 1);
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].id, "flat");
        assert!(rows.iter().all(|r| r.id == "good"));
        assert_eq!(rows.len(), 2 * 4 * 3);
    }
}
