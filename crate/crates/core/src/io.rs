//! Point and instance files.
//!
//! CSV: header `x1,...,xd`, one point per row. JSON:
//! `{"schema": 1, "dim": d, "points": [[..], ..], "truth": {..}}` where
//! `truth` is optional.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{Instance, Truth};
use crate::geometry::{Point, PointSet};

pub const SCHEMA: u32 = 1;

/// Contents of a point file: the points and, for generated files, their truth.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub points: PointSet,
    pub truth: Option<Truth>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFile {
    #[serde(default = "default_schema")]
    schema: u32,
    dim: usize,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truth: Option<Truth>,
}

fn default_schema() -> u32 {
    SCHEMA
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line() as u64,
        msg: e.to_string(),
    }
}

pub fn read_csv<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(Error::Parse { line: 1, msg: "missing header".into() }),
        Some(r) => r.map_err(csv_err)?,
    };
    let dim = header.len();
    for (j, name) in header.iter().enumerate() {
        if name != format!("x{}", j + 1) {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header field {} is {name:?}, expected \"x{}\"", j + 1, j + 1),
            });
        }
    }
    let mut points = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != dim {
            return Err(Error::Parse {
                line,
                msg: format!("expected {dim} fields, found {}", rec.len()),
            });
        }
        let coords = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let p = Point::new(coords).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        points.push(p);
    }
    PointSet::new(dim, points)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::Parse {
            line,
            msg: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            line,
            msg: format!("{other:?}"),
        },
    }
}

pub fn write_csv<W: Write>(writer: W, points: &PointSet) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<String> = (1..=points.dim()).map(|j| format!("x{j}")).collect();
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for p in points.iter() {
        w.write_record(p.coords().iter().map(|c| c.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_json(text: &str) -> Result<PointFile> {
    let f: JsonFile = serde_json::from_str(text).map_err(json_err)?;
    if f.schema != SCHEMA {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported schema {}", f.schema),
        });
    }
    let points = f
        .points
        .into_iter()
        .map(Point::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(PointFile {
        points: PointSet::new(f.dim, points)?,
        truth: f.truth,
    })
}

pub fn to_json(points: &PointSet, truth: Option<&Truth>) -> String {
    let f = JsonFile {
        schema: SCHEMA,
        dim: points.dim(),
        points: points.iter().map(|p| p.coords().to_vec()).collect(),
        truth: truth.cloned(),
    };
    serde_json::to_string(&f).expect("plain data serializes")
}

pub fn instance_to_json(inst: &Instance) -> String {
    to_json(&inst.points, Some(&inst.truth))
}

/// Parses either format, choosing JSON when the text starts with `{`.
pub fn parse_points(text: &str) -> Result<PointFile> {
    if text.trim_start().starts_with('{') {
        read_json(text)
    } else {
        Ok(PointFile {
            points: read_csv(text.as_bytes())?,
            truth: None,
        })
    }
}

pub fn load_points(path: &Path) -> Result<PointFile> {
    let text = std::fs::read_to_string(path)?;
    parse_points(&text)
}

/// Writes JSON (with truth) for `.json` paths and CSV otherwise.
pub fn save_instance(path: &Path, inst: &Instance) -> Result<()> {
    if path.extension().is_some_and(|e| e == "json") {
        std::fs::write(path, instance_to_json(inst) + "\n")?;
    } else {
        write_csv(std::fs::File::create(path)?, &inst.points)?;
    }
    Ok(())
}
