//! Text serialisation of fields, CSV tables and JSON reports.
//!
//! Every float is written with C's `%.17g` conversion, which round-trips
//! any `f64` exactly.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fieldcore::field::{ScalarField, VectorField3};
use crate::fieldcore::grid::Grid3;

/// C `printf("%.17g", x)`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        strip_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A field read back from the text format.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldFile {
    Scalar(ScalarField),
    Vector(VectorField3),
}

fn header(grid: &Grid3) -> String {
    let [nx, ny, nz] = grid.dims();
    let o = grid.origin();
    let h = grid.spacing();
    format!(
        "grid3 {nx} {ny} {nz} {} {} {} {} {} {}",
        fmt_g17(o[0]),
        fmt_g17(o[1]),
        fmt_g17(o[2]),
        fmt_g17(h[0]),
        fmt_g17(h[1]),
        fmt_g17(h[2])
    )
}

pub fn scalar_field_to_string(f: &ScalarField) -> String {
    let mut out = header(f.grid());
    out.push('\n');
    for v in f.values() {
        out.push_str(&fmt_g17(*v));
        out.push('\n');
    }
    out
}

pub fn vector_field_to_string(f: &VectorField3) -> String {
    let mut out = header(f.grid());
    out.push('\n');
    for v in f.values() {
        let _ = writeln!(out, "{} {} {}", fmt_g17(v[0]), fmt_g17(v[1]), fmt_g17(v[2]));
    }
    out
}

pub fn write_scalar_field(path: &Path, f: &ScalarField) -> Result<()> {
    std::fs::write(path, scalar_field_to_string(f))?;
    Ok(())
}

pub fn write_vector_field(path: &Path, f: &VectorField3) -> Result<()> {
    std::fs::write(path, vector_field_to_string(f))?;
    Ok(())
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse(format!("line {line}: '{token}' is not a number")))
}

/// Parses the text format; the column count of the first data line decides the kind.
pub fn parse_field(reader: impl BufRead) -> Result<FieldFile> {
    let mut lines = reader.lines().enumerate().filter(|(_, l)| match l {
        Ok(s) => !s.trim().is_empty(),
        Err(_) => true,
    });
    let (_, head) = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))?;
    let head = head?;
    let tokens: Vec<&str> = head.split_whitespace().collect();
    if tokens.len() != 10 || tokens[0] != "grid3" {
        return Err(Error::Parse("header must be 'grid3 nx ny nz ox oy oz hx hy hz'".into()));
    }
    let mut dims = [0usize; 3];
    for a in 0..3 {
        dims[a] = tokens[1 + a].parse().map_err(|_| Error::Parse(format!("bad dimension '{}'", tokens[1 + a])))?;
    }
    let mut origin = [0.0; 3];
    let mut spacing = [0.0; 3];
    for a in 0..3 {
        origin[a] = parse_f64(tokens[4 + a], 1)?;
        spacing[a] = parse_f64(tokens[7 + a], 1)?;
    }
    let grid = Grid3::new(origin, spacing, dims)?;
    let mut scalars = Vec::new();
    let mut vectors = Vec::new();
    let mut width = None;
    for (n, line) in lines {
        let line = line?;
        let vals: Vec<f64> = line.split_whitespace().map(|t| parse_f64(t, n + 1)).collect::<Result<_>>()?;
        let w = *width.get_or_insert(vals.len());
        if vals.len() != w || !(w == 1 || w == 3) {
            return Err(Error::Parse(format!("line {}: expected 1 or 3 consistent columns", n + 1)));
        }
        if w == 1 {
            scalars.push(vals[0]);
        } else {
            vectors.push([vals[0], vals[1], vals[2]]);
        }
    }
    match width {
        Some(3) => Ok(FieldFile::Vector(VectorField3::new(grid, vectors)?)),
        _ => Ok(FieldFile::Scalar(ScalarField::new(grid, scalars)?)),
    }
}

pub fn read_field(path: &Path) -> Result<FieldFile> {
    let file = std::fs::File::open(path)?;
    parse_field(std::io::BufReader::new(file))
}

pub fn read_vector_field(path: &Path) -> Result<VectorField3> {
    match read_field(path)? {
        FieldFile::Vector(v) => Ok(v),
        FieldFile::Scalar(_) => Err(Error::Parse(format!("{} holds a scalar field", path.display()))),
    }
}

/// A CSV cell: number, text, or empty.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

pub fn csv_to_string(headers: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(v) => fmt_g17(*v),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, headers: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    std::fs::write(path, csv_to_string(headers, rows))?;
    Ok(())
}

/// serde_json formatter that writes floats as `%.17g`.
#[derive(Debug, Default, Clone, Copy)]
pub struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        writer.write_all(fmt_g17(value as f64).as_bytes())
    }
}

pub fn to_json_string(value: &impl Serialize) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut s = to_json_string(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}
