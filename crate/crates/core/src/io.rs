// SPDX-License-Identifier: Apache-2.0

//! Text formats: density, price, return and ground-state CSVs, and JSON
//! with 17 significant digits.
//!
//! Everything here works on readers and strings; callers own the files.

use std::io::{self, Read, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::eigensolver::{GroundState, SolveMethod};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Relative tolerance on node spacing when reading a density CSV.
pub const SPACING_TOLERANCE: f64 = 1e-6;

/// Twelve significant digits.
pub fn format_csv_real(v: f64) -> String {
    format!("{v:.11e}")
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_json_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON whose reals all carry 17 significant digits.
struct SignificantDigits<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SignificantDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_json_real(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes `value` as indented JSON with a trailing newline.
pub fn to_json_string<S: Serialize + ?Sized>(value: &S) -> Result<String> {
    let mut buf = Vec::new();
    let fmt = SignificantDigits {
        inner: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

fn parse_real(field: &str, row: usize, column: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| {
        Error::Parse(format!(
            "row {row}, column '{column}': cannot parse '{field}' as a number"
        ))
    })
}

fn header_index(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

/// Density samples from a CSV with an `x` column and one of `p`, `value`
/// or `density` (checked in that order).
///
/// Nodes must be ascending and uniformly spaced; values are returned as
/// read, signs included.
pub fn parse_density_csv<R: Read>(reader: R) -> Result<(Grid<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let xi = header_index(&headers, "x")
        .ok_or_else(|| Error::Parse("density CSV needs an 'x' column".into()))?;
    let (vi, vname) = ["p", "value", "density"]
        .iter()
        .find_map(|n| header_index(&headers, n).map(|i| (i, *n)))
        .ok_or_else(|| {
            Error::Parse("density CSV needs a 'p', 'value' or 'density' column".into())
        })?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| {
            rec.get(i)
                .ok_or_else(|| Error::Parse(format!("row {} is short", row + 1)))
        };
        xs.push(parse_real(field(xi)?, row + 1, "x")?);
        vs.push(parse_real(field(vi)?, row + 1, vname)?);
    }
    if let Some(i) = vs.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if xs.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "{} nodes, need at least 3",
            xs.len()
        )));
    }
    let n = xs.len();
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::InvalidGrid("x must be ascending".into()));
    }
    for (i, w) in xs.windows(2).enumerate() {
        let step = w[1] - w[0];
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "x is not ascending at row {}",
                i + 2
            )));
        }
        if (step - h).abs() > SPACING_TOLERANCE * h {
            return Err(Error::InvalidGrid(format!(
                "x spacing is not uniform at row {}",
                i + 2
            )));
        }
    }
    Ok((Grid::new(xs[0], xs[n - 1], n)?, vs))
}

/// CSV with an `x` column followed by the named value columns.
pub fn density_csv_string(grid: &Grid<f64>, columns: &[(&str, &[f64])]) -> Result<String> {
    if columns.iter().any(|(_, v)| v.len() != grid.len()) {
        return Err(Error::InvalidGrid(
            "column length does not match the grid".into(),
        ));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["x"];
    header.extend(columns.iter().map(|(n, _)| *n));
    w.write_record(&header)?;
    for i in 0..grid.len() {
        let mut rec = vec![format_csv_real(grid.x(i))];
        rec.extend(columns.iter().map(|(_, v)| format_csv_real(v[i])));
        w.write_record(&rec)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// One column of a headed CSV, selected by header name or, failing that, by
/// zero-based index.
pub fn parse_column<R: Read>(reader: R, column: &str) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let idx = header_index(&headers, column)
        .or_else(|| column.parse::<usize>().ok().filter(|&i| i < headers.len()))
        .ok_or_else(|| {
            let names: Vec<&str> = headers.iter().collect();
            Error::Parse(format!("no column '{column}' (have: {})", names.join(", ")))
        })?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = rec
            .get(idx)
            .ok_or_else(|| Error::Parse(format!("row {} has no column '{column}'", row + 1)))?;
        out.push(parse_real(field, row + 1, column)?);
    }
    Ok(out)
}

/// Prices in chronological order from the selected column.
pub fn parse_prices_csv<R: Read>(reader: R, column: &str) -> Result<Vec<f64>> {
    parse_column(reader, column)
}

/// Values of the `log_return` column.
pub fn parse_returns_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    parse_column(reader, "log_return")
}

pub fn returns_csv_string(values: &[f64]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["log_return"])?;
    for &v in values {
        w.write_record([format_csv_real(v)])?;
    }
    finish(w)
}

/// Grid bounds in a sidecar.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl From<&Grid<f64>> for GridSummary {
    fn from(g: &Grid<f64>) -> Self {
        Self {
            x_min: g.x_min(),
            x_max: g.x_max(),
            n_points: g.len(),
        }
    }
}

/// JSON written next to a ground-state CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateSidecar {
    pub energy: f64,
    pub residual: f64,
    pub grid: GridSummary,
    pub method: SolveMethod,
    pub warnings: Vec<String>,
}

/// `x,psi,p` rows for a solved ground state.
pub fn ground_state_csv_string(gs: &GroundState<f64>) -> Result<String> {
    let psi = gs.amplitude.values();
    let p: Vec<f64> = psi.iter().map(|v| v * v).collect();
    density_csv_string(gs.grid(), &[("psi", psi), ("p", &p)])
}

pub fn ground_state_sidecar(gs: &GroundState<f64>) -> GroundStateSidecar {
    let warnings = gs.density().tail_warning().into_iter().collect();
    GroundStateSidecar {
        energy: gs.energy,
        residual: gs.residual,
        grid: gs.grid().into(),
        method: gs.method,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_reals_have_17_digits() {
        let s =
            to_json_string(&serde_json::json!({"a": 0.1, "b": [1.0, -2.5e-7], "n": 3, "z": null}))
                .unwrap();
        assert!(s.contains("\"a\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("-2.4999999999999999e-7"), "{s}");
        assert!(s.contains("\"n\": 3"), "{s}");
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64().unwrap(), 0.1);
        assert_eq!(back["b"][1].as_f64().unwrap(), -2.5e-7);
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn json_reals_round_trip_exactly() {
        for v in [std::f64::consts::PI, 1e-300, -123456.789, 5e-324, f64::MAX] {
            let back: f64 = format_json_real(v).parse().unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn density_csv_round_trip() {
        let g = Grid::symmetric(2.0, 5).unwrap();
        let v = [0.0, 0.25, 0.5, 0.25, 0.0];
        let text = density_csv_string(&g, &[("value", &v)]).unwrap();
        assert!(
            text.starts_with("x,value\n-2.00000000000e0,0.00000000000e0\n"),
            "{text}"
        );
        let (g2, v2) = parse_density_csv(text.as_bytes()).unwrap();
        assert_eq!(g2.len(), 5);
        assert_eq!(g2.x_min(), -2.0);
        assert_eq!(v2, v);
    }

    #[test]
    fn density_csv_prefers_p_column() {
        let text = "x,psi,p\n0,1,0.5\n1,2,0.25\n2,3,0.125\n";
        let (_, v) = parse_density_csv(text.as_bytes()).unwrap();
        assert_eq!(v, vec![0.5, 0.25, 0.125]);
    }

    #[test]
    fn density_csv_errors() {
        assert!(matches!(
            parse_density_csv("x,value\n0,1\n2,1\n1,1\n".as_bytes()),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            parse_density_csv("x,value\n0,1\n1,1\n3,1\n".as_bytes()),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            parse_density_csv("y,value\n0,1\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_density_csv("x,value\n0,abc\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_density_csv("x,value\n0,1\n1,2\n".as_bytes()),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn price_column_selection() {
        let text = "date,open,close\n2024-01-01,1,100\n2024-01-02,2,105\n";
        assert_eq!(
            parse_prices_csv(text.as_bytes(), "close").unwrap(),
            vec![100.0, 105.0]
        );
        assert_eq!(
            parse_prices_csv(text.as_bytes(), "1").unwrap(),
            vec![1.0, 2.0]
        );
        assert!(parse_prices_csv(text.as_bytes(), "volume").is_err());
        assert!(parse_prices_csv(text.as_bytes(), "date").is_err());
    }

    #[test]
    fn returns_round_trip() {
        let v = [0.01, -0.02, 0.0];
        let text = returns_csv_string(&v).unwrap();
        assert!(text.starts_with("log_return\n"));
        assert_eq!(parse_returns_csv(text.as_bytes()).unwrap(), v);
    }
}
