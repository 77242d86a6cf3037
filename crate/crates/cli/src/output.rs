//! JSON envelope and CSV rendering.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Renders every float with 17 significant digits in exponent form.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with floats written by [`float17`]; non-finite floats become `null`.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(float17(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// The object wrapping every JSON report. Keys appear in field order.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool_version: &'static str,
    pub command: &'a str,
    pub lattice: String,
    pub timestamp: String,
    pub payload: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, lattice: String, payload: T, seed: Option<u64>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            lattice,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            payload,
            seed,
        }
    }

    pub fn to_json(&self) -> io::Result<String> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17(PrettyFormatter::new()));
        self.serialize(&mut ser).map_err(io::Error::other)?;
        out.push(b'\n');
        String::from_utf8(out).map_err(io::Error::other)
    }
}

/// One row of the census / convergence CSV.
pub struct CsvRow {
    pub radius: f64,
    pub total: u64,
    pub primitive: u64,
    pub reduced: Option<u64>,
    pub nonreduced: Option<u64>,
    pub primitive_over_r4: f64,
    pub error: f64,
}

pub fn to_csv(rows: &[CsvRow]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["R", "total", "primitive", "reduced", "nonreduced", "primitive_over_R4", "error"])?;
    let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            float17(r.radius),
            r.total.to_string(),
            r.primitive.to_string(),
            opt(r.reduced),
            opt(r.nonreduced),
            float17(r.primitive_over_r4),
            float17(r.error),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}
