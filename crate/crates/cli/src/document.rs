//! Result documents and their canonical JSON encoding.
//!
//! Floats are written with 17 significant digits in exponent form
//! (`5.8016713890525855e0`) so every value parses back to the same bits.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use qes_core::verify::SpectrumReport;
use qes_core::{Family, Parity, QesState};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub family: Family,
    pub n: usize,
    pub parity: Parity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Solver path: `closed-form`, `matrix`, `constraint-search` or `bethe`.
    pub method: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub model: ModelRecord,
    pub states: Vec<QesState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<SpectrumReport>>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl ResultDocument {
    pub fn new(model: ModelRecord, states: Vec<QesState>, diagnostics: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            model,
            states,
            verification: None,
            diagnostics,
        }
    }
}

/// Pretty printer that writes every float with 17 significant digits.
struct CanonicalFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Canonical text of any serializable value, newline-terminated.
pub fn to_canonical_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut buf,
        CanonicalFormatter(PrettyFormatter::new()),
    );
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn parse(text: &str) -> serde_json::Result<ResultDocument> {
    serde_json::from_str(text)
}

/// Format a float the same way documents do.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
