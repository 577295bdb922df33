//! Output plumbing: number formatting, run manifests, CSV and JSON documents.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

/// Environment variable naming the directory for relative output paths.
pub const OUT_DIR_VAR: &str = "WILLMORE_OUT_DIR";
pub const SCHEMA: u32 = 1;
/// Significant digits of every number written to CSV.
pub const CSV_DIGITS: usize = 12;

/// `x` rounded to `digits` significant digits, locale independent, with
/// trailing zeros removed. Very large or small magnitudes use exponent form.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn num(x: f64) -> String {
    fmt_sig(x, CSV_DIGITS)
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn flag(b: bool) -> String {
    u8::from(b).to_string()
}

/// Command, parameters and provenance of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub version: &'static str,
    pub timestamp: String,
    pub seed: u64,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: timestamp(),
            seed,
        }
    }
}

/// RFC 3339 time of the run; `SOURCE_DATE_EPOCH` pins it for reproducible files.
fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|s| chrono::DateTime::from_timestamp(s, 0));
    pinned
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// One column of a CSV table.
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub const fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

/// CSV with a `#`-prefixed manifest line, a header row, a unit row and the data.
pub fn csv_document(manifest: &RunManifest, columns: &[Column], rows: &[Vec<String>]) -> io::Result<String> {
    let mut out = Vec::new();
    let header = serde_json::to_string(manifest).map_err(io::Error::other)?;
    writeln!(out, "# manifest: {header}")?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(columns.iter().map(|c| c.name))?;
        w.write_record(columns.iter().map(|c| c.unit))?;
        for row in rows {
            debug_assert_eq!(row.len(), columns.len());
            w.write_record(row)?;
        }
        w.flush()?;
    }
    String::from_utf8(out).map_err(io::Error::other)
}

/// Versioned JSON document `{schema, manifest, <key>: body}`.
pub fn json_document<T: Serialize>(manifest: &RunManifest, key: &str, body: &T) -> io::Result<String> {
    let mut doc = json!({ "schema": SCHEMA, "manifest": manifest });
    doc[key] = serde_json::to_value(body).map_err(io::Error::other)?;
    let mut s = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

/// Relative paths resolve against `WILLMORE_OUT_DIR` when it is set.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Write to the resolved file, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(p, content)
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()
        }
    }
}
