use std::fs;
use std::io::Write;

use serde_json::Value;

use crate::{Failure, Format, OutputArgs};

/// A command result renderable as CSV or JSON.
pub struct Document {
    pub default_format: Format,
    pub header: &'static str,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

/// 17 significant digits, enough to recover the exact double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn render(doc: &Document, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc.json).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::with_capacity(64 * (doc.rows.len() + 1));
            s.push_str(doc.header);
            s.push('\n');
            for row in &doc.rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
    }
}

pub fn emit(doc: &Document, args: &OutputArgs) -> Result<(), Failure> {
    let text = render(doc, args.format.unwrap_or(doc.default_format));
    match &args.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::validation(format!("cannot write to standard output: {e}")))
        }
    }
}

/// Quotes a CSV field when it contains a separator or quote.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
