use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, CliResult};

/// Writes the finished artifact to `path`, or to standard output.
pub fn write(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// One JSON object on standard error.
pub fn report_error(e: &CliError) {
    let body = json!({
        "error": {
            "kind": e.kind(),
            "exit_code": e.exit_code(),
            "message": e.to_string(),
        }
    });
    eprintln!("{body}");
}

/// Fixed scientific notation so that reruns produce identical text.
pub fn num(x: f64) -> String {
    format!("{x:.10e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

/// CSV body from a header and rows, followed by `#` summary lines.
pub fn csv_table(header: &[&str], rows: &[Vec<String>], summary: &[String]) -> CliResult<String> {
    let fail = |e: csv::Error| CliError::Numerical(format!("cannot format CSV: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Numerical(format!("cannot format CSV: {e}")))?;
    let mut s = String::from_utf8(bytes).expect("CSV of UTF-8 fields");
    for line in summary {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    Ok(s)
}
