//! Record writers. CSV and json-lines print every value with enough digits to read back
//! to the same float; the table is for people and rounds.

use std::io::{self, Write};

use rpm_core::mp::to_decimal;
use rug::Float;
use serde_json::{json, Value};

use crate::config::OutputFormat;
use crate::run::{exact_digits, Record, RecordKind};

pub const CSV_COLUMNS: [&str; 10] = [
    "mode",
    "lambda",
    "d",
    "D",
    "re",
    "im",
    "residual_log10",
    "iterations",
    "precision_bits",
    "certified_digits",
];

const TABLE_DIGITS: usize = 24;

fn full(x: &Float) -> String {
    to_decimal(x, exact_digits(x))
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn residual(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3}")
    } else {
        x.to_string()
    }
}

fn csv_fields(r: &Record) -> [String; 10] {
    [
        r.mode.name().to_string(),
        opt(r.lambda.as_ref().map(|l| l.as_str())),
        opt(r.d),
        opt(r.dimension),
        full(r.value.re()),
        full(r.value.im()),
        residual(r.residual_log10),
        r.iterations.to_string(),
        r.precision_bits.to_string(),
        opt(r.certified_digits),
    ]
}

fn json_record(r: &Record) -> Value {
    let kind = match r.kind {
        RecordKind::Entry => "entry",
        RecordKind::Summary => "summary",
    };
    let residual_log10 = if r.residual_log10.is_finite() {
        json!(r.residual_log10)
    } else {
        json!(r.residual_log10.to_string())
    };
    json!({
        "kind": kind,
        "mode": r.mode.name(),
        "lambda": r.lambda.as_ref().map(|l| l.as_str()),
        "d": r.d,
        "D": r.dimension,
        "re": full(r.value.re()),
        "im": full(r.value.im()),
        "residual_log10": residual_log10,
        "iterations": r.iterations,
        "precision_bits": r.precision_bits,
        "certified_digits": r.certified_digits,
    })
}

fn write_table(records: &[Record], out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<[String; 10]> = records
        .iter()
        .map(|r| {
            let mut row = csv_fields(r);
            row[4] = to_decimal(r.value.re(), TABLE_DIGITS);
            row[5] = to_decimal(r.value.im(), TABLE_DIGITS);
            if r.kind == RecordKind::Summary {
                row[2] = "*".into();
                row[3] = "*".into();
            }
            row
        })
        .collect();
    let mut widths = CSV_COLUMNS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(&CSV_COLUMNS.map(String::from)))?;
    for row in &rows {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

/// Writes all records in `format`. Summary rows leave `d` and `D` empty in CSV.
pub fn write_records(records: &[Record], format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                w.write_record(csv_fields(r))?;
            }
            w.flush()
        }
        OutputFormat::JsonLines => {
            for r in records {
                writeln!(out, "{}", json_record(r))?;
            }
            Ok(())
        }
        OutputFormat::Table => write_table(records, out),
    }
}
