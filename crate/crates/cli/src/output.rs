//! Report serialization: pretty JSON or flat CSV, to stdout or a file.
//!
//! Both formats are byte-deterministic for a fixed command line and seed:
//! JSON uses `serde_json`'s pretty printer with struct-declared field
//! order, CSV writes a fixed header followed by rows whose floating-point
//! cells use seventeen significant digits (`{:.16e}`), enough to
//! round-trip any `f64` exactly.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

/// Output format selector shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

/// Formats a float with 17 significant digits so the exact bit pattern
/// survives a text round-trip. Non-finite values print as `NaN`/`inf`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Formats an optional float, printing `nan` for absent values so CSV
/// columns stay rectangular.
pub fn fmt_opt_f64(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => "nan".to_string(),
    }
}

/// Minimal CSV assembler. None of the emitted vocabulary needs quoting
/// (numbers, booleans, fixed identifiers), and `row` asserts that no cell
/// smuggles in a separator; a general-purpose escaper would be dead code.
#[derive(Debug)]
pub struct Csv {
    header_len: usize,
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push('\n');
        Self {
            header_len: header.len(),
            buf,
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        assert_eq!(
            cells.len(),
            self.header_len,
            "CSV row width must match the header"
        );
        for (i, cell) in cells.iter().enumerate() {
            assert!(
                !cell.contains(',') && !cell.contains('\n') && !cell.contains('"'),
                "CSV cell `{cell}` would need quoting"
            );
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(cell);
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Serializes a record as pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes the payload to `out` when given, otherwise to stdout.
pub fn emit(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(|e| {
            CliError::Validation(format!("cannot write `{}`: {e}", path.display()))
        }),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[
            0.0,
            1.0,
            -1.0 / 3.0,
            std::f64::consts::PI,
            6.626e-34,
            1.0 + f64::EPSILON,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s} did not round-trip");
        }
    }

    #[test]
    fn option_cells_print_nan() {
        assert_eq!(fmt_opt_f64(None), "nan");
        assert!(fmt_opt_f64(Some(0.5)).starts_with("5.0"));
    }

    #[test]
    fn csv_assembles_header_and_rows() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".to_string(), "2".to_string()]);
        assert_eq!(csv.finish(), "a,b\n1,2\n");
    }

    #[test]
    #[should_panic(expected = "width")]
    fn csv_rejects_ragged_rows() {
        let mut csv = Csv::new(&["a", "b"]);
        csv.row(&["1".to_string()]);
    }

    #[test]
    fn format_parser_accepts_known_names_only() {
        assert_eq!(OutputFormat::from_str("json").unwrap(), OutputFormat::Json);
        assert_eq!(OutputFormat::from_str("csv").unwrap(), OutputFormat::Csv);
        assert!(OutputFormat::from_str("yaml").is_err());
    }
}
