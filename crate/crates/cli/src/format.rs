//! Deterministic text encodings for artifacts.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

/// Significant digits kept in CSV cells.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Round to [`SIGNIFICANT_DIGITS`] and print the shortest decimal that
/// round-trips the rounded value.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_owned()
        } else if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation parses");
    format!("{rounded}")
}

/// Optional number; `None` becomes an empty cell.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug)]
pub struct Csv {
    width: usize,
    text: String,
}

impl Csv {
    /// Start a table with the given header.
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv {
            width: header.len(),
            text: String::new(),
        };
        csv.push_line(header.iter().map(|s| (*s).to_owned()));
        csv
    }

    /// Append a row; panics if the width differs from the header.
    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        assert_eq!(cells.len(), self.width, "row width must match header");
        self.push_line(cells);
    }

    fn push_line(&mut self, cells: impl IntoIterator<Item = String>) {
        for (i, c) in cells.into_iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            debug_assert!(!c.contains([',', '"', '\n']));
            let _ = write!(self.text, "{c}");
        }
        self.text.push('\n');
    }

    /// The encoded table.
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Consume into the encoded table.
    pub fn into_string(self) -> String {
        self.text
    }
}

/// Pretty JSON with object keys sorted and a trailing newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let value: Value = serde_json::to_value(value)
        .map_err(|e| CliError::Usage(format!("cannot encode output: {e}")))?;
    let mut s = serde_json::to_string_pretty(&value).expect("values always encode");
    s.push('\n');
    Ok(s)
}

/// `"true"`/`"false"`.
pub fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}
