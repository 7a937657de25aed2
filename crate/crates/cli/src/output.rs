use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numeric(String),
    Io(String),
    Tolerance(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 4,
            Failure::Tolerance(_) => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "invalid_input",
            Failure::Numeric(_) => "numerical_failure",
            Failure::Io(_) => "io",
            Failure::Tolerance(_) => "tolerance_breach",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numeric(m) | Failure::Io(m) | Failure::Tolerance(m) => m,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<wavelock::Error> for Failure {
    fn from(e: wavelock::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Nine significant digits.
pub fn text_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (8 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

pub fn text_option(x: Option<f64>) -> String {
    x.map(text_number).unwrap_or_else(|| "null".to_string())
}

/// Empty cell for absent values; shortest round-trip digits otherwise.
pub fn csv_option(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

pub fn write_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(text_number(0.16286750396763996), "0.162867504");
        assert_eq!(text_number(231.47035367754253), "231.470354");
        assert_eq!(text_number(6.03e-23), "6.03000000e-23");
        assert_eq!(text_number(0.0), "0");
        assert_eq!(text_option(None), "null");
    }
}
