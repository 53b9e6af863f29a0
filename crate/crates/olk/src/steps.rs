//! The `.steps` format: one piece per line, `start length value`.
//!
//! Blank lines and `#` comments are ignored. `length` may be `inf` for a piece
//! running to the end of `[0,∞)`.

use std::fmt::Write as _;
use std::path::Path;

use olk_core::{Domain, Piece, StepError, StepFunction};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StepsError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] StepError),
}

fn number(field: &str, line: usize, what: &str) -> Result<f64, StepsError> {
    let v = match field {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        s => s.parse::<f64>().map_err(|_| StepsError::Syntax {
            line,
            message: format!("{what} {s:?} is not a number"),
        })?,
    };
    if v.is_nan() {
        return Err(StepsError::Syntax {
            line,
            message: format!("{what} is NaN"),
        });
    }
    Ok(v)
}

/// Parses `.steps` text into a function on `domain`.
pub fn parse_steps(text: &str, domain: Domain) -> Result<StepFunction, StepsError> {
    let mut pieces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(StepsError::Syntax {
                line,
                message: format!(
                    "expected `start length value`, found {} fields",
                    fields.len()
                ),
            });
        }
        pieces.push(Piece::new(
            number(fields[0], line, "start")?,
            number(fields[1], line, "length")?,
            number(fields[2], line, "value")?,
        ));
    }
    Ok(StepFunction::new(domain, pieces)?)
}

pub fn read_steps(path: &Path, domain: Domain) -> Result<StepFunction, StepsError> {
    let text = std::fs::read_to_string(path).map_err(|source| StepsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_steps(&text, domain)
}

fn exact(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:?}")
    }
}

/// Serializes the canonical pieces; round-trips exactly through [`parse_steps`].
pub fn write_steps(x: &StepFunction) -> String {
    let mut out = String::new();
    for p in x.pieces() {
        let _ = writeln!(
            out,
            "{} {} {}",
            exact(p.start),
            exact(p.len),
            exact(p.value)
        );
    }
    out
}
