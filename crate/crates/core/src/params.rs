//! Flat `key=value` parameter files for the estimator constants.
//!
//! ```text
//! # fitted on corpus.csv
//! alpha=0.94
//! beta=2.37
//! q=0.33
//! k=1.23
//! ```
//!
//! Missing keys keep their default; unknown keys are rejected.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimate::ModelConstants;

pub fn parse_params(text: &str, base: ModelConstants) -> Result<ModelConstants> {
    let mut constants = base;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected key=value, got `{line}`"),
        })?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("`{}` is not a number", value.trim()),
        })?;
        let slot = match key.trim() {
            "alpha" => &mut constants.alpha,
            "beta" => &mut constants.beta,
            "q" => &mut constants.q,
            "k" => &mut constants.k,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown key `{other}`"),
                })
            }
        };
        *slot = value;
    }
    constants.validate()?;
    Ok(constants)
}

/// Renders constants with round-trip precision.
pub fn format_params(constants: &ModelConstants, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(comment) = comment {
        for line in comment.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "alpha={}", constants.alpha);
    let _ = writeln!(out, "beta={}", constants.beta);
    let _ = writeln!(out, "q={}", constants.q);
    let _ = writeln!(out, "k={}", constants.k);
    out
}

pub fn read_params_file(path: impl AsRef<Path>) -> Result<ModelConstants> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_params(&text, ModelConstants::default())
}

pub fn write_params_file(
    path: impl AsRef<Path>,
    constants: &ModelConstants,
    comment: Option<&str>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_params(constants, comment))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
