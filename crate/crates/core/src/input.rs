//! Reading sample and token files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Read real numbers separated by commas and/or newlines.
pub fn read_samples(path: &Path) -> Result<Vec<f64>> {
    parse_samples(&read(path)?, &path.display().to_string())
}

/// Parse sample text. Blank lines are skipped and a non-numeric first line is
/// treated as a header; any later non-numeric or non-finite entry is an error
/// naming its 1-based row.
pub fn parse_samples(text: &str, label: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let first_content = !seen_content;
        seen_content = true;
        let mut parsed = Vec::new();
        let mut failure = None;
        for token in line.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => parsed.push(v),
                Ok(_) => {
                    failure = Some(format!("non-finite value '{token}'"));
                    break;
                }
                Err(_) => {
                    failure = Some(format!("not a number: '{token}'"));
                    break;
                }
            }
        }
        match failure {
            None => values.extend(parsed),
            Some(_) if first_content && parsed.is_empty() && looks_like_header(line) => {}
            Some(message) => {
                return Err(Error::Parse {
                    path: label.to_string(),
                    row,
                    message,
                })
            }
        }
    }
    Ok(values)
}

fn looks_like_header(line: &str) -> bool {
    line.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .all(|t| t.parse::<f64>().is_err())
}

/// Read newline-delimited tokens, trimming whitespace and skipping blank lines.
pub fn read_tokens(path: &Path) -> Result<Vec<String>> {
    Ok(parse_tokens(&read(path)?))
}

pub fn parse_tokens(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}
