//! The line-oriented structure file format.
//!
//! ```text
//! # phi-structure v1
//! X 4
//! Y 2
//! B 0 1
//! THETA ALL
//! MATRIX
//! 00
//! 01
//! 10
//! 11
//! ```

use std::fmt::Write as _;

use philab_core::{BipartiteStructure, Param};
use thiserror::Error;

pub const HEADER: &str = "# phi-structure v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed header at line {line}: expected `{expected}`")]
    Header { line: usize, expected: &'static str },
    #[error("matrix row length mismatch at line {line}: expected {expected} characters, found {found}")]
    RowLength { line: usize, expected: usize, found: usize },
    #[error("invalid matrix character at line {line}")]
    InvalidCharacter { line: usize },
    #[error("missing matrix row at line {line}")]
    MissingRow { line: usize },
    #[error("unexpected content at line {line}")]
    Trailing { line: usize },
    #[error("index {index} out of range at line {line}: Y has {params} parameters")]
    IndexOutOfRange { line: usize, index: usize, params: usize },
    #[error("B is not a subset of THETA at line {line}: parameter {index} is missing")]
    BaseNotInTheta { line: usize, index: usize },
    #[error("invalid structure: {0}")]
    Structure(String),
}

fn header_value<'a>(line_no: usize, line: Option<&'a str>, key: &'static str, expected: &'static str) -> Result<&'a str, ParseError> {
    let err = ParseError::Header { line: line_no, expected };
    let line = line.ok_or(err.clone())?.trim_end();
    match line.strip_prefix(key) {
        Some("") => Ok(""),
        Some(rest) if rest.starts_with(' ') => Ok(rest.trim_start()),
        _ => Err(err),
    }
}

fn count(line_no: usize, line: Option<&str>, key: &'static str, expected: &'static str) -> Result<usize, ParseError> {
    header_value(line_no, line, key, expected)?
        .parse()
        .map_err(|_| ParseError::Header { line: line_no, expected })
}

fn indices(line_no: usize, text: &str, params: usize, expected: &'static str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            let index: usize = tok.parse().map_err(|_| ParseError::Header { line: line_no, expected })?;
            if index >= params {
                return Err(ParseError::IndexOutOfRange { line: line_no, index, params });
            }
            Ok(index)
        })
        .collect()
}

pub fn parse_structure(text: &str) -> Result<BipartiteStructure, ParseError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim_end) != Some(HEADER) {
        return Err(ParseError::Header { line: 1, expected: HEADER });
    }
    let m = count(2, lines.next(), "X", "X <m>")?;
    let n = count(3, lines.next(), "Y", "Y <n>")?;
    let base = indices(4, header_value(4, lines.next(), "B", "B <indices>")?, n, "B <indices>")?;
    let theta_text = header_value(5, lines.next(), "THETA", "THETA ALL | THETA <indices>")?;
    let theta = match theta_text {
        "ALL" => None,
        t => Some(indices(5, t, n, "THETA ALL | THETA <indices>")?),
    };
    if let Some(theta) = &theta {
        if let Some(&index) = base.iter().find(|b| !theta.contains(b)) {
            return Err(ParseError::BaseNotInTheta { line: 5, index });
        }
    }
    if lines.next().map(str::trim_end) != Some("MATRIX") {
        return Err(ParseError::Header { line: 6, expected: "MATRIX" });
    }
    let mut truth = Vec::with_capacity(m);
    for i in 0..m {
        let line_no = 7 + i;
        let row = lines.next().ok_or(ParseError::MissingRow { line: line_no })?.trim_end();
        let bits = row
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ParseError::InvalidCharacter { line: line_no }),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        if bits.len() != n {
            return Err(ParseError::RowLength { line: line_no, expected: n, found: bits.len() });
        }
        truth.push(bits);
    }
    for (offset, rest) in lines.enumerate() {
        if !rest.trim().is_empty() {
            return Err(ParseError::Trailing { line: 7 + m + offset });
        }
    }
    BipartiteStructure::new(truth, n, &base, theta.as_deref()).map_err(|e| ParseError::Structure(e.to_string()))
}

/// Canonical text: `B` and `THETA` sorted, `THETA ALL` when `Θ = Y` was
/// declared that way.
pub fn serialize_structure(s: &BipartiteStructure) -> String {
    let join = |ps: &[Param]| ps.iter().map(|b| format!(" {}", b.0)).collect::<String>();
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "X {}", s.num_elements()).unwrap();
    writeln!(out, "Y {}", s.num_params()).unwrap();
    writeln!(out, "B{}", join(s.base_set())).unwrap();
    if s.theta_is_all() {
        writeln!(out, "THETA ALL").unwrap();
    } else {
        writeln!(out, "THETA{}", join(s.theta_set())).unwrap();
    }
    writeln!(out, "MATRIX").unwrap();
    for a in s.elements() {
        let row: String = s.params().map(|b| if s.truth(a, b) { '1' } else { '0' }).collect();
        writeln!(out, "{row}").unwrap();
    }
    out
}
