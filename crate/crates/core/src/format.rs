//! The `monotile-patch v1` text format.
//!
//! ```text
//! monotile-patch v1          (or: monotile-torus v1 a b c)
//! # comment
//! q r k m                    (m is 0, 1, or ? for a skeleton entry)
//! ```
//!
//! Cell lines may appear in any order; [`serialize`] writes them sorted by
//! `(q, r)` with `\n` line endings.

use std::fmt::Write as _;

use crate::lattice::{Cell, TorusDomain};
use crate::patch::{Patch, PoseEntry};
use crate::tile::TilePose;

pub const PATCH_HEADER: &str = "monotile-patch v1";
pub const TORUS_HEADER: &str = "monotile-torus v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected header `{PATCH_HEADER}` or `{TORUS_HEADER} a b c`")]
    Header { line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate cell {cell}")]
    Duplicate { line: usize, cell: Cell },
    #[error("empty input")]
    Empty,
}

pub fn serialize(p: &Patch) -> String {
    let mut out = String::new();
    match p.torus() {
        Some(t) => {
            let (a, b, c) = t.abc();
            writeln!(out, "{TORUS_HEADER} {a} {b} {c}").unwrap();
        }
        None => writeln!(out, "{PATCH_HEADER}").unwrap(),
    }
    for (cell, entry) in p.iter() {
        match entry {
            PoseEntry::Full(pose) => writeln!(out, "{} {} {} {}", cell.q, cell.r, pose.k(), pose.m()),
            PoseEntry::Skeleton { k } => writeln!(out, "{} {} {} ?", cell.q, cell.r, k),
        }
        .unwrap();
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::Malformed { line, message: format!("invalid {what} `{tok}`") })
}

pub fn parse(text: &str) -> Result<Patch, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l).trim()));
    let (hline, header) = lines.by_ref().find(|(_, l)| !l.is_empty()).ok_or(ParseError::Empty)?;

    let mut patch = if header == PATCH_HEADER {
        Patch::new()
    } else if let Some(rest) = header.strip_prefix(TORUS_HEADER) {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 3 || !rest.starts_with(char::is_whitespace) {
            return Err(ParseError::Header { line: hline });
        }
        let a = parse_int(toks[0], hline, "basis entry")?;
        let b = parse_int(toks[1], hline, "basis entry")?;
        let c = parse_int(toks[2], hline, "basis entry")?;
        let t = TorusDomain::new(a, b, c).map_err(|e| ParseError::Malformed { line: hline, message: e.to_string() })?;
        Patch::on_torus(t)
    } else {
        return Err(ParseError::Header { line: hline });
    };

    for (line, body) in lines {
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(ParseError::Malformed {
                line,
                message: format!("expected `q r k m`, got {} fields", toks.len()),
            });
        }
        let q = parse_int(toks[0], line, "q")?;
        let r = parse_int(toks[1], line, "r")?;
        let k: u8 = parse_int(toks[2], line, "rotation")?;
        if k > 5 {
            return Err(ParseError::Malformed { line, message: format!("rotation {k} out of range 0..5") });
        }
        let entry = match toks[3] {
            "0" => PoseEntry::Full(TilePose::new(k, 0)),
            "1" => PoseEntry::Full(TilePose::new(k, 1)),
            "?" => PoseEntry::Skeleton { k },
            other => {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("chirality must be 0, 1 or ?, got `{other}`"),
                })
            }
        };
        let cell = Cell::new(q, r);
        if patch.torus().is_some_and(|t| t.reduce(cell) != cell) {
            return Err(ParseError::Malformed { line, message: format!("{cell} is not a torus representative") });
        }
        patch.insert(cell, entry).map_err(|e| ParseError::Duplicate { line, cell: e.0 })?;
    }
    Ok(patch)
}
