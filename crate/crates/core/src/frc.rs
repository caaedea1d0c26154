//! The `FRC1` text format.
//!
//! ```text
//! FRC1
//! n theta rho
//! <packets of U_1, ascending, single spaces>
//! ...
//! <packets of U_n>
//! ```
//!
//! Blank lines and lines starting with `#` are skipped anywhere.

use std::fmt::Write as _;

use crate::code::FrCode;
use crate::error::{Error, Result};

pub const MAGIC: &str = "FRC1";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn semantic_err(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic {
        line,
        message: message.into(),
    }
}

fn integers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split(' ')
        .map(|tok| {
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(parse_err(
                    line_no,
                    format!("expected integer, found {tok:?}"),
                ));
            }
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("integer {tok} too large")))
        })
        .collect()
}

pub fn parse_frc(text: &str) -> Result<FrCode> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));

    let (line_no, magic) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing FRC1 header"))?;
    if magic != MAGIC {
        return Err(parse_err(
            line_no,
            format!("expected {MAGIC}, found {magic:?}"),
        ));
    }

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(line_no + 1, "missing \"n theta rho\" line"))?;
    let [n, theta, rho] = integers(header_no, header)?[..] else {
        return Err(parse_err(
            header_no,
            "expected three integers \"n theta rho\"",
        ));
    };
    for (name, value) in [("n", n), ("theta", theta), ("rho", rho)] {
        if value == 0 {
            return Err(semantic_err(
                header_no,
                format!("{name} must be at least 1"),
            ));
        }
    }

    let mut nodes = Vec::with_capacity(n);
    let mut last_line = header_no;
    for (line_no, line) in lines {
        last_line = line_no;
        if nodes.len() == n {
            return Err(semantic_err(
                line_no,
                format!("more than the declared {n} node lines"),
            ));
        }
        let packets = integers(line_no, line)?;
        for w in packets.windows(2) {
            if w[0] == w[1] {
                return Err(semantic_err(line_no, format!("duplicate packet {}", w[0])));
            }
            if w[0] > w[1] {
                return Err(parse_err(line_no, "packets not ascending"));
            }
        }
        if let Some(&bad) = packets.iter().find(|&&p| p == 0 || p > theta) {
            return Err(semantic_err(
                line_no,
                format!("packet {bad} outside 1..={theta}"),
            ));
        }
        nodes.push(packets);
    }
    if nodes.len() != n {
        return Err(semantic_err(
            last_line,
            format!("declared {n} nodes, found {}", nodes.len()),
        ));
    }

    FrCode::new(theta, rho, nodes).map_err(|e| semantic_err(last_line, e.to_string()))
}

/// Canonical form: no comments, single trailing newline.
pub fn write_frc(code: &FrCode) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "{} {} {}", code.n(), code.theta(), code.rho());
    for node in code.nodes() {
        let line: Vec<String> = node.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
