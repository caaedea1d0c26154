//! The four worked codes, transcribed as printed.

use crate::code::FrCode;
use crate::error::{Error, Result};

pub const CORPUS_NAMES: [&str; 4] = ["table1", "table2", "table3", "m11x8"];

const TABLE1: [&[usize]; 7] = [
    &[1, 6, 7, 8],
    &[1, 2, 7, 8],
    &[1, 2, 3, 8],
    &[2, 3, 4, 7],
    &[3, 4, 5],
    &[4, 5, 6],
    &[5, 6],
];

const TABLE2: [&[usize]; 5] = [
    &[1, 2, 3, 4],
    &[1, 6, 9],
    &[2, 5, 7, 9],
    &[3, 5, 6, 8],
    &[4, 7, 8],
];

// Packet 5 is stored once although ρ = 2.
const TABLE3: [&[usize]; 5] = [&[1, 2, 3, 4], &[1, 2, 5, 7], &[3, 4, 6, 8], &[7, 8], &[6]];

// Row 5 has weight 4 even though the code is labelled with α = 2.
const M11X8: [&str; 11] = [
    "10010010", "01001001", "00100000", "00000100", "11110000", "00001001", "00000110", "10011000",
    "01100100", "00000010", "00000001",
];

/// A built-in code by name, see [`CORPUS_NAMES`].
pub fn corpus_code(name: &str) -> Result<FrCode> {
    let code = match name {
        "table1" => FrCode::new(8, 3, TABLE1.iter().map(|n| n.iter().copied())),
        "table2" => FrCode::new(9, 2, TABLE2.iter().map(|n| n.iter().copied())),
        "table3" => FrCode::new(8, 2, TABLE3.iter().map(|n| n.iter().copied())),
        "m11x8" => FrCode::new(
            8,
            3,
            M11X8.iter().map(|row| {
                row.bytes()
                    .enumerate()
                    .filter(|&(_, b)| b == b'1')
                    .map(|(j, _)| j + 1)
            }),
        ),
        other => {
            return Err(Error::Parameter(format!(
                "unknown corpus code {other:?}, expected one of {}",
                CORPUS_NAMES.join(", ")
            )))
        }
    };
    Ok(code.expect("corpus entries are well-formed"))
}

/// All built-in codes in a fixed order.
pub fn corpus() -> Vec<(&'static str, FrCode)> {
    CORPUS_NAMES
        .iter()
        .map(|&name| (name, corpus_code(name).expect("known name")))
        .collect()
}
