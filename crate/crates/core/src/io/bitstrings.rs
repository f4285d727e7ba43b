//! Bit-string lists: one MSB-first string per line, optionally followed by
//! a sample count that is ignored. Repeated strings keep their first
//! position.

use std::fmt::Write as _;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::subspace::Subspace;

use super::check_format_comment;

pub fn parse_bitstrings(text: &str) -> Result<Subspace> {
    let mut strings = Vec::new();
    let mut width = None;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            check_format_comment(line_no, line)?;
            continue;
        }
        let mut toks = line.split_whitespace();
        let word = toks.next().expect("line is not empty");
        if let Some(count) = toks.next() {
            count
                .parse::<u64>()
                .map_err(|_| Error::parse(line_no, format!("invalid count {count:?}")))?;
        }
        if toks.next().is_some() {
            return Err(Error::parse(line_no, "expected `bits [count]`"));
        }
        let b = BitString::parse_msb(word).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(line_no, msg),
            other => other,
        })?;
        match width {
            None => width = Some(b.width()),
            Some(w) if w != b.width() => {
                return Err(Error::parse(
                    line_no,
                    format!("bit-string width {} differs from {w}", b.width()),
                ))
            }
            _ => {}
        }
        strings.push(b);
    }
    let width = width.ok_or_else(|| Error::parse(0, "no bit-strings"))?;
    Subspace::from_bitstrings(strings, width)
}

pub fn write_bitstrings(s: &Subspace) -> String {
    let mut out = String::with_capacity(s.dim() * (s.num_qubits() + 1) + 16);
    out.push_str("# format=1\n");
    for b in s.iter() {
        writeln!(out, "{b}").unwrap();
    }
    out
}
