//! Qubit operator term lists.
//!
//! ```text
//! # format=1
//! qubits 4
//! 0.3 X0 X1
//! 0.5 -0.25 +0 -3 Z1 Z2
//! -1.5
//! ```
//!
//! Each body line is a real part, an optional imaginary part and operator
//! tokens `X<i>`, `Y<i>`, `Z<i>`, `P0_<i>`, `P1_<i>`, `+<i>` (raise) and
//! `-<i>` (lower). A second numeric token counts as the imaginary part only
//! when it is not itself an operator token, so `1.0 +0` is a raise operator
//! while `1.0 0.5 +0` has imaginary part 0.5. The writer always prints a
//! decimal point or exponent in numbers, which keeps them distinct.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::operators::{OpCode, QubitOperator, QubitTerm};
use crate::C64;

use super::check_format_comment;

/// Parses an operator token such as `X3`, `P1_7` or `-2`.
pub fn parse_op_token(tok: &str) -> Option<(usize, OpCode)> {
    let (code, rest) = if let Some(r) = tok.strip_prefix("P0_") {
        (OpCode::P0, r)
    } else if let Some(r) = tok.strip_prefix("P1_") {
        (OpCode::P1, r)
    } else {
        let mut chars = tok.chars();
        let code = match chars.next()? {
            'X' => OpCode::X,
            'Y' => OpCode::Y,
            'Z' => OpCode::Z,
            '+' => OpCode::Raise,
            '-' => OpCode::Lower,
            _ => return None,
        };
        (code, chars.as_str())
    };
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().map(|i| (i, code))
}

fn op_token(index: usize, code: OpCode) -> String {
    match code {
        OpCode::P0 | OpCode::P1 => format!("{code}_{index}"),
        _ => format!("{code}{index}"),
    }
}

pub fn parse_term_list(text: &str) -> Result<QubitOperator> {
    let mut op: Option<QubitOperator> = None;
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
        let line = line.split('#').next().unwrap_or("").trim();
        let mut toks = line.split_whitespace().peekable();
        let first = toks.next().expect("line is not empty");

        if first == "qubits" {
            if op.is_some() {
                return Err(Error::parse(line_no, "repeated qubits header"));
            }
            let n = toks
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(line_no, "expected `qubits N`"))?;
            if toks.next().is_some() {
                return Err(Error::parse(line_no, "trailing tokens after qubit count"));
            }
            op = Some(QubitOperator::new(n));
            continue;
        }
        let Some(target) = op.as_mut() else {
            return Err(Error::parse(line_no, "term before `qubits N` header"));
        };
        let re: f64 = first
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid coefficient {first:?}")))?;
        let mut im = 0.0;
        if let Some(&t) = toks.peek() {
            if parse_op_token(t).is_none() {
                if let Ok(v) = t.parse::<f64>() {
                    im = v;
                    toks.next();
                }
            }
        }
        let mut ops = Vec::new();
        for t in toks {
            let (i, code) = parse_op_token(t)
                .ok_or_else(|| Error::parse(line_no, format!("unknown operator token {t:?}")))?;
            if i >= target.num_qubits() {
                return Err(Error::parse(
                    line_no,
                    format!("index {i} out of range for {} qubits", target.num_qubits()),
                ));
            }
            ops.push((i, code));
        }
        let term = QubitTerm::new(C64::new(re, im), ops).map_err(|e| Error::parse(line_no, e.to_string()))?;
        target.push(term).map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    op.ok_or_else(|| Error::parse(0, "missing `qubits N` header"))
}

pub fn write_term_list(op: &QubitOperator) -> String {
    let mut out = String::new();
    writeln!(out, "# format=1").unwrap();
    writeln!(out, "qubits {}", op.num_qubits()).unwrap();
    for t in op.terms() {
        let c = t.coeff();
        write!(out, "{:?}", c.re).unwrap();
        if c.im != 0.0 {
            write!(out, " {:?}", c.im).unwrap();
        }
        for (i, code) in t.ops() {
            write!(out, " {}", op_token(i, code)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_bond() {
        let op = parse_term_list("qubits 2\n0.3 X0 X1\n0.3 Y0 Y1\n1.0 Z0 Z1").unwrap();
        assert_eq!(op.len(), 3);
        assert_eq!(op.terms()[1].codes(), &[OpCode::Y, OpCode::Y]);
    }

    #[test]
    fn empty_body_is_zero_operator() {
        let op = parse_term_list("# format=1\nqubits 3\n").unwrap();
        assert!(op.is_empty());
        assert_eq!(op.num_qubits(), 3);
    }

    #[test]
    fn ladder_tokens_are_not_imaginary_parts() {
        let op = parse_term_list("qubits 2\n1.0 +0 -1").unwrap();
        let t = &op.terms()[0];
        assert_eq!(t.coeff(), C64::new(1.0, 0.0));
        assert_eq!(t.codes(), &[OpCode::Raise, OpCode::Lower]);
        let op = parse_term_list("qubits 2\n1.0 -0.5 P0_1 -0").unwrap();
        let t = &op.terms()[0];
        assert_eq!(t.coeff(), C64::new(1.0, -0.5));
        assert_eq!(t.codes(), &[OpCode::Lower, OpCode::P0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (text, line) in [
            ("qubits 2\n1.0 Q0", 2),
            ("qubits 2\n\n1.0 X0 Z0", 3),
            ("qubits 2\n1.0 X2", 2),
            ("1.0 X0", 1),
            ("# format=2\nqubits 1", 1),
        ] {
            match parse_term_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn round_trip() {
        let text = "qubits 8\n0.3 X0 X1\n-1.25 0.5 +2 -5 P0_4 P1_7\n1e-7 Y3 Z6\n2.0\n";
        let op = parse_term_list(text).unwrap();
        let again = parse_term_list(&write_term_list(&op)).unwrap();
        assert_eq!(op, again);
    }

    #[test]
    fn token_grammar() {
        assert_eq!(parse_op_token("P1_12"), Some((12, OpCode::P1)));
        assert_eq!(parse_op_token("+0"), Some((0, OpCode::Raise)));
        assert_eq!(parse_op_token("-0.5"), None);
        assert_eq!(parse_op_token("X"), None);
        assert_eq!(parse_op_token("P2_1"), None);
        assert_eq!(parse_op_token("X+1"), None);
    }
}
