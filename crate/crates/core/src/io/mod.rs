//! Text formats. Every emitted file starts with a `format=1` comment line.

pub mod bitstrings;
pub mod fcidump;
pub mod matrix_market;
pub mod report;
pub mod term_list;

pub use bitstrings::{parse_bitstrings, write_bitstrings};
pub use fcidump::{parse_fcidump, Fcidump};
pub use matrix_market::{read_matrix_market, write_matrix_market};
pub use report::Report;
pub use term_list::{parse_term_list, write_term_list};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Checks a `format=N` comment if present. Other comments pass.
pub(crate) fn check_format_comment(line_no: usize, comment: &str) -> Result<()> {
    let body = comment.trim_start_matches(['#', '%']).trim();
    if let Some(v) = body.strip_prefix("format=") {
        match v.trim().parse::<u32>() {
            Ok(FORMAT_VERSION) => Ok(()),
            _ => Err(Error::parse(line_no, format!("unsupported format version {:?}", v.trim()))),
        }
    } else {
        Ok(())
    }
}
