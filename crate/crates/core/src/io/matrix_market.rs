//! Matrix Market coordinate files (`general` symmetry, 1-based indices).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{Csr, CsrMatrix};
use crate::C64;

use super::check_format_comment;

/// Every stored entry, including structural zeros on the diagonal. Values
/// carry 17 significant digits so they read back exactly.
pub fn write_matrix_market(m: &CsrMatrix) -> String {
    let field = if m.is_real() { "real" } else { "complex" };
    let mut out = String::with_capacity(m.nnz() * 48 + 96);
    writeln!(out, "%%MatrixMarket matrix coordinate {field} general").unwrap();
    writeln!(out, "% format=1").unwrap();
    writeln!(out, "{} {} {}", m.dim(), m.dim(), m.nnz()).unwrap();
    let real = m.is_real();
    m.for_each_entry(|i, j, v| {
        if real {
            writeln!(out, "{} {} {:.16e}", i + 1, j + 1, v.re).unwrap();
        } else {
            writeln!(out, "{} {} {:.16e} {:.16e}", i + 1, j + 1, v.re, v.im).unwrap();
        }
    });
    out
}

/// Reads a square coordinate file into CSR with 64-bit indices. Repeated
/// entries are summed.
pub fn read_matrix_market(text: &str) -> Result<CsrMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let banner_toks: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if banner_toks.len() != 5
        || banner_toks[0] != "%%matrixmarket"
        || banner_toks[1] != "matrix"
        || banner_toks[2] != "coordinate"
        || banner_toks[4] != "general"
    {
        return Err(Error::parse(1, "expected `%%MatrixMarket matrix coordinate <field> general`"));
    }
    let complex = match banner_toks[3].as_str() {
        "real" | "integer" => false,
        "complex" => true,
        other => return Err(Error::parse(1, format!("unsupported field {other:?}"))),
    };

    let mut size = None;
    let mut entries: Vec<(usize, usize, C64)> = Vec::new();
    for (k, raw) in lines {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('%') {
            check_format_comment(line_no, line)?;
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::parse(line_no, format!("malformed line {line:?}"));
        match size {
            None => {
                let v: Vec<usize> = toks
                    .iter()
                    .map(|t| t.parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                if v.len() != 3 || v[0] != v[1] {
                    return Err(Error::parse(line_no, "expected square `rows cols nnz`"));
                }
                size = Some((v[0], v[2]));
                entries.reserve(v[2]);
            }
            Some((n, _)) => {
                if toks.len() != if complex { 4 } else { 3 } {
                    return Err(bad());
                }
                let i: usize = toks[0].parse().map_err(|_| bad())?;
                let j: usize = toks[1].parse().map_err(|_| bad())?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(Error::parse(line_no, format!("entry ({i}, {j}) outside {n}x{n}")));
                }
                let re: f64 = toks[2].parse().map_err(|_| bad())?;
                let im: f64 = if complex { toks[3].parse().map_err(|_| bad())? } else { 0.0 };
                entries.push((i - 1, j - 1, C64::new(re, im)));
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| Error::parse(0, "missing size line"))?;
    if entries.len() != nnz {
        return Err(Error::parse(
            0,
            format!("size line declares {nnz} entries, found {}", entries.len()),
        ));
    }
    entries.sort_by_key(|e| (e.0, e.1));
    let mut indptr = vec![0i64; n + 1];
    let mut indices: Vec<i64> = Vec::with_capacity(entries.len());
    let mut data: Vec<C64> = Vec::with_capacity(entries.len());
    let mut last = None;
    for (i, j, v) in entries {
        if last == Some((i, j)) {
            *data.last_mut().expect("entry exists") += v;
            continue;
        }
        last = Some((i, j));
        indptr[i + 1] += 1;
        indices.push(j as i64);
        data.push(v);
    }
    for i in 0..n {
        indptr[i + 1] += indptr[i];
    }
    Ok(if complex {
        CsrMatrix::ComplexI64(Csr {
            dim: n,
            indptr,
            indices,
            data,
        })
    } else {
        CsrMatrix::RealI64(Csr {
            dim: n,
            indptr,
            indices,
            data: data.into_iter().map(|v| v.re).collect(),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_round_trip() {
        let m = CsrMatrix::RealI32(Csr {
            dim: 2,
            indptr: vec![0, 2, 4],
            indices: vec![0, 1, 0, 1],
            data: vec![-1.0, 0.6, 0.6, 0.1 + 0.2],
        });
        let text = write_matrix_market(&m);
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n% format=1\n2 2 4\n"));
        assert!(text.contains("1 2 5.9999999999999998e-1"));
        let back = read_matrix_market(&text).unwrap();
        assert_eq!(back.to_dense(), m.to_dense());
        assert_eq!(back.index_bits(), 64);
    }

    #[test]
    fn complex_round_trip() {
        let m = CsrMatrix::ComplexI32(Csr {
            dim: 2,
            indptr: vec![0, 1, 2],
            indices: vec![1, 0],
            data: vec![C64::new(0.0, -0.5), C64::new(0.0, 0.5)],
        });
        let back = read_matrix_market(&write_matrix_market(&m)).unwrap();
        assert!(!back.is_real());
        assert_eq!(back.to_dense(), m.to_dense());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_matrix_market("").is_err());
        assert!(read_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1.0\n").is_err());
        assert!(read_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").is_err());
        assert!(read_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n").is_err());
    }
}
