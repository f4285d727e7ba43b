//! FCIDUMP integral files for real orbitals.
//!
//! The header holds `NORB`, `NELEC` and `MS2`, either inside a
//! `&FCI ... &END` block or as plain `KEY=value` / `KEY value` pairs.
//! Each body line is `value i j k l` with 1-based orbital indices and
//! chemist-notation two-electron integrals `(ij|kl)`. Lines `value i j 0 0`
//! are one-electron integrals, `value 0 0 0 0` is the core energy, and
//! orbital-energy lines `value i 0 0 0` are ignored.
//!
//! Spatial orbital `p` with spin `s` (0 up, 1 down) maps to fermionic mode
//! `2p + s`.

use crate::error::{Error, Result};
use crate::operators::{FermionOperator, FermionTerm};

use super::check_format_comment;

#[derive(Clone, Debug, PartialEq)]
pub struct Fcidump {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i64,
    pub core_energy: f64,
    /// Row-major `norb x norb`.
    pub h1: Vec<f64>,
    /// `(ij|kl)` at `((i*n + j)*n + k)*n + l`.
    pub h2: Vec<f64>,
}

impl Fcidump {
    pub fn num_modes(&self) -> usize {
        2 * self.norb
    }

    #[inline]
    pub fn one_body(&self, i: usize, j: usize) -> f64 {
        self.h1[i * self.norb + j]
    }

    #[inline]
    pub fn two_body(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.norb;
        self.h2[((i * n + j) * n + k) * n + l]
    }

    fn set_two_body(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let n = self.norb;
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            self.h2[((a * n + b) * n + c) * n + d] = v;
        }
    }

    /// `H0 + sum h_pq a+_ps a_qs + 1/2 sum (pq|rs) a+_ps a+_rt a_st a_qs`.
    pub fn to_fermion_operator(&self) -> FermionOperator {
        let n = self.norb;
        let mut op = FermionOperator::new(self.num_modes());
        op.set_constant(self.core_energy);
        let mode = |p: usize, s: usize| 2 * p + s;
        for p in 0..n {
            for q in 0..n {
                let h = self.one_body(p, q);
                if h == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    op.push(FermionTerm::ladder(h, &[(mode(p, s), true), (mode(q, s), false)]))
                        .expect("modes below 2 * norb");
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for t in 0..n {
                        let v = self.two_body(p, q, r, t);
                        if v == 0.0 {
                            continue;
                        }
                        for s in 0..2 {
                            for u in 0..2 {
                                let (a, b, c, d) = (mode(p, s), mode(r, u), mode(t, u), mode(q, s));
                                if a == b || c == d {
                                    continue;
                                }
                                op.push(FermionTerm::ladder(
                                    0.5 * v,
                                    &[(a, true), (b, true), (c, false), (d, false)],
                                ))
                                .expect("modes below 2 * norb");
                            }
                        }
                    }
                }
            }
        }
        op
    }
}

fn header_values(header: &str, line_no: usize) -> Result<(usize, usize, i64)> {
    let cleaned: String = header
        .chars()
        .map(|c| if c == ',' || c == '=' { ' ' } else { c })
        .collect();
    let toks: Vec<&str> = cleaned
        .split_whitespace()
        .filter(|t| !t.starts_with('&') && *t != "/")
        .collect();
    let mut norb = None;
    let mut nelec = 0usize;
    let mut ms2 = 0i64;
    let value = |k: usize, key: &str| -> Result<&str> {
        toks.get(k + 1)
            .copied()
            .ok_or_else(|| Error::parse(line_no, format!("missing value for {key}")))
    };
    let bad = |key: &str, v: &str| Error::parse(line_no, format!("invalid {key} value {v:?}"));
    for (k, t) in toks.iter().enumerate() {
        match t.to_ascii_uppercase().as_str() {
            "NORB" => {
                let v = value(k, "NORB")?;
                norb = Some(v.parse::<usize>().map_err(|_| bad("NORB", v))?);
            }
            "NELEC" => {
                let v = value(k, "NELEC")?;
                nelec = v.parse().map_err(|_| bad("NELEC", v))?;
            }
            "MS2" => {
                let v = value(k, "MS2")?;
                ms2 = v.parse().map_err(|_| bad("MS2", v))?;
            }
            _ => {}
        }
    }
    match norb {
        Some(n) if n >= 1 => Ok((n, nelec, ms2)),
        Some(_) => Err(Error::parse(line_no, "NORB must be at least 1")),
        None => Err(Error::parse(line_no, "header lacks NORB")),
    }
}

fn integral_line(line: &str) -> Option<(f64, [usize; 4])> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 5 {
        return None;
    }
    let v = toks[0].replace(['d', 'D'], "e").parse::<f64>().ok()?;
    let mut idx = [0usize; 4];
    for (slot, t) in idx.iter_mut().zip(&toks[1..]) {
        *slot = t.parse().ok()?;
    }
    Some((v, idx))
}

fn starts_with_number(line: &str) -> bool {
    line.split_whitespace()
        .next()
        .is_some_and(|t| t.replace(['d', 'D'], "e").parse::<f64>().is_ok())
}

pub fn parse_fcidump(text: &str) -> Result<Fcidump> {
    let mut header = String::new();
    let mut body_start = None;
    let mut lines = text.lines().enumerate();
    let mut in_namelist = false;
    for (k, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            check_format_comment(k + 1, line)?;
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if !in_namelist && starts_with_number(line) {
            body_start = Some((k, line));
            break;
        }
        if upper.starts_with("&FCI") {
            in_namelist = true;
        }
        if upper.contains("&END") || upper.trim_end().ends_with('/') {
            in_namelist = false;
        }
        header.push(' ');
        header.push_str(line);
    }
    let (norb, nelec, ms2) = header_values(&header, body_start.map_or(0, |b| b.0 + 1))?;
    let mut f = Fcidump {
        norb,
        nelec,
        ms2,
        core_energy: 0.0,
        h1: vec![0.0; norb * norb],
        h2: vec![0.0; norb.pow(4)],
    };
    let rest = lines.map(|(k, l)| (k, l.trim()));
    for (k, line) in body_start.into_iter().chain(rest) {
        let line_no = k + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (v, [i, j, a, b]) = integral_line(line)
            .ok_or_else(|| Error::parse(line_no, format!("malformed integral line {line:?}")))?;
        if let Some(&bad) = [i, j, a, b].iter().find(|&&x| x > norb) {
            return Err(Error::parse(
                line_no,
                format!("orbital index {bad} exceeds NORB = {norb}"),
            ));
        }
        match (i, j, a, b) {
            (0, 0, 0, 0) => f.core_energy = v,
            (_, 0, 0, 0) => {}
            (i, j, 0, 0) if i > 0 && j > 0 => {
                f.h1[(i - 1) * norb + (j - 1)] = v;
                f.h1[(j - 1) * norb + (i - 1)] = v;
            }
            (i, j, a, b) if i > 0 && j > 0 && a > 0 && b > 0 => {
                f.set_two_body(i - 1, j - 1, a - 1, b - 1, v)
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!("invalid index pattern {i} {j} {a} {b}"),
                ))
            }
        }
    }
    Ok(f)
}
