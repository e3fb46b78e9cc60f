use std::collections::HashMap;
use std::fmt::Write as _;

use super::{MolecularIntegrals, MolecularProblem};
use crate::error::{Error, Result};

/// Parses FCIDUMP text.
///
/// The namelist header must provide `NORB` and `NELEC`; `MS2` defaults to 0.
/// Integral lines are `value i j k l` with 1-based orbital indices:
/// all-zero indices give the core energy, `i j 0 0` a one-body element and
/// four non-zero indices a chemist-notation `(ij|kl)` element. Lines of the
/// form `e i 0 0 0` (orbital energies) are accepted and ignored.
pub fn parse_fcidump(text: &str) -> Result<MolecularProblem> {
    let lines: Vec<&str> = text.lines().collect();
    let mut header = String::new();
    let mut body_start = None;
    for (idx, line) in lines.iter().enumerate() {
        let upper = line.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            header.push_str(&line[..pos]);
            body_start = Some(idx + 1);
            break;
        }
        let trimmed = upper.trim_end();
        if trimmed.ends_with('/') {
            header.push_str(&line[..line.trim_end().len() - 1]);
            body_start = Some(idx + 1);
            break;
        }
        header.push_str(line);
        header.push(' ');
    }
    let body_start = body_start.ok_or_else(|| {
        Error::parse(lines.len().max(1), "header is not terminated by `&END` or `/`")
    })?;

    let fields = parse_namelist(&header)?;
    let get = |key: &str| -> Result<Option<i64>> {
        match fields.get(key) {
            None => Ok(None),
            Some(vals) => {
                let first = vals
                    .first()
                    .ok_or_else(|| Error::parse(1, format!("{key} has no value")))?;
                first
                    .parse::<i64>()
                    .map(Some)
                    .map_err(|_| Error::parse(1, format!("{key}={first} is not an integer")))
            }
        }
    };
    let norb = get("NORB")?.ok_or_else(|| Error::parse(1, "header missing NORB"))?;
    let nelec = get("NELEC")?.ok_or_else(|| Error::parse(1, "header missing NELEC"))?;
    let ms2 = get("MS2")?.unwrap_or(0);
    if norb <= 0 {
        return Err(Error::parse(1, format!("NORB={norb} must be positive")));
    }
    if nelec < 0 {
        return Err(Error::parse(1, format!("NELEC={nelec} must be nonnegative")));
    }
    let n = norb as usize;

    let mut ints = MolecularIntegrals::zeros(n);
    for (idx, raw) in lines.iter().enumerate().skip(body_start) {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::parse(
                line_no,
                format!("expected `value i j k l`, found {} fields", parts.len()),
            ));
        }
        let value = parse_real(parts[0])
            .ok_or_else(|| Error::parse(line_no, format!("non-numeric value '{}'", parts[0])))?;
        let mut index = [0usize; 4];
        for (slot, tok) in index.iter_mut().zip(&parts[1..]) {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("non-integer index '{tok}'")))?;
            if v > n {
                return Err(Error::parse(
                    line_no,
                    format!("index {v} out of range for NORB={n}"),
                ));
            }
            *slot = v;
        }
        match index {
            [0, 0, 0, 0] => ints.core_energy = value,
            [_, 0, 0, 0] => {}
            [i, j, 0, 0] if i > 0 && j > 0 => ints.set_one_body(i - 1, j - 1, value),
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                ints.set_two_body(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!("unrecognized index pattern {index:?}"),
                ))
            }
        }
    }

    let problem = MolecularProblem {
        integrals: ints,
        n_electrons: nelec as usize,
        ms2: ms2 as i32,
        label: String::new(),
        n_frozen: 0,
    };
    problem
        .validate()
        .map_err(|e| Error::parse(1, format!("inconsistent header: {e}")))?;
    Ok(problem)
}

fn parse_real(tok: &str) -> Option<f64> {
    tok.parse::<f64>()
        .ok()
        .or_else(|| tok.replace(['D', 'd'], "E").parse::<f64>().ok())
}

/// `KEY=v1,v2,...` pairs from a namelist body, keys upper-cased.
fn parse_namelist(header: &str) -> Result<HashMap<String, Vec<String>>> {
    let mut body = header.trim_start();
    if body.len() >= 4 && body[..4].eq_ignore_ascii_case("&FCI") {
        body = &body[4..];
    }
    let mut out: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        if let Some((key, rest)) = tok.split_once('=') {
            let key = key.trim().to_ascii_uppercase();
            if key.is_empty() {
                return Err(Error::parse(1, format!("malformed header token '{tok}'")));
            }
            let entry = out.entry(key.clone()).or_default();
            if !rest.is_empty() {
                entry.push(rest.to_string());
            }
            current = Some(key);
        } else {
            match &current {
                Some(key) => out.get_mut(key).expect("key inserted").push(tok.to_string()),
                None => return Err(Error::parse(1, format!("malformed header token '{tok}'"))),
            }
        }
    }
    Ok(out)
}

/// Writes a problem back out in FCIDUMP form. Every nonzero symmetry-unique
/// integral is emitted with a round-trip-exact decimal representation.
pub fn write_fcidump(p: &MolecularProblem) -> String {
    let ints = &p.integrals;
    let n = ints.n_spatial();
    let mut out = String::new();
    let _ = writeln!(out, "&FCI NORB={n},NELEC={},MS2={},", p.n_electrons, p.ms2);
    let _ = writeln!(out, "&END");
    let pair = |a: usize, b: usize| a * (a + 1) / 2 + b;
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair(i, j) < pair(k, l) {
                        continue;
                    }
                    let v = ints.two_body(i, j, k, l);
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = ints.one_body(i, j);
            if v != 0.0 {
                let _ = writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(out, "{:e} 0 0 0 0", ints.core_energy);
    out
}
