//! Text formats for the generator instances.
//!
//! ```text
//! pi2ss: U=1,2 V=3 t=4
//! simss: W=6,1,2 h=5 m=1 t=2
//! ```
//!
//! Matrix instances carry a `d r s` header, then `A` row-major (d rows of r),
//! `B` (d rows of s), and `v` (one row of d). `#` starts a comment.

use thiserror::Error;

use super::{HardnessError, LinearInclusionInstance, Matrix, Pi2SsInstance, SimSsInstance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Instance(#[from] HardnessError),
}

fn malformed(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Malformed { line, message: message.into() }
}

fn parse_u64_list(text: &str, line: usize) -> Result<Vec<u64>, FormatError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| malformed(line, format!("bad number `{s}`"))))
        .collect()
}

fn key_value<'a>(token: &'a str, key: &str, line: usize) -> Result<&'a str, FormatError> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| malformed(line, format!("expected `{key}=...`, found `{token}`")))
}

pub fn write_pi2ss_instance(p: &Pi2SsInstance) -> String {
    let list = |set: &std::collections::BTreeSet<u64>| {
        set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    };
    format!("pi2ss: U={} V={} t={}\n", list(&p.u), list(&p.v), p.t)
}

pub fn parse_pi2ss_instance(text: &str) -> Result<Pi2SsInstance, FormatError> {
    let line = text.trim();
    let rest = line
        .strip_prefix("pi2ss:")
        .ok_or_else(|| malformed(1, "expected `pi2ss:` header"))?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() != 3 {
        return Err(malformed(1, "expected `U=... V=... t=...`"));
    }
    let u = parse_u64_list(key_value(tokens[0], "U", 1)?, 1)?;
    let v = parse_u64_list(key_value(tokens[1], "V", 1)?, 1)?;
    let t = key_value(tokens[2], "t", 1)?
        .parse::<u64>()
        .map_err(|_| malformed(1, "bad target"))?;
    Ok(Pi2SsInstance::new(u, v, t))
}

pub fn write_simss_instance(s: &SimSsInstance) -> String {
    let w = s.w().iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    format!("simss: W={} h={} m={} t={}\n", w, s.h(), s.m(), s.t())
}

pub fn parse_simss_instance(text: &str) -> Result<SimSsInstance, FormatError> {
    let line = text.trim();
    let rest = line
        .strip_prefix("simss:")
        .ok_or_else(|| malformed(1, "expected `simss:` header"))?;
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.len() != 4 {
        return Err(malformed(1, "expected `W=... h=... m=... t=...`"));
    }
    let w = parse_u64_list(key_value(tokens[0], "W", 1)?, 1)?;
    let h = key_value(tokens[1], "h", 1)?.parse::<u64>().map_err(|_| malformed(1, "bad h"))?;
    let m = key_value(tokens[2], "m", 1)?.parse::<u32>().map_err(|_| malformed(1, "bad m"))?;
    let t = key_value(tokens[3], "t", 1)?.parse::<u64>().map_err(|_| malformed(1, "bad t"))?;
    Ok(SimSsInstance::new(w, h, m, t)?)
}

pub fn write_inclusion_instance(inst: &LinearInclusionInstance) -> String {
    let (d, r, s) = inst.dimensions();
    let mut out = format!("{d} {r} {s}\n");
    let mut push_matrix = |m: &Matrix| {
        for row in 0..m.rows() {
            let line: Vec<String> = m.row(row).iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    };
    push_matrix(&inst.a);
    push_matrix(&inst.b);
    let v: Vec<String> = inst.v.iter().map(i64::to_string).collect();
    out.push_str(&v.join(" "));
    out.push('\n');
    out
}

pub fn parse_inclusion_instance(text: &str) -> Result<LinearInclusionInstance, FormatError> {
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let numbers = content
            .split_whitespace()
            .map(|s| s.parse::<i64>().map_err(|_| malformed(line_no, format!("bad number `{s}`"))))
            .collect::<Result<Vec<i64>, _>>()?;
        rows.push((line_no, numbers));
    }
    let Some((header_line, header)) = rows.first().cloned() else {
        return Err(malformed(1, "empty instance"));
    };
    if header.len() != 3 || header.iter().any(|&x| x < 0) {
        return Err(malformed(header_line, "expected header `d r s`"));
    }
    let (d, r, s) = (header[0] as usize, header[1] as usize, header[2] as usize);
    let expected = 1 + d + d + 1;
    if rows.len() != expected {
        return Err(malformed(
            rows.last().map(|(l, _)| *l).unwrap_or(1),
            format!("expected {expected} data lines, found {}", rows.len()),
        ));
    }
    let take = |range: std::ops::Range<usize>, width: usize| -> Result<Vec<Vec<i64>>, FormatError> {
        rows[range]
            .iter()
            .map(|(line, row)| {
                if row.len() == width {
                    Ok(row.clone())
                } else {
                    Err(malformed(*line, format!("expected {width} entries, found {}", row.len())))
                }
            })
            .collect()
    };
    let a = Matrix::from_rows(take(1..1 + d, r)?)?;
    let b = Matrix::from_rows(take(1 + d..1 + 2 * d, s)?)?;
    let v_rows = take(1 + 2 * d..2 + 2 * d, d)?;
    let v = v_rows.into_iter().next().expect("one v row");
    Ok(LinearInclusionInstance::new(a, b, v)?)
}
