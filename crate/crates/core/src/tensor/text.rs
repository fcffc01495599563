//! Plain-text serialization of symmetric tensors.
//!
//! Canonical format (`SYMTENSOR v1`): a header line
//! `SYMTENSOR v1 n=<n> m=<m>` followed by one line per nonzero canonical
//! entry — m space-separated 0-based non-decreasing indices, then the value
//! in round-trip decimal. Lines may appear in any order on input; duplicate
//! canonical indices are an error. Output is sorted, so parse → serialize is
//! byte-identical.
//!
//! Dense companion format (`DENSETENSOR v1`): same header shape, then one
//! line per dense position in row-major order, all n^m of them. Only
//! supported for n ≤ 5.

use crate::error::{Error, Result};
use crate::tensor::{MultiIndex, SymmetricTensor};

pub const SYMTENSOR_HEADER: &str = "SYMTENSOR v1";
pub const DENSETENSOR_HEADER: &str = "DENSETENSOR v1";

const DENSE_TEXT_MAX_N: usize = 5;

pub fn write_symtensor(t: &SymmetricTensor<f64>) -> String {
    let mut out = String::new();
    out.push_str(&format!("{SYMTENSOR_HEADER} n={} m={}\n", t.n(), t.m()));
    for (idx, v) in t.entries() {
        out.push_str(&format!("{idx} {v}\n"));
    }
    out
}

pub fn parse_symtensor(text: &str) -> Result<SymmetricTensor<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let (n, m) = parse_header(header, SYMTENSOR_HEADER, 1)?;
    let mut entries = Vec::new();
    for (lineno0, line) in lines {
        let lineno = lineno0 + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, value) = parse_entry_line(line, n, m, lineno)?;
        entries.push((idx, value));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    for w in entries.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateIndex(w[0].0.to_string()));
        }
    }
    SymmetricTensor::from_entries(n, m, entries)
}

pub fn write_densetensor(t: &SymmetricTensor<f64>) -> Result<String> {
    if t.n() > DENSE_TEXT_MAX_N {
        return Err(Error::TooLarge(format!(
            "dense text format supports n <= {DENSE_TEXT_MAX_N}, got n={}",
            t.n()
        )));
    }
    let dense = t.to_dense()?;
    let n = t.n();
    let m = t.m();
    let mut out = String::new();
    out.push_str(&format!("{DENSETENSOR_HEADER} n={n} m={m}\n"));
    let mut tuple = vec![0usize; m];
    for (flat, v) in dense.iter().enumerate() {
        let mut rem = flat;
        for j in (0..m).rev() {
            tuple[j] = rem % n;
            rem /= n;
        }
        for (j, i) in tuple.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&i.to_string());
        }
        out.push(' ');
        out.push_str(&v.to_string());
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_densetensor(text: &str) -> Result<SymmetricTensor<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let (n, m) = parse_header(header, DENSETENSOR_HEADER, 1)?;
    if n > DENSE_TEXT_MAX_N {
        return Err(Error::TooLarge(format!(
            "dense text format supports n <= {DENSE_TEXT_MAX_N}, got n={n}"
        )));
    }
    let total = n.pow(m as u32);
    let mut dense = vec![0.0f64; total];
    let mut seen = vec![false; total];
    for (lineno0, line) in lines {
        let lineno = lineno0 + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != m + 1 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected {} fields, found {}", m + 1, fields.len()),
            });
        }
        let mut flat = 0usize;
        for f in &fields[..m] {
            let i: usize = f.parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad index `{f}`"),
            })?;
            if i >= n {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("index {i} out of range for n={n}"),
                });
            }
            flat = flat * n + i;
        }
        if seen[flat] {
            return Err(Error::Parse {
                line: lineno,
                message: "duplicate dense position".into(),
            });
        }
        seen[flat] = true;
        dense[flat] = fields[m].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad value `{}`", fields[m]),
        })?;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Parse {
            line: 0,
            message: format!("dense position {missing} missing from input"),
        });
    }
    SymmetricTensor::from_dense(n, m, &dense)
}

fn parse_header(header: &str, magic: &str, lineno: usize) -> Result<(usize, usize)> {
    let rest = header.strip_prefix(magic).ok_or_else(|| Error::Parse {
        line: lineno,
        message: format!("expected `{magic}` header, found `{header}`"),
    })?;
    let mut n = None;
    let mut m = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad n in header: `{v}`"),
            })?);
        } else if let Some(v) = field.strip_prefix("m=") {
            m = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad m in header: `{v}`"),
            })?);
        } else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unexpected header field `{field}`"),
            });
        }
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(Error::Parse {
            line: lineno,
            message: "header must carry both n= and m=".into(),
        }),
    }
}

fn parse_entry_line(line: &str, n: usize, m: usize, lineno: usize) -> Result<(MultiIndex, f64)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != m + 1 {
        return Err(Error::Parse {
            line: lineno,
            message: format!("expected {} fields, found {}", m + 1, fields.len()),
        });
    }
    let mut indices = Vec::with_capacity(m);
    for f in &fields[..m] {
        let i: usize = f.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("bad index `{f}`"),
        })?;
        if i >= n {
            return Err(Error::Parse {
                line: lineno,
                message: format!("index {i} out of range for n={n}"),
            });
        }
        indices.push(i);
    }
    if indices.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parse {
            line: lineno,
            message: "indices must be non-decreasing".into(),
        });
    }
    let value: f64 = fields[m].parse().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("bad value `{}`", fields[m]),
    })?;
    let idx = MultiIndex::new(&indices, n).map_err(|e| Error::Parse {
        line: lineno,
        message: e.to_string(),
    })?;
    Ok((idx, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Vector;

    #[test]
    fn round_trip_is_byte_identical() {
        let u = Vector::new(vec![0.1, -0.25, 1.0 / 3.0]);
        let t = SymmetricTensor::rank_one(&u, 4).unwrap();
        let text = write_symtensor(&t);
        let parsed = parse_symtensor(&text).unwrap();
        assert_eq!(write_symtensor(&parsed), text);
        assert_eq!(parsed, t);
    }

    #[test]
    fn unordered_lines_accepted_duplicates_rejected() {
        let text = "SYMTENSOR v1 n=2 m=2\n1 1 2\n0 0 1\n";
        let t = parse_symtensor(text).unwrap();
        assert_eq!(t.get(&MultiIndex::new(&[0, 0], 2).unwrap()), 1.0);
        let dup = "SYMTENSOR v1 n=2 m=2\n0 0 1\n0 0 2\n";
        assert!(matches!(parse_symtensor(dup), Err(Error::DuplicateIndex(_))));
    }

    #[test]
    fn decreasing_indices_rejected_with_line_number() {
        let text = "SYMTENSOR v1 n=3 m=2\n0 1 1\n2 1 5\n";
        match parse_symtensor(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn dense_round_trip() {
        let u = Vector::new(vec![0.5, -2.0]);
        let t = SymmetricTensor::rank_one(&u, 2).unwrap();
        let text = write_densetensor(&t).unwrap();
        let back = parse_densetensor(&text).unwrap();
        assert_eq!(back, t);
    }
}
