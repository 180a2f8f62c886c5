//! `HVSET v1` text format.
//!
//! ```text
//! HVSET v1
//! box <a> <b> <c> <d>
//! dims <m> <n>
//! <n rows of m '0'/'1' characters, highest row first>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{GridGeometry, GridSet, Rect};
use crate::error::{Error, Result};

pub fn to_hvset_string(set: &GridSet) -> String {
    let g = set.geometry();
    let r = g.rect();
    let mut out = String::new();
    let _ = writeln!(out, "HVSET v1");
    let _ = writeln!(out, "box {} {} {} {}", r.a, r.b, r.c, r.d);
    let _ = writeln!(out, "dims {} {}", g.m(), g.n());
    for j in (0..g.n()).rev() {
        for i in 0..g.m() {
            out.push(if set.contains(i, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_hvset(text: &str) -> Result<GridSet> {
    if !text.ends_with('\n') {
        return Err(Error::parse(text.lines().count().max(1), "missing trailing newline"));
    }
    let lines: Vec<&str> = text.lines().collect();
    let line = |k: usize| lines.get(k).copied().ok_or_else(|| Error::parse(k + 1, "unexpected end of input"));

    if line(0)?.trim_end() != "HVSET v1" {
        return Err(Error::parse(1, "expected header 'HVSET v1'"));
    }
    let coords = keyword_fields(line(1)?, "box", 4, 2)?;
    let coords: Vec<f64> = coords
        .iter()
        .map(|s| s.parse().map_err(|_| Error::parse(2, format!("bad number '{s}'"))))
        .collect::<Result<_>>()?;
    let rect = Rect::new(coords[0], coords[1], coords[2], coords[3]).map_err(|e| Error::parse(2, e.to_string()))?;
    let dims = keyword_fields(line(2)?, "dims", 2, 3)?;
    let dims: Vec<usize> = dims
        .iter()
        .map(|s| s.parse().map_err(|_| Error::parse(3, format!("bad count '{s}'"))))
        .collect::<Result<_>>()?;
    let geom = GridGeometry::new(rect, dims[0], dims[1]).map_err(|e| Error::parse(3, e.to_string()))?;
    let (m, n) = (geom.m(), geom.n());

    let rows = &lines[3..];
    if rows.len() != n {
        let at = 4 + rows.len().min(n);
        return Err(Error::parse(at, format!("expected {n} rows, found {}", rows.len())));
    }
    let mut cells = vec![false; m * n];
    for (k, row) in rows.iter().enumerate() {
        let lineno = 4 + k;
        let row = row.trim_end_matches('\r');
        if row.chars().count() != m {
            return Err(Error::parse(lineno, format!("expected {m} columns, found {}", row.chars().count())));
        }
        let j = n - 1 - k;
        for (i, ch) in row.chars().enumerate() {
            cells[geom.index(i, j)] = match ch {
                '0' => false,
                '1' => true,
                other => return Err(Error::parse(lineno, format!("unexpected character '{other}'"))),
            };
        }
    }
    GridSet::new(geom, cells).map_err(|e| Error::parse(4, e.to_string()))
}

fn keyword_fields<'a>(text: &'a str, keyword: &str, count: usize, lineno: usize) -> Result<Vec<&'a str>> {
    let mut parts = text.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(Error::parse(lineno, format!("expected '{keyword}' line")));
    }
    let fields: Vec<&str> = parts.collect();
    if fields.len() != count {
        return Err(Error::parse(lineno, format!("'{keyword}' takes {count} values")));
    }
    Ok(fields)
}

pub fn read_hvset(path: impl AsRef<Path>) -> Result<GridSet> {
    parse_hvset(&std::fs::read_to_string(path)?)
}

pub fn write_hvset(set: &GridSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_hvset_string(set))?;
    Ok(())
}
