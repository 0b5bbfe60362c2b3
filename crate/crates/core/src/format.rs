//! Text format for grids.
//!
//! ```text
//! #heffter m=2 n=3 s=2 t=-
//! 1,,-1
//! ,2,-2
//! ```
//!
//! The header gives the dimensions and the common fill count of every row
//! (`s`) and column (`t`), or `-` when the counts differ. Each of the `m`
//! following lines holds `n` comma-separated fields; an empty field is an
//! empty cell. [`write_grid`] emits the canonical form: no spaces, `\n`
//! line endings, a trailing newline. [`parse_grid`] also accepts spaces
//! around fields, `\r\n` endings and trailing blank lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::HeffterGrid;
use crate::scalar::Entry;

const MAGIC: &str = "#heffter";

/// Renders a grid in canonical form.
pub fn write_grid<T: Entry>(grid: &HeffterGrid<T>) -> String {
    let mut out = String::new();
    let count = |c: Option<usize>| c.map_or_else(|| "-".to_string(), |c| c.to_string());
    let _ = writeln!(
        out,
        "{MAGIC} m={} n={} s={} t={}",
        grid.rows(),
        grid.cols(),
        count(grid.fills_per_row()),
        count(grid.fills_per_col())
    );
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            if c > 0 {
                out.push(',');
            }
            if let Some(v) = grid.get((r, c)) {
                let _ = write!(out, "{v}");
            }
        }
        out.push('\n');
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

struct Header {
    m: usize,
    n: usize,
    s: Option<usize>,
    t: Option<usize>,
}

fn parse_header(text: &str) -> Result<Header> {
    let rest = text
        .strip_prefix(MAGIC)
        .ok_or_else(|| parse_error(1, 1, format!("expected header starting with `{MAGIC}`")))?;
    let mut fields: [Option<Option<usize>>; 4] = [None; 4];
    let keys = ["m", "n", "s", "t"];
    let mut offset = MAGIC.len();
    for token in rest.split(' ') {
        let column = offset + 1;
        offset += token.len() + 1;
        if token.is_empty() {
            continue;
        }
        let (key, value) = token.split_once('=').ok_or_else(|| {
            parse_error(1, column, format!("expected key=value, found `{token}`"))
        })?;
        let slot = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| parse_error(1, column, format!("unknown header key `{key}`")))?;
        if fields[slot].is_some() {
            return Err(parse_error(
                1,
                column,
                format!("header key `{key}` repeated"),
            ));
        }
        let parsed = if value == "-" && slot >= 2 {
            None
        } else {
            Some(value.parse::<usize>().map_err(|_| {
                parse_error(
                    1,
                    column + key.len() + 1,
                    format!("bad value `{value}` for `{key}`"),
                )
            })?)
        };
        fields[slot] = Some(parsed);
    }
    let missing = |i: usize| parse_error(1, 1, format!("header lacks `{}`", keys[i]));
    let m = fields[0]
        .ok_or_else(|| missing(0))?
        .ok_or_else(|| missing(0))?;
    let n = fields[1]
        .ok_or_else(|| missing(1))?
        .ok_or_else(|| missing(1))?;
    if m == 0 || n == 0 {
        return Err(parse_error(1, 1, "dimensions must be positive"));
    }
    Ok(Header {
        m,
        n,
        s: fields[2].ok_or_else(|| missing(2))?,
        t: fields[3].ok_or_else(|| missing(3))?,
    })
}

/// Parses a grid, reporting the first problem with 1-based line and column.
pub fn parse_grid<T: Entry>(text: &str) -> Result<HeffterGrid<T>> {
    let lines: Vec<&str> = text.lines().collect();
    let header_line = lines
        .first()
        .ok_or_else(|| parse_error(1, 1, "empty input"))?;
    let header = parse_header(header_line.trim_end())?;
    let mut body = &lines[1..];
    // A blank line is a legal row when n = 1, so only surplus lines are dropped.
    if body.len() > header.m && body[header.m..].iter().all(|l| l.trim().is_empty()) {
        body = &body[..header.m];
    }
    if body.len() != header.m {
        return Err(parse_error(
            body.len() + 2,
            1,
            format!("expected {} rows, found {}", header.m, body.len()),
        ));
    }
    let mut entries = Vec::new();
    for (r, raw) in body.iter().enumerate() {
        let line_no = r + 2;
        let mut column = 1;
        let mut count = 0;
        for (c, field) in raw.split(',').enumerate() {
            count += 1;
            if c >= header.n {
                return Err(parse_error(
                    line_no,
                    column,
                    format!("more than {} fields", header.n),
                ));
            }
            let lead = field.len() - field.trim_start().len();
            let value = field.trim();
            if !value.is_empty() {
                let v: T = value.parse().map_err(|_| {
                    parse_error(
                        line_no,
                        column + lead,
                        format!("`{value}` is not an integer in range"),
                    )
                })?;
                if v.is_zero() {
                    return Err(parse_error(
                        line_no,
                        column + lead,
                        "0 is not a legal entry",
                    ));
                }
                entries.push(((r, c), v));
            }
            column += field.chars().count() + 1;
        }
        if count != header.n {
            return Err(parse_error(
                line_no,
                column.saturating_sub(1).max(1),
                format!("expected {} fields, found {count}", header.n),
            ));
        }
    }
    let grid = HeffterGrid::from_entries(header.m, header.n, entries)?;
    if let Some(s) = header.s {
        if grid.fills_per_row() != Some(s) {
            return Err(parse_error(
                1,
                1,
                format!("header says s={s} but rows are not all of that size"),
            ));
        }
    }
    if let Some(t) = header.t {
        if grid.fills_per_col() != Some(t) {
            return Err(parse_error(
                1,
                1,
                format!("header says t={t} but columns are not all of that size"),
            ));
        }
    }
    Ok(grid)
}
