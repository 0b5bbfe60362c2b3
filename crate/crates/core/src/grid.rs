//! Partially filled integer arrays.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Entry;

/// `(row, column)`.
pub type Cell = (usize, usize);

/// A row or a column of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl Line {
    pub fn index(self) -> usize {
        match self {
            Line::Row(i) | Line::Col(i) => i,
        }
    }

    pub fn is_row(self) -> bool {
        matches!(self, Line::Row(_))
    }

    /// Whether `cell` lies on this line.
    pub fn contains(self, (r, c): Cell) -> bool {
        match self {
            Line::Row(i) => r == i,
            Line::Col(i) => c == i,
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Col(i) => write!(f, "column {i}"),
        }
    }
}

/// An immutable `m x n` array in which some cells hold a nonzero integer.
///
/// Empty cells are absent rather than zero; zero is never a legal entry.
#[derive(Clone, PartialEq, Eq)]
pub struct HeffterGrid<T> {
    rows: usize,
    cols: usize,
    cells: Vec<Option<T>>,
    fills_per_row: Option<usize>,
    fills_per_col: Option<usize>,
}

impl<T: Entry> HeffterGrid<T> {
    /// Builds a grid from `(cell, value)` pairs.
    ///
    /// Fails on a zero value, an out-of-range cell, or a cell given twice.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, T)>,
    {
        if rows == 0 || cols == 0 {
            return Err(invalid(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        let mut cells = vec![None; rows * cols];
        for ((r, c), v) in entries {
            if r >= rows || c >= cols {
                return Err(invalid(format!(
                    "cell ({r}, {c}) outside {rows}x{cols} grid"
                )));
            }
            if v.is_zero() {
                return Err(invalid(format!("cell ({r}, {c}) holds 0")));
            }
            let slot = &mut cells[r * cols + c];
            if slot.is_some() {
                return Err(invalid(format!("cell ({r}, {c}) filled twice")));
            }
            *slot = Some(v);
        }
        Ok(Self::from_cells(rows, cols, cells))
    }

    /// Builds a grid from row-major optional values.
    pub fn from_rows(rows: Vec<Vec<Option<T>>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("rows have different lengths"));
        }
        let entries = rows.into_iter().enumerate().flat_map(|(r, row)| {
            row.into_iter()
                .enumerate()
                .filter_map(move |(c, v)| v.map(|v| ((r, c), v)))
        });
        Self::from_entries(m, n, entries)
    }

    fn from_cells(rows: usize, cols: usize, cells: Vec<Option<T>>) -> Self {
        let mut row_counts = vec![0usize; rows];
        let mut col_counts = vec![0usize; cols];
        for (idx, v) in cells.iter().enumerate() {
            if v.is_some() {
                row_counts[idx / cols] += 1;
                col_counts[idx % cols] += 1;
            }
        }
        HeffterGrid {
            rows,
            cols,
            cells,
            fills_per_row: uniform(&row_counts),
            fills_per_col: uniform(&col_counts),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Common fill count of every row, if all rows agree.
    pub fn fills_per_row(&self) -> Option<usize> {
        self.fills_per_row
    }

    /// Common fill count of every column, if all columns agree.
    pub fn fills_per_col(&self) -> Option<usize> {
        self.fills_per_col
    }

    pub fn get(&self, (r, c): Cell) -> Option<T> {
        if r < self.rows && c < self.cols {
            self.cells[r * self.cols + c]
        } else {
            None
        }
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|v| v.is_some()).count()
    }

    /// Filled cells in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (Cell, T)> + '_ {
        let cols = self.cols;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(idx, v)| v.map(|v| ((idx / cols, idx % cols), v)))
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> {
        (0..self.rows)
            .map(Line::Row)
            .chain((0..self.cols).map(Line::Col))
    }

    pub(crate) fn check_line(&self, line: Line) -> Result<()> {
        let (idx, bound) = match line {
            Line::Row(i) => (i, self.rows),
            Line::Col(i) => (i, self.cols),
        };
        if idx >= bound {
            return Err(invalid(format!(
                "{line} out of range for {}x{} grid",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Filled cells of `line`, left to right or top to bottom.
    pub fn line_entries(&self, line: Line) -> Result<Vec<(Cell, T)>> {
        self.check_line(line)?;
        Ok(match line {
            Line::Row(r) => (0..self.cols)
                .filter_map(|c| self.get((r, c)).map(|v| ((r, c), v)))
                .collect(),
            Line::Col(c) => (0..self.rows)
                .filter_map(|r| self.get((r, c)).map(|v| ((r, c), v)))
                .collect(),
        })
    }

    pub fn line_count(&self, line: Line) -> Result<usize> {
        Ok(self.line_entries(line)?.len())
    }

    /// Exact integer sum of the filled entries on `line`.
    pub fn line_sum(&self, line: Line) -> Result<T> {
        self.line_entries(line)?
            .into_iter()
            .try_fold(T::zero(), |acc, (_, v)| {
                acc.checked_add(&v).ok_or(Error::Overflow)
            })
    }

    /// Entry of `line` lying on diagonal `d`, or `None` when that cell is empty.
    ///
    /// Square grids only; this is the per-diagonal lookup used when reading a
    /// line in diagonal order.
    pub fn diagonal_entry(&self, d: usize, line: Line) -> Result<Option<T>> {
        self.require_square()?;
        self.check_line(line)?;
        let n = self.rows;
        if d >= n {
            return Err(invalid(format!("diagonal {d} out of range for order {n}")));
        }
        let cell = match line {
            Line::Row(a) => (a, (a + n - d) % n),
            Line::Col(a) => ((a + d) % n, a),
        };
        Ok(self.get(cell))
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(invalid(format!(
                "operation requires a square grid, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Absolute values of the entries, with sign-exclusivity bookkeeping.
    pub fn support(&self) -> Support {
        let mut seen: BTreeMap<u128, (usize, usize)> = BTreeMap::new();
        for (_, v) in self.entries() {
            let slot = seen.entry(v.magnitude()).or_default();
            if v.is_positive() {
                slot.0 += 1;
            } else {
                slot.1 += 1;
            }
        }
        let mut support = Support::default();
        for (value, (pos, neg)) in seen {
            support.values.insert(value);
            if pos > 0 && neg > 0 {
                support.both_signs.insert(value);
            }
            if pos + neg > 1 {
                support.repeated.insert(value);
            }
        }
        support
    }

    /// Same grid with `cell` set to `value` (or emptied when `None`).
    pub fn with_cell(&self, (r, c): Cell, value: Option<T>) -> Result<Self> {
        if r >= self.rows || c >= self.cols {
            return Err(invalid(format!("cell ({r}, {c}) outside grid")));
        }
        if value.is_some_and(|v| v.is_zero()) {
            return Err(invalid(format!("cell ({r}, {c}) holds 0")));
        }
        let mut cells = self.cells.clone();
        cells[r * self.cols + c] = value;
        Ok(Self::from_cells(self.rows, self.cols, cells))
    }

    /// Same grid with rows and columns exchanged.
    pub fn transpose(&self) -> Self {
        let mut cells = vec![None; self.rows * self.cols];
        for ((r, c), v) in self.entries() {
            cells[c * self.rows + r] = Some(v);
        }
        Self::from_cells(self.cols, self.rows, cells)
    }

    /// Same grid with every entry negated.
    pub fn negate(&self) -> Result<Self> {
        let cells = self
            .cells
            .iter()
            .map(|v| {
                v.map(|v| v.checked_neg().ok_or(Error::Overflow))
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_cells(self.rows, self.cols, cells))
    }

    /// Converts every entry to another entry type.
    pub fn convert<U: Entry>(&self) -> Result<HeffterGrid<U>> {
        let cells = self
            .cells
            .iter()
            .map(|v| {
                v.map(|v| U::from_wide(v.to_wide()).ok_or(Error::Overflow))
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HeffterGrid::from_cells(self.rows, self.cols, cells))
    }

    /// Cells on which the two grids differ, with both values.
    pub fn differences(&self, other: &Self) -> Vec<(Cell, Option<T>, Option<T>)> {
        let rows = self.rows.max(other.rows);
        let cols = self.cols.max(other.cols);
        let mut out = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let (a, b) = (self.get((r, c)), other.get((r, c)));
                if a != b {
                    out.push(((r, c), a, b));
                }
            }
        }
        out
    }
}

impl<T: fmt::Debug> fmt::Debug for HeffterGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HeffterGrid {}x{}", self.rows, self.cols)?;
        for row in self.cells.chunks(self.cols) {
            for v in row {
                match v {
                    Some(v) => write!(f, "{v:>6?}")?,
                    None => write!(f, "{:>6}", ".")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn uniform(counts: &[usize]) -> Option<usize> {
    let first = *counts.first()?;
    counts.iter().all(|&c| c == first).then_some(first)
}

/// Support of a grid: the set of absolute values of its entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Support {
    pub values: BTreeSet<u128>,
    /// Values `x` for which both `x` and `-x` occur.
    pub both_signs: BTreeSet<u128>,
    /// Values whose absolute value occurs more than once.
    pub repeated: BTreeSet<u128>,
}

impl Support {
    /// No value occurs with both signs.
    pub fn is_exclusive(&self) -> bool {
        self.both_signs.is_empty()
    }

    /// Every value in `lo..=hi` occurs exactly once (up to sign) and nothing else does.
    pub fn is_exact_range(&self, lo: u128, hi: u128) -> bool {
        self.repeated.is_empty()
            && self.values.len() as u128 == hi.saturating_sub(lo) + 1
            && self.values.first() == Some(&lo)
            && self.values.last() == Some(&hi)
    }
}
