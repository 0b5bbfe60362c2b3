//! Cyclic orderings of a line and their partial sums.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::diagonal::diagonal_of;
use crate::error::{invalid, Error, Result};
use crate::grid::{Cell, HeffterGrid, Line};
use crate::scalar::{residue, symmetric_residue, Entry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingKind {
    NaturalRow,
    NaturalColumn,
    Diagonal,
    Explicit,
}

/// How to order every line of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderRule {
    /// Left to right for rows, top to bottom for columns.
    Natural,
    /// By increasing diagonal label (square grids only).
    Diagonal,
}

/// A cyclic ordering of the filled cells of one line, stored from a fixed start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineOrdering {
    kind: OrderingKind,
    cells: Vec<Cell>,
}

impl LineOrdering {
    /// Left-to-right (rows) or top-to-bottom (columns).
    pub fn natural<T: Entry>(grid: &HeffterGrid<T>, line: Line) -> Result<Self> {
        let cells = grid
            .line_entries(line)?
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        let kind = if line.is_row() {
            OrderingKind::NaturalRow
        } else {
            OrderingKind::NaturalColumn
        };
        Ok(LineOrdering { kind, cells })
    }

    /// By increasing diagonal label. For row `a` this visits columns
    /// `a, a-1, a-2, ...` (mod n); for column `a`, rows `a, a+1, ...`.
    pub fn diagonal<T: Entry>(grid: &HeffterGrid<T>, line: Line) -> Result<Self> {
        let n = grid.require_square()?;
        let mut cells: Vec<Cell> = grid
            .line_entries(line)?
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        cells.sort_by_key(|&cell| diagonal_of(n, cell));
        Ok(LineOrdering {
            kind: OrderingKind::Diagonal,
            cells,
        })
    }

    pub fn by_rule<T: Entry>(grid: &HeffterGrid<T>, line: Line, rule: OrderRule) -> Result<Self> {
        match rule {
            OrderRule::Natural => Self::natural(grid, line),
            OrderRule::Diagonal => Self::diagonal(grid, line),
        }
    }

    pub fn explicit(cells: Vec<Cell>) -> Self {
        LineOrdering {
            kind: OrderingKind::Explicit,
            cells,
        }
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Same cycle started `k` positions later.
    pub fn rotated(&self, k: usize) -> Self {
        let mut cells = self.cells.clone();
        if !cells.is_empty() {
            let k = k % cells.len();
            cells.rotate_left(k);
        }
        LineOrdering::explicit(cells)
    }

    /// Same cycle traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut cells = self.cells.clone();
        cells.reverse();
        LineOrdering::explicit(cells)
    }

    /// Checks that the ordering lists each filled cell of `line` exactly once.
    pub(crate) fn validate<T: Entry>(&self, grid: &HeffterGrid<T>, line: Line) -> Result<()> {
        let expected: BTreeSet<Cell> = grid
            .line_entries(line)?
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        let given: BTreeSet<Cell> = self.cells.iter().copied().collect();
        if given.len() != self.cells.len() {
            return Err(invalid(format!("ordering for {line} repeats a cell")));
        }
        if given != expected {
            return Err(invalid(format!(
                "ordering for {line} does not cover exactly its {} filled cells",
                expected.len()
            )));
        }
        Ok(())
    }
}

/// Entries of one line in a chosen order together with their running sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSumTrace<T> {
    pub owner: Line,
    pub cells: Vec<Cell>,
    pub entries: Vec<T>,
    /// `sums[i] = entries[0] + ... + entries[i]`, exact.
    pub sums: Vec<T>,
    pub modulus: u64,
}

impl<T: Entry> PartialSumTrace<T> {
    /// Running sums reduced into `[0, M)`.
    pub fn residues(&self) -> Vec<u64> {
        self.sums
            .iter()
            .map(|s| residue(s.to_wide(), self.modulus))
            .collect()
    }

    /// Running sums reduced into the symmetric range around 0.
    pub fn symmetric_residues(&self) -> Vec<i128> {
        self.residues()
            .into_iter()
            .map(|r| symmetric_residue(r, self.modulus))
            .collect()
    }

    pub fn total(&self) -> T {
        self.sums.last().copied().unwrap_or_else(T::zero)
    }

    /// Lexicographically smallest pair `(i, j)`, `i < j`, of positions whose
    /// sums agree modulo `M`.
    pub fn first_collision(&self) -> Option<(usize, usize)> {
        let mut positions: HashMap<u64, (usize, Option<usize>)> = HashMap::new();
        for (idx, r) in self.residues().into_iter().enumerate() {
            positions
                .entry(r)
                .and_modify(|slot| {
                    if slot.1.is_none() {
                        slot.1 = Some(idx);
                    }
                })
                .or_insert((idx, None));
        }
        positions
            .into_values()
            .filter_map(|(i, j)| j.map(|j| (i, j)))
            .min()
    }

    pub fn is_distinct(&self) -> bool {
        self.first_collision().is_none()
    }
}

/// Computes the running sums of `line` under `ordering`.
pub fn partial_sums<T: Entry>(
    grid: &HeffterGrid<T>,
    line: Line,
    ordering: &LineOrdering,
    modulus: u64,
) -> Result<PartialSumTrace<T>> {
    if modulus == 0 {
        return Err(invalid("modulus must be positive"));
    }
    ordering.validate(grid, line)?;
    let entries: Vec<T> = ordering
        .cells()
        .iter()
        .map(|&c| {
            grid.get(c)
                .ok_or_else(|| Error::Internal(format!("cell {c:?} empty")))
        })
        .collect::<Result<_>>()?;
    let mut sums = Vec::with_capacity(entries.len());
    let mut acc = T::zero();
    for &v in &entries {
        acc = acc.checked_add(&v).ok_or(Error::Overflow)?;
        sums.push(acc);
    }
    Ok(PartialSumTrace {
        owner: line,
        cells: ordering.cells().to_vec(),
        entries,
        sums,
        modulus,
    })
}

/// Outcome of a simplicity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    /// Partial sums at positions `first < second` coincide modulo `M`.
    Collision {
        first: usize,
        second: usize,
        residue: u64,
    },
}

impl Simplicity {
    pub fn is_simple(self) -> bool {
        matches!(self, Simplicity::Simple)
    }
}

impl<T: Entry> From<&PartialSumTrace<T>> for Simplicity {
    fn from(trace: &PartialSumTrace<T>) -> Self {
        match trace.first_collision() {
            None => Simplicity::Simple,
            Some((first, second)) => Simplicity::Collision {
                first,
                second,
                residue: residue(trace.sums[first].to_wide(), trace.modulus),
            },
        }
    }
}

/// Whether the partial sums of `line` under `ordering` are pairwise distinct mod `M`.
pub fn is_simple<T: Entry>(
    grid: &HeffterGrid<T>,
    line: Line,
    ordering: &LineOrdering,
    modulus: u64,
) -> Result<Simplicity> {
    Ok(Simplicity::from(&partial_sums(
        grid, line, ordering, modulus,
    )?))
}
