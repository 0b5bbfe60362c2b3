//! Diagonals of a square array: `D_d = {(i + d mod n, i) : i in [n]}`.

use std::collections::BTreeSet;

use crate::error::{invalid, Result};
use crate::grid::{Cell, HeffterGrid};
use crate::scalar::Entry;

/// Cells of diagonal `d` in an `n x n` array, by increasing column.
pub fn diagonal_cells(n: usize, d: usize) -> Result<Vec<Cell>> {
    if d >= n {
        return Err(invalid(format!("diagonal {d} out of range for order {n}")));
    }
    Ok((0..n).map(|i| ((i + d) % n, i)).collect())
}

/// Label of the diagonal through `cell`.
pub fn diagonal_of(n: usize, (r, c): Cell) -> usize {
    (r % n + n - c % n) % n
}

/// A set of diagonal labels of an order-`n` square array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSpec {
    n: usize,
    labels: BTreeSet<usize>,
}

impl DiagonalSpec {
    pub fn new(n: usize, labels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let labels: BTreeSet<usize> = labels.into_iter().collect();
        if let Some(&d) = labels.iter().find(|&&d| d >= n) {
            return Err(invalid(format!("diagonal {d} out of range for order {n}")));
        }
        Ok(DiagonalSpec { n, labels })
    }

    /// Labels of the nonempty diagonals of a square grid.
    pub fn occupied<T: Entry>(grid: &HeffterGrid<T>) -> Result<Self> {
        let n = grid.require_square()?;
        Ok(DiagonalSpec {
            n,
            labels: grid
                .entries()
                .map(|(cell, _)| diagonal_of(n, cell))
                .collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels.iter().copied()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.labels.contains(&d)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// All cells on the listed diagonals, diagonal by diagonal.
    pub fn cells(&self) -> Vec<Cell> {
        self.labels
            .iter()
            .flat_map(|&d| (0..self.n).map(move |i| ((i + d) % self.n, i)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn main_diagonal() {
        assert_eq!(diagonal_cells(3, 0).unwrap(), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn first_subdiagonal_wraps() {
        let cells = diagonal_cells(17, 1).unwrap();
        assert_eq!(cells[0], (1, 0));
        assert_eq!(cells[1], (2, 1));
        assert_eq!(cells[16], (0, 16));
    }

    #[test]
    fn out_of_range_label() {
        assert!(diagonal_cells(5, 5).is_err());
        assert!(DiagonalSpec::new(5, [0, 7]).is_err());
    }

    proptest! {
        #[test]
        fn diagonals_partition_the_square(n in 1usize..40) {
            let all = DiagonalSpec::new(n, 0..n).unwrap().cells();
            prop_assert_eq!(all.len(), n * n);
            let distinct: BTreeSet<Cell> = all.iter().copied().collect();
            prop_assert_eq!(distinct.len(), n * n);
            for d in 0..n {
                for cell in diagonal_cells(n, d).unwrap() {
                    prop_assert_eq!(diagonal_of(n, cell), d);
                }
            }
        }
    }
}
