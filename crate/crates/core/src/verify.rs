//! Independent checks of the defining properties of Heffter arrays.
//!
//! Nothing here knows how an array was built; every verdict is recomputed
//! from the grid alone.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::grid::{Cell, HeffterGrid, Line};
use crate::ordering::{partial_sums, LineOrdering, OrderRule};
use crate::scalar::{residue, Entry};

/// Evidence that a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    FillCount {
        line: Line,
        expected: usize,
        found: usize,
    },
    /// A value of the required support range that does not occur.
    Missing {
        value: u128,
    },
    /// A value whose absolute value occurs more than once.
    Repeated {
        value: u128,
    },
    /// A value occurring with both signs.
    BothSigns {
        value: u128,
    },
    /// A value outside the required support range.
    OutOfRange {
        value: u128,
    },
    LineSum {
        line: Line,
        sum: i128,
        modulus: Option<u64>,
    },
    /// Partial sums at positions `first < second` agree modulo `modulus`.
    Collision {
        line: Line,
        order: OrderRule,
        first: usize,
        second: usize,
        cells: (Cell, Cell),
        residue: u64,
        modulus: u64,
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// An entry on a diagonal (or with a sign) the structure does not allow.
    Misplaced {
        cell: Cell,
        value: i128,
    },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::FillCount { line, expected, found } => {
                write!(f, "{line} has {found} filled cells, expected {expected}")
            }
            Certificate::Missing { value } => write!(f, "value {value} missing"),
            Certificate::Repeated { value } => write!(f, "value {value} repeated"),
            Certificate::BothSigns { value } => write!(f, "both {value} and -{value} present"),
            Certificate::OutOfRange { value } => write!(f, "value {value} out of range"),
            Certificate::LineSum { line, sum, modulus: None } => write!(f, "{line} sums to {sum}"),
            Certificate::LineSum { line, sum, modulus: Some(m) } => {
                write!(f, "{line} sums to {sum}, not 0 mod {m}")
            }
            Certificate::Collision {
                line,
                first,
                second,
                cells,
                residue,
                modulus,
                ..
            } => write!(
                f,
                "{line} partial sums {first} {:?} and {second} {:?} are both {residue} mod {modulus}",
                cells.0, cells.1
            ),
            Certificate::NotSquare { rows, cols } => write!(f, "grid is {rows}x{cols}, not square"),
            Certificate::Misplaced { cell, value } => write!(f, "entry {value} at {cell:?} is misplaced"),
        }
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<Certificate>,
}

impl CheckResult {
    fn from_failures(name: impl Into<String>, failures: Vec<Certificate>) -> Self {
        CheckResult {
            name: name.into(),
            passed: failures.is_empty(),
            failures,
        }
    }
}

/// Ordered list of check outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

/// Certificates printed per failing check in the text form.
const SHOWN_FAILURES: usize = 8;

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks of `other`.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.checks.extend(other.checks);
        self
    }

    fn push(&mut self, name: impl Into<String>, failures: Vec<Certificate>) {
        self.checks.push(CheckResult::from_failures(name, failures));
    }

    /// All certificates of all failing checks.
    pub fn failures(&self) -> impl Iterator<Item = (&str, &Certificate)> {
        self.checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| (c.name.as_str(), f)))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            write!(
                f,
                "CHECK {} {}",
                check.name,
                if check.passed { "PASS" } else { "FAIL" }
            )?;
            for cert in check.failures.iter().take(SHOWN_FAILURES) {
                write!(f, " [{cert}]")?;
            }
            if check.failures.len() > SHOWN_FAILURES {
                write!(f, " (+{} more)", check.failures.len() - SHOWN_FAILURES)?;
            }
            writeln!(f)?;
        }
        writeln!(f, "OVERALL {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn fill_failures<T: Entry>(grid: &HeffterGrid<T>, s: usize, t: usize) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for line in grid.lines() {
        let expected = if line.is_row() { s } else { t };
        let found = grid.line_count(line)?;
        if found != expected {
            out.push(Certificate::FillCount {
                line,
                expected,
                found,
            });
        }
    }
    Ok(out)
}

fn support_failures<T: Entry>(grid: &HeffterGrid<T>, lo: u128, hi: u128) -> Vec<Certificate> {
    let support = grid.support();
    let mut out = Vec::new();
    for &value in support
        .values
        .range(..lo)
        .chain(support.values.range(hi.saturating_add(1)..))
    {
        out.push(Certificate::OutOfRange { value });
    }
    if lo <= hi {
        for value in lo..=hi {
            if !support.values.contains(&value) {
                out.push(Certificate::Missing { value });
            }
        }
    }
    out.extend(
        support
            .repeated
            .iter()
            .map(|&value| Certificate::Repeated { value }),
    );
    out.extend(
        support
            .both_signs
            .iter()
            .map(|&value| Certificate::BothSigns { value }),
    );
    out
}

fn sum_failures<T: Entry>(grid: &HeffterGrid<T>, modulus: Option<u64>) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for line in grid.lines() {
        let sum = grid.line_sum(line)?.to_wide();
        let bad = match modulus {
            Some(m) => residue(sum, m) != 0,
            None => sum != 0,
        };
        if bad {
            out.push(Certificate::LineSum { line, sum, modulus });
        }
    }
    Ok(out)
}

fn collision_failures<T: Entry>(
    grid: &HeffterGrid<T>,
    modulus: u64,
    rule: OrderRule,
) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for line in grid.lines() {
        let ordering = LineOrdering::by_rule(grid, line, rule)?;
        let trace = partial_sums(grid, line, &ordering, modulus)?;
        if let Some((first, second)) = trace.first_collision() {
            out.push(Certificate::Collision {
                line,
                order: rule,
                first,
                second,
                cells: (trace.cells[first], trace.cells[second]),
                residue: residue(trace.sums[first].to_wide(), modulus),
                modulus,
            });
        }
    }
    Ok(out)
}

/// Checks that `grid` is an `H(m, n; s, t)`: fill counts, support
/// `{1, ..., ms}` with at most one sign per value, and line sums divisible by
/// `2ms + 1`.
pub fn verify_heffter<T: Entry>(
    grid: &HeffterGrid<T>,
    m: usize,
    n: usize,
    s: usize,
    t: usize,
) -> Result<VerificationReport> {
    if m.checked_mul(s) != n.checked_mul(t) {
        return Err(invalid(format!("m*s = {m}*{s} differs from n*t = {n}*{t}")));
    }
    if grid.rows() != m || grid.cols() != n {
        return Err(invalid(format!(
            "grid is {}x{}, expected {m}x{n}",
            grid.rows(),
            grid.cols()
        )));
    }
    let total = (m * s) as u128;
    let modulus = heffter_modulus(m, s)?;
    let mut report = VerificationReport::default();
    report.push("fills", fill_failures(grid, s, t)?);
    report.push("support", support_failures(grid, 1, total));
    report.push(
        format!("sums-mod-{modulus}"),
        sum_failures(grid, Some(modulus))?,
    );
    Ok(report)
}

/// `2ms + 1`.
pub fn heffter_modulus(m: usize, s: usize) -> Result<u64> {
    m.checked_mul(s)
        .and_then(|x| x.checked_mul(2))
        .and_then(|x| x.checked_add(1))
        .and_then(|x| u64::try_from(x).ok())
        .ok_or(crate::Error::Overflow)
}

/// Checks that every row and column sums to exactly 0.
pub fn verify_integer<T: Entry>(grid: &HeffterGrid<T>) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    report.push("integer-sums", sum_failures(grid, None)?);
    Ok(report)
}

/// Checks that the natural ordering of every row and column has pairwise
/// distinct partial sums modulo `modulus`, and optionally modulo
/// `modulus + 1` as well.
pub fn verify_globally_simple<T: Entry>(
    grid: &HeffterGrid<T>,
    modulus: u64,
    also_plus_one: bool,
) -> Result<VerificationReport> {
    let mut report = verify_simple_under(grid, modulus, OrderRule::Natural)?;
    if also_plus_one {
        report = report.merge(verify_simple_under(grid, modulus + 1, OrderRule::Natural)?);
    }
    Ok(report)
}

/// Distinct partial sums for every line under the given ordering rule.
pub fn verify_simple_under<T: Entry>(
    grid: &HeffterGrid<T>,
    modulus: u64,
    rule: OrderRule,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let name = match rule {
        OrderRule::Natural => format!("simple-mod-{modulus}"),
        OrderRule::Diagonal => format!("simple-diagonal-mod-{modulus}"),
    };
    if rule == OrderRule::Diagonal && !grid.is_square() {
        report.push(
            name,
            vec![Certificate::NotSquare {
                rows: grid.rows(),
                cols: grid.cols(),
            }],
        );
        return Ok(report);
    }
    report.push(name, collision_failures(grid, modulus, rule)?);
    Ok(report)
}

/// Checks that `grid` is a support-shifted `H(n; 4p, gamma)`: `4p` cells per
/// line, support `{gamma*n + 1, ..., (4p + gamma)*n}` with one sign per value,
/// every line summing to exactly 0, and distinct natural partial sums modulo
/// `2(4p + gamma)n + 1`.
pub fn verify_support_shifted<T: Entry>(
    grid: &HeffterGrid<T>,
    n: usize,
    p: usize,
    gamma: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    if grid.rows() != n || grid.cols() != n {
        report.push(
            "shape",
            vec![Certificate::NotSquare {
                rows: grid.rows(),
                cols: grid.cols(),
            }],
        );
        return Ok(report);
    }
    let k = 4 * p;
    let lo = (gamma * n) as u128 + 1;
    let hi = ((k + gamma) * n) as u128;
    let modulus = heffter_modulus(n, k + gamma)?;
    report.push("fills", fill_failures(grid, k, k)?);
    report.push("shifted-support", support_failures(grid, lo, hi));
    report.push("integer-sums", sum_failures(grid, None)?);
    Ok(report.merge(verify_simple_under(grid, modulus, OrderRule::Natural)?))
}

/// Every property claimed for a square globally simple integer `H(n; k)`:
/// the Heffter conditions, exact zero sums and natural simplicity modulo
/// `2nk + 1` (and `2nk + 2` when `also_plus_one`).
pub fn verify_square<T: Entry>(
    grid: &HeffterGrid<T>,
    n: usize,
    k: usize,
    also_plus_one: bool,
) -> Result<VerificationReport> {
    let modulus = heffter_modulus(n, k)?;
    Ok(verify_heffter(grid, n, n, k, k)?
        .merge(verify_integer(grid)?)
        .merge(verify_globally_simple(grid, modulus, also_plus_one)?))
}

/// A permutation of the filled cells of a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingPermutation {
    cells: Vec<Cell>,
    image: Vec<usize>,
}

impl OrderingPermutation {
    /// The map sending each cell to its cyclic successor in the ordering of
    /// its line. Each filled cell must be covered by exactly one ordering.
    pub fn from_orderings<T: Entry>(
        grid: &HeffterGrid<T>,
        lines: &[(Line, LineOrdering)],
    ) -> Result<Self> {
        let cells: Vec<Cell> = grid.entries().map(|(c, _)| c).collect();
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut image = vec![usize::MAX; cells.len()];
        for (line, ordering) in lines {
            ordering.validate(grid, *line)?;
            let seq = ordering.cells();
            for (pos, cell) in seq.iter().enumerate() {
                let from = index[cell];
                if image[from] != usize::MAX {
                    return Err(invalid(format!("cell {cell:?} ordered twice")));
                }
                image[from] = index[&seq[(pos + 1) % seq.len()]];
            }
        }
        if let Some(i) = image.iter().position(|&j| j == usize::MAX) {
            return Err(invalid(format!(
                "cell {:?} not covered by any ordering",
                cells[i]
            )));
        }
        Ok(OrderingPermutation { cells, image })
    }

    pub fn apply(&self, cell: Cell) -> Option<Cell> {
        let i = self.cells.iter().position(|&c| c == cell)?;
        Some(self.cells[self.image[i]])
    }

    /// `self` after `first`: the cell `first(x)` is mapped through `self`.
    pub fn after(&self, first: &OrderingPermutation) -> Result<Self> {
        if self.cells != first.cells {
            return Err(invalid("permutations act on different cell sets"));
        }
        let image = first.image.iter().map(|&j| self.image[j]).collect();
        Ok(OrderingPermutation {
            cells: self.cells.clone(),
            image,
        })
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.image.len()];
        let mut lengths = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

/// Result of composing the row and column orderings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Compatibility {
    pub compatible: bool,
    pub cycle_type: Vec<usize>,
}

/// Whether `omega_r` after `omega_c` is a single cycle through every filled cell.
pub fn compatibility_check<T: Entry>(
    grid: &HeffterGrid<T>,
    rows: &[LineOrdering],
    cols: &[LineOrdering],
) -> Result<Compatibility> {
    if rows.len() != grid.rows() || cols.len() != grid.cols() {
        return Err(invalid(format!(
            "need {} row and {} column orderings, got {} and {}",
            grid.rows(),
            grid.cols(),
            rows.len(),
            cols.len()
        )));
    }
    let tag = |make: fn(usize) -> Line, list: &[LineOrdering]| -> Vec<(Line, LineOrdering)> {
        list.iter()
            .enumerate()
            .map(|(i, o)| (make(i), o.clone()))
            .collect()
    };
    let omega_r = OrderingPermutation::from_orderings(grid, &tag(Line::Row, rows))?;
    let omega_c = OrderingPermutation::from_orderings(grid, &tag(Line::Col, cols))?;
    let cycle_type = omega_r.after(&omega_c)?.cycle_type();
    Ok(Compatibility {
        compatible: cycle_type.len() == 1,
        cycle_type,
    })
}

/// Natural orderings of every row and every column.
pub fn natural_orderings<T: Entry>(
    grid: &HeffterGrid<T>,
) -> Result<(Vec<LineOrdering>, Vec<LineOrdering>)> {
    let rows = (0..grid.rows())
        .map(|r| LineOrdering::natural(grid, Line::Row(r)))
        .collect::<Result<_>>()?;
    let cols = (0..grid.cols())
        .map(|c| LineOrdering::natural(grid, Line::Col(c)))
        .collect::<Result<_>>()?;
    Ok((rows, cols))
}
