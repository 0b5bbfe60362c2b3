//! `H(n; 3)` arrays on three consecutive diagonals, and their relocation.
//!
//! A base array fills `D_{n-1}` (all positive), `D_0` (support exactly
//! `{1, ..., n}`) and `D_1` (all negative), with every line summing to 0.
//! Such an array is determined by a cyclic sequence `e_0, ..., e_{n-1}` using
//! each odd magnitude `1, 3, ..., 2n - 1` once, with sign: putting
//! `K = 4n + 1` and `b_x = (K + e_x) / 2`, row `x` holds `b_{x+1}` on
//! `D_{n-1}`, `b_x - K` on `D_1` and `-(e_x + e_{x+1}) / 2` on `D_0`. The
//! only remaining condition is that the `D_0` values have distinct absolute
//! values. Both the closed form and the search below produce such sequences.

use log::{debug, trace};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::HeffterGrid;
use crate::scalar::Entry;
use crate::verify::{verify_heffter, verify_integer, Certificate, VerificationReport};

/// Node limit used by [`search_h3_base`] when the caller has no preference.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// How to produce the base array.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum H3Method {
    #[default]
    ClosedForm,
    Search,
}

fn check_order(n: usize) -> Result<()> {
    if n < 4 || n % 4 > 1 {
        return Err(Error::Unsupported(format!(
            "a three-diagonal H(n;3) needs n >= 4 and n = 0 or 1 mod 4, got n = {n}"
        )));
    }
    Ok(())
}

/// Signed odd offsets in closed form.
fn closed_form_offsets(n: usize) -> Vec<i64> {
    let h = if n % 4 == 1 { (n - 1) / 4 } else { n / 4 };
    let offset = |x: usize| -> i64 {
        let magnitude = if x % 2 == 1 { x } else { 2 * n - 1 - x } as i64;
        let negative = if n % 4 == 1 {
            (x <= 2 * h && x.is_multiple_of(2)) || (x > 2 * h && x % 2 == 1)
        } else if x == 0 {
            true
        } else if x < 2 * h {
            x % 2 == 1
        } else {
            x.is_multiple_of(2)
        };
        if negative {
            -magnitude
        } else {
            magnitude
        }
    };
    // Started one step in, so that the relocated array lines up with the
    // published order-17 ladder.
    (0..n).map(|x| offset((x + 1) % n)).collect()
}

fn grid_from_offsets<T: Entry>(offsets: &[i64]) -> Result<HeffterGrid<T>> {
    let n = offsets.len();
    let k = 4 * n as i128 + 1;
    let b = |x: usize| (k + offsets[x % n] as i128) / 2;
    let conv = |v: i128| T::from_wide(v).ok_or(Error::Overflow);
    let mut entries = Vec::with_capacity(3 * n);
    for r in 0..n {
        let up = (r + n - 1) % n;
        entries.push(((r, r), conv(k - b(r) - b(r + 1))?));
        entries.push(((up, r), conv(b(r))?));
        entries.push(((r, up), conv(b(r) - k)?));
    }
    HeffterGrid::from_entries(n, n, entries)
}

/// Builds a base array from the closed form.
pub fn build_h3_base<T: Entry>(n: usize) -> Result<HeffterGrid<T>> {
    check_order(n)?;
    grid_from_offsets(&closed_form_offsets(n))
}

/// Builds a base array by depth-first search over offset sequences.
///
/// Magnitudes are tried largest first, negative before positive, and the
/// first offset is fixed to `-(2n - 1)`; the result is deterministic. Gives
/// up with [`Error::NoArrayFound`] after `budget` nodes.
pub fn search_h3_base<T: Entry>(n: usize, budget: u64) -> Result<HeffterGrid<T>> {
    check_order(n)?;
    let mut search = OffsetSearch {
        n,
        budget,
        nodes: 0,
        deepest: 0,
        seq: Vec::with_capacity(n),
        used_magnitude: vec![false; n + 1],
        used_half_sum: vec![false; n + 1],
    };
    search.seq.push(-(2 * n as i64 - 1));
    search.used_magnitude[n] = true;
    let found = search.extend()?;
    debug!(
        "offset search for n = {n}: {} nodes, found = {found}",
        search.nodes
    );
    if !found {
        return Err(Error::Internal(format!(
            "offset search exhausted for n = {n}"
        )));
    }
    grid_from_offsets(&search.seq)
}

struct OffsetSearch {
    n: usize,
    budget: u64,
    nodes: u64,
    deepest: usize,
    seq: Vec<i64>,
    /// Indexed by `(|e| + 1) / 2`.
    used_magnitude: Vec<bool>,
    /// Indexed by `|e + e'| / 2`.
    used_half_sum: Vec<bool>,
}

impl OffsetSearch {
    fn half_sum(&self, a: i64, b: i64) -> Option<usize> {
        let s = ((a + b).unsigned_abs() / 2) as usize;
        (s >= 1 && s <= self.n && !self.used_half_sum[s]).then_some(s)
    }

    fn extend(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::NoArrayFound {
                budget: self.budget,
            });
        }
        let depth = self.seq.len();
        if depth > self.deepest {
            self.deepest = depth;
            trace!("depth {depth} reached after {} nodes", self.nodes);
        }
        let last = self.seq[depth - 1];
        if depth == self.n {
            return Ok(self.half_sum(last, self.seq[0]).is_some());
        }
        for i in (1..=self.n).rev() {
            if self.used_magnitude[i] {
                continue;
            }
            for sign in [-1, 1] {
                let e = sign * (2 * i as i64 - 1);
                let Some(s) = self.half_sum(last, e) else {
                    continue;
                };
                self.used_magnitude[i] = true;
                self.used_half_sum[s] = true;
                self.seq.push(e);
                if self.extend()? {
                    return Ok(true);
                }
                self.seq.pop();
                self.used_magnitude[i] = false;
                self.used_half_sum[s] = false;
            }
        }
        Ok(false)
    }
}

/// Placement of a base array on the diagonals `D_beta`, `D_{beta+eps}`,
/// `D_{beta+2eps}`, followed by a cyclic shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LadderParams {
    pub n: usize,
    pub beta: usize,
    pub epsilon: usize,
    pub shift: usize,
}

impl LadderParams {
    pub fn new(n: usize, beta: usize, epsilon: usize, shift: usize) -> Result<Self> {
        if epsilon == 0 || epsilon.gcd(&n) != 1 {
            return Err(invalid(format!("step {epsilon} is not coprime to n = {n}")));
        }
        if beta + 2 * epsilon >= n {
            return Err(invalid(format!(
                "beta = {beta} exceeds n - 2*epsilon - 1 = {}",
                n as i64 - 2 * epsilon as i64 - 1
            )));
        }
        Ok(LadderParams {
            n,
            beta,
            epsilon,
            shift: shift % n,
        })
    }

    /// The three target diagonals, in the order positive, `{1..n}`, negative.
    pub fn diagonals(&self) -> [usize; 3] {
        [
            self.beta,
            self.beta + self.epsilon,
            self.beta + 2 * self.epsilon,
        ]
    }
}

/// Moves cell `(i, j)` of a base array to `(eps*(i+1) + beta, eps*j)`.
pub fn relocate_h3<T: Entry>(
    base: &HeffterGrid<T>,
    beta: usize,
    epsilon: usize,
) -> Result<HeffterGrid<T>> {
    let n = base.require_square()?;
    LadderParams::new(n, beta, epsilon, 0)?;
    let entries = base
        .entries()
        .map(|((i, j), v)| (((epsilon * (i + 1) + beta) % n, (epsilon * j) % n), v));
    HeffterGrid::from_entries(n, n, entries)
}

/// Cell `(i, j)` of the result is cell `(i + t, j + t)` of `grid`.
pub fn cyclic_shift<T: Entry>(grid: &HeffterGrid<T>, t: usize) -> Result<HeffterGrid<T>> {
    let n = grid.require_square()?;
    let t = t % n;
    let entries = grid
        .entries()
        .map(|((i, j), v)| (((i + n - t) % n, (j + n - t) % n), v));
    HeffterGrid::from_entries(n, n, entries)
}

/// Relocates and shifts a base array according to `params`.
pub fn place_ladder<T: Entry>(
    base: &HeffterGrid<T>,
    params: &LadderParams,
) -> Result<HeffterGrid<T>> {
    cyclic_shift(
        &relocate_h3(base, params.beta, params.epsilon)?,
        params.shift,
    )
}

/// Checks that `grid` is an integer `H(n; 3)` whose only filled diagonals are
/// `D_beta` (all positive), `D_{beta+eps}` (support `{1, ..., n}`) and
/// `D_{beta+2eps}` (all negative), labels taken mod `n`.
pub fn verify_ladder<T: Entry>(
    grid: &HeffterGrid<T>,
    beta: usize,
    epsilon: usize,
) -> Result<VerificationReport> {
    let n = grid.require_square()?;
    let labels = [beta % n, (beta + epsilon) % n, (beta + 2 * epsilon) % n];
    let mut report = verify_heffter(grid, n, n, 3, 3)?.merge(verify_integer(grid)?);
    let mut placement = Vec::new();
    let mut middle = Vec::new();
    for ((r, c), v) in grid.entries() {
        let d = (r + n - c) % n;
        let bad = if d == labels[0] {
            !v.is_positive()
        } else if d == labels[1] {
            middle.push(v.magnitude());
            false
        } else if d == labels[2] {
            !v.is_negative()
        } else {
            true
        };
        if bad {
            placement.push(Certificate::Misplaced {
                cell: (r, c),
                value: v.to_wide(),
            });
        }
    }
    middle.sort_unstable();
    let expected: Vec<u128> = (1..=n as u128).collect();
    let middle_failures = if middle == expected {
        Vec::new()
    } else {
        let present: std::collections::BTreeSet<u128> = middle.iter().copied().collect();
        expected
            .into_iter()
            .filter(|v| !present.contains(v))
            .map(|value| Certificate::Missing { value })
            .collect()
    };
    report.checks.push(crate::verify::CheckResult {
        name: "ladder-diagonals".into(),
        passed: placement.is_empty(),
        failures: placement,
    });
    report.checks.push(crate::verify::CheckResult {
        name: "ladder-middle-support".into(),
        passed: middle_failures.is_empty() && middle.len() == n,
        failures: middle_failures,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonal::DiagonalSpec;

    type G = HeffterGrid<i64>;

    #[test]
    fn rejects_bad_orders() {
        for n in [2, 3, 6, 7, 10, 11] {
            assert!(
                matches!(build_h3_base::<i64>(n), Err(Error::Unsupported(_))),
                "n = {n}"
            );
            assert!(search_h3_base::<i64>(n, 10).is_err());
        }
    }

    #[test]
    fn closed_form_satisfies_ladder_properties() {
        for n in (4..=120).filter(|n| n % 4 <= 1) {
            let g: G = build_h3_base(n).unwrap();
            let report = verify_ladder(&g, n - 1, 1).unwrap();
            assert!(report.passed(), "n = {n}\n{report}");
        }
    }

    #[test]
    fn search_finds_small_arrays() {
        for n in [4, 5, 8, 9, 12, 13, 16, 17] {
            let g: G = search_h3_base(n, DEFAULT_SEARCH_BUDGET).unwrap();
            assert!(verify_ladder(&g, n - 1, 1).unwrap().passed(), "n = {n}");
        }
    }

    #[test]
    fn search_respects_budget() {
        assert_eq!(
            search_h3_base::<i64>(24, 5).unwrap_err(),
            Error::NoArrayFound { budget: 5 }
        );
    }

    #[test]
    fn relocation_moves_diagonals() {
        let g: G = build_h3_base(9).unwrap();
        let moved = relocate_h3(&g, 0, 2).unwrap();
        let occupied = DiagonalSpec::occupied(&moved).unwrap();
        assert_eq!(occupied.labels().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert!(verify_ladder(&moved, 0, 2).unwrap().passed());
        assert!(relocate_h3(&g, 0, 3).is_err());
        assert!(relocate_h3(&g, 5, 2).is_err());
    }

    #[test]
    fn relocation_is_invertible() {
        let n = 13;
        let g: G = build_h3_base(n).unwrap();
        let (beta, eps) = (2, 5);
        let moved = relocate_h3(&g, beta, eps).unwrap();
        for ((i, j), v) in g.entries() {
            assert_eq!(
                moved.get(((eps * (i + 1) + beta) % n, (eps * j) % n)),
                Some(v)
            );
        }
        assert_eq!(moved.filled_count(), g.filled_count());
    }

    #[test]
    fn shift_is_periodic_and_keeps_diagonals() {
        let g: G = relocate_h3(&build_h3_base(9).unwrap(), 1, 2).unwrap();
        assert_eq!(cyclic_shift(&g, 0).unwrap(), g);
        assert_eq!(cyclic_shift(&g, 9).unwrap(), g);
        let s = cyclic_shift(&g, 1).unwrap();
        assert_eq!(s.get((0, 3)), g.get((1, 4)));
        for d in 0..9 {
            let mut a: Vec<i64> = crate::diagonal_cells(9, d)
                .unwrap()
                .into_iter()
                .filter_map(|c| g.get(c))
                .collect();
            let mut b: Vec<i64> = crate::diagonal_cells(9, d)
                .unwrap()
                .into_iter()
                .filter_map(|c| s.get(c))
                .collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
        assert!(verify_ladder(&s, 1, 2).unwrap().passed());
    }
}
