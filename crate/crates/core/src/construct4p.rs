//! Closed-form globally simple integer `H(n; 4p)` for `p >= 3`.
//!
//! The array fills the diagonals `D_0, ..., D_{4p-1}`. Diagonal `D_d` holds
//! `sign_d * (S_d + k*y)` in cell `(d + x, x)` for `x` in `[n]`, where
//! `y = x` on even diagonals and `y = (x + 1) mod n` on odd ones. The residue
//! is reduced into `[n]` before it is multiplied by `k`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::HeffterGrid;
use crate::scalar::Entry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

/// Validated `(n, p)` for [`build_h4p`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams4p {
    pub n: usize,
    pub p: usize,
}

impl ConstructionParams4p {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        match p {
            0 => return Err(invalid("p must be positive")),
            1 | 2 => {
                return Err(Error::Unsupported(format!(
                    "k = {} is outside the closed-form range (needs p >= 3)",
                    4 * p
                )))
            }
            _ => {}
        }
        if n < 4 * p {
            return Err(invalid(format!("n = {n} is smaller than k = {}", 4 * p)));
        }
        Ok(ConstructionParams4p { n, p })
    }

    pub fn k(&self) -> usize {
        4 * self.p
    }

    pub fn parity(&self) -> Parity {
        if self.p % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Size of the index set driving the repeated blocks of four diagonals.
    pub fn block_count(&self) -> usize {
        match self.parity() {
            Parity::Odd => (self.p - 1) / 2,
            Parity::Even => (self.p - 2) / 2,
        }
    }

    /// `2nk + 1`.
    pub fn modulus(&self) -> u64 {
        (2 * self.n * self.k() + 1) as u64
    }
}

/// Sign and smallest magnitude of the entries on one diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalRule {
    pub diagonal: usize,
    pub negative: bool,
    pub base: usize,
}

impl DiagonalRule {
    /// Entry at position `x` of the diagonal.
    fn value(&self, x: usize, n: usize, k: usize) -> i128 {
        let y = if self.diagonal.is_multiple_of(2) {
            x
        } else {
            (x + 1) % n
        };
        let magnitude = (self.base + k * y) as i128;
        if self.negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// The `4p` diagonal rules, sorted by diagonal.
pub fn diagonal_rules(params: &ConstructionParams4p) -> Vec<DiagonalRule> {
    let p = params.p;
    let k = params.k();
    let mut rules = Vec::with_capacity(k);
    let mut put = |diagonal: usize, negative: bool, base: usize| {
        rules.push(DiagonalRule {
            diagonal,
            negative,
            base,
        })
    };
    for i in 0..params.block_count() {
        put(4 * i, false, 4 * i + 1);
        put(4 * i + 1, true, 4 * i + 2);
        put(4 * i + 2, true, k - 3 - 4 * i);
        put(4 * i + 3, false, k - 4 - 4 * i);
        match params.parity() {
            Parity::Odd => {
                put(2 * p + 4 * i, true, 2 * p - 2 - 4 * i);
                put(2 * p + 4 * i + 1, false, 2 * p - 3 - 4 * i);
                put(2 * p + 4 * i + 2, false, 2 * p + 4 + 4 * i);
                put(2 * p + 4 * i + 3, true, 2 * p + 5 + 4 * i);
            }
            Parity::Even => {
                put(2 * p + 4 * i - 2, true, 2 * p - 4 * i);
                put(2 * p + 4 * i - 1, false, 2 * p - 1 - 4 * i);
                put(2 * p + 4 * i, false, 2 * p + 2 + 4 * i);
                put(2 * p + 4 * i + 1, true, 2 * p + 3 + 4 * i);
            }
        }
    }
    match params.parity() {
        Parity::Odd => {
            put(2 * p - 2, false, 2 * p - 1);
            put(2 * p - 1, true, 2 * p);
        }
        Parity::Even => {
            put(2 * p - 4, false, 2 * p - 3);
            put(2 * p - 3, true, 2 * p - 2);
            put(k - 6, true, 4);
            put(k - 5, false, 3);
            put(k - 4, false, k - 2);
            put(k - 3, true, k - 1);
        }
    }
    put(k - 2, true, 2 * p + 1);
    put(k - 1, false, k);
    rules.sort_by_key(|r| r.diagonal);
    rules
}

/// Builds the globally simple integer `H(n; 4p)`.
pub fn build_h4p<T: Entry>(n: usize, p: usize) -> Result<HeffterGrid<T>> {
    let params = ConstructionParams4p::new(n, p)?;
    let k = params.k();
    let mut entries = Vec::with_capacity(n * k);
    for rule in diagonal_rules(&params) {
        for x in 0..n {
            let value = T::from_wide(rule.value(x, n, k)).ok_or(Error::Overflow)?;
            entries.push((((rule.diagonal + x) % n, x), value));
        }
    }
    HeffterGrid::from_entries(n, n, entries)
}

/// Magnitudes claimed for one diagonal: `{base + k*x : x in [n]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalSupport {
    pub base: usize,
    pub step: usize,
    pub count: usize,
}

impl DiagonalSupport {
    pub fn values(&self) -> impl Iterator<Item = u128> + '_ {
        (0..self.count).map(|x| (self.base + self.step * x) as u128)
    }
}

/// Support claimed for diagonal `d` of the array from [`build_h4p`].
pub fn expected_diagonal_support(n: usize, p: usize, d: usize) -> Result<DiagonalSupport> {
    let params = ConstructionParams4p::new(n, p)?;
    if d >= params.k() {
        return Err(invalid(format!(
            "diagonal {d} is not below k = {}",
            params.k()
        )));
    }
    let rule = diagonal_rules(&params)[d];
    Ok(DiagonalSupport {
        base: rule.base,
        step: params.k(),
        count: n,
    })
}
