//! Support-shifted `H(n; 4p, gamma)`.
//!
//! The support is `{gamma*n + 1, ..., (4p + gamma)*n}`, every line sums to 0
//! and the natural partial sums are distinct modulo `2(4p + gamma)n + 1`.
//! Filled diagonals are `D_0, ..., D_{4p-2}` and `D_{2p+alpha}`.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::HeffterGrid;
use crate::scalar::Entry;

/// Validated parameters for [`build_shifted`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedParams {
    pub n: usize,
    pub p: usize,
    pub gamma: usize,
    pub alpha: usize,
}

impl ShiftedParams {
    pub fn new(n: usize, p: usize, gamma: usize, alpha: usize) -> Result<Self> {
        if p == 0 || gamma == 0 {
            return Err(invalid("p and gamma must be positive"));
        }
        if n < 4 * p {
            return Err(invalid(format!("n = {n} is smaller than 4p = {}", 4 * p)));
        }
        let (lo, hi) = alpha_range(n, p);
        if alpha < lo || alpha > hi {
            return Err(invalid(format!("alpha = {alpha} outside [{lo}, {hi}]")));
        }
        if alpha.gcd(&n) != 1 {
            return Err(invalid(format!(
                "alpha = {alpha} is not coprime to n = {n}"
            )));
        }
        Ok(ShiftedParams { n, p, gamma, alpha })
    }

    pub fn k(&self) -> usize {
        4 * self.p
    }

    /// `2(4p + gamma)n + 1`.
    pub fn modulus(&self) -> u64 {
        (2 * (self.k() + self.gamma) * self.n + 1) as u64
    }

    /// Filled diagonal labels in increasing order.
    pub fn diagonals(&self) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..self.k() - 1).collect();
        labels.push(2 * self.p + self.alpha);
        labels
    }
}

/// Legal `alpha` interval `[2p - 1, n - 1 - 2p]`.
pub fn alpha_range(n: usize, p: usize) -> (usize, usize) {
    (2 * p - 1, (n + 1).saturating_sub(2 * p + 2))
}

/// Smallest legal `alpha` coprime to `n` and at least `min`.
pub fn choose_alpha(n: usize, p: usize, min: Option<usize>) -> Result<usize> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    let (lo, hi) = alpha_range(n, p);
    let lo = lo.max(min.unwrap_or(0));
    (lo..=hi)
        .find(|a| a.gcd(&n) == 1)
        .ok_or(Error::NoValidAlpha { n, lo, hi })
}

/// Builds the support-shifted array.
pub fn build_shifted<T: Entry>(
    n: usize,
    p: usize,
    gamma: usize,
    alpha: usize,
) -> Result<HeffterGrid<T>> {
    let params = ShiftedParams::new(n, p, gamma, alpha)?;
    let (ni, pi, g, a) = (n as i128, p as i128, gamma as i128, alpha as i128);
    let mut entries = Vec::with_capacity(n * params.k());
    let mut put = |r: i128, c: i128, v: i128| -> Result<()> {
        let cell = (r.rem_euclid(ni) as usize, c.rem_euclid(ni) as usize);
        entries.push((cell, T::from_wide(v).ok_or(Error::Overflow)?));
        Ok(())
    };
    for x in 0..ni {
        for i in 0..pi {
            put(2 * i - x, -x, (g + 2) * ni + 4 * i * ni - 2 * x)?;
            put(2 * i + 1 + x, x, -g * ni - 4 * i * ni - 1 - 2 * x)?;
        }
        put(2 * pi - a * x, -a * x, -(4 * pi + g) * ni + 2 * x)?;
        for j in 0..pi - 1 {
            put(
                2 * pi + 1 + 2 * j - x,
                -x,
                (4 * pi + g - 6) * ni - 4 * j * ni + 1 + 2 * x,
            )?;
            put(
                2 * pi + 2 + 2 * j + x,
                x,
                -(4 * pi + g - 4) * ni + 4 * j * ni + 2 * x,
            )?;
        }
        put(2 * pi + a + a * x, a * x, (4 * pi + g - 2) * ni + 1 + 2 * x)?;
    }
    HeffterGrid::from_entries(n, n, entries)
}
