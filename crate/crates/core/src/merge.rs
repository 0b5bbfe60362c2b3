//! Globally simple `H(n; 4p + 3)` from a support-shifted `H(n; 4p, 3)` and a
//! relocated `H(n; 3)` on three of its empty diagonals.
//!
//! The shifted array `A` takes the support `{3n + 1, ..., (4p + 3)n}` and the
//! ladder `L` takes `{1, ..., 3n}`. `L` sits on `D_{2p+alpha-eps-1}`,
//! `D_{2p+alpha-1}` and `D_{2p+alpha+eps-1}`, then is shifted cyclically until
//! the merged array is simple.

use log::debug;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::grid::HeffterGrid;
use crate::ladder::{
    build_h3_base, place_ladder, search_h3_base, H3Method, LadderParams, DEFAULT_SEARCH_BUDGET,
};
use crate::scalar::Entry;
use crate::shifted::build_shifted;
use crate::verify::verify_square;

const GAMMA: usize = 3;

/// Every parameter of a merged array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MergeParams {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub alpha: usize,
    pub epsilon: usize,
    pub beta: usize,
    pub shift: usize,
    pub modulus: u64,
}

/// Caller overrides for [`build_h4p3`]. Unset fields are chosen automatically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeOptions {
    pub alpha: Option<usize>,
    pub epsilon: Option<usize>,
    pub shift: Option<usize>,
    pub h3_method: H3Method,
    pub search_budget: u64,
}

impl Default for MergeOptions {
    fn default() -> Self {
        MergeOptions {
            alpha: None,
            epsilon: None,
            shift: None,
            h3_method: H3Method::ClosedForm,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// A merged array with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome<T> {
    pub grid: HeffterGrid<T>,
    pub params: MergeParams,
}

/// Smallest value in `[lo, hi]` coprime to `n`.
pub fn coprime_scan(n: usize, lo: usize, hi: usize) -> Option<usize> {
    (lo..=hi).find(|v| v.gcd(&n) == 1)
}

/// Values that the column-0 ladder entries must avoid.
///
/// `2n - 1` always; `2n - (2p + 1)/3` only when the division is exact.
pub fn forbidden_values(n: usize, p: usize) -> Vec<i128> {
    let mut out = vec![2 * n as i128 - 1];
    if (2 * p + 1).is_multiple_of(3) {
        let extra = 2 * n as i128 - (2 * p as i128 + 1) / 3;
        if !out.contains(&extra) {
            out.push(extra);
        }
    }
    out
}

/// Union of two grids with disjoint filled cells.
pub fn overlay<T: Entry>(a: &HeffterGrid<T>, b: &HeffterGrid<T>) -> Result<HeffterGrid<T>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(invalid("grids have different shapes"));
    }
    if let Some((cell, _)) = b.entries().find(|&(cell, _)| a.get(cell).is_some()) {
        return Err(Error::Overlap(cell));
    }
    HeffterGrid::from_entries(a.rows(), a.cols(), a.entries().chain(b.entries()))
}

fn check_order(n: usize, p: usize) -> Result<()> {
    if p == 0 {
        return Err(invalid("p must be positive"));
    }
    if n % 4 > 1 {
        return Err(Error::Unsupported(format!("n = {n} is not 0 or 1 mod 4")));
    }
    if n < 4 * p + 3 {
        return Err(invalid(format!(
            "n = {n} is smaller than 4p + 3 = {}",
            4 * p + 3
        )));
    }
    Ok(())
}

/// Whether `(alpha, eps)` places the ladder strictly between the last
/// consecutive diagonal of `A` and the end of the array, clear of `D_{2p+alpha}`.
fn admissible(n: usize, p: usize, alpha: usize, epsilon: usize) -> bool {
    epsilon >= 2
        && epsilon.gcd(&n) == 1
        && alpha.gcd(&n) == 1
        && alpha + 2 * p < n
        && 2 * p + alpha >= 4 * p - 1 + epsilon
        && 2 * p + alpha + epsilon - 1 < n
}

struct Parts<T> {
    a: HeffterGrid<T>,
    base: HeffterGrid<T>,
}

impl<T: Entry> Parts<T> {
    fn ladder(
        &self,
        n: usize,
        p: usize,
        alpha: usize,
        epsilon: usize,
        shift: usize,
    ) -> Result<HeffterGrid<T>> {
        let params = LadderParams::new(n, 2 * p + alpha - epsilon - 1, epsilon, shift)?;
        place_ladder(&self.base, &params)
    }
}

fn base_ladder<T: Entry>(n: usize, options: &MergeOptions) -> Result<HeffterGrid<T>> {
    match options.h3_method {
        H3Method::ClosedForm => build_h3_base(n),
        H3Method::Search => search_h3_base(n, options.search_budget),
    }
}

/// Whether the column-0 ladder entries of `ladder` avoid the forbidden values.
fn avoids_forbidden<T: Entry>(
    ladder: &HeffterGrid<T>,
    n: usize,
    p: usize,
    alpha: usize,
    epsilon: usize,
) -> bool {
    let forbidden = forbidden_values(n, p);
    let top = ladder
        .get((2 * p + alpha - epsilon - 1, 0))
        .map(|v| v.to_wide());
    let bottom = ladder
        .get((2 * p + alpha + epsilon - 1, 0))
        .map(|v| -v.to_wide());
    [top, bottom]
        .iter()
        .flatten()
        .all(|v| !forbidden.contains(v))
}

/// Smallest shift `t` for which the shifted ladder avoids the forbidden
/// column-0 values and the merged array verifies.
pub fn select_shift<T: Entry>(
    a: &HeffterGrid<T>,
    base: &HeffterGrid<T>,
    n: usize,
    p: usize,
    alpha: usize,
    epsilon: usize,
) -> Result<usize> {
    let parts = Parts {
        a: a.clone(),
        base: base.clone(),
    };
    try_shifts(&parts, n, p, alpha, epsilon)?
        .map(|(t, _)| t)
        .ok_or_else(|| {
            Error::Internal(format!(
                "no shift works for n = {n}, p = {p}, alpha = {alpha}, eps = {epsilon}"
            ))
        })
}

fn try_shifts<T: Entry>(
    parts: &Parts<T>,
    n: usize,
    p: usize,
    alpha: usize,
    epsilon: usize,
) -> Result<Option<(usize, HeffterGrid<T>)>> {
    for t in 0..n {
        let ladder = parts.ladder(n, p, alpha, epsilon, t)?;
        if !avoids_forbidden(&ladder, n, p, alpha, epsilon) {
            continue;
        }
        let merged = overlay(&parts.a, &ladder)?;
        if verify_square(&merged, n, 4 * p + 3, false)?.passed() {
            return Ok(Some((t, merged)));
        }
        debug!("n = {n}, p = {p}, alpha = {alpha}, eps = {epsilon}: shift {t} fails verification");
    }
    Ok(None)
}

/// Builds a globally simple integer `H(n; 4p + 3)`.
///
/// For `n = 1 mod 4` the step is 2 and `alpha` defaults to `(n - 1)/2`. For
/// `n = 0 mod 4` the step and offset are searched: first `eps = 3`,
/// `alpha = n/2 - 1` when that is admissible, then every admissible pair in
/// increasing order. Every candidate is verified before it is returned.
pub fn build_h4p3<T: Entry>(n: usize, p: usize, options: &MergeOptions) -> Result<MergeOutcome<T>> {
    check_order(n, p)?;
    let base = base_ladder(n, options)?;
    let shifted_for = |alpha: usize| build_shifted::<T>(n, p, GAMMA, alpha);

    let candidates: Vec<(usize, usize)> = if n % 4 == 1 {
        let epsilon = options.epsilon.unwrap_or(2);
        if epsilon != 2 {
            return Err(invalid("the step is fixed to 2 when n = 1 mod 4"));
        }
        let alpha = options.alpha.unwrap_or((n - 1) / 2);
        if alpha < 2 * p + 2 || alpha + 2 * p + 2 > n || alpha.gcd(&n) != 1 {
            return Err(invalid(format!(
                "alpha = {alpha} must be coprime to {n} and lie in [{}, {}]",
                2 * p + 2,
                n - 2 - 2 * p
            )));
        }
        vec![(alpha, 2)]
    } else {
        zero_mod_four_candidates(n, p, options)?
    };

    for (alpha, epsilon) in candidates {
        let parts = Parts {
            a: shifted_for(alpha)?,
            base: base.clone(),
        };
        let found = match options.shift {
            Some(t) => {
                let ladder = parts.ladder(n, p, alpha, epsilon, t)?;
                Some((t % n, overlay(&parts.a, &ladder)?))
            }
            None => try_shifts(&parts, n, p, alpha, epsilon)?,
        };
        if let Some((shift, grid)) = found {
            let k = 4 * p + 3;
            let params = MergeParams {
                n,
                p,
                k,
                alpha,
                epsilon,
                beta: 2 * p + alpha - epsilon - 1,
                shift,
                modulus: (2 * n * k + 1) as u64,
            };
            debug!("merged H({n};{k}) with {params:?}");
            return Ok(MergeOutcome { grid, params });
        }
        if n % 4 == 1 {
            return Err(Error::Internal(format!(
                "no shift works for n = {n}, p = {p}, alpha = {alpha}"
            )));
        }
    }
    Err(Error::NoParameters(format!(
        "no (eps, alpha, shift) works for n = {n}, p = {p}"
    )))
}

fn zero_mod_four_candidates(
    n: usize,
    p: usize,
    options: &MergeOptions,
) -> Result<Vec<(usize, usize)>> {
    if let (Some(alpha), Some(epsilon)) = (options.alpha, options.epsilon) {
        if !admissible(n, p, alpha, epsilon) {
            return Err(invalid(format!(
                "(alpha, eps) = ({alpha}, {epsilon}) is not admissible for n = {n}, p = {p}"
            )));
        }
        return Ok(vec![(alpha, epsilon)]);
    }
    let mut out = Vec::new();
    let fast = (n / 2 - 1, 3);
    if !n.is_multiple_of(12)
        && n >= 4 * p + 8
        && admissible(n, p, fast.0, fast.1)
        && options.epsilon.is_none_or(|e| e == 3)
        && options.alpha.is_none_or(|a| a == fast.0)
    {
        out.push(fast);
    }
    let max_eps = (n - 4 * p) / 2;
    let mut eps_lo = 2;
    while let Some(epsilon) = coprime_scan(n, eps_lo, max_eps) {
        eps_lo = epsilon + 1;
        if options.epsilon.is_some_and(|e| e != epsilon) {
            continue;
        }
        let hi = (n - 2 * p).saturating_sub(epsilon);
        let mut alpha_lo = 2 * p + epsilon;
        while let Some(alpha) = coprime_scan(n, alpha_lo, hi) {
            alpha_lo = alpha + 1;
            if options.alpha.is_some_and(|a| a != alpha) {
                continue;
            }
            if admissible(n, p, alpha, epsilon) && !out.contains(&(alpha, epsilon)) {
                out.push((alpha, epsilon));
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoParameters(format!(
            "no admissible (eps, alpha) for n = {n}, p = {p}"
        )));
    }
    Ok(out)
}
