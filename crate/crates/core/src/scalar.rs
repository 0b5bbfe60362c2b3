//! Entry types.
//!
//! Arrays are generic over a signed primitive integer. Every sum is computed
//! with checked arithmetic in the entry type, so a grid of `i32` entries whose
//! partial sums leave the `i32` range reports [`Error::Overflow`] instead of
//! wrapping. Residues are taken through `i128`, which holds every supported
//! entry type exactly.
//!
//! [`Error::Overflow`]: crate::Error::Overflow

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{CheckedNeg, NumCast, PrimInt, Signed};

/// A signed machine integer usable as an array entry.
pub trait Entry:
    PrimInt + Signed + CheckedNeg + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Converts from the wide intermediate type used by the constructors.
    fn from_wide(value: i128) -> Option<Self> {
        <Self as NumCast>::from(value)
    }

    /// Widens losslessly to `i128`.
    fn to_wide(self) -> i128 {
        // Every primitive signed integer fits.
        self.to_i128().unwrap_or_default()
    }

    /// Absolute value as an unsigned wide integer (total on `MIN`).
    fn magnitude(self) -> u128 {
        self.to_wide().unsigned_abs()
    }
}

impl<T> Entry for T where
    T: PrimInt + Signed + CheckedNeg + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}

/// Canonical residue of `value` in `[0, modulus)`.
pub fn residue(value: i128, modulus: u64) -> u64 {
    debug_assert!(modulus > 0);
    value.rem_euclid(modulus as i128) as u64
}

/// Representative of `residue` in the symmetric range.
///
/// For odd moduli the range is `[-(M-1)/2, (M-1)/2]`; for even moduli it is
/// `(-M/2, M/2]`.
pub fn symmetric_residue(residue: u64, modulus: u64) -> i128 {
    let r = (residue % modulus) as i128;
    let m = modulus as i128;
    if r > m / 2 {
        r - m
    } else {
        r
    }
}
