//! Construction and verification of globally simple Heffter arrays, and
//! extraction of the orthogonal cycle decompositions they define.
//!
//! The array type [`HeffterGrid`] is generic over the signed integer used for
//! entries; [`Grid`] fixes it to `i64`, which is what the constructors return.

mod construct4p;
mod decomposition;
mod diagonal;
mod error;
mod format;
mod grid;
mod ladder;
mod merge;
mod ordering;
mod scalar;
mod shifted;
pub mod verify;

pub use construct4p::{
    build_h4p, diagonal_rules, expected_diagonal_support, ConstructionParams4p, DiagonalRule,
    DiagonalSupport, Parity,
};
pub use decomposition::{
    base_cycle, base_cycles, canonical_cycle, develop, develop_grid, orthogonality, BaseCycles,
    CycleSystem, Orthogonality,
};
pub use diagonal::{diagonal_cells, diagonal_of, DiagonalSpec};
pub use error::{Error, Result};
pub use format::{parse_grid, write_grid};
pub use grid::{Cell, HeffterGrid, Line, Support};
pub use ladder::{
    build_h3_base, cyclic_shift, place_ladder, relocate_h3, search_h3_base, verify_ladder,
    H3Method, LadderParams, DEFAULT_SEARCH_BUDGET,
};
pub use merge::{
    build_h4p3, coprime_scan, forbidden_values, overlay, select_shift, MergeOptions, MergeOutcome,
    MergeParams,
};
pub use ordering::{
    is_simple, partial_sums, LineOrdering, OrderRule, OrderingKind, PartialSumTrace, Simplicity,
};
pub use scalar::{residue, symmetric_residue, Entry};
pub use shifted::{alpha_range, build_shifted, choose_alpha, ShiftedParams};
pub use verify::{
    compatibility_check, heffter_modulus, natural_orderings, verify_globally_simple,
    verify_heffter, verify_integer, verify_simple_under, verify_square, verify_support_shifted,
    Certificate, CheckResult, Compatibility, OrderingPermutation, VerificationReport,
};

/// Grid with `i64` entries.
pub type Grid = HeffterGrid<i64>;
