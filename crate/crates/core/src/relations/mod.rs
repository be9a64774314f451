//! Exact integer-lattice algorithms and numeric integer-relation detection.
//!
//! The exact side ([`IntMatrix`], [`lll_reduce`], HNF/SNF, saturation) never
//! approximates. The numeric side searches for integer relations among real
//! enclosures by LLL on a scaled embedding, re-certifies candidates at
//! doubled precision, and reports a conditional status carrying the height
//! bound and precision of the search.

mod detect;
mod intmat;
mod lll;

pub use detect::{
    find_integer_relations, find_integer_relations_with, rational_vectors_in_span,
    simultaneous_relations, simultaneous_relations_fixed, RealTable, RelationResult,
    RelationStatus,
};
pub use intmat::{strip_zero_rows, IntMatrix};
pub use lll::{default_delta, gso_norms_sq, is_lll_reduced, lll_reduce};
