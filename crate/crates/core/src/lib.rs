//! Closures of finitely generated subgroups of algebraic tori over ℚ.
//!
//! The library computes, for a finitely generated subgroup of an anisotropic
//! torus, the closure of its image in the compact quotient Γ\T(ℝ) (the
//! Euclidean side) and the smallest algebraic subtorus containing it (the
//! Zariski side), and compares the two.  Every real quantity is carried as a
//! certified midpoint-radius enclosure, so "nonzero" verdicts are rigorous
//! while "no relation" verdicts are honestly labeled as conditional on a
//! height bound and a working precision.
//!
//! Module layout:
//! - [`arith`]: ball arithmetic, certified determinants and logs, real root
//!   isolation for integer polynomials;
//! - [`relations`]: exact integer lattices (LLL, HNF, SNF, saturation) and
//!   numeric integer-relation detection with escalation;
//! - [`field`]: exact number field arithmetic, embeddings, Galois action;
//! - [`units`]: unit groups of small fields (continued fractions, box search);
//! - [`torus`]: tori as character lattices with Galois action, X_F and
//!   Zariski closures;
//! - [`density`]: the Euclidean closure engine on quotients ℝⁿ/Λ;
//! - [`scenarios`]: bundled reproductions of the concrete worked examples;
//! - [`report`]: deterministic JSON reports.

pub mod arith;
pub mod density;
pub mod field;
pub mod relations;
pub mod report;
pub mod scenarios;
pub mod torus;
pub mod units;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
