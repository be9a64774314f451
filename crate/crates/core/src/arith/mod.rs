//! Certified arbitrary-precision real arithmetic.
//!
//! Values are midpoint-radius balls over exact dyadics ([`Ball`]); all
//! operations round outward so enclosures are rigorous. Exact integer
//! polynomials ([`IntPoly`]) come with Descartes-bisection real root
//! isolation.

mod ball;
mod dyadic;
mod linalg;
mod mag;
mod poly;
mod roots;

pub use ball::{ball_det, det_exact_zero_by_skew, ln2, Ball, SignVerdict, DEFAULT_PREC, MAX_PREC};
pub use linalg::{ball_dot, ball_invert, ball_mat_mul};
pub use dyadic::Dyadic;
pub use mag::Mag;
pub use poly::IntPoly;
pub use roots::{dyadic_to_rational, isolate_real_roots, refine_root, root_ball, RootInterval};

#[cfg(test)]
pub use roots::sturm;

/// Precision escalation policy: start at `start` bits, double up to `cap`.
#[derive(Debug, Clone, Copy)]
pub struct PrecPolicy {
    pub start: u32,
    pub cap: u32,
}

impl Default for PrecPolicy {
    fn default() -> Self {
        PrecPolicy { start: DEFAULT_PREC, cap: MAX_PREC }
    }
}

impl PrecPolicy {
    pub fn new(start: u32, cap: u32) -> Self {
        PrecPolicy { start, cap: cap.max(start) }
    }

    /// Iterator over the escalation ladder: start, 2*start, ..., <= cap.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let (start, cap) = (self.start, self.cap);
        std::iter::successors(Some(start), move |p| {
            let next = p.saturating_mul(2);
            if *p >= cap {
                None
            } else {
                Some(next.min(cap))
            }
        })
    }
}
