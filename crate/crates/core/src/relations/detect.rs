use super::intmat::{strip_zero_rows, IntMatrix};
use super::lll::{default_delta, gso_norms_sq, lll_reduce};
use crate::arith::{ball_invert, ball_mat_mul, Ball, PrecPolicy, SignVerdict};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Certification status of a relation search.
///
/// `VerifiedExact` is set only after a caller-supplied exact verifier has
/// confirmed every reported relation as an algebraic identity. An empty
/// relation list is always `NumericOnly`: the absence of relations beyond
/// the recorded height bound and precision is exactly the kind of claim
/// that cannot be certified numerically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationStatus {
    VerifiedExact,
    NumericOnly { height_bound: u64, prec_bits: u32 },
}

/// Result of an integer-relation search.
#[derive(Debug, Clone)]
pub struct RelationResult {
    /// Basis rows of the detected relation lattice (canonical HNF order).
    /// Every relation of height up to the search bound lies in the row span;
    /// basis entries themselves may exceed the bound.
    pub relations: IntMatrix,
    pub status: RelationStatus,
    /// Residual enclosures, one vector (per constraint) per relation row,
    /// at the certifying precision.
    pub residuals: Vec<Vec<Ball>>,
}

impl RelationResult {
    pub fn empty(width: usize, height_bound: u64, prec_bits: u32) -> Self {
        RelationResult {
            relations: IntMatrix::empty(width),
            status: RelationStatus::NumericOnly { height_bound, prec_bits },
            residuals: vec![],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.relations.rows() == 0
    }

    pub fn rank(&self) -> usize {
        self.relations.rows()
    }

    /// Upgrade to `VerifiedExact` when the verifier confirms every row as an
    /// exact identity. Empty results stay `NumericOnly` by invariant.
    pub fn verify_exact<F>(&mut self, verifier: F) -> bool
    where
        F: Fn(&[BigInt]) -> bool,
    {
        if self.is_empty() {
            return false;
        }
        if self.relations.row_iter().all(|r| verifier(r)) {
            self.status = RelationStatus::VerifiedExact;
            true
        } else {
            false
        }
    }
}

/// A refinable table of real values: `r` constraint rows over `m` values.
/// `eval(prec)` must return enclosures whose radii shrink as `prec` grows
/// (plain balls that cannot refine simply return themselves).
pub struct RealTable<'a> {
    pub constraints: usize,
    pub values: usize,
    pub eval: Box<dyn Fn(u32) -> Result<Vec<Vec<Ball>>> + 'a>,
}

impl<'a> RealTable<'a> {
    pub fn from_fixed(rows: Vec<Vec<Ball>>) -> RealTable<'static> {
        let r = rows.len();
        let m = rows.first().map(|x| x.len()).unwrap_or(0);
        RealTable {
            constraints: r,
            values: m,
            eval: Box::new(move |_| Ok(rows.clone())),
        }
    }

    pub fn from_fn<F>(constraints: usize, values: usize, f: F) -> RealTable<'a>
    where
        F: Fn(u32) -> Result<Vec<Vec<Ball>>> + 'a,
    {
        RealTable { constraints, values, eval: Box::new(f) }
    }
}

/// Search outcome before status labeling.
struct Detection {
    basis: IntMatrix,
    residuals: Vec<Vec<Ball>>,
    prec_bits: u32,
}

/// Core search: integer vectors c (|c| up to `height`) with
/// `sum_i c_i T[j][i] ~ 0` for every constraint row j, detected by LLL on
/// the scaled embedding `[I | round(2^s T^t)]` and certified at doubled
/// precision. Escalates precision until the detected set is stable and the
/// reduced basis certifies that no further relation of the requested height
/// exists at this precision.
fn solve_table(table: &RealTable, height: u64, policy: PrecPolicy) -> Result<Detection> {
    let m = table.values;
    let r = table.constraints;
    if m == 0 {
        return Ok(Detection { basis: IntMatrix::empty(0), residuals: vec![], prec_bits: policy.start });
    }
    let mut last_err: Option<Error> = None;
    for prec in policy.ladder() {
        match attempt(table, height, prec) {
            Ok(Some(det)) => return Ok(det),
            Ok(None) => {
                last_err = Some(Error::PrecisionExhausted {
                    prec_bits: prec,
                    context: "relation candidates remained ambiguous".into(),
                });
            }
            Err(Error::PrecisionExhausted { prec_bits, context }) => {
                last_err = Some(Error::PrecisionExhausted { prec_bits, context });
            }
            Err(e) => return Err(e),
        }
    }
    let _ = r;
    Err(last_err.unwrap_or_else(|| Error::internal("empty precision ladder")))
}

/// One escalation rung. `Ok(None)` means "escalate".
fn attempt(table: &RealTable, height: u64, prec: u32) -> Result<Option<Detection>> {
    let m = table.values;
    let r = table.constraints;
    let rows = (table.eval)(prec)?;
    if rows.len() != r || rows.iter().any(|x| x.len() != m) {
        return Err(Error::internal("relation table shape mismatch"));
    }
    let s: i64 = prec as i64 - 16;
    if s <= 32 {
        return Err(Error::input("relation search precision too small"));
    }
    // Radii must resolve beyond the scaling, else escalation cannot help
    // this rung; entries are exact up to < 1 after scaling.
    let rad_cap = crate::arith::Mag::pow2(-s - 1);
    for row in &rows {
        for b in row {
            if b.rad().cmp_value(&rad_cap) == std::cmp::Ordering::Greater {
                return Ok(None);
            }
        }
    }
    // Embedded basis: value i -> (e_i | round(2^s T[0][i]), ..., round(2^s T[r-1][i])).
    let mut emb = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![BigInt::zero(); m + r];
        row[i] = BigInt::from(1);
        for (j, trow) in rows.iter().enumerate() {
            row[m + j] = trow[i].mid().mul_pow2(s).to_bigint_nearest();
        }
        emb.push(row);
    }
    let emb = IntMatrix::from_rows(emb);
    let (red, _) = lll_reduce(&emb, &default_delta())?;

    // An exact relation of height <= H yields an embedded vector bounded by
    // U: each scaled entry differs from 2^s * x_i by less than 1 (rounding
    // plus radius), so |w_j| <= m * H.
    let h_big = BigInt::from(height);
    let w_bound = BigInt::from(m as u64) * &h_big + 1;
    let u_sq = BigRational::from(
        BigInt::from(m as u64) * &h_big * &h_big + BigInt::from(r as u64) * &w_bound * &w_bound,
    );

    // Certified-nonzero threshold for residuals at doubled precision.
    let certify_prec = (2 * prec).min(crate::arith::MAX_PREC.max(2 * prec));
    let rows2 = (table.eval)(certify_prec)?;
    let threshold = crate::arith::Mag::pow2(-(prec as i64) / 2);

    // Classify reduced rows in position order. A candidate must look like
    // an exact relation in the embedding (small coefficients, small scaled
    // residual) and then survive certification at doubled precision.
    let norms = gso_norms_sq(&red)?;
    let w_cap = &w_bound * 2;
    let mut line = 0usize; // rows [0, line) are certified relations
    let mut residuals: Vec<Vec<Ball>> = Vec::new();
    for i in 0..m {
        let row = red.row(i);
        let c = &row[..m];
        let shape_ok = c.iter().any(|x| !x.is_zero())
            && c.iter().all(|x| x.abs() <= h_big)
            && row[m..].iter().all(|w| w.abs() <= w_cap);
        if !shape_ok {
            continue;
        }
        let mut res_row = Vec::with_capacity(r);
        let mut ok = true;
        for t2 in rows2.iter() {
            let mut acc = Ball::zero(certify_prec);
            for (ci, b) in c.iter().zip(t2.iter()) {
                if ci.is_zero() {
                    continue;
                }
                acc = acc.add(&b.mul_bigint(ci));
            }
            if acc.abs_upper().cmp_value(&threshold) == std::cmp::Ordering::Greater {
                ok = false;
            }
            res_row.push(acc);
        }
        if ok {
            if i != line {
                // A non-relation row sits between relation rows: ambiguous
                // ordering, escalate.
                return Ok(None);
            }
            residuals.push(res_row);
            line += 1;
        }
    }
    // Completeness: every embedded vector with |v|^2 <= U^2 must lie in the
    // span of the first `line` rows; this holds when all later GSO norms
    // exceed U^2. Otherwise a relation of height <= H could hide: escalate.
    for norm in norms.iter().skip(line) {
        if *norm <= u_sq {
            return Ok(None);
        }
    }
    let basis = IntMatrix::from_rows(
        (0..line).map(|i| red.row(i)[..m].to_vec()).collect(),
    );
    // Canonical presentation: saturate (a true relation lattice is
    // saturated), then HNF for determinism.
    let sat = strip_zero_rows(&basis.saturate().hnf());
    // Re-certify the canonical rows and keep their residuals.
    let mut final_res = Vec::with_capacity(sat.rows());
    for row in sat.row_iter() {
        let mut res_row = Vec::with_capacity(r);
        for t2 in rows2.iter() {
            let mut acc = Ball::zero(certify_prec);
            for (ci, b) in row.iter().zip(t2.iter()) {
                if !ci.is_zero() {
                    acc = acc.add(&b.mul_bigint(ci));
                }
            }
            if acc.abs_upper().cmp_value(&threshold) == std::cmp::Ordering::Greater {
                return Ok(None);
            }
            res_row.push(acc);
        }
        final_res.push(res_row);
    }
    Ok(Some(Detection { basis: sat, residuals: final_res, prec_bits: prec }))
}

/// Integer relations `sum c_i x_i = 0` among the given reals, searched up to
/// the height bound with precision escalation.
pub fn find_integer_relations(xs: &[Ball], height: u64, policy: PrecPolicy) -> Result<RelationResult> {
    let rows = vec![xs.to_vec()];
    let table = RealTable::from_fixed(rows);
    run(&table, height, policy)
}

/// Same search over refinable values.
pub fn find_integer_relations_with<'a, F>(
    values: usize,
    f: F,
    height: u64,
    policy: PrecPolicy,
) -> Result<RelationResult>
where
    F: Fn(u32) -> Result<Vec<Ball>> + 'a,
{
    let table = RealTable::from_fn(1, values, move |p| Ok(vec![f(p)?]));
    run(&table, height, policy)
}

fn run(table: &RealTable, height: u64, policy: PrecPolicy) -> Result<RelationResult> {
    if height == 0 {
        return Err(Error::input("height bound must be at least 1"));
    }
    let det = solve_table(table, height, policy)?;
    Ok(RelationResult {
        relations: det.basis,
        status: RelationStatus::NumericOnly { height_bound: height, prec_bits: det.prec_bits },
        residuals: det.residuals,
    })
}

/// Simultaneous integer relations: basis of
/// `{(c, k) : sum_i c_i T[j][i] = k_j for all j}` over ℤ^(n+r), where T is
/// an r x n table of refinable reals.
pub fn simultaneous_relations(table: &RealTable, height: u64, policy: PrecPolicy) -> Result<RelationResult> {
    let n = table.values;
    let r = table.constraints;
    let eval = &table.eval;
    let aug = RealTable::from_fn(r, n + r, move |p| {
        let rows = eval(p)?;
        let mut out = Vec::with_capacity(r);
        for (j, row) in rows.into_iter().enumerate() {
            let mut full = row;
            for j2 in 0..r {
                full.push(if j2 == j { Ball::from_i64(-1, p) } else { Ball::zero(p) });
            }
            out.push(full);
        }
        Ok(out)
    });
    run(&aug, height, policy)
}

pub fn simultaneous_relations_fixed(
    t: &[Vec<Ball>],
    height: u64,
    policy: PrecPolicy,
) -> Result<RelationResult> {
    let rows = t.to_vec();
    let table = RealTable::from_fixed(rows);
    simultaneous_relations(&table, height, policy)
}

/// Integer vectors lying in the real span of the given independent vectors,
/// searched up to the height bound.
///
/// Certified via the projector P = I - V^t (V V^t)^(-1) V: an integer c lies
/// in span(V) iff P c = 0, which is a relation-table kernel problem.
pub fn rational_vectors_in_span(
    eval_vectors: impl Fn(u32) -> Result<Vec<Vec<Ball>>>,
    count: usize,
    dim: usize,
    height: u64,
    policy: PrecPolicy,
) -> Result<RelationResult> {
    // Independence certificate: Gram determinant sign at some rung.
    let mut independent = false;
    for p in policy.ladder() {
        let v = eval_vectors(p)?;
        let vt: Vec<Vec<Ball>> = (0..dim)
            .map(|j| (0..count).map(|i| v[i][j].clone()).collect())
            .collect();
        let gram = ball_mat_mul(&v, &vt);
        let det = crate::arith::ball_det(&gram)?;
        if det.sign() != SignVerdict::Unknown {
            independent = true;
            break;
        }
    }
    if !independent {
        return Err(Error::input(
            "span vectors not certified independent (Gram determinant sign unknown)",
        ));
    }
    let table = RealTable::from_fn(dim, dim, move |p| {
        let v = eval_vectors(p)?;
        let vt: Vec<Vec<Ball>> = (0..dim)
            .map(|j| (0..count).map(|i| v[i][j].clone()).collect())
            .collect();
        let gram = ball_mat_mul(&v, &vt);
        let ginv = ball_invert(&gram)?;
        // P = I - V^t G^-1 V
        let vtg = ball_mat_mul(&vt, &ginv);
        let proj = ball_mat_mul(&vtg, &v);
        let mut p_mat = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let idd = if i == j { Ball::one(p) } else { Ball::zero(p) };
                row.push(idd.sub(&proj[i][j]));
            }
            p_mat.push(row);
        }
        Ok(p_mat)
    });
    run(&table, height, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ln2;

    fn policy() -> PrecPolicy {
        PrecPolicy::new(128, 1024)
    }

    fn ball_ln(k: i64, prec: u32) -> Ball {
        Ball::from_i64(k, prec).ln(prec).unwrap()
    }

    #[test]
    fn log2_log4_relation() {
        let res = find_integer_relations_with(
            2,
            |p| Ok(vec![ball_ln(2, p), ball_ln(4, p)]),
            100,
            policy(),
        )
        .unwrap();
        assert_eq!(res.rank(), 1);
        let row = res.relations.row(0);
        // (2, -1) up to sign
        let a = &row[0];
        let b = &row[1];
        assert_eq!((a.clone() * 1 + b.clone() * 2), BigInt::zero());
        assert_eq!(a.abs(), BigInt::from(2));
        assert!(matches!(res.status, RelationStatus::NumericOnly { .. }));
        assert!(res.residuals[0][0].contains_zero());
    }

    #[test]
    fn log2_log3_no_relation() {
        let res = find_integer_relations_with(
            2,
            |p| Ok(vec![ball_ln(2, p), ball_ln(3, p)]),
            1_000_000,
            policy(),
        )
        .unwrap();
        assert!(res.is_empty());
        assert!(matches!(res.status, RelationStatus::NumericOnly { .. }));
    }

    #[test]
    fn single_nonzero_value() {
        let res = find_integer_relations(&[Ball::one(128)], 10, policy()).unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn simultaneous_half() {
        // T = [[1/2]]: (c, k) = (2, 1)
        let half = Ball::from_rational(&BigRational::new(1.into(), 2.into()), 128);
        let res = simultaneous_relations_fixed(&[vec![half]], 100, policy()).unwrap();
        assert_eq!(res.rank(), 1);
        let row = res.relations.row(0);
        assert_eq!(row[0].abs(), BigInt::from(2));
        assert_eq!(row[1].abs(), BigInt::from(1));
    }

    #[test]
    fn simultaneous_identity_2x2() {
        let one = Ball::one(128);
        let zero = Ball::zero(128);
        let t = vec![
            vec![one.clone(), zero.clone()],
            vec![zero.clone(), one.clone()],
        ];
        let res = simultaneous_relations_fixed(&t, 100, policy()).unwrap();
        assert_eq!(res.rank(), 2);
        // relations (1,0,1,0) and (0,1,0,1)
        let expect = IntMatrix::from_i64_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        assert!(res.relations.same_lattice(&expect));
    }

    #[test]
    fn simultaneous_independent_logs() {
        let table = RealTable::from_fn(1, 3, |p| {
            Ok(vec![vec![ball_ln(2, p), ball_ln(3, p), ball_ln(5, p)]])
        });
        let res = simultaneous_relations(&table, 1000, policy()).unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn span_single_axis() {
        let res = rational_vectors_in_span(
            |p| Ok(vec![vec![Ball::one(p), Ball::zero(p), Ball::zero(p)]]),
            1,
            3,
            100,
            policy(),
        )
        .unwrap();
        assert_eq!(res.rank(), 1);
        assert!(res
            .relations
            .same_lattice(&IntMatrix::from_i64_rows(&[vec![1, 0, 0]])));
    }

    #[test]
    fn span_with_irrational_direction() {
        let res = rational_vectors_in_span(
            |p| Ok(vec![vec![ball_ln(2, p), ball_ln(3, p), Ball::zero(p)]]),
            1,
            3,
            1000,
            policy(),
        )
        .unwrap();
        assert!(res.is_empty());
    }

    #[test]
    fn span_two_rational_vectors() {
        let res = rational_vectors_in_span(
            |p| {
                Ok(vec![
                    vec![Ball::one(p), Ball::one(p), Ball::zero(p)],
                    vec![Ball::zero(p), Ball::zero(p), Ball::one(p)],
                ])
            },
            2,
            3,
            100,
            policy(),
        )
        .unwrap();
        assert_eq!(res.rank(), 2);
        assert!(res.relations.same_lattice(&IntMatrix::from_i64_rows(&[
            vec![1, 1, 0],
            vec![0, 0, 1]
        ])));
    }

    #[test]
    fn verify_upgrade_and_empty_invariant() {
        let mut res = find_integer_relations_with(
            2,
            |p| Ok(vec![ball_ln(2, p), ball_ln(4, p)]),
            100,
            policy(),
        )
        .unwrap();
        // 2 log2 - log4 = 0 exactly since 2^2 = 4.
        assert!(res.verify_exact(|row| {
            let a: i64 = (&row[0]).try_into().unwrap();
            let b: i64 = (&row[1]).try_into().unwrap();
            2i64.pow(a.unsigned_abs() as u32) as f64
                == 4f64.powi(if a > 0 { -b } else { b } as i32)
        }));
        assert_eq!(res.status, RelationStatus::VerifiedExact);

        let mut empty = RelationResult::empty(2, 10, 128);
        assert!(!empty.verify_exact(|_| true));
        assert!(matches!(empty.status, RelationStatus::NumericOnly { .. }));
        let _ = ln2(64);
    }
}
