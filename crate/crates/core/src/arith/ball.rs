use super::dyadic::Dyadic;
use super::mag::Mag;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cell::RefCell;
use std::cmp::Ordering;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;
/// Default cap for precision escalation.
pub const MAX_PREC: u32 = 16384;

/// Certified sign of a ball.
///
/// `Positive`/`Negative` require 0 to lie strictly outside the ball. A ball
/// straddling or touching 0 is `Unknown`; a numeric enclosure can never
/// certify an exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    Unknown,
}

/// Midpoint-radius enclosure of a real number.
///
/// Invariant: the represented value x satisfies |x − mid| ≤ rad. Operations
/// round outward, so the output ball contains every value attainable from
/// points of the input balls.
#[derive(Debug, Clone)]
pub struct Ball {
    mid: Dyadic,
    rad: Mag,
    prec: u32,
}

impl Ball {
    /// Ball from exact midpoint (rounded to `prec` bits, rounding absorbed
    /// into the radius).
    pub fn from_dyadic(mid: Dyadic, prec: u32) -> Ball {
        Ball::with_parts(mid, Mag::zero(), prec)
    }

    pub fn with_parts(mid: Dyadic, rad: Mag, prec: u32) -> Ball {
        let (m, err) = mid.round_prec(prec);
        let rad = match err {
            Some(e) => rad.add(&Mag::pow2(e)),
            None => rad,
        };
        Ball { mid: m, rad, prec }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball { mid: Dyadic::zero(), rad: Mag::zero(), prec }
    }

    pub fn one(prec: u32) -> Ball {
        Ball { mid: Dyadic::one(), rad: Mag::zero(), prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Ball {
        Ball::from_dyadic(Dyadic::from_i64(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        Ball::from_dyadic(Dyadic::from_bigint(v.clone()), prec)
    }

    /// Enclosure of an exact rational at `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32) -> Ball {
        let num = Ball::from_bigint(q.numer(), prec + 8);
        let den = Ball::from_bigint(q.denom(), prec + 8);
        num.div(&den).expect("nonzero denominator").round_to(prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn join_prec(&self, other: &Ball) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn round_to(&self, prec: u32) -> Ball {
        Ball::with_parts(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn abs(&self) -> Ball {
        Ball { mid: self.mid.abs(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.join_prec(other);
        Ball::with_parts(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.join_prec(other);
        let mid = self.mid.mul(&other.mid);
        // |x*y - mx*my| <= |mx|*ry + |my|*rx + rx*ry
        let ma = Mag::from_dyadic_upper(&self.mid);
        let mb = Mag::from_dyadic_upper(&other.mid);
        let rad = ma
            .mul(&other.rad)
            .add(&mb.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Ball::with_parts(mid, rad, prec)
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul(&Ball::from_i64(k, self.prec))
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Ball {
        self.mul(&Ball::from_bigint(k, self.prec))
    }

    pub fn mul_pow2(&self, e: i64) -> Ball {
        Ball {
            mid: self.mid.mul_pow2(e),
            rad: self.rad.mul_pow2(e),
            prec: self.prec,
        }
    }

    /// Widen the radius by `m`.
    pub fn widen(&self, m: &Mag) -> Ball {
        Ball { mid: self.mid.clone(), rad: self.rad.add(m), prec: self.prec }
    }

    /// Largest dyadic `l >= 0` with `l <= |x|` for every x in the ball;
    /// zero when the ball straddles 0.
    pub fn abs_lower(&self) -> Dyadic {
        let a = self.mid.abs().sub(&self.rad.to_dyadic());
        if a.signum() <= 0 {
            Dyadic::zero()
        } else {
            a
        }
    }

    /// Upper bound of |x| over the ball.
    pub fn abs_upper(&self) -> Mag {
        Mag::from_dyadic_upper(&self.mid).add(&self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.sign() == SignVerdict::Unknown
    }

    /// Exact containment test of a dyadic point.
    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        let diff = x.sub(&self.mid).abs();
        diff.cmp_value(&self.rad.to_dyadic()) != Ordering::Greater
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        // |q - mid| <= rad  <=>  |q*den - mid*den| <= rad*den with den > 0.
        let den = Dyadic::from_bigint(q.denom().clone());
        let lhs = Dyadic::from_bigint(q.numer().clone()).sub(&self.mid.mul(&den));
        lhs.abs().cmp_value(&self.rad.to_dyadic().mul(&den)) != Ordering::Greater
    }

    /// Certified sign.
    pub fn sign(&self) -> SignVerdict {
        if self.mid.is_zero() {
            return SignVerdict::Unknown;
        }
        if self.mid.abs().cmp_value(&self.rad.to_dyadic()) == Ordering::Greater {
            if self.mid.signum() > 0 {
                SignVerdict::Positive
            } else {
                SignVerdict::Negative
            }
        } else {
            SignVerdict::Unknown
        }
    }

    /// Smallest ball (at the joined precision) containing both inputs.
    pub fn hull(&self, other: &Ball) -> Ball {
        let prec = self.join_prec(other);
        // midpoint of the hull interval
        let lo_a = self.mid.sub(&self.rad.to_dyadic());
        let hi_a = self.mid.add(&self.rad.to_dyadic());
        let lo_b = other.mid.sub(&other.rad.to_dyadic());
        let hi_b = other.mid.add(&other.rad.to_dyadic());
        let lo = if lo_a.cmp_value(&lo_b) == Ordering::Less { lo_a } else { lo_b };
        let hi = if hi_a.cmp_value(&hi_b) == Ordering::Greater { hi_a } else { hi_b };
        let mid = lo.add(&hi).mul_pow2(-1);
        let rad = Mag::from_dyadic_upper(&hi.sub(&lo).mul_pow2(-1));
        Ball::with_parts(mid, rad, prec)
    }

    /// Division; the divisor must be certified nonzero.
    pub fn div(&self, other: &Ball) -> Result<Ball> {
        if other.sign() == SignVerdict::Unknown {
            return Err(Error::domain("division by a ball containing zero"));
        }
        let prec = self.join_prec(other);
        // Quotient of midpoints with one-ulp directed error.
        let (qmid, qerr) = div_dyadic(&self.mid, &other.mid, prec + 4);
        // Propagated error: for x in a, y in b,
        // |x/y - ma/mb| <= (ra*|mb| + rb*|ma|) / (|mb| * (|mb| - rb)).
        let amb = other.mid.abs();
        let den_low = amb.sub(&other.rad.to_dyadic()); // > 0 by the sign check
        let numer = self
            .rad
            .mul(&Mag::from_dyadic_upper(&other.mid))
            .add(&other.rad.mul(&Mag::from_dyadic_upper(&self.mid)));
        let prop = numer
            .mul(&Mag::recip_upper(&amb))
            .mul(&Mag::recip_upper(&den_low));
        Ok(Ball::with_parts(qmid, prop.add(&qerr), prec))
    }

    /// Division by a positive machine integer (used by series evaluation).
    pub fn div_u32(&self, k: u32) -> Ball {
        let d = Ball::from_i64(k as i64, self.prec);
        self.div(&d).expect("nonzero integer divisor")
    }

    /// Integer power (k >= 0) by repeated squaring.
    pub fn pow_u32(&self, k: u32) -> Ball {
        let mut acc = Ball::one(self.prec);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Natural log of a ball certified positive.
    ///
    /// The result contains log x for every x in the input. Monotonicity of
    /// log lets us enclose via the endpoint dyadics.
    pub fn ln(&self, prec: u32) -> Result<Ball> {
        if self.sign() != SignVerdict::Positive {
            return Err(Error::domain(
                "ball_log requires an argument certified positive",
            ));
        }
        let lo = self.mid.sub(&self.rad.to_dyadic());
        let hi = self.mid.add(&self.rad.to_dyadic());
        let a = ln_dyadic(&lo, prec)?;
        if lo == hi {
            return Ok(a);
        }
        let b = ln_dyadic(&hi, prec)?;
        Ok(a.hull(&b).round_to(prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

/// Round-to-nearest dyadic quotient with error bound, `prec` significant bits.
fn div_dyadic(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Mag) {
    assert!(!b.is_zero());
    if a.is_zero() {
        return (Dyadic::zero(), Mag::zero());
    }
    let abits = a.bits() as i64;
    let bbits = b.bits() as i64;
    // Shift so the integer quotient has ~prec+2 significant bits.
    let shift = (prec as i64 + 2 + bbits - abits).max(0) as u64;
    let an = a.man() << shift;
    let q = &an / b.man();
    let qexp = a.exp() - b.exp() - shift as i64;
    // Truncation error < 1 ulp = 2^qexp.
    (Dyadic::new(q, qexp), Mag::pow2(qexp))
}

thread_local! {
    static LN2_CACHE: RefCell<Option<(u32, Ball)>> = const { RefCell::new(None) };
}

/// Certified enclosure of log 2 via 2·atanh(1/3).
pub fn ln2(prec: u32) -> Ball {
    let cached = LN2_CACHE.with(|c| {
        c.borrow().as_ref().and_then(|(p, b)| {
            if *p >= prec {
                Some(b.round_to(prec))
            } else {
                None
            }
        })
    });
    if let Some(b) = cached {
        return b;
    }
    let w = prec + 16;
    let z = Ball::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)), w);
    let s = atanh_series(&z, prec);
    let r = s.mul_pow2(1).round_to(prec);
    LN2_CACHE.with(|c| *c.borrow_mut() = Some((prec, r.clone())));
    r
}

/// atanh(z) = sum z^(2i+1)/(2i+1) for |z| <= 0.34, with a certified
/// truncation remainder.
fn atanh_series(z: &Ball, prec: u32) -> Ball {
    let w = prec + 16;
    let z = z.round_to(w);
    let zsq = z.mul(&z);
    // |z| <= 0.34 < 2^-1.55: each further term gains >= 3 bits; bound below
    // uses the actual |z| upper bound for the remainder.
    let zu = z.abs_upper();
    debug_assert!(zu.to_f64() < 0.35);
    let mut term = z.clone();
    let mut sum = Ball::zero(w);
    let mut i: u32 = 0;
    loop {
        sum = sum.add(&term.div_u32(2 * i + 1));
        term = term.mul(&zsq);
        i += 1;
        // Remainder after N terms: |z|^(2N+1)/(2N+1) * 1/(1-z^2).
        if term.abs_upper().cmp_value(&Mag::pow2(-(w as i64))) == Ordering::Less || i > 4 * w {
            break;
        }
    }
    // 1/(1 - z^2) <= 1/(1 - 0.35^2) < 1.14 < 2^0.2; bound by 2 * term.
    let rem = term.abs_upper().mul_pow2(1);
    sum.widen(&rem).round_to(w)
}

/// Certified enclosure of log d for an exact dyadic d > 0.
fn ln_dyadic(d: &Dyadic, prec: u32) -> Result<Ball> {
    if d.signum() <= 0 {
        return Err(Error::domain("log of a non-positive value"));
    }
    let w = prec + 24;
    // d = u * 2^k with u in [1, 2)
    let bits = d.bits() as i64;
    let mut u = Dyadic::new(d.man().clone(), -(bits - 1));
    let mut k = d.exp() + bits - 1;
    // If u > sqrt(2), halve so that u in (0.7, sqrt(2)); keeps |z| <= 0.172.
    if u.mul(&u).cmp_value(&Dyadic::from_i64(2)) == Ordering::Greater {
        u = u.mul_pow2(-1);
        k += 1;
    }
    let num = Ball::from_dyadic(u.sub(&Dyadic::one()), w);
    let den = Ball::from_dyadic(u.add(&Dyadic::one()), w);
    let z = num.div(&den)?;
    let s = atanh_series(&z, w).mul_pow2(1);
    let kterm = ln2(w).mul_i64(k);
    Ok(s.add(&kterm).round_to(prec))
}

/// Certified determinant of a square ball matrix by pivoted elimination.
///
/// When no pivot in a column can be certified nonzero the algorithm falls
/// back to Laplace expansion along that column, which stays rigorous (if
/// wide). Matrices here are small (n <= 6).
pub fn ball_det(m: &[Vec<Ball>]) -> Result<Ball> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::input("ball_det requires a square matrix"));
        }
    }
    if n == 0 {
        return Ok(Ball::one(DEFAULT_PREC));
    }
    let prec = m
        .iter()
        .flat_map(|r| r.iter().map(|b| b.prec()))
        .max()
        .unwrap_or(DEFAULT_PREC);
    det_rec(m.to_vec(), prec)
}

fn det_rec(mut m: Vec<Vec<Ball>>, prec: u32) -> Result<Ball> {
    let n = m.len();
    let mut acc = Ball::one(prec);
    for col in 0..n {
        // Pick the row with the largest certified |pivot| lower bound.
        let mut best: Option<(usize, Dyadic)> = None;
        for (r, row) in m.iter().enumerate().skip(col) {
            let lb = row[col].abs_lower();
            if lb.signum() > 0 {
                let better = match &best {
                    None => true,
                    Some((_, cur)) => lb.cmp_value(cur) == Ordering::Greater,
                };
                if better {
                    best = Some((r, lb));
                }
            }
        }
        let Some((piv_row, _)) = best else {
            // No certified pivot: expand along this column.
            return Ok(acc.mul(&laplace_col(&m, col, prec)?));
        };
        if piv_row != col {
            m.swap(piv_row, col);
            acc = acc.neg();
        }
        let pivot = m[col][col].clone();
        acc = acc.mul(&pivot);
        for r in col + 1..n {
            if m[r][col].mid().is_zero() && m[r][col].rad().is_zero() {
                continue;
            }
            let factor = m[r][col].div(&pivot)?;
            for c in col + 1..n {
                let t = m[col][c].mul(&factor);
                m[r][c] = m[r][c].sub(&t);
            }
            m[r][col] = Ball::zero(prec);
        }
    }
    Ok(acc)
}

fn laplace_col(m: &[Vec<Ball>], col: usize, prec: u32) -> Result<Ball> {
    let rows: Vec<usize> = (col..m.len()).collect();
    let cols: Vec<usize> = (col..m.len()).filter(|&c| c != col).collect();
    laplace_rec(m, &rows, col, &cols, prec)
}

fn laplace_rec(
    m: &[Vec<Ball>],
    rows: &[usize],
    expand_col: usize,
    rest_cols: &[usize],
    prec: u32,
) -> Result<Ball> {
    if rows.len() == 1 {
        return Ok(m[rows[0]][expand_col].clone());
    }
    let mut acc = Ball::zero(prec);
    for (i, &r) in rows.iter().enumerate() {
        let entry = &m[r][expand_col];
        if entry.mid().is_zero() && entry.rad().is_zero() {
            continue;
        }
        let sub_rows: Vec<usize> =
            rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let minor = minor_det(m, &sub_rows, rest_cols, prec)?;
        let term = entry.mul(&minor);
        if i % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    Ok(acc)
}

fn minor_det(m: &[Vec<Ball>], rows: &[usize], cols: &[usize], prec: u32) -> Result<Ball> {
    let sub: Vec<Vec<Ball>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    det_rec(sub, prec)
}

/// Structural certificate that an odd-dimensional skew-symmetric matrix has
/// determinant exactly zero.
///
/// The caller asserts (via `skew_asserted`) that the underlying exact
/// quantities satisfy M = -M^T; the entry balls must not refute that. This is
/// the only path to a certified zero determinant for transcendental entries.
pub fn det_exact_zero_by_skew(m: &[Vec<Ball>], skew_asserted: bool) -> Result<bool> {
    let n = m.len();
    if !skew_asserted {
        return Err(Error::structure(
            "skew-symmetry must be asserted by the caller",
        ));
    }
    if n % 2 == 0 {
        return Err(Error::structure(
            "skew-symmetry forces det = 0 only in odd dimension",
        ));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::input("matrix not square"));
        }
        for (j, e) in row.iter().enumerate() {
            if !e.add(&m[j][i]).contains_zero() {
                return Err(Error::structure(
                    "entries refute the asserted skew-symmetry",
                ));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sign_verdicts() {
        let b = Ball::with_parts(Dyadic::from_i64(1), Mag::pow2(-1), 64); // 1 +- 0.5
        assert_eq!(b.sign(), SignVerdict::Positive);
        let b = Ball::with_parts(Dyadic::zero(), Mag::pow2(-3), 64);
        assert_eq!(b.sign(), SignVerdict::Unknown);
        let b = Ball::with_parts(Dyadic::from_i64(-3), Mag::pow2(0), 64); // -3 +- 1
        assert_eq!(b.sign(), SignVerdict::Negative);
    }

    #[test]
    fn rational_enclosure_contains() {
        let q = rational(1, 3);
        let b = Ball::from_rational(&q, 128);
        assert!(b.contains_rational(&q));
        assert!(b.rad().to_f64() < 1e-35);
    }

    #[test]
    fn mul_contains_product() {
        let a = Ball::from_rational(&rational(7, 5), 96);
        let b = Ball::from_rational(&rational(-22, 7), 96);
        let p = a.mul(&b);
        assert!(p.contains_rational(&rational(-22, 5)));
    }

    #[test]
    fn div_round_trip() {
        let a = Ball::from_rational(&rational(355, 113), 128);
        let b = Ball::from_rational(&rational(5, 7), 128);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.contains_rational(&rational(355, 113)));
    }

    #[test]
    fn ln_one_is_zero() {
        let b = Ball::one(128).ln(128).unwrap();
        assert!(b.contains_dyadic(&Dyadic::zero()));
        assert!(b.rad().to_f64() < 1e-35);
    }

    #[test]
    fn ln_rejects_nonpositive() {
        let b = Ball::with_parts(Dyadic::zero(), Mag::pow2(-2), 64);
        assert!(b.ln(64).is_err());
        assert!(Ball::from_i64(-2, 64).ln(64).is_err());
    }

    #[test]
    fn ln2_value() {
        // log 2 = 0.69314718055994530941723212145818...
        let b = ln2(200);
        let lo = rational(693147180559945309, 1_000_000_000_000_000_000);
        let hi = rational(693147180559945310, 1_000_000_000_000_000_000);
        assert_eq!(b.sign(), SignVerdict::Positive);
        let l = Ball::from_rational(&lo, 200);
        let h = Ball::from_rational(&hi, 200);
        assert_eq!(b.sub(&l).sign(), SignVerdict::Positive);
        assert_eq!(b.sub(&h).sign(), SignVerdict::Negative);
    }

    #[test]
    fn det_identity() {
        let n = 3;
        let m: Vec<Vec<Ball>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Ball::one(128) } else { Ball::zero(128) })
                    .collect()
            })
            .collect();
        let d = ball_det(&m).unwrap();
        assert!(d.contains_dyadic(&Dyadic::one()));
        assert!(d.rad().is_zero());
    }

    #[test]
    fn skew_shortcut() {
        let p = 128;
        let l2 = ln2(p);
        let z = Ball::zero(p);
        let m = vec![
            vec![z.clone(), l2.clone(), l2.clone()],
            vec![l2.neg(), z.clone(), l2.clone()],
            vec![l2.neg(), l2.neg(), z.clone()],
        ];
        assert!(det_exact_zero_by_skew(&m, true).unwrap());
        assert!(det_exact_zero_by_skew(&m[..2].to_vec().iter().map(|r| r[..2].to_vec()).collect::<Vec<_>>(), true).is_err());
        assert!(det_exact_zero_by_skew(&m, false).is_err());
        // refuted skewness
        let bad = vec![
            vec![z.clone(), l2.clone()],
            vec![l2.clone(), z.clone()],
        ];
        assert!(det_exact_zero_by_skew(&bad, true).is_err());
    }
}
