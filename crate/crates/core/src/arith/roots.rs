use super::ball::Ball;
use super::dyadic::Dyadic;
use super::mag::Mag;
use super::poly::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Interval containing exactly one real root of a squarefree polynomial.
/// Endpoints are dyadic; `lo == hi` marks an exact dyadic root.
#[derive(Debug, Clone)]
pub struct RootInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RootInterval {
    pub fn exact(r: Dyadic) -> Self {
        RootInterval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width_msb(&self) -> Option<i64> {
        self.hi.sub(&self.lo).msb_exp()
    }

    pub fn to_rationals(&self) -> (BigRational, BigRational) {
        (dyadic_to_rational(&self.lo), dyadic_to_rational(&self.hi))
    }

    /// Midpoint-radius ball containing the root.
    pub fn to_ball(&self, prec: u32) -> Ball {
        let mid = self.lo.add(&self.hi).mul_pow2(-1);
        let rad = Mag::from_dyadic_upper(&self.hi.sub(&self.lo).mul_pow2(-1));
        Ball::with_parts(mid, rad, prec)
    }
}

pub fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    if d.exp() >= 0 {
        BigRational::from(d.man() << d.exp() as u64)
    } else {
        BigRational::new(d.man().clone(), BigInt::one() << (-d.exp()) as u64)
    }
}

/// Isolate all real roots of a nonzero squarefree integer polynomial.
///
/// Returns one interval per real root, pairwise disjoint, in ascending
/// order. Uses Descartes' rule of signs with dyadic bisection.
pub fn isolate_real_roots(f: &IntPoly) -> Result<Vec<RootInterval>> {
    if f.is_zero() {
        return Err(Error::input("cannot isolate roots of the zero polynomial"));
    }
    if !f.is_squarefree() {
        return Err(Error::input(
            "polynomial must be squarefree (divide by gcd(f, f') first)",
        ));
    }
    let mut f = f.primitive_part();
    let mut out: Vec<RootInterval> = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    // Root at zero is simple (squarefree); strip it.
    if f.coeff(0).is_zero() {
        out.push(RootInterval::exact(Dyadic::zero()));
        f = f.div_exact(&IntPoly::from_i64(&[0, 1]));
    }
    let b = root_bound_exp(&f);
    // Positive roots: roots of f(2^b x) in (0, 1).
    let pos = f.scale_pow2(b);
    let mut buf = Vec::new();
    isolate01(&pos, &BigInt::zero(), 0, &mut buf, 0)?;
    for (c, k, exact) in buf {
        out.push(map_unit_interval(&c, k, b as i64, false, exact));
    }
    // Negative roots: roots of f(-2^b x) in (0, 1), mapped back with a sign.
    let neg = f.scale_pow2(b).negate_var();
    let mut buf = Vec::new();
    isolate01(&neg, &BigInt::zero(), 0, &mut buf, 0)?;
    for (c, k, exact) in buf {
        out.push(map_unit_interval(&c, k, b as i64, true, exact));
    }
    // An open interval may touch an exact root of f at an endpoint (the
    // stripped zero, or a deflated dyadic midpoint); move such endpoints
    // inward so every emitted open interval has nonzero endpoint signs.
    let f_full = if out.iter().any(|iv| iv.is_exact() && iv.lo.is_zero()) {
        f.mul(&IntPoly::from_i64(&[0, 1]))
    } else {
        f.clone()
    };
    for iv in out.iter_mut() {
        if iv.is_exact() {
            continue;
        }
        if f_full.sign_at(&iv.lo) == 0 || f_full.sign_at(&iv.hi) == 0 {
            rebracket(&f_full, iv);
        }
    }
    out.sort_by(|a, b| a.lo.cmp_value(&b.lo));
    Ok(out)
}

/// The open interval (lo, hi) contains exactly one root r of f, but an
/// endpoint is itself a (different) root of f. Scan dyadic subdivision
/// points at increasing depth until two adjacent interior points bracket r
/// with nonzero signs, or one hits r exactly.
fn rebracket(f: &IntPoly, iv: &mut RootInterval) {
    let width = iv.hi.sub(&iv.lo);
    for j in 1..256u32 {
        let step = width.mul_pow2(-(j as i64));
        let mut prev: Option<(Dyadic, i32)> = None;
        for k in 1..(1u64 << j) {
            let p = iv.lo.add(&step.mul(&Dyadic::from_i64(k as i64)));
            let s = f.sign_at(&p);
            if s == 0 {
                *iv = RootInterval::exact(p);
                return;
            }
            if let Some((q, sq)) = prev {
                if sq != s {
                    *iv = RootInterval { lo: q, hi: p };
                    return;
                }
            }
            prev = Some((p, s));
        }
    }
    unreachable!("isolating interval failed to rebracket");
}

/// Exponent b with all real roots strictly inside (-2^b, 2^b) (Cauchy bound).
fn root_bound_exp(f: &IntPoly) -> u64 {
    let d = f.degree().unwrap();
    let lc_bits = f.leading().magnitude().bits();
    let max_bits = f
        .coeffs()
        .iter()
        .take(d)
        .map(|c| c.magnitude().bits())
        .max()
        .unwrap_or(0);
    // 1 + max|a_i| / |a_d| < 1 + 2^(max_bits - lc_bits + 1) <= 2^(max_bits - lc_bits + 2)
    (max_bits as i64 - lc_bits as i64 + 2).max(1) as u64
}

fn map_unit_interval(c: &BigInt, k: u64, b: i64, negative: bool, exact: bool) -> RootInterval {
    // t in (c/2^k, (c+1)/2^k) maps to x = ±2^b t.
    let lo_t = Dyadic::new(c.clone(), -(k as i64)).mul_pow2(b);
    if exact {
        let r = if negative { lo_t.neg() } else { lo_t };
        return RootInterval::exact(r);
    }
    let hi_t = Dyadic::new(c + BigInt::one(), -(k as i64)).mul_pow2(b);
    if negative {
        RootInterval { lo: hi_t.neg(), hi: lo_t.neg() }
    } else {
        RootInterval { lo: lo_t, hi: hi_t }
    }
}

/// Descartes bound for the number of roots of q in the open interval (0,1):
/// sign variations of (x+1)^n q(1/(x+1)).
fn descartes_bound_01(q: &IntPoly) -> usize {
    q.reverse().shift_one().sign_variations()
}

/// Recursively isolate roots of q in (0,1); intervals reported as
/// (c, k, exact) meaning (c/2^k, (c+1)/2^k), or the exact point c/2^k.
fn isolate01(
    q: &IntPoly,
    c: &BigInt,
    k: u64,
    out: &mut Vec<(BigInt, u64, bool)>,
    depth: u32,
) -> Result<()> {
    if depth > 8_000 {
        return Err(Error::internal("root isolation recursion too deep"));
    }
    match descartes_bound_01(q) {
        0 => Ok(()),
        1 => {
            out.push((c.clone(), k, false));
            Ok(())
        }
        _ => {
            let n = q.degree().unwrap() as u64;
            let half = q.unscale_pow2(1); // 2^n q(x/2), roots doubled
            let mut left = half.clone();
            let mut right = half.shift_one(); // roots of q in (1/2, 1) map to (0, 1)
            let c2 = c << 1u32;
            let cmid = &c2 + BigInt::one();
            if right.coeff(0).is_zero() {
                // Exact root at the midpoint; deflate both halves.
                out.push((cmid.clone(), k + 1, true));
                right = right.div_exact(&IntPoly::from_i64(&[0, 1]));
                left = left.div_exact(&IntPoly::from_i64(&[-1, 1]));
            }
            let _ = n;
            isolate01(&left, &c2, k + 1, out, depth + 1)?;
            isolate01(&right, &cmid, k + 1, out, depth + 1)
        }
    }
}

/// Shrink an isolating interval until its width is at most 2^width_exp.
///
/// Exact bisection (integer sign evaluations) guarantees correctness; an
/// interval Newton step is tried for large refinements and its output is
/// re-certified by exact sign checks before being accepted.
pub fn refine_root(f: &IntPoly, iv: &RootInterval, width_exp: i64) -> RootInterval {
    let mut cur = iv.clone();
    if cur.is_exact() {
        return cur;
    }
    let mut sign_lo = f.sign_at(&cur.lo);
    debug_assert!(sign_lo != 0 && f.sign_at(&cur.hi) == -sign_lo);
    let fp = f.derivative();
    let mut stalls = 0;
    loop {
        match cur.width_msb() {
            None => return cur,
            Some(w) if w <= width_exp => return cur,
            Some(w) => {
                // Try Newton once the interval is already somewhat narrow and
                // the remaining distance is large.
                if w < -48 && width_exp < w - 16 && stalls < 3 {
                    if let Some(next) = newton_step(f, &fp, &cur, width_exp) {
                        let (nlo, nhi) = (next.lo.clone(), next.hi.clone());
                        let sl = f.sign_at(&nlo);
                        let sh = f.sign_at(&nhi);
                        if sl == sign_lo && sh == -sign_lo {
                            cur = next;
                            continue;
                        } else if sl == 0 {
                            return RootInterval::exact(nlo);
                        } else if sh == 0 {
                            return RootInterval::exact(nhi);
                        }
                    }
                    stalls += 1;
                }
                let mid = cur.lo.add(&cur.hi).mul_pow2(-1);
                let sm = f.sign_at(&mid);
                if sm == 0 {
                    return RootInterval::exact(mid);
                }
                if sm == sign_lo {
                    cur.lo = mid;
                } else {
                    cur.hi = mid;
                }
                let _ = &mut sign_lo;
            }
        }
    }
}

/// One interval Newton contraction aiming at width 2^width_exp.
fn newton_step(
    f: &IntPoly,
    fp: &IntPoly,
    iv: &RootInterval,
    width_exp: i64,
) -> Option<RootInterval> {
    let cur_w = iv.width_msb()?;
    // Newton doubles accuracy; work at twice the current accuracy plus slack.
    let target = (2 * cur_w.unsigned_abs()).min(width_exp.unsigned_abs() + 16) as u32;
    let prec = target + 64;
    let x = iv.to_ball(prec);
    let dfx = fp.eval_ball(&x, prec);
    if dfx.sign() == super::ball::SignVerdict::Unknown {
        return None;
    }
    let m = x.mid().clone();
    let fm = f.eval_ball(&Ball::from_dyadic(m.clone(), prec), prec);
    let delta = fm.div(&dfx).ok()?;
    // Root lies in m - delta (interval Newton), intersected with iv.
    let lo_new = m.sub(&delta.mid().add(&delta.rad().to_dyadic()));
    let hi_new = m.sub(&delta.mid().sub(&delta.rad().to_dyadic()));
    let lo = if lo_new.cmp_value(&iv.lo) == std::cmp::Ordering::Greater { lo_new } else { iv.lo.clone() };
    let hi = if hi_new.cmp_value(&iv.hi) == std::cmp::Ordering::Less { hi_new } else { iv.hi.clone() };
    if lo.cmp_value(&hi) != std::cmp::Ordering::Less {
        return None;
    }
    let next = RootInterval { lo, hi };
    // Accept only a real contraction.
    if next.width_msb()? <= cur_w - 8 {
        Some(next)
    } else {
        None
    }
}

/// Ball containing the root, with radius at most about 2^-prec.
pub fn root_ball(f: &IntPoly, iv: &RootInterval, prec: u32) -> Ball {
    let refined = refine_root(f, iv, -(prec as i64) - 2);
    refined.to_ball(prec + 8)
}

#[cfg(test)]
pub mod sturm {
    //! Sturm-chain root counting, used in tests as an oracle independent of
    //! the Descartes isolation path.
    use super::*;

    fn sturm_chain(f: &IntPoly) -> Vec<IntPoly> {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.is_zero() {
                chain.pop();
                break;
            }
            let r = rational_rem(a, b);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    fn rational_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
        // Remainder of a by b over ℚ, cleared to a primitive integer poly
        // with the sign preserved.
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if da < db {
            return a.clone();
        }
        let e = (da - db + 1) as u32;
        let lc = b.leading();
        let scaled = a.mul_scalar(&lc.pow(e));
        let mut r = scaled;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let q = &r.leading() / &lc;
            let mut shift = vec![BigInt::zero(); dr - db];
            shift.push(q);
            r = r.sub(&b.mul(&IntPoly::new(shift)));
        }
        // Keep the sign consistent with the true rational remainder.
        let p = r.primitive_part();
        if lc.is_negative() && e % 2 == 1 {
            p.neg()
        } else {
            p
        }
    }

    fn variations_at(chain: &[IntPoly], x: &BigRational) -> usize {
        let mut vars = 0;
        let mut last = 0i32;
        for p in chain {
            let v = p.eval_rational(x);
            let s = if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            };
            if s != 0 {
                if last != 0 && s != last {
                    vars += 1;
                }
                last = s;
            }
        }
        vars
    }

    /// Number of distinct real roots of squarefree f in (a, b].
    pub fn count_roots_between(f: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
        let chain = sturm_chain(f);
        variations_at(&chain, a) - variations_at(&chain, b)
    }

    /// Total number of distinct real roots.
    pub fn count_real_roots(f: &IntPoly) -> usize {
        let bound = BigRational::from(BigInt::one() << (super::root_bound_exp(f) + 1));
        count_roots_between(f, &(-bound.clone()), &bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_isolates(f: &IntPoly, expected: &[f64]) {
        let ivs = isolate_real_roots(f).unwrap();
        assert_eq!(ivs.len(), expected.len(), "root count for {:?}", f);
        for (iv, &e) in ivs.iter().zip(expected) {
            let b = root_ball(f, iv, 64);
            let v = b.to_f64();
            assert!((v - e).abs() < 1e-9, "expected {} got {}", e, v);
        }
    }

    #[test]
    fn sqrt2() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        assert_isolates(&f, &[-std::f64::consts::SQRT_2, std::f64::consts::SQRT_2]);
    }

    #[test]
    fn no_real_roots() {
        let f = IntPoly::from_i64(&[1, 0, 1]); // x^2 + 1
        assert!(isolate_real_roots(&f).unwrap().is_empty());
    }

    #[test]
    fn totally_real_cubic() {
        // x^3 - 3x - 1: roots 2cos(pi/9), 2cos(7pi/9), 2cos(13pi/9)
        let f = IntPoly::from_i64(&[-1, -3, 0, 1]);
        let r1 = 2.0 * (std::f64::consts::PI / 9.0).cos();
        let r2 = 2.0 * (7.0 * std::f64::consts::PI / 9.0).cos();
        let r3 = 2.0 * (13.0 * std::f64::consts::PI / 9.0).cos();
        let mut roots = [r1, r2, r3];
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_isolates(&f, &roots);
    }

    #[test]
    fn exact_rational_roots() {
        // x(x-1)(x+2) = x^3 + x^2 - 2x
        let f = IntPoly::from_i64(&[0, -2, 1, 1]);
        assert_isolates(&f, &[-2.0, 0.0, 1.0]);
        let ivs = isolate_real_roots(&f).unwrap();
        assert!(ivs.iter().any(|iv| iv.is_exact() && iv.lo.is_zero()));
    }

    #[test]
    fn rejects_non_squarefree_and_zero() {
        let f = IntPoly::from_i64(&[1, 2, 1]); // (x+1)^2
        assert!(isolate_real_roots(&f).is_err());
        assert!(isolate_real_roots(&IntPoly::zero()).is_err());
    }

    #[test]
    fn refinement_narrows_and_contains() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let ivs = isolate_real_roots(&f).unwrap();
        let iv = &ivs[1];
        let fine = refine_root(&f, iv, -300);
        assert!(fine.width_msb().unwrap() <= -300);
        // sqrt(2) = 1.41421356237309504880168872420969807...
        let b = fine.to_ball(320);
        let approx = BigRational::new(
            "1414213562373095048801688724209698079".parse().unwrap(),
            BigInt::from(10u8).pow(36),
        );
        assert!((b.to_f64() - 1.4142135623730951).abs() < 1e-12);
        assert!(b.contains_rational(&approx) || b.sub(&Ball::from_rational(&approx, 320)).abs().to_f64() < 1e-36);
    }

    #[test]
    fn sturm_agrees_with_descartes() {
        let polys = [
            IntPoly::from_i64(&[-2, 0, 1]),
            IntPoly::from_i64(&[-1, -3, 0, 1]),
            IntPoly::from_i64(&[1, 0, 1]),
            IntPoly::from_i64(&[0, -2, 1, 1]),
            IntPoly::from_i64(&[-1, 9, 0, -6, 0, 1]),
        ];
        for f in &polys {
            if !f.is_squarefree() {
                continue;
            }
            let n = isolate_real_roots(f).unwrap().len();
            assert_eq!(n, sturm::count_real_roots(f), "poly {:?}", f);
        }
    }
}
