use super::intmat::IntMatrix;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact LLL reduction over ℤ with rational Gram-Schmidt data.
///
/// Returns `(reduced, transform)` with `reduced = transform * basis` and
/// `transform` unimodular. Rows of `basis` must be linearly independent.
pub fn lll_reduce(basis: &IntMatrix, delta: &BigRational) -> Result<(IntMatrix, IntMatrix)> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta > BigRational::one() {
        return Err(Error::input("LLL delta must lie in (1/4, 1]"));
    }
    let n = basis.rows();
    let mut b = basis.clone();
    let mut u = IntMatrix::identity(n);
    if n == 0 {
        return Ok((b, u));
    }
    let mut gso = Gso::compute(&b)?;
    let mut k = 1usize;
    while k < n {
        size_reduce(&mut b, &mut u, &mut gso, k, k - 1);
        let lhs = &gso.norm_sq[k];
        let rhs = (delta - &gso.mu[k][k - 1] * &gso.mu[k][k - 1]) * &gso.norm_sq[k - 1];
        if *lhs >= rhs {
            for j in (0..k.saturating_sub(1)).rev() {
                size_reduce(&mut b, &mut u, &mut gso, k, j);
            }
            k += 1;
        } else {
            swap_step(&mut b, &mut u, &mut gso, k);
            k = k.max(2) - 1;
        }
    }
    debug_assert!(u.is_unimodular());
    Ok((b, u))
}

/// The classical delta = 3/4.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

struct Gso {
    /// mu[i][j] for j < i
    mu: Vec<Vec<BigRational>>,
    /// squared norms |b*_i|^2
    norm_sq: Vec<BigRational>,
}

impl Gso {
    fn compute(b: &IntMatrix) -> Result<Gso> {
        let n = b.rows();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut norm_sq = vec![BigRational::zero(); n];
        // b*_i = b_i - sum_{j<i} mu_ij b*_j; inner products via the exact
        // recursion <b_i, b*_j> = <b_i, b_j> - sum_{t<j} mu_jt <b_i, b*_t>.
        let mut proj = vec![vec![BigRational::zero(); n]; n]; // <b_i, b*_j>
        for i in 0..n {
            for j in 0..=i {
                let mut acc = BigRational::from(dot(b.row(i), b.row(j)));
                for t in 0..j {
                    acc -= &mu[j][t] * &proj[i][t];
                }
                proj[i][j] = acc;
                if j < i {
                    if norm_sq[j].is_zero() {
                        return Err(Error::input("LLL requires independent rows"));
                    }
                    mu[i][j] = &proj[i][j] / &norm_sq[j];
                }
            }
            norm_sq[i] = proj[i][i].clone();
            if norm_sq[i].is_zero() {
                return Err(Error::input("LLL requires independent rows"));
            }
        }
        Ok(Gso { mu, norm_sq })
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rounded(q: &BigRational) -> BigInt {
    // Round to nearest, ties away from zero. BigRational keeps denom > 0.
    let (quot, rem) = num_integer::Integer::div_rem(q.numer(), q.denom());
    if rem.abs() * 2 >= *q.denom() {
        if q.numer().is_negative() {
            quot - 1
        } else {
            quot + 1
        }
    } else {
        quot
    }
}

fn size_reduce(b: &mut IntMatrix, u: &mut IntMatrix, gso: &mut Gso, k: usize, j: usize) {
    let r = rounded(&gso.mu[k][j]);
    if r.is_zero() {
        return;
    }
    for c in 0..b.cols() {
        let t = &b[(j, c)] * &r;
        b[(k, c)] -= t;
    }
    for c in 0..u.cols() {
        let t = &u[(j, c)] * &r;
        u[(k, c)] -= t;
    }
    let rq = BigRational::from(r);
    for t in 0..j {
        let d = &rq * &gso.mu[j][t];
        gso.mu[k][t] -= d;
    }
    gso.mu[k][j] -= rq;
}

/// Swap rows k-1 and k and update the GSO data (Cohen, Alg. 2.6.3).
fn swap_step(b: &mut IntMatrix, u: &mut IntMatrix, gso: &mut Gso, k: usize) {
    let n = b.rows();
    for c in 0..b.cols() {
        let x = b[(k - 1, c)].clone();
        b[(k - 1, c)] = b[(k, c)].clone();
        b[(k, c)] = x;
    }
    for c in 0..u.cols() {
        let x = u[(k - 1, c)].clone();
        u[(k - 1, c)] = u[(k, c)].clone();
        u[(k, c)] = x;
    }
    for t in 0..k - 1 {
        let x = gso.mu[k - 1][t].clone();
        gso.mu[k - 1][t] = gso.mu[k][t].clone();
        gso.mu[k][t] = x;
    }
    let mu = gso.mu[k][k - 1].clone();
    let bk = gso.norm_sq[k].clone();
    let bk1 = gso.norm_sq[k - 1].clone();
    let b_new = &bk + &mu * &mu * &bk1;
    // Independent rows keep b_new > 0.
    gso.mu[k][k - 1] = &mu * &bk1 / &b_new;
    gso.norm_sq[k] = &bk1 * &bk / &b_new;
    gso.norm_sq[k - 1] = b_new;
    for i in k + 1..n {
        let t = gso.mu[i][k].clone();
        gso.mu[i][k] = &gso.mu[i][k - 1] - &mu * &t;
        gso.mu[i][k - 1] = &t + &gso.mu[k][k - 1] * &gso.mu[i][k];
    }
}

/// Check the size-reduction and Lovász conditions from scratch (test use).
pub fn is_lll_reduced(b: &IntMatrix, delta: &BigRational) -> bool {
    let gso = match Gso::compute(b) {
        Ok(g) => g,
        Err(_) => return false,
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..b.rows() {
        for j in 0..i {
            if gso.mu[i][j].abs() > half {
                return false;
            }
        }
    }
    for k in 1..b.rows() {
        let lhs = &gso.norm_sq[k] + &gso.mu[k][k - 1] * &gso.mu[k][k - 1] * &gso.norm_sq[k - 1];
        if lhs < delta * &gso.norm_sq[k - 1] {
            return false;
        }
    }
    true
}

/// Exact squared GSO norms of the rows, in position order.
pub fn gso_norms_sq(b: &IntMatrix) -> Result<Vec<BigRational>> {
    Ok(Gso::compute(b)?.norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_fixed_point() {
        let id = IntMatrix::identity(3);
        let (r, t) = lll_reduce(&id, &default_delta()).unwrap();
        assert_eq!(r, id);
        assert_eq!(t, id);
    }

    #[test]
    fn rejects_dependent_rows() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![1, 0]]);
        assert!(lll_reduce(&m, &default_delta()).is_err());
    }

    #[test]
    fn rejects_bad_delta() {
        let m = IntMatrix::identity(2);
        assert!(lll_reduce(&m, &BigRational::new(1.into(), 5.into())).is_err());
    }

    #[test]
    fn reduces_skewed_basis() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1_000_000], vec![0, 1]]);
        let (r, t) = lll_reduce(&m, &default_delta()).unwrap();
        assert_eq!(t.mul(&m), r);
        assert!(t.is_unimodular());
        assert!(is_lll_reduced(&r, &default_delta()));
        assert!(r.max_abs() <= BigInt::from(1_000_000));
        // Determinant preserved up to sign.
        assert_eq!(r.det().abs(), m.det().abs());
        // 2D shortest vector brute force: lattice contains (1,0) shifted...
        // rows (1, 10^6), (0,1): shortest vector is (1, 0).
        let shortest: BigInt = r
            .row_iter()
            .map(|row| dot(row, row))
            .min()
            .unwrap();
        assert_eq!(shortest, BigInt::one());
    }

    #[test]
    fn lagrange_agreement_2d() {
        // Brute-force shortest vector in a 2D lattice vs first LLL vector
        // quality bound |b1|^2 <= 2 * lambda1^2 (delta = 3/4).
        let cases = [
            [vec![17, 4], vec![9, 23]],
            [vec![5, 0], vec![3, 1]],
            [vec![101, 57], vec![44, 25]],
        ];
        for rows in cases {
            let m = IntMatrix::from_i64_rows(&rows);
            let (r, _) = lll_reduce(&m, &default_delta()).unwrap();
            let first = dot(r.row(0), r.row(0));
            let mut min = None::<BigInt>;
            for a in -60i64..=60 {
                for b in -60i64..=60 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let v: Vec<BigInt> = (0..2)
                        .map(|c| {
                            BigInt::from(a) * &m[(0, c)] + BigInt::from(b) * &m[(1, c)]
                        })
                        .collect();
                    let nn = dot(&v, &v);
                    min = Some(match min {
                        None => nn,
                        Some(cur) => cur.min(nn),
                    });
                }
            }
            let lambda = min.unwrap();
            assert!(first <= BigInt::from(2) * lambda);
        }
    }
}
