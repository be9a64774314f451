use super::ball::Ball;
use crate::{Error, Result};
use std::cmp::Ordering;

/// Certified inverse of a square ball matrix by Gauss-Jordan elimination
/// with the best certified pivot. Fails if some pivot cannot be certified
/// nonzero at the input precision (caller escalates).
pub fn ball_invert(m: &[Vec<Ball>]) -> Result<Vec<Vec<Ball>>> {
    let n = m.len();
    let prec = m
        .iter()
        .flat_map(|r| r.iter().map(|b| b.prec()))
        .max()
        .unwrap_or(super::ball::DEFAULT_PREC);
    let mut a: Vec<Vec<Ball>> = m.to_vec();
    let mut inv: Vec<Vec<Ball>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Ball::one(prec) } else { Ball::zero(prec) })
                .collect()
        })
        .collect();
    for col in 0..n {
        let mut best: Option<(usize, super::dyadic::Dyadic)> = None;
        for (r, row) in a.iter().enumerate().skip(col) {
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
        let Some((piv, _)) = best else {
            return Err(Error::PrecisionExhausted {
                prec_bits: prec,
                context: "matrix pivot not certifiably nonzero".into(),
            });
        };
        a.swap(col, piv);
        inv.swap(col, piv);
        let pivot = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].div(&pivot)?;
            inv[col][j] = inv[col][j].div(&pivot)?;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            if f.mid().is_zero() && f.rad().is_zero() {
                continue;
            }
            for j in 0..n {
                let t = a[col][j].mul(&f);
                a[r][j] = a[r][j].sub(&t);
                let t = inv[col][j].mul(&f);
                inv[r][j] = inv[r][j].sub(&t);
            }
        }
    }
    Ok(inv)
}

pub fn ball_mat_mul(a: &[Vec<Ball>], b: &[Vec<Ball>]) -> Vec<Vec<Ball>> {
    let n = a.len();
    let k = b.len();
    let m = if k > 0 { b[0].len() } else { 0 };
    let prec = a
        .iter()
        .chain(b.iter())
        .flat_map(|r| r.iter().map(|x| x.prec()))
        .max()
        .unwrap_or(super::ball::DEFAULT_PREC);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Ball::zero(prec);
                    for t in 0..k {
                        acc = acc.add(&a[i][t].mul(&b[t][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Dot product of ball vectors.
pub fn ball_dot(a: &[Ball], b: &[Ball]) -> Ball {
    assert_eq!(a.len(), b.len());
    let prec = a
        .iter()
        .chain(b.iter())
        .map(|x| x.prec())
        .max()
        .unwrap_or(super::ball::DEFAULT_PREC);
    let mut acc = Ball::zero(prec);
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> Ball {
        Ball::from_rational(&BigRational::new(n.into(), d.into()), 128)
    }

    #[test]
    fn invert_small() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let inv = ball_invert(&m).unwrap();
        let prod = ball_mat_mul(&m, &inv);
        assert!(prod[0][0].contains_rational(&BigRational::from_integer(1.into())));
        assert!(prod[0][1].contains_rational(&BigRational::from_integer(0.into())));
        assert!(prod[1][0].contains_rational(&BigRational::from_integer(0.into())));
        assert!(prod[1][1].contains_rational(&BigRational::from_integer(1.into())));
    }

    #[test]
    fn invert_singular_fails() {
        let m = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(ball_invert(&m).is_err());
    }
}
