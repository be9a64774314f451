use super::ball::Ball;
use super::dyadic::Dyadic;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with arbitrary-precision integer coefficients, ascending order,
/// no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn mul_scalar(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact division assuming divisibility in ℤ[x]; panics otherwise
    /// (internal use on known factors).
    pub fn div_exact(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero());
        let mut rem = self.coeffs.clone();
        let dd = d.degree().unwrap();
        let n = match self.degree() {
            None => return IntPoly::zero(),
            Some(n) => n,
        };
        assert!(n >= dd);
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] / d.leading();
            assert!((&c * d.leading()) == rem[i + dd], "not exactly divisible");
            q[i] = c.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem[i + j] -= t;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
        IntPoly::new(q)
    }

    /// Exact evaluation at an integer.
    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact evaluation at a rational.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Exact sign of f(m * 2^-k): evaluates 2^(k*deg) * f(m/2^k) in ℤ.
    pub fn sign_at_dyadic(&self, m: &BigInt, k: u64) -> i32 {
        let n = match self.degree() {
            None => return 0,
            Some(n) => n,
        };
        let mut acc = self.coeffs[n].clone();
        for i in (0..n).rev() {
            acc = acc * m + (&self.coeffs[i] << (k * (n - i) as u64));
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn sign_at(&self, d: &Dyadic) -> i32 {
        if d.exp() >= 0 {
            let m = d.man() << d.exp() as u64;
            self.sign_at_dyadic(&m, 0)
        } else {
            self.sign_at_dyadic(d.man(), (-d.exp()) as u64)
        }
    }

    /// Enclosure of f(x) over a ball, by Horner in ball arithmetic.
    pub fn eval_ball(&self, x: &Ball, prec: u32) -> Ball {
        let mut acc = Ball::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&Ball::from_bigint(c, prec));
        }
        acc.round_to(prec)
    }

    /// Composition f(c * x) for dyadic scale c = 2^e (e >= 0), cleared to
    /// integer coefficients: returns f(2^e x).
    pub fn scale_pow2(&self, e: u64) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (e * i as u64))
                .collect(),
        )
    }

    /// 2^(e*deg) * f(x / 2^e), integer coefficients.
    pub fn unscale_pow2(&self, e: u64) -> IntPoly {
        let n = match self.degree() {
            None => return IntPoly::zero(),
            Some(n) => n,
        };
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (e * (n - i) as u64))
                .collect(),
        )
    }

    /// Taylor shift: f(x + 1).
    pub fn shift_one(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        IntPoly::new(c)
    }

    /// x^deg * f(1/x) (coefficient reversal).
    pub fn reverse(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// f(-x).
    pub fn negate_var(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Number of sign variations in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut vars = 0;
        let mut last = 0i32;
        for c in &self.coeffs {
            let s = match c.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
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

    /// Primitive gcd in ℤ[x] via the subresultant pseudo-remainder sequence
    /// (content handled separately). Degrees here are small.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        // Normalize sign of the gcd.
        if a.leading().is_negative() {
            a = a.neg();
        }
        a
    }

    /// Pseudo-remainder: lc(b)^(da-db+1) * a mod b.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let da = self.degree().unwrap();
        let db = b.degree().unwrap();
        assert!(da >= db);
        let mut r = self.mul_scalar(&b.leading().pow((da - db + 1) as u32));
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let q = &r.leading() / b.leading();
            let mut shift = vec![BigInt::zero(); dr - db];
            shift.push(q);
            r = r.sub(&b.mul(&IntPoly::new(shift)));
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.degree() == Some(0) {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Exact resultant Res(f, g) via the subresultant algorithm, used for
    /// discriminants. Small degrees only.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        resultant_rec(self.clone(), other.clone())
    }

    /// disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f).
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree().expect("nonzero polynomial");
        if d == 0 {
            return BigInt::one();
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        sign * res / self.leading()
    }
}

fn resultant_rec(a: IntPoly, b: IntPoly) -> BigInt {
    // Textbook recursive resultant over ℚ cleared to ℤ; fine for degree <= 6.
    let da = match a.degree() {
        None => return BigInt::zero(),
        Some(d) => d,
    };
    let db = match b.degree() {
        None => return BigInt::zero(),
        Some(d) => d,
    };
    if db == 0 {
        return b.coeff(0).pow(da as u32);
    }
    // Res(a,b) = (-1)^(da*db) Res(b,a)
    // Res(a,b) = lc(b)^(da - dr) * (-1)^(da*db) * Res(b, r) where r = a mod b over ℚ.
    // Use pseudo-remainder bookkeeping: lc(b)^(da-db+1) a = q b + R.
    let e = (da - db + 1) as u32;
    let r = a.pseudo_rem(&b);
    let sign = if (da * db) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    match r.degree() {
        None => BigInt::zero(),
        Some(dr) => {
            // Res(a, b) = sign * lc(b)^(da - dr) * Res(b, r) / lc(b)^(e*db)
            let num = sign * b.leading().pow((da - dr) as u32) * resultant_rec(b.clone(), r);
            let den = b.leading().pow(e * db as u32);
            &num / &den
        }
    }
}
