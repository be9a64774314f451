use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Exact dyadic rational `man * 2^exp`, the mantissa kept odd (or zero).
///
/// All arithmetic here is exact; rounding to a working precision happens in
/// [`super::Ball`], which also tracks the rounding error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::from(1), exp: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp = self.exp.saturating_add(tz as i64);
            }
        }
    }

    pub fn man(&self) -> &BigInt {
        &self.man
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    /// Sign as -1, 0, +1.
    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Mantissa bit length (0 for zero).
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the most significant bit: value lies in
    /// `[2^(msb_exp), 2^(msb_exp+1))` in absolute value. None for zero.
    pub fn msb_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp.saturating_add(self.man.bits() as i64 - 1))
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self.exp.saturating_add(other.exp),
        }
    }

    pub fn mul_pow2(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp.saturating_add(e) }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            _ => {
                // Same nonzero sign: compare magnitudes via msb first to
                // avoid a shift when exponents are far apart.
                let (sa, sb) = (self.msb_exp().unwrap(), other.msb_exp().unwrap());
                if sa != sb {
                    let ord = sa.cmp(&sb);
                    if self.signum() > 0 {
                        return ord;
                    } else {
                        return ord.reverse();
                    }
                }
                self.sub(other).signum().cmp(&0)
            }
        }
    }

    /// Round to `prec` significant bits (round to nearest, ties away from
    /// zero). Returns the rounded value and an upper bound for the absolute
    /// error as an exponent (`None` when exact): error ≤ 2^err_exp.
    pub fn round_prec(&self, prec: u32) -> (Dyadic, Option<i64>) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), None);
        }
        let r = (bits - prec as u64) as i64;
        let half = BigInt::from(1) << (r - 1) as u64;
        let rounded = if self.man.is_negative() {
            -((-&self.man + half) >> r as u64)
        } else {
            (&self.man + half) >> r as u64
        };
        let d = Dyadic::new(rounded, self.exp.saturating_add(r));
        // Nearest rounding: error at most half an ulp = 2^(exp + r - 1).
        (d, Some(self.exp.saturating_add(r - 1)))
    }

    /// Nearest integer (ties away from zero).
    pub fn to_bigint_nearest(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.man << self.exp as u64;
        }
        let k = (-self.exp) as u64;
        let half = BigInt::from(1) << (k - 1);
        if self.man.is_negative() {
            -((-&self.man + half) >> k)
        } else {
            (&self.man + half) >> k
        }
    }

    /// Approximate conversion for diagnostics and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        if bits <= 53 {
            let m = self.man.to_string().parse::<f64>().unwrap_or(f64::NAN);
            return m * (self.exp as f64).exp2();
        }
        let shift = bits - 53;
        let top: BigInt = &self.man >> shift;
        let m = top.to_string().parse::<f64>().unwrap_or(f64::NAN);
        m * ((self.exp as f64) + shift as f64).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(8), 0);
        assert_eq!(d.man(), &BigInt::from(1));
        assert_eq!(d.exp(), 3);
    }

    #[test]
    fn add_and_cmp() {
        let a = Dyadic::new(BigInt::from(3), -1); // 1.5
        let b = Dyadic::new(BigInt::from(1), -2); // 0.25
        let s = a.add(&b); // 1.75 = 7 * 2^-2
        assert_eq!(s, Dyadic::new(BigInt::from(7), -2));
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        assert_eq!(s.sub(&s).signum(), 0);
    }

    #[test]
    fn round_error_bound() {
        let d = Dyadic::new(BigInt::from(0b101101), 0); // 45
        let (r, err) = d.round_prec(3);
        // 101101 -> rounded to 3 bits: 101110? no: (45 + 4) >> 3 = 6, exp 3 -> 48
        assert_eq!(r, Dyadic::new(BigInt::from(48), 0));
        let err_exp = err.unwrap();
        // |45 - 48| = 3 <= 2^2
        assert!(err_exp >= 2);
    }
}
