use super::dyadic::Dyadic;
use num_bigint::BigInt;
use std::cmp::Ordering;

/// Non-negative magnitude with a 32-bit mantissa, `man * 2^exp`.
///
/// Used for error radii. Every operation rounds UP, so a `Mag` computed from
/// upper bounds stays an upper bound. Mantissa is zero or in `[2^31, 2^32)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mag {
    man: u64,
    exp: i64,
}

const MAN_BITS: u32 = 32;

impl Mag {
    pub fn zero() -> Self {
        Mag { man: 0, exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    /// Exactly 2^e.
    pub fn pow2(e: i64) -> Self {
        Mag { man: 1 << (MAN_BITS - 1), exp: e - (MAN_BITS as i64 - 1) }
    }

    fn from_u128_round_up(mut m: u128, mut exp: i64) -> Self {
        if m == 0 {
            return Mag::zero();
        }
        let bits = 128 - m.leading_zeros();
        if bits > MAN_BITS {
            let r = bits - MAN_BITS;
            let truncated = m & ((1u128 << r) - 1) != 0;
            m >>= r;
            if truncated {
                m += 1;
            }
            exp = exp.saturating_add(r as i64);
            // Rounding up may carry into bit 33.
            if m >> MAN_BITS != 0 {
                m >>= 1;
                exp = exp.saturating_add(1);
            }
        } else if bits < MAN_BITS {
            let l = MAN_BITS - bits;
            m <<= l;
            exp = exp.saturating_sub(l as i64);
        }
        Mag { man: m as u64, exp }
    }

    pub fn from_u64(v: u64) -> Self {
        Mag::from_u128_round_up(v as u128, 0)
    }

    /// Upper bound of |d|.
    pub fn from_dyadic_upper(d: &Dyadic) -> Self {
        if d.is_zero() {
            return Mag::zero();
        }
        let man = d.man().magnitude();
        let bits = man.bits() as u32;
        if bits <= 64 {
            let low: u64 = man.iter_u64_digits().next().unwrap_or(0);
            return Mag::from_u128_round_up(low as u128, d.exp());
        }
        let r = bits - 64;
        let top: num_bigint::BigUint = man >> r;
        let mut t: u64 = top.iter_u64_digits().next().unwrap_or(0);
        // Truncation below: bump one ulp to stay an upper bound.
        t = t.saturating_add(1);
        Mag::from_u128_round_up(t as u128, d.exp() + r as i64)
    }

    /// Exact dyadic value of this magnitude.
    pub fn to_dyadic(&self) -> Dyadic {
        Dyadic::new(BigInt::from(self.man), self.exp)
    }

    pub fn add(&self, other: &Mag) -> Mag {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = (hi.exp - lo.exp) as u64;
        if diff >= 64 {
            // The smaller term is below one ulp of the larger; bump one ulp.
            return Mag::from_u128_round_up(hi.man as u128 + 1, hi.exp);
        }
        let s = ((hi.man as u128) << diff) + lo.man as u128;
        Mag::from_u128_round_up(s, lo.exp)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        if self.is_zero() || other.is_zero() {
            return Mag::zero();
        }
        let p = self.man as u128 * other.man as u128;
        Mag::from_u128_round_up(p, self.exp.saturating_add(other.exp))
    }

    pub fn mul_pow2(&self, e: i64) -> Mag {
        if self.is_zero() {
            return Mag::zero();
        }
        Mag { man: self.man, exp: self.exp.saturating_add(e) }
    }

    pub fn max(&self, other: &Mag) -> Mag {
        if self.cmp_value(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_value(&self, other: &Mag) -> Ordering {
        if self.is_zero() || other.is_zero() {
            return (!self.is_zero() as u8).cmp(&(!other.is_zero() as u8));
        }
        let sa = self.exp + 63 - (self.man.leading_zeros() as i64);
        let sb = other.exp + 63 - (other.man.leading_zeros() as i64);
        if sa != sb {
            return sa.cmp(&sb);
        }
        // Same msb position: align (both mantissas are 32-bit normalized).
        let ea = self.exp.min(other.exp);
        let a = (self.man as u128) << (self.exp - ea) as u32;
        let b = (other.man as u128) << (other.exp - ea) as u32;
        a.cmp(&b)
    }

    /// Upper bound for 1/d, for exact dyadic d > 0.
    pub fn recip_upper(d: &Dyadic) -> Mag {
        assert!(d.signum() > 0, "recip_upper needs a positive value");
        let man = d.man().magnitude();
        let bits = man.bits() as u32;
        // Lower bound of d: top 32 mantissa bits truncated.
        let (low32, e) = if bits <= 32 {
            let m: u64 = man.iter_u64_digits().next().unwrap_or(0);
            (m, d.exp())
        } else {
            let r = bits - 32;
            let top: num_bigint::BigUint = man >> r;
            (top.iter_u64_digits().next().unwrap_or(0), d.exp() + r as i64)
        };
        // 1/d <= 1/(low32 * 2^e) = ceil(2^96/low32) * 2^(-96 - e).
        let q = ((1u128 << 96) / low32 as u128) + 1;
        Mag::from_u128_round_up(q, -96 - e)
    }

    /// Upper bound for self^k.
    pub fn pow(&self, k: u32) -> Mag {
        let mut acc = Mag::pow2(0);
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

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.man as f64 * (self.exp as f64).exp2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_is_upper_bound() {
        let a = Mag::pow2(-10);
        let b = Mag::pow2(-90);
        let s = a.add(&b);
        // s >= 2^-10 + 2^-90, and not absurdly larger
        assert!(s.cmp_value(&Mag::pow2(-10)) == Ordering::Greater);
        assert!(s.cmp_value(&Mag::pow2(-9)) == Ordering::Less);
    }

    #[test]
    fn recip_bound() {
        let d = Dyadic::new(num_bigint::BigInt::from(3), 0);
        let r = Mag::recip_upper(&d);
        // 1/3 <= r and r close to 1/3
        assert!(r.to_f64() >= 1.0 / 3.0);
        assert!(r.to_f64() < 1.0 / 3.0 + 1e-8);
    }

    #[test]
    fn from_dyadic_rounds_up() {
        // 2^40 + 1 needs rounding at 32-bit mantissa
        let d = Dyadic::new((BigInt::from(1) << 40) + 1, 0);
        let m = Mag::from_dyadic_upper(&d);
        assert!(m.to_dyadic().cmp_value(&d) != Ordering::Less);
    }
}
