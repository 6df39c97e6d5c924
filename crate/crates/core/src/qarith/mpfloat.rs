//! Arbitrary-precision binary floating point and complex numbers, used for
//! evaluation at roots of unity.
//!
//! A value is `mantissa · 2^exp` with a big-integer mantissa; every operation
//! takes the working precision in bits and rounds the result to nearest.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `mantissa · 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpFloat {
    m: BigInt,
    e: i64,
}

fn shr_round(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let neg = m.is_negative();
    let a = m.magnitude();
    let half = num_bigint::BigUint::one() << (s - 1);
    let r = (a + half) >> s;
    let r = BigInt::from_biguint(Sign::Plus, r);
    if neg {
        -r
    } else {
        r
    }
}

impl MpFloat {
    pub fn zero() -> Self {
        MpFloat { m: BigInt::zero(), e: 0 }
    }

    pub fn from_i64(x: i64) -> Self {
        MpFloat { m: BigInt::from(x), e: 0 }
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Self {
        MpFloat { m: x.clone(), e: 0 }.round(prec)
    }

    /// Exact conversion from a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        MpFloat {
            m: BigInt::from(mant) * sign,
            e,
        }
    }

    /// `x · 2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        MpFloat {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Rounds the mantissa to at most `prec` bits.
    pub fn round(self, prec: u32) -> Self {
        let b = self.m.bits();
        if b > prec as u64 {
            let s = b - prec as u64;
            MpFloat {
                m: shr_round(&self.m, s),
                e: self.e + s as i64,
            }
        } else if self.m.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    /// Binary order of magnitude: `|x| ∈ [2^{top-1}, 2^top)`.
    fn top(&self) -> i64 {
        self.e + self.m.bits() as i64
    }

    fn add_impl(&self, o: &MpFloat, negate: bool, prec: u32) -> MpFloat {
        let om = if negate { -&o.m } else { o.m.clone() };
        if o.m.is_zero() {
            return self.clone().round(prec);
        }
        if self.m.is_zero() {
            return MpFloat { m: om, e: o.e }.round(prec);
        }
        let guard = prec as i64 + 4;
        if self.top() - o.top() > guard {
            return self.clone().round(prec);
        }
        if o.top() - self.top() > guard {
            return MpFloat { m: om, e: o.e }.round(prec);
        }
        let (m, e) = if self.e >= o.e {
            ((&self.m << (self.e - o.e) as usize) + om, o.e)
        } else {
            (&self.m + (om << (o.e - self.e) as usize), self.e)
        };
        MpFloat { m, e }.round(prec)
    }

    pub fn add(&self, o: &MpFloat, prec: u32) -> MpFloat {
        self.add_impl(o, false, prec)
    }

    pub fn sub(&self, o: &MpFloat, prec: u32) -> MpFloat {
        self.add_impl(o, true, prec)
    }

    pub fn mul(&self, o: &MpFloat, prec: u32) -> MpFloat {
        MpFloat {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
        .round(prec)
    }

    pub fn neg(&self) -> MpFloat {
        MpFloat {
            m: -&self.m,
            e: self.e,
        }
    }

    /// Quotient; panics on division by zero.
    pub fn div(&self, o: &MpFloat, prec: u32) -> MpFloat {
        assert!(!o.m.is_zero(), "MpFloat division by zero");
        if self.m.is_zero() {
            return Self::zero();
        }
        let shift = prec as i64 + 2 + o.m.bits() as i64 - self.m.bits() as i64;
        let shift = shift.max(0);
        let num = &self.m << shift as usize;
        let q = num.div_floor(&o.m);
        MpFloat {
            m: q,
            e: self.e - o.e - shift,
        }
        .round(prec)
    }

    /// Nearest `f64` (may overflow to ±∞ for huge values).
    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let b = self.m.bits() as i64;
        let keep = b.min(60);
        let top = shr_round(&self.m, (b - keep) as u64).to_f64().unwrap();
        top * 2f64.powf((self.e + b - keep) as f64)
    }

    /// `ln|x|` as an `f64` (valid far outside the `f64` range); `-∞` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.m.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = self.m.bits() as i64;
        let keep = b.min(60);
        let top = shr_round(&self.m, (b - keep) as u64).abs().to_f64().unwrap();
        // |x| = frac · 2^exp with frac in [1/√2, √2), so that values near 1
        // do not suffer cancellation.
        let mut frac = top / 2f64.powi(keep as i32);
        let mut exp = self.e + b;
        if frac < std::f64::consts::FRAC_1_SQRT_2 {
            frac *= 2.0;
            exp -= 1;
        }
        frac.ln() + (exp as f64) * std::f64::consts::LN_2
    }

    /// Square root (nonnegative input).
    pub fn sqrt(&self, prec: u32) -> MpFloat {
        assert!(!self.m.is_negative(), "square root of a negative number");
        if self.m.is_zero() {
            return Self::zero();
        }
        // Scale so that the integer square root has about prec+2 bits.
        let mut shift = (2 * (prec as i64 + 2) - self.m.bits() as i64).max(0);
        if (self.e - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = (&self.m << shift as usize).sqrt();
        MpFloat {
            m,
            e: (self.e - shift) / 2,
        }
        .round(prec)
    }
}

/// Fixed-point `π·2^bits` (floor), by Machin's formula.
fn pi_fixed(bits: u64) -> BigInt {
    let one = BigInt::one() << (bits + 16);
    fn atan_inv(x: u64, one: &BigInt) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = one / &x;
        let mut sum = term.clone();
        let mut k = 1u64;
        loop {
            term = &term / &x2;
            if term.is_zero() {
                break;
            }
            let t = &term / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= t;
            } else {
                sum += t;
            }
            k += 1;
        }
        sum
    }
    let pi = atan_inv(5, &one) * 16 - atan_inv(239, &one) * 4;
    pi >> 16
}

/// `π` to `prec` bits.
pub fn mp_pi(prec: u32) -> MpFloat {
    let bits = prec as u64 + 8;
    MpFloat {
        m: pi_fixed(bits),
        e: -(bits as i64),
    }
    .round(prec)
}

/// Complex number with [`MpFloat`] parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpComplex {
    pub re: MpFloat,
    pub im: MpFloat,
}

impl MpComplex {
    pub fn zero() -> Self {
        MpComplex {
            re: MpFloat::zero(),
            im: MpFloat::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_real(MpFloat::from_i64(1))
    }

    pub fn from_real(re: MpFloat) -> Self {
        MpComplex {
            re,
            im: MpFloat::zero(),
        }
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Self {
        Self::from_real(MpFloat::from_bigint(x, prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &MpComplex, prec: u32) -> MpComplex {
        MpComplex {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &MpComplex, prec: u32) -> MpComplex {
        MpComplex {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn neg(&self) -> MpComplex {
        MpComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &MpComplex, prec: u32) -> MpComplex {
        let p = prec + 8;
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), prec);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), prec);
        MpComplex { re, im }
    }

    /// Product with an integer.
    pub fn mul_bigint(&self, c: &BigInt, prec: u32) -> MpComplex {
        let f = MpFloat::from_bigint(c, prec + 8);
        MpComplex {
            re: self.re.mul(&f, prec),
            im: self.im.mul(&f, prec),
        }
    }

    pub fn scale(&self, f: &MpFloat, prec: u32) -> MpComplex {
        MpComplex {
            re: self.re.mul(f, prec),
            im: self.im.mul(f, prec),
        }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self, prec: u32) -> MpFloat {
        let p = prec + 8;
        self.re.mul(&self.re, p).add(&self.im.mul(&self.im, p), prec)
    }

    pub fn div(&self, o: &MpComplex, prec: u32) -> MpComplex {
        let p = prec + 16;
        let d = o.norm_sqr(p);
        let conj = MpComplex {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let n = self.mul(&conj, p);
        MpComplex {
            re: n.re.div(&d, prec),
            im: n.im.div(&d, prec),
        }
    }

    /// `z^k` for `k ≥ 0` by repeated squaring.
    pub fn pow(&self, mut k: u64, prec: u32) -> MpComplex {
        let p = prec + 16;
        let mut base = self.clone();
        let mut acc = MpComplex::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            k >>= 1;
        }
        MpComplex {
            re: acc.re.round(prec),
            im: acc.im.round(prec),
        }
    }

    /// `ln|z|` as an `f64`.
    pub fn ln_abs(&self) -> f64 {
        let n = self.norm_sqr(64);
        0.5 * n.ln_abs()
    }

    /// `|z|` as an `f64` (may overflow).
    pub fn abs_f64(&self) -> f64 {
        self.ln_abs().exp()
    }

    /// `(re, im)` rounded to `f64`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// `exp(2πi·k/n)` to `prec` bits.
pub fn root_of_unity(k: i64, n: u64, prec: u32) -> MpComplex {
    assert!(n > 0);
    let k = k.rem_euclid(n as i64) as u64;
    // Reduce to an angle in [0, π/4] via octant symmetries for fast series convergence.
    let bits = prec as u64 + 32;
    let pi = pi_fixed(bits);
    let theta = (&pi * BigInt::from(2 * k)) / BigInt::from(n); // fixed point, in [0, 2π)
    let quarter = &pi >> 1usize; // π/2
    // theta = j·(π/2) + r with 0 ≤ r < π/2
    let (j, r) = theta.div_rem(&quarter);
    let j = j.to_u64().unwrap() % 4;
    let one = BigInt::one() << bits;
    // Taylor series for cos r and sin r (r < π/2 < 2).
    let mut cos = one.clone();
    let mut sin = r.clone();
    let mut term = r.clone();
    let mut i = 1u64;
    loop {
        // term_{i+1} = term_i · r / (i+1)
        term = (&term * &r >> bits as usize) / BigInt::from(i + 1);
        if term.is_zero() {
            break;
        }
        let idx = i + 1;
        // idx even → cos contribution, odd → sin contribution.
        let sign_neg = (idx / 2) % 2 == 1;
        if idx % 2 == 0 {
            if sign_neg {
                cos -= &term;
            } else {
                cos += &term;
            }
        } else if sign_neg {
            sin -= &term;
        } else {
            sin += &term;
        }
        i += 1;
    }
    let (c, s) = match j {
        0 => (cos, sin),
        1 => (-sin, cos),
        2 => (-cos, -sin),
        _ => (sin, -cos),
    };
    MpComplex {
        re: MpFloat { m: c, e: -(bits as i64) }.round(prec),
        im: MpFloat { m: s, e: -(bits as i64) }.round(prec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_basic_ops() {
        let p = mp_pi(200);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let a = MpFloat::from_f64(1.5);
        let b = MpFloat::from_f64(-0.25);
        assert_eq!(a.add(&b, 100).to_f64(), 1.25);
        assert_eq!(a.mul(&b, 100).to_f64(), -0.375);
        assert!((a.div(&MpFloat::from_i64(3), 100).to_f64() - 0.5).abs() < 1e-16);
        let s = MpFloat::from_i64(2).sqrt(120);
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let big = MpFloat::from_i64(1).mul_pow2(5000);
        assert!((big.ln_abs() - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn roots_of_unity() {
        for &(k, n) in &[(1i64, 4u64), (1, 3), (5, 12), (7, 100), (-1, 8), (999, 1000)] {
            let z = root_of_unity(k, n, 150);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let (re, im) = z.to_f64_pair();
            assert!((re - ang.cos()).abs() < 1e-14, "{k}/{n}");
            assert!((im - ang.sin()).abs() < 1e-14, "{k}/{n}");
            // z^n = 1 to high precision
            let w = z.pow(n, 150);
            let d = w.sub(&MpComplex::one(), 150);
            assert!(d.ln_abs() < -120.0 * std::f64::consts::LN_2);
        }
    }

    #[test]
    fn complex_division() {
        let z = root_of_unity(1, 7, 120);
        let w = MpComplex::one().div(&z, 120);
        let prod = w.mul(&z, 120);
        let d = prod.sub(&MpComplex::one(), 120);
        assert!(d.ln_abs() < -110.0 * std::f64::consts::LN_2);
    }
}
