//! Word-sized prime-field arithmetic (Montgomery form) and evaluation contexts.

use crate::error::{QError, QResult};

/// Arithmetic modulo an odd prime `p < 2^63`.
///
/// Values handed to [`Fp::add`], [`Fp::sub`], [`Fp::neg`] may be in either
/// standard or Montgomery representation (the operations agree); the
/// `mont_*` functions operate on Montgomery representatives, while
/// [`Fp::mul`], [`Fp::pow`] and [`Fp::inv`] take and return standard residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
    /// −p^{-1} mod 2^64
    ninv: u64,
    /// 2^128 mod p
    r2: u64,
}

impl Fp {
    /// Builds the field for an odd modulus `3 ≤ p < 2^63` (primality is not checked here).
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p > 2 && p < (1u64 << 63), "modulus must be odd and below 2^63");
        // Newton iteration for p^{-1} mod 2^64.
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let ninv = inv.wrapping_neg();
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Fp { p, ninv, r2 }
    }

    /// The modulus.
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Montgomery product `a·b·2^{-64}`.
    #[inline]
    pub fn mont_mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Standard residue → Montgomery representative.
    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mont_mul(a % self.p, self.r2)
    }

    /// Montgomery representative → standard residue.
    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.mont_mul(a, 1)
    }

    /// Montgomery representative of 1.
    #[inline]
    pub fn mont_one(&self) -> u64 {
        self.to_mont(1)
    }

    /// Reduces a signed integer to a standard residue.
    pub fn from_i64(&self, a: i64) -> u64 {
        let r = a.rem_euclid(self.p as i64) as u64;
        r
    }

    /// Reduces an unsigned 128-bit integer.
    pub fn from_u128(&self, a: u128) -> u64 {
        (a % self.p as u128) as u64
    }

    /// Product of standard residues.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// `a^e` for standard residues.
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = self.to_mont(a);
        let mut acc = self.mont_one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mont_mul(acc, base);
            }
            base = self.mont_mul(base, base);
            e >>= 1;
        }
        self.from_mont(acc)
    }

    /// `a^e` on Montgomery representatives.
    pub fn mont_pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.mont_one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mont_mul(acc, base);
            }
            base = self.mont_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a standard residue; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Inverse of a Montgomery representative; `None` for zero.
    pub fn mont_inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.mont_pow(a, self.p - 2))
        }
    }

    /// In-place inversion of many Montgomery representatives (all nonzero).
    pub fn mont_batch_inv(&self, xs: &mut [u64]) -> QResult<()> {
        if xs.is_empty() {
            return Ok(());
        }
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = self.mont_one();
        for &x in xs.iter() {
            if x == 0 {
                return Err(QError::Degenerate("zero in batch inversion".into()));
            }
            prefix.push(acc);
            acc = self.mont_mul(acc, x);
        }
        let mut inv = self.mont_inv(acc).expect("nonzero product");
        for i in (0..xs.len()).rev() {
            let x = xs[i];
            xs[i] = self.mont_mul(inv, prefix[i]);
            inv = self.mont_mul(inv, x);
        }
        Ok(())
    }

    /// Square root of a standard residue by Tonelli–Shanks.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.pow(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Some `x` with `x^8 ≡ a`, if one exists.
    pub fn eighth_root(&self, a: u64) -> Option<u64> {
        fn rec(f: &Fp, a: u64, depth: u32) -> Option<u64> {
            if depth == 0 {
                return Some(a);
            }
            let r = f.sqrt(a)?;
            rec(f, r, depth - 1).or_else(|| rec(f, f.neg(r), depth - 1))
        }
        let x = rec(self, a % self.p, 3)?;
        debug_assert_eq!(self.pow(x, 8), a % self.p);
        Some(x)
    }
}

/// Deterministic Miller–Rabin primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^62, in decreasing order.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// An evaluation context: a word-sized prime `m`, the point `q0`, and a chosen
/// eighth root `t0` of `q0` (the internal variable `t = q^{1/8}` maps to `t0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModContext {
    fp: Fp,
    q0: u64,
    t0: Option<u64>,
}

impl ModContext {
    /// Context with `q0` given; an eighth root `t0` is searched and recorded
    /// when it exists (values with fractional q-exponents need it).
    pub fn new(m: u64, q0: u64) -> QResult<Self> {
        Self::check_modulus(m)?;
        let fp = Fp::new(m);
        let q0 = q0 % m;
        if q0 == 0 {
            return Err(QError::InvalidArgument("q0 must be a unit modulo m".into()));
        }
        let t0 = fp.eighth_root(q0);
        Ok(ModContext { fp, q0, t0 })
    }

    /// Context defined by the eighth root `t0` (so `q0 = t0^8`).
    pub fn from_t0(m: u64, t0: u64) -> QResult<Self> {
        Self::check_modulus(m)?;
        let fp = Fp::new(m);
        let t0 = t0 % m;
        if t0 == 0 {
            return Err(QError::InvalidArgument("t0 must be a unit modulo m".into()));
        }
        Ok(ModContext {
            fp,
            q0: fp.pow(t0, 8),
            t0: Some(t0),
        })
    }

    fn check_modulus(m: u64) -> QResult<()> {
        if m < 3 || m >= (1u64 << 63) || !is_prime_u64(m) {
            return Err(QError::InvalidArgument(format!(
                "modulus {m} must be an odd prime below 2^63"
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.fp.modulus()
    }
    #[inline]
    pub fn q0(&self) -> u64 {
        self.q0
    }
    /// The eighth root of `q0`, if one exists.
    #[inline]
    pub fn t0(&self) -> Option<u64> {
        self.t0
    }

    /// The eighth root of `q0`, or a degeneracy error asking for a resample.
    pub fn require_t0(&self) -> QResult<u64> {
        self.t0.ok_or_else(|| {
            QError::Degenerate(format!(
                "{} has no eighth root modulo {}",
                self.q0,
                self.modulus()
            ))
        })
    }
    #[inline]
    pub fn field(&self) -> &Fp {
        &self.fp
    }

    /// `t0^e` for any integer `e` (standard residue); exponents divisible by
    /// 8 only need `q0`.
    pub fn t_pow(&self, e: i64) -> QResult<u64> {
        if e % 8 == 0 {
            return Ok(self.q_pow(e / 8));
        }
        let p = self.fp.pow(self.require_t0()?, e.unsigned_abs());
        Ok(if e < 0 { self.fp.inv(p).expect("t0 is a unit") } else { p })
    }

    /// `q0^e` for any integer `e` (standard residue).
    pub fn q_pow(&self, e: i64) -> u64 {
        let p = self.fp.pow(self.q0, e.unsigned_abs());
        if e < 0 {
            self.fp.inv(p).expect("q0 is a unit")
        } else {
            p
        }
    }

    /// Multiplicative order of `q0` if it is at most `bound`, else `None`.
    pub fn small_order(&self, bound: u64) -> Option<u64> {
        let mut x = self.q0;
        for j in 1..=bound {
            if x == 1 {
                return Some(j);
            }
            x = self.fp.mul(x, self.q0);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_roundtrip_and_products() {
        let p = word_primes(1)[0];
        let f = Fp::new(p);
        for &(a, b) in &[(3u64, 5u64), (p - 1, p - 1), (123456789, 987654321)] {
            let m = f.from_mont(f.mont_mul(f.to_mont(a), f.to_mont(b)));
            assert_eq!(m, ((a as u128 * b as u128) % p as u128) as u64);
        }
        assert_eq!(f.mul(f.inv(12345).unwrap(), 12345), 1);
    }

    #[test]
    fn eighth_roots_and_small_fields() {
        let f = Fp::new(101);
        let x = f.eighth_root(f.pow(3, 8)).unwrap();
        assert_eq!(f.pow(x, 8), f.pow(3, 8));
        // 3 is a non-square mod 7, hence not an eighth power there.
        let c = ModContext::new(7, 3).unwrap();
        assert_eq!(c.t0(), None);
        assert!(c.t_pow(1).is_err());
        assert_eq!(c.q_pow(2), 2);
        let c = ModContext::from_t0(101, 3).unwrap();
        assert_eq!(c.q0(), f.pow(3, 8));
        assert_eq!(f.mul(c.t_pow(-5).unwrap(), c.t_pow(5).unwrap()), 1);
    }

    #[test]
    fn primes_are_prime() {
        for p in word_primes(4) {
            assert!(is_prime_u64(p));
            assert!(p < (1 << 62));
        }
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn batch_inverse() {
        let f = Fp::new(1_000_000_007);
        let mut xs: Vec<u64> = (1..20).map(|x| f.to_mont(x)).collect();
        f.mont_batch_inv(&mut xs).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(f.mul(f.from_mont(*x), i as u64 + 1), 1);
        }
    }
}
