//! Chinese remaindering and rational reconstruction over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Combines `a mod m` with `b mod p` into a residue modulo `m·p`.
pub fn crt_pair(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let p_big = BigInt::from(p);
    // x = a + m·k with m·k ≡ b − a (mod p)
    let minv = m.mod_floor(&p_big).modpow(&(&p_big - 2u32), &p_big);
    let k = ((BigInt::from(b) - a).mod_floor(&p_big) * minv).mod_floor(&p_big);
    a + m * k
}

/// The fraction `n/d` with `|n|, |d| ≤ ⌊√(m/2)⌋` and `n ≡ a·d (mod m)`, if any.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_and_reconstruction() {
        let p1 = 1_000_000_007u64;
        let p2 = 998_244_353u64;
        // −7/3 modulo p1·p2
        let m = BigInt::from(p1) * BigInt::from(p2);
        let r1 = {
            let f = crate::qarith::Fp::new(p1);
            f.mul(f.from_i64(-7), f.inv(3).unwrap())
        };
        let r2 = {
            let f = crate::qarith::Fp::new(p2);
            f.mul(f.from_i64(-7), f.inv(3).unwrap())
        };
        let x = crt_pair(&BigInt::from(r1), &BigInt::from(p1), r2, p2);
        assert_eq!(rational_reconstruct(&x, &m), Some((BigInt::from(-7), BigInt::from(3))));
    }
}
