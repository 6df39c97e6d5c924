//! Dense exact polynomials in `q` with fixed-width multi-limb coefficients.
//!
//! Coefficients are two's-complement integers of `w` 64-bit limbs.  The
//! polynomial tracks an upper bound on the bit size of its coefficients and
//! widens itself before any operation that could overflow, so all results are
//! exact.  This is the inner engine of the exact state-sum evaluation, where
//! the workload is dominated by multiplications and exact divisions by binomials
//! `1 − q^l` and by shifted additions.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

/// Dense polynomial `Σ c_i q^{lo + i}` with `w`-limb two's-complement coefficients.
#[derive(Clone, Debug)]
pub struct WidePoly {
    w: usize,
    lo: i64,
    len: usize,
    data: Vec<u64>,
    /// Upper bound on the bit length of every `|c_i|`.
    bits: u32,
}

#[inline(always)]
fn add_limbs<const W: usize>(dst: &mut [u64], src: &[u64]) {
    let dst: &mut [u64; W] = (&mut dst[..W]).try_into().unwrap();
    let src: &[u64; W] = (&src[..W]).try_into().unwrap();
    let mut carry = false;
    for k in 0..W {
        let (s1, c1) = dst[k].overflowing_add(src[k]);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        dst[k] = s2;
        carry = c1 | c2;
    }
}

#[inline(always)]
fn sub_limbs<const W: usize>(dst: &mut [u64], src: &[u64]) {
    let dst: &mut [u64; W] = (&mut dst[..W]).try_into().unwrap();
    let src: &[u64; W] = (&src[..W]).try_into().unwrap();
    let mut borrow = false;
    for k in 0..W {
        let (s1, b1) = dst[k].overflowing_sub(src[k]);
        let (s2, b2) = s1.overflowing_sub(borrow as u64);
        dst[k] = s2;
        borrow = b1 | b2;
    }
}

fn add_limbs_dyn(dst: &mut [u64], src: &[u64], w: usize) {
    let mut carry = false;
    for k in 0..w {
        let (s1, c1) = dst[k].overflowing_add(src[k]);
        let (s2, c2) = s1.overflowing_add(carry as u64);
        dst[k] = s2;
        carry = c1 | c2;
    }
}

fn sub_limbs_dyn(dst: &mut [u64], src: &[u64], w: usize) {
    let mut borrow = false;
    for k in 0..w {
        let (s1, b1) = dst[k].overflowing_sub(src[k]);
        let (s2, b2) = s1.overflowing_sub(borrow as u64);
        dst[k] = s2;
        borrow = b1 | b2;
    }
}

/// `c[i] -= c[i-l]` for `i` from `n-1` down to `l` (multiplication by `1 − q^l`).
fn kernel_mul<const W: usize>(data: &mut [u64], l: usize, n: usize) {
    for i in (l..n).rev() {
        let (a, b) = data.split_at_mut(i * W);
        sub_limbs::<W>(&mut b[..W], &a[(i - l) * W..(i - l + 1) * W]);
    }
}

/// `c[i] += c[i-l]` for `i` from `l` up to `n-1` (division by `1 − q^l`).
fn kernel_div<const W: usize>(data: &mut [u64], l: usize, n: usize) {
    for i in l..n {
        let (a, b) = data.split_at_mut(i * W);
        add_limbs::<W>(&mut b[..W], &a[(i - l) * W..(i - l + 1) * W]);
    }
}

/// `dst[i] ±= src[i]` for all `i` in range.
fn kernel_acc<const W: usize>(dst: &mut [u64], src: &[u64], negate: bool) {
    if negate {
        for (d, s) in dst.chunks_exact_mut(W).zip(src.chunks_exact(W)) {
            sub_limbs::<W>(d, s);
        }
    } else {
        for (d, s) in dst.chunks_exact_mut(W).zip(src.chunks_exact(W)) {
            add_limbs::<W>(d, s);
        }
    }
}

macro_rules! dispatch {
    ($w:expr, $f:ident, $dynf:expr, ($($arg:expr),*)) => {
        match $w {
            1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            3 => $f::<3>($($arg),*),
            4 => $f::<4>($($arg),*),
            5 => $f::<5>($($arg),*),
            6 => $f::<6>($($arg),*),
            7 => $f::<7>($($arg),*),
            8 => $f::<8>($($arg),*),
            9 => $f::<9>($($arg),*),
            10 => $f::<10>($($arg),*),
            11 => $f::<11>($($arg),*),
            12 => $f::<12>($($arg),*),
            _ => $dynf,
        }
    };
}

/// Bit length of the magnitude of a two's-complement limb vector.
fn coeff_bits(c: &[u64]) -> u32 {
    let w = c.len();
    let neg = (c[w - 1] >> 63) == 1;
    let ext = if neg { u64::MAX } else { 0 };
    for k in (0..w).rev() {
        if c[k] != ext {
            let x = c[k] ^ ext;
            // |c| ≤ 2^{bits}; the +1 covers the asymmetric negative range.
            return 64 * k as u32 + (64 - x.leading_zeros()) + 1;
        }
    }
    if neg {
        1
    } else {
        0
    }
}

impl WidePoly {
    /// The zero polynomial with `lo = 0`.
    pub fn zero() -> Self {
        WidePoly {
            w: 1,
            lo: 0,
            len: 0,
            data: Vec::new(),
            bits: 0,
        }
    }

    /// The constant `1`.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c·q^e` for a machine-size `c`.
    pub fn monomial(e: i64, c: i64) -> Self {
        let mut p = WidePoly {
            w: 1,
            lo: e,
            len: 1,
            data: vec![c as u64],
            bits: 64 - c.unsigned_abs().leading_zeros() + 1,
        };
        if c == 0 {
            p.len = 0;
            p.data.clear();
            p.bits = 0;
        }
        p
    }

    /// Number of limbs per coefficient.
    pub fn limbs(&self) -> usize {
        self.w
    }

    /// Exponent of the first stored coefficient.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Current coefficient bit bound.
    pub fn bit_bound(&self) -> u32 {
        self.bits
    }

    /// Multiplies by `q^k`.
    pub fn shift(&mut self, k: i64) {
        self.lo += k;
    }

    /// Ensures the coefficient width can hold magnitudes of `b` bits.
    fn reserve_bits(&mut self, b: u32) {
        let need = (b as usize + 1).div_ceil(64);
        if need > self.w {
            let nw = need + 1;
            let mut nd = vec![0u64; self.len * nw];
            for i in 0..self.len {
                let src = &self.data[i * self.w..(i + 1) * self.w];
                let ext = if (src[self.w - 1] >> 63) == 1 { u64::MAX } else { 0 };
                let dst = &mut nd[i * nw..(i + 1) * nw];
                dst[..self.w].copy_from_slice(src);
                for x in &mut dst[self.w..] {
                    *x = ext;
                }
            }
            self.data = nd;
            self.w = nw;
        }
    }

    /// Recomputes the exact coefficient bit bound.
    pub fn rescan_bits(&mut self) {
        let mut b = 0;
        for c in self.data[..self.len * self.w].chunks_exact(self.w) {
            b = b.max(coeff_bits(c));
        }
        self.bits = b;
    }

    fn capacity_bits(&self) -> u32 {
        64 * self.w as u32 - 1
    }

    /// Multiplies by `1 − q^l` (`l ≥ 1`).
    pub fn mul_one_minus_q_pow(&mut self, l: usize) {
        if self.len == 0 {
            return;
        }
        if self.bits + 1 > self.capacity_bits() {
            self.rescan_bits();
            self.reserve_bits(self.bits + 1);
        }
        let w = self.w;
        let n = self.len + l;
        self.data.resize(n * w, 0);
        let data = &mut self.data[..];
        dispatch!(w, kernel_mul, {
            for i in (l..n).rev() {
                let (a, b) = data.split_at_mut(i * w);
                sub_limbs_dyn(&mut b[..w], &a[(i - l) * w..(i - l + 1) * w], w);
            }
        }, (data, l, n));
        self.len = n;
        self.bits += 1;
    }

    /// Divides exactly by `1 − q^l`; returns `false` (leaving `self` in an
    /// unspecified state) if the division is not exact.
    pub fn div_one_minus_q_pow(&mut self, l: usize) -> bool {
        if self.len == 0 {
            return true;
        }
        if self.len <= l {
            return false;
        }
        // Quotient coefficients are partial sums of at most len/l + 1 inputs.
        let growth = 64 - ((self.len / l + 1) as u64).leading_zeros();
        if self.bits + growth > self.capacity_bits() {
            self.rescan_bits();
            self.reserve_bits(self.bits + growth);
        }
        let w = self.w;
        let n = self.len;
        let data = &mut self.data[..];
        dispatch!(w, kernel_div, {
            for i in l..n {
                let (a, b) = data.split_at_mut(i * w);
                add_limbs_dyn(&mut b[..w], &a[(i - l) * w..(i - l + 1) * w], w);
            }
        }, (data, l, n));
        let tail_zero = self.data[(n - l) * w..n * w].iter().all(|&x| x == 0);
        self.len = n - l;
        self.data.truncate(self.len * w);
        self.bits += growth;
        self.rescan_bits();
        tail_zero
    }

    /// Widens the coefficient range so that exponents `[lo, lo+len)` are stored.
    fn cover(&mut self, lo: i64, len: usize) {
        if self.len == 0 {
            self.lo = lo;
            self.len = len;
            self.data = vec![0; len * self.w];
            return;
        }
        let hi = (lo + len as i64).max(self.lo + self.len as i64);
        let new_lo = lo.min(self.lo);
        if new_lo < self.lo {
            let pad = (self.lo - new_lo) as usize;
            let mut nd = vec![0u64; (pad + self.len) * self.w];
            nd[pad * self.w..].copy_from_slice(&self.data[..self.len * self.w]);
            self.data = nd;
            self.len += pad;
            self.lo = new_lo;
        }
        let new_len = (hi - self.lo) as usize;
        if new_len > self.len {
            self.data.resize(new_len * self.w, 0);
            self.len = new_len;
        }
    }

    /// `self += sign · q^k · other`.
    pub fn add_shifted(&mut self, other: &WidePoly, k: i64, negate: bool) {
        if other.len == 0 {
            return;
        }
        let nb = self.bits.max(other.bits) + 1;
        if nb > self.capacity_bits() {
            self.rescan_bits();
            self.reserve_bits(self.bits.max(other.bits) + 1);
        }
        self.cover(other.lo + k, other.len);
        let w = self.w;
        let off = (other.lo + k - self.lo) as usize;
        let dst = &mut self.data[off * w..(off + other.len) * w];
        if other.w == w {
            let src = &other.data[..other.len * w];
            dispatch!(w, kernel_acc, {
                for (d, s) in dst.chunks_exact_mut(w).zip(src.chunks_exact(w)) {
                    if negate { sub_limbs_dyn(d, s, w) } else { add_limbs_dyn(d, s, w) }
                }
            }, (dst, src, negate));
        } else {
            // Resize each source coefficient to width w: sign-extend a narrower
            // one, drop pure sign-extension limbs of a wider one (its value fits,
            // since the bit bound was checked above).
            let ow = other.w;
            let cw = ow.min(w);
            let mut tmp = vec![0u64; w];
            for (i, d) in dst.chunks_exact_mut(w).enumerate() {
                let s = &other.data[i * ow..(i + 1) * ow];
                let ext = if (s[ow - 1] >> 63) == 1 { u64::MAX } else { 0 };
                tmp[..cw].copy_from_slice(&s[..cw]);
                for x in &mut tmp[cw..] {
                    *x = ext;
                }
                if negate {
                    sub_limbs_dyn(d, &tmp, w)
                } else {
                    add_limbs_dyn(d, &tmp, w)
                }
            }
        }
        self.bits = nb;
    }

    /// Removes zero coefficients at both ends.
    pub fn trim(&mut self) {
        let w = self.w;
        let is_zero = |d: &[u64], i: usize| d[i * w..(i + 1) * w].iter().all(|&x| x == 0);
        let mut start = 0;
        while start < self.len && is_zero(&self.data, start) {
            start += 1;
        }
        if start == self.len {
            *self = WidePoly { w: self.w, ..WidePoly::zero() };
            return;
        }
        let mut end = self.len;
        while end > start && is_zero(&self.data, end - 1) {
            end -= 1;
        }
        if start > 0 {
            self.data.copy_within(start * w..end * w, 0);
        }
        self.len = end - start;
        self.data.truncate(self.len * w);
        self.lo += start as i64;
    }

    /// Coefficient `i` (relative index) as a big integer.
    pub fn coeff_at(&self, i: usize) -> BigInt {
        let c = &self.data[i * self.w..(i + 1) * self.w];
        let neg = (c[self.w - 1] >> 63) == 1;
        let mut mag: Vec<u64> = c.to_vec();
        if neg {
            // two's-complement negate
            let mut carry = true;
            for x in mag.iter_mut() {
                let (v, c1) = (!*x).overflowing_add(carry as u64);
                *x = v;
                carry = c1;
            }
        }
        let mut bytes = Vec::with_capacity(mag.len() * 8);
        for x in &mag {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
        let v = BigInt::from_bytes_le(Sign::Plus, &bytes);
        if neg {
            -v
        } else {
            v
        }
    }

    /// Builds from big-integer coefficients `Σ c_i q^{lo+i}`.
    pub fn from_bigints(lo: i64, coeffs: &[BigInt]) -> Self {
        let bits = coeffs.iter().map(|c| c.bits() as u32).max().unwrap_or(0) + 1;
        let w = (bits as usize + 1).div_ceil(64).max(1);
        let mut data = vec![0u64; coeffs.len() * w];
        for (i, c) in coeffs.iter().enumerate() {
            let (_, mut limbs) = c.abs().to_u64_digits();
            limbs.resize(w, 0);
            if c.is_negative() {
                let mut carry = true;
                for x in limbs.iter_mut() {
                    let (v, c1) = (!*x).overflowing_add(carry as u64);
                    *x = v;
                    carry = c1;
                }
            }
            data[i * w..(i + 1) * w].copy_from_slice(&limbs);
        }
        WidePoly {
            w,
            lo,
            len: coeffs.len(),
            data,
            bits,
        }
    }

    /// All coefficients as `(exponent, value)` pairs, zeros skipped.
    pub fn to_terms(&self) -> Vec<(i64, BigInt)> {
        (0..self.len)
            .filter(|&i| self.data[i * self.w..(i + 1) * self.w].iter().any(|&x| x != 0))
            .map(|i| (self.lo + i as i64, self.coeff_at(i)))
            .collect()
    }

    /// True iff every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.data[..self.len * self.w].iter().all(|&x| x == 0)
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.lo || e >= self.lo + self.len as i64 {
            BigInt::zero()
        } else {
            self.coeff_at((e - self.lo) as usize)
        }
    }
}
