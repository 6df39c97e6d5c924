//! Dense Laurent polynomials in `q` with coefficients in `F_p` (`p < 2^62`).

use super::modular::Fp;

/// `Σ data[i] q^{lo+i}` with canonical residues in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: u64,
    lo: i64,
    data: Vec<u64>,
}

impl ModPoly {
    pub fn zero(p: u64) -> Self {
        assert!(p < (1 << 62), "modulus must be below 2^62");
        ModPoly {
            p,
            lo: 0,
            data: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        ModPoly {
            data: vec![1 % p],
            ..Self::zero(p)
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.data
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Builds from `(exponent, residue)` pairs.
    pub fn from_terms(p: u64, terms: &[(i64, u64)]) -> Self {
        let mut r = Self::zero(p);
        if terms.is_empty() {
            return r;
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        r.lo = lo;
        r.data = vec![0; (hi - lo + 1) as usize];
        for &(e, c) in terms {
            let i = (e - lo) as usize;
            r.data[i] = (r.data[i] + c % p) % p;
        }
        r.trim();
        r
    }

    /// Multiplies by `1 − q^l`.
    pub fn mul_one_minus_q_pow(&mut self, l: usize) {
        if self.data.is_empty() {
            return;
        }
        let n = self.data.len() + l;
        self.data.resize(n, 0);
        let p = self.p;
        for i in (l..n).rev() {
            let s = self.data[i - l];
            let d = self.data[i];
            self.data[i] = if d >= s { d - s } else { d + p - s };
        }
    }

    /// Divides by `1 − q^l`; `false` when the division leaves a remainder.
    pub fn div_one_minus_q_pow(&mut self, l: usize) -> bool {
        let n = self.data.len();
        if n == 0 {
            return true;
        }
        if n <= l {
            return false;
        }
        let p = self.p;
        for i in l..n {
            let v = self.data[i] + self.data[i - l];
            self.data[i] = if v >= p { v - p } else { v };
        }
        let exact = self.data[n - l..].iter().all(|&x| x == 0);
        self.data.truncate(n - l);
        exact
    }

    /// `self += ± q^k · other`.
    pub fn add_shifted(&mut self, other: &ModPoly, k: i64, negate: bool) {
        if other.data.is_empty() {
            return;
        }
        let olo = other.lo + k;
        if self.data.is_empty() {
            self.lo = olo;
            self.data = vec![0; other.data.len()];
        }
        if olo < self.lo {
            let pad = (self.lo - olo) as usize;
            let mut nd = vec![0u64; pad + self.data.len()];
            nd[pad..].copy_from_slice(&self.data);
            self.data = nd;
            self.lo = olo;
        }
        let off = (olo - self.lo) as usize;
        if off + other.data.len() > self.data.len() {
            self.data.resize(off + other.data.len(), 0);
        }
        let p = self.p;
        for (d, &s) in self.data[off..].iter_mut().zip(&other.data) {
            *d = if negate {
                if *d >= s {
                    *d - s
                } else {
                    *d + p - s
                }
            } else {
                let v = *d + s;
                if v >= p {
                    v - p
                } else {
                    v
                }
            };
        }
    }

    /// Removes zero coefficients at both ends.
    pub fn trim(&mut self) {
        let start = self.data.iter().position(|&x| x != 0);
        match start {
            None => {
                self.data.clear();
                self.lo = 0;
            }
            Some(s) => {
                let end = self.data.iter().rposition(|&x| x != 0).unwrap() + 1;
                self.data.truncate(end);
                self.data.drain(..s);
                self.lo += s as i64;
            }
        }
    }

    /// Substitutes `q → 1/q`.
    pub fn invert_q(&self) -> ModPoly {
        if self.data.is_empty() {
            return self.clone();
        }
        let mut data = self.data.clone();
        data.reverse();
        ModPoly {
            p: self.p,
            lo: -(self.lo + self.data.len() as i64 - 1),
            data,
        }
    }

    /// Value at `q = x` (x invertible mod p when negative exponents occur).
    pub fn eval(&self, f: &Fp, x: u64) -> u64 {
        debug_assert_eq!(f.modulus(), self.p);
        if self.data.is_empty() {
            return 0;
        }
        let xm = f.to_mont(x % self.p);
        let mut acc = 0u64;
        for &c in self.data.iter().rev() {
            acc = f.add(f.mont_mul(acc, xm), f.to_mont(c));
        }
        let scale = if self.lo >= 0 {
            f.mont_pow(xm, self.lo as u64)
        } else {
            f.mont_pow(f.mont_inv(xm).expect("evaluation point must be invertible"), (-self.lo) as u64)
        };
        f.from_mont(f.mont_mul(acc, scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_divide_and_evaluate() {
        let p = 1_000_000_007;
        let f = Fp::new(p);
        let mut a = ModPoly::from_terms(p, &[(0, 3), (2, p - 1)]); // 3 − q²
        let orig = a.clone();
        a.mul_one_minus_q_pow(3);
        a.mul_one_minus_q_pow(1);
        assert!(a.div_one_minus_q_pow(1));
        assert!(a.div_one_minus_q_pow(3));
        a.trim();
        assert_eq!(a, orig);
        assert!(!a.clone().div_one_minus_q_pow(1));
        // 3 − q² at q = 2
        assert_eq!(orig.eval(&f, 2), p - 1);
        let mut s = ModPoly::zero(p);
        s.add_shifted(&orig, -2, false);
        s.add_shifted(&orig, 0, true);
        s.trim();
        // q^{-2}(3 − q²) − (3 − q²) = 3q^{-2} − 4 + q²
        assert_eq!(s, ModPoly::from_terms(p, &[(-2, 3), (0, p - 4), (2, 1)]));
        assert_eq!(s.invert_q(), ModPoly::from_terms(p, &[(2, 3), (0, p - 4), (-2, 1)]));
    }
}
