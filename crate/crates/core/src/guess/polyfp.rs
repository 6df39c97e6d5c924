//! Dense univariate polynomials over `F_p` (standard residues, ascending
//! coefficients): interpolation and rational function reconstruction.

use crate::qarith::Fp;

/// `Σ c[i] x^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<u64>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: u64) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree (`−1` for zero).
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn lead(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn eval(&self, f: &Fp, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn sub(&self, o: &UPoly, f: &Fp) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| f.sub(*self.0.get(i).unwrap_or(&0), *o.0.get(i).unwrap_or(&0)))
            .collect();
        while r.last() == Some(&0) {
            r.pop();
        }
        UPoly(r)
    }

    pub fn mul(&self, o: &UPoly, f: &Fp) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut r = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                r[i + j] = f.add(r[i + j], f.mul(a, b));
            }
        }
        let mut p = UPoly(r);
        p.trim();
        p
    }

    pub fn scale(&self, c: u64, f: &Fp) -> UPoly {
        let mut p = UPoly(self.0.iter().map(|&a| f.mul(a, c)).collect());
        p.trim();
        p
    }

    /// Scaled to leading coefficient 1 (zero stays zero).
    pub fn monic(&self, f: &Fp) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(f.inv(self.lead()).expect("nonzero leading coefficient"), f)
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &UPoly, f: &Fp) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.deg() < d.deg() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let inv = f.inv(d.lead()).unwrap();
        let mut q = vec![0u64; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dl - 1], inv);
            q[i] = c;
            if c != 0 {
                for (j, &dj) in d.0.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, dj));
                }
            }
        }
        r.truncate(dl - 1);
        let mut q = UPoly(q);
        let mut r = UPoly(r);
        q.trim();
        r.trim();
        (q, r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UPoly, f: &Fp) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, f).1;
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Interpolating polynomial of degree `< xs.len()` (Newton form, then expanded).
    pub fn interpolate(xs: &[u64], ys: &[u64], f: &Fp) -> UPoly {
        let n = xs.len();
        let mut c = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = f.sub(c[i], c[i - 1]);
                let den = f.sub(xs[i], xs[i - j]);
                c[i] = f.mul(num, f.inv(den).expect("distinct interpolation nodes"));
            }
        }
        let mut p = vec![0u64; n];
        for i in (0..n).rev() {
            // p = p·(x − xs[i]) + c[i]
            let mut np = vec![0u64; n];
            for k in 0..n {
                if p[k] == 0 {
                    continue;
                }
                if k + 1 < n {
                    np[k + 1] = f.add(np[k + 1], p[k]);
                }
                np[k] = f.sub(np[k], f.mul(p[k], xs[i]));
            }
            np[0] = f.add(np[0], c[i]);
            p = np;
        }
        let mut p = UPoly(p);
        p.trim();
        p
    }

    /// `Π (x − xs[i])`.
    pub fn node_polynomial(xs: &[u64], f: &Fp) -> UPoly {
        let mut p = UPoly(vec![1]);
        for &x in xs {
            p = p.mul(&UPoly(vec![f.neg(x), 1]), f);
        }
        p
    }
}

/// Maximal-quotient rational reconstruction: from `g ≡ r/t (mod z)` returns the
/// pair `(r, t)` (with `t` monic) preceding the largest quotient in the
/// Euclidean remainder sequence of `(z, g)`, provided that quotient has degree
/// at least `margin`.  `None` when no step qualifies.
pub fn rational_reconstruct(g: &UPoly, z: &UPoly, margin: i64, f: &Fp) -> Option<(UPoly, UPoly)> {
    if g.is_zero() {
        return Some((UPoly::zero(), UPoly::constant(1)));
    }
    let (mut r0, mut r1) = (z.clone(), g.clone());
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::constant(1));
    let mut best: Option<(i64, UPoly, UPoly)> = None;
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1, f);
        if best.as_ref().map_or(true, |b| q.deg() > b.0) {
            best = Some((q.deg(), r1.clone(), t1.clone()));
        }
        let t = t0.sub(&q.mul(&t1, f), f);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    let (d, r, t) = best?;
    if d < margin {
        return None;
    }
    let lc = f.inv(t.lead())?;
    Some((r.scale(lc, f), t.scale(lc, f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_and_reconstruction() {
        let f = Fp::new(1_000_000_007);
        // (3x² + 1) / (x − 5)
        let num = UPoly(vec![1, 0, 3]);
        let den = UPoly(vec![f.neg(5), 1]);
        let xs: Vec<u64> = (10..20).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| f.mul(num.eval(&f, x), f.inv(den.eval(&f, x)).unwrap()))
            .collect();
        let g = UPoly::interpolate(&xs, &ys, &f);
        for (&x, &y) in xs.iter().zip(&ys) {
            assert_eq!(g.eval(&f, x), y);
        }
        let z = UPoly::node_polynomial(&xs, &f);
        let (r, t) = rational_reconstruct(&g, &z, 2, &f).unwrap();
        assert_eq!(r, num);
        assert_eq!(t, den);
        let (q, rem) = num.mul(&den, &f).divrem(&den, &f);
        assert_eq!((q, rem), (num.clone(), UPoly::zero()));
        assert_eq!(num.mul(&den, &f).gcd(&den.mul(&den, &f), &f), den);
    }
}
