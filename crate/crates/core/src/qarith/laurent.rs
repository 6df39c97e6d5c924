//! Exact Laurent polynomials in the eighth-root variable `t` (`t^8 = q`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modular::ModContext;
use crate::error::{QError, QResult};

/// A Laurent polynomial `Σ c_e t^e` with big-integer coefficients, stored as a
/// list of `(exponent, coefficient)` pairs sorted by ascending exponent with no
/// zero coefficients.  Exponents count powers of `t = q^{1/8}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigInt)>,
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c·t^e`.
    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// `c·q^e` (that is, `c·t^{8e}`).
    pub fn q_monomial(e: i64, c: impl Into<BigInt>) -> Self {
        Self::monomial(8 * e, c)
    }

    /// Builds a polynomial from arbitrary `(t-exponent, coefficient)` pairs,
    /// combining repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(it: I) -> Self {
        let mut v: Vec<(i64, BigInt)> = it.into_iter().collect();
        v.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    /// Builds `Σ coeffs[i] q^{min_q + i}`.
    pub fn from_q_dense(min_q: i64, coeffs: Vec<BigInt>) -> Self {
        Self::from_dense(8 * min_q, 8, coeffs)
    }

    /// Builds `Σ coeffs[i] t^{base + i·stride}`.
    pub fn from_dense(base: i64, stride: i64, coeffs: Vec<BigInt>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + stride * i as i64, c))
            .collect();
        LaurentPoly { terms }
    }

    /// Sorted `(t-exponent, coefficient)` pairs.
    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    /// Consumes the polynomial, returning its sorted terms.
    pub fn into_terms(self) -> Vec<(i64, BigInt)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest t-exponent.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    /// Largest t-exponent.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        match self.terms.binary_search_by_key(&e, |(x, _)| *x) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Coefficient of `q^e`.
    pub fn q_coeff(&self, e: i64) -> BigInt {
        self.coeff(8 * e)
    }

    /// True iff every exponent is divisible by 8, i.e. the value lies in `Z[q^{±1}]`.
    pub fn is_q_integral(&self) -> bool {
        self.terms.iter().all(|(e, _)| e % 8 == 0)
    }

    /// `(q-exponent, coefficient)` pairs; errors unless q-integral.
    pub fn q_terms(&self) -> QResult<Vec<(i64, BigInt)>> {
        if !self.is_q_integral() {
            return Err(QError::NotQIntegral(format!("{self}")));
        }
        Ok(self.terms.iter().map(|(e, c)| (e / 8, c.clone())).collect())
    }

    /// Minimum q-exponent (q-integral values only).
    pub fn q_min_degree(&self) -> QResult<Option<i64>> {
        if !self.is_q_integral() {
            return Err(QError::NotQIntegral(format!("{self}")));
        }
        Ok(self.min_exp().map(|e| e / 8))
    }

    /// Maximum q-exponent (q-integral values only).
    pub fn q_max_degree(&self) -> QResult<Option<i64>> {
        if !self.is_q_integral() {
            return Err(QError::NotQIntegral(format!("{self}")));
        }
        Ok(self.max_exp().map(|e| e / 8))
    }

    /// Dense q-coefficients `(min_q, [c_min, …, c_max])` (q-integral values only).
    pub fn q_dense(&self) -> QResult<(i64, Vec<BigInt>)> {
        if !self.is_q_integral() {
            return Err(QError::NotQIntegral(format!("{self}")));
        }
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut v = vec![BigInt::zero(); ((hi - lo) / 8 + 1) as usize];
                for (e, c) in &self.terms {
                    v[((e - lo) / 8) as usize] = c.clone();
                }
                Ok((lo / 8, v))
            }
            _ => Ok((0, Vec::new())),
        }
    }

    /// Substitutes `t → 1/t`.
    pub fn invert_t(&self) -> Self {
        let mut terms: Vec<(i64, BigInt)> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        LaurentPoly { terms }
    }

    /// Multiplies by `t^de`.
    pub fn shift(&self, de: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + de, c.clone())).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Sum of the coefficients (the value at `t = 1`).
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// The gcd of all exponent differences together with `extra` (0 when undetermined).
    fn exponent_stride(&self, mut g: i64) -> i64 {
        if let Some(lo) = self.min_exp() {
            for (e, _) in &self.terms {
                g = gcd_i64(g, e - lo);
            }
        }
        g
    }

    fn dense_with(&self, base: i64, stride: i64, len: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); len];
        for (e, c) in &self.terms {
            v[((e - base) / stride) as usize] = c.clone();
        }
        v
    }

    /// Exact division; errors if the divisor is zero or the remainder is nonzero.
    pub fn exact_div(&self, d: &LaurentPoly) -> QResult<LaurentPoly> {
        if d.is_zero() {
            return Err(QError::InvalidArgument("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (a_lo, a_hi) = (self.min_exp().unwrap(), self.max_exp().unwrap());
        let (d_lo, d_hi) = (d.min_exp().unwrap(), d.max_exp().unwrap());
        let mut g = gcd_i64(self.exponent_stride(0), d.exponent_stride(0));
        g = gcd_i64(g, a_lo - d_lo);
        if g == 0 {
            g = 1;
        }
        if a_hi - d_hi < a_lo - d_lo {
            return Err(QError::InexactDivision(format!("{self} by {d}")));
        }
        let n = ((a_hi - a_lo) / g + 1) as usize;
        let m = ((d_hi - d_lo) / g + 1) as usize;
        let mut a = self.dense_with(a_lo, g, n);
        let b = d.dense_with(d_lo, g, m);
        let lead = b[m - 1].clone();
        let qlen = n - m + 1;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let coef = std::mem::take(&mut a[i + m - 1]);
            if coef.is_zero() {
                continue;
            }
            let (c, r) = coef.div_rem(&lead);
            if !r.is_zero() {
                return Err(QError::InexactDivision(format!("{self} by {d}")));
            }
            for j in 0..m - 1 {
                if !b[j].is_zero() {
                    a[i + j] -= &c * &b[j];
                }
            }
            q[i] = c;
        }
        if a.iter().any(|x| !x.is_zero()) {
            return Err(QError::InexactDivision(format!("{self} by {d}")));
        }
        Ok(Self::from_dense(a_lo - d_lo, g, q))
    }

    /// Value under a modular context: `t ↦ t0` (so `q ↦ q0`).  Values with
    /// exponents not divisible by 8 require the context to carry an eighth root.
    pub fn eval_mod(&self, ctx: &ModContext) -> QResult<u64> {
        let f = ctx.field();
        let m = BigInt::from(ctx.modulus());
        if self.is_zero() {
            return Ok(0);
        }
        let g = self.exponent_stride(0).max(1);
        let step = ctx.t_pow(g)?;
        let mut pw = ctx.t_pow(self.min_exp().unwrap())?;
        let mut last = self.min_exp().unwrap();
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let k = (e - last) / g;
            if k > 0 {
                pw = f.mul(pw, f.pow(step, k as u64));
            }
            last = *e;
            let cm = c.mod_floor(&m).to_u64().expect("reduced residue fits");
            acc = f.add(acc, f.mul(cm, pw));
        }
        Ok(acc)
    }

    /// Canonical text form, e.g. `-1*q^8+1*q^5+1*q^3`: signed decimal
    /// coefficients with explicit `q^e` powers, highest exponent first; a
    /// constant term is written as its bare coefficient, the zero polynomial as `0`.
    pub fn to_q_string(&self) -> QResult<String> {
        if !self.is_q_integral() {
            return Err(QError::NotQIntegral(format!("{self}")));
        }
        Ok(self.format_with(8, "q"))
    }

    fn format_with(&self, unit: i64, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if c.is_negative() {
                s.push('-');
            } else if i > 0 {
                s.push('+');
            }
            s.push_str(&c.abs().to_string());
            if *e != 0 {
                s.push_str(&format!("*{var}^{}", e / unit));
            }
        }
        s
    }

    /// Parses the canonical text form (any term order; `q^e` factors optional
    /// for constants; whitespace ignored).
    pub fn parse_q_string(text: &str) -> QResult<LaurentPoly> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |pos: usize, msg: &str| QError::Parse {
            line: 1,
            column: pos + 1,
            message: msg.to_string(),
        };
        if s.is_empty() {
            return Err(err(0, "empty input"));
        }
        let mut i = 0;
        let mut terms = Vec::new();
        let read_int = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            if *i < s.len() && (s[*i] == '-' || s[*i] == '+') {
                *i += 1;
            }
            let ds = *i;
            while *i < s.len() && s[*i].is_ascii_digit() {
                *i += 1;
            }
            if ds == *i {
                *i = start;
                return None;
            }
            s[start..*i].iter().collect::<String>().parse().ok()
        };
        while i < s.len() {
            let start = i;
            let sign = if s[i] == '-' {
                i += 1;
                -1
            } else {
                if s[i] == '+' {
                    i += 1;
                }
                1
            };
            let mut coeff = BigInt::one();
            let mut have_coeff = false;
            if i < s.len() && s[i].is_ascii_digit() {
                coeff = read_int(&mut i).ok_or_else(|| err(i, "bad coefficient"))?;
                have_coeff = true;
            }
            let mut exp = 0i64;
            if i < s.len() && (s[i] == '*' || s[i] == 'q') {
                if s[i] == '*' {
                    if !have_coeff {
                        return Err(err(i, "unexpected '*'"));
                    }
                    i += 1;
                }
                if i >= s.len() || s[i] != 'q' {
                    return Err(err(i, "expected 'q'"));
                }
                i += 1;
                exp = 1;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let e = read_int(&mut i).ok_or_else(|| err(i, "bad exponent"))?;
                    exp = e.to_i64().ok_or_else(|| err(i, "exponent out of range"))?;
                }
            } else if !have_coeff {
                return Err(err(start, "expected a term"));
            }
            if i < s.len() && s[i] != '+' && s[i] != '-' {
                return Err(err(i, "unexpected character"));
            }
            terms.push((8 * exp, coeff * sign));
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn mul_impl(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.len() == 1 || other.len() == 1 {
            let (mono, poly) = if self.len() == 1 { (self, other) } else { (other, self) };
            let (e0, c0) = &mono.terms[0];
            return LaurentPoly {
                terms: poly.terms.iter().map(|(e, c)| (e + e0, c * c0)).collect(),
            };
        }
        let g = gcd_i64(self.exponent_stride(0), other.exponent_stride(0)).max(1);
        let (a_lo, b_lo) = (self.min_exp().unwrap(), other.min_exp().unwrap());
        let na = ((self.max_exp().unwrap() - a_lo) / g + 1) as usize;
        let nb = ((other.max_exp().unwrap() - b_lo) / g + 1) as usize;
        let dense_ok = na.saturating_mul(nb) <= 16 * self.len().saturating_mul(other.len()) + 4096;
        if dense_ok {
            let mut out = vec![BigInt::zero(); na + nb - 1];
            for (ea, ca) in &self.terms {
                let ia = ((ea - a_lo) / g) as usize;
                for (eb, cb) in &other.terms {
                    out[ia + ((eb - b_lo) / g) as usize] += ca * cb;
                }
            }
            Self::from_dense(a_lo + b_lo, g, out)
        } else {
            let mut v = Vec::with_capacity(self.len() * other.len());
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    v.push((ea + eb, ca * cb));
                }
            }
            Self::from_terms(v)
        }
    }

    fn add_impl(&self, other: &LaurentPoly, negate_other: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        LaurentPoly { terms: out }
    }

    /// `self^k`.
    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    /// q-integral values print in canonical q-form, others in t-form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_q_integral() {
            write!(f, "{}", self.format_with(8, "q"))
        } else {
            write!(f, "{}", self.format_with(1, "t"))
        }
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.add_impl(o, false)
    }
}
impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.add_impl(o, true)
    }
}
impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.mul_impl(o)
    }
}
impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        self.add_impl(&o, false)
    }
}
impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        self.add_impl(&o, true)
    }
}
impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        self.mul_impl(&o)
    }
}
impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}
impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_n2() -> LaurentPoly {
        LaurentPoly::from_terms(vec![
            (64, BigInt::from(-1)),
            (40, BigInt::from(1)),
            (24, BigInt::from(1)),
        ])
    }

    #[test]
    fn min_max_and_text() {
        let f = table1_n2();
        assert_eq!((f.min_exp(), f.max_exp()), (Some(24), Some(64)));
        assert_eq!(f.to_q_string().unwrap(), "-1*q^8+1*q^5+1*q^3");
        assert_eq!(LaurentPoly::parse_q_string("-1*q^8+1*q^5+1*q^3").unwrap(), f);
        assert_eq!(LaurentPoly::one().to_q_string().unwrap(), "1");
        assert_eq!(LaurentPoly::zero().to_q_string().unwrap(), "0");
        assert!(LaurentPoly::monomial(3, 1).to_q_string().is_err());
        let g = LaurentPoly::parse_q_string("3*q^-2 - 7 + q").unwrap();
        assert_eq!(g.q_coeff(-2), BigInt::from(3));
        assert_eq!(g.q_coeff(0), BigInt::from(-7));
        assert_eq!(g.q_coeff(1), BigInt::from(1));
        assert!(LaurentPoly::parse_q_string("3*x").is_err());
    }

    #[test]
    fn ring_ops_and_division() {
        let a = LaurentPoly::parse_q_string("1*q^2-1").unwrap();
        let b = LaurentPoly::parse_q_string("1*q^1-1").unwrap();
        let c = a.exact_div(&b).unwrap();
        assert_eq!(c.to_q_string().unwrap(), "1*q^1+1");
        assert!(b.exact_div(&a).is_err());
        assert_eq!(&(&c * &b) - &a, LaurentPoly::zero());
        let t = LaurentPoly::from_terms(vec![(4, BigInt::from(1)), (-4, BigInt::from(1))]);
        assert_eq!(t.invert_t(), t);
        assert_eq!((&t * &t).exact_div(&t).unwrap(), t);
    }

    #[test]
    fn modular_evaluation() {
        let f = LaurentPoly::parse_q_string("q+1").unwrap();
        let ctx = ModContext::new(7, 3).unwrap();
        assert_eq!(f.eval_mod(&ctx).unwrap(), 4);
        let ctx = ModContext::from_t0(101, 3).unwrap();
        let t = LaurentPoly::from_terms(vec![(1, BigInt::from(2)), (-3, BigInt::from(5))]);
        let fp = ctx.field();
        let want = fp.add(fp.mul(2, 3), fp.mul(5, fp.inv(27).unwrap()));
        assert_eq!(t.eval_mod(&ctx).unwrap(), want);
    }
}
