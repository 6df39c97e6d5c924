//! Cyclotomic polynomials and reduction modulo `Φ_N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use crate::error::{QError, QResult};

/// The `N`-th cyclotomic polynomial, as ascending integer coefficients in `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicCtx {
    n: u64,
    phi: Vec<BigInt>,
}

impl CyclotomicCtx {
    pub fn n(&self) -> u64 {
        self.n
    }
    /// Ascending coefficients of `Φ_N` (monic, degree `φ(N)`).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.phi
    }
    /// Degree, equal to Euler's totient of `N`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
    /// `Φ_N` as a Laurent polynomial in `q`.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_q_dense(0, self.phi.clone())
    }

    /// Remainder of a dense polynomial `Σ c_i q^i` modulo `Φ_N`.
    fn reduce_dense(&self, mut a: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for i in (d..a.len()).rev() {
            let c = std::mem::take(&mut a[i]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in self.phi[..d].iter().enumerate() {
                if !pj.is_zero() {
                    a[i - d + j] -= &c * pj;
                }
            }
        }
        a.truncate(d);
        a.resize(d, BigInt::zero());
        a
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Exact long division of ascending dense polynomials by a monic divisor.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = a.to_vec();
    let m = b.len();
    let qlen = a.len() + 1 - m;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = std::mem::take(&mut a[i + m - 1]);
        if c.is_zero() {
            continue;
        }
        for j in 0..m - 1 {
            if !b[j].is_zero() {
                a[i + j] -= &c * &b[j];
            }
        }
        q[i] = c;
    }
    debug_assert!(a.iter().all(|x| x.is_zero()));
    q
}

/// `Φ_N`, computed by exact division of `q^N − 1` by `Π_{d|N, d<N} Φ_d`.
pub fn cyclotomic(n: u64) -> QResult<CyclotomicCtx> {
    if n == 0 {
        return Err(QError::InvalidArgument("cyclotomic index must be positive".into()));
    }
    let divs = divisors(n);
    let mut table: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for &d in &divs {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        for (e, phi_e) in &table {
            if d % e == 0 {
                num = div_monic(&num, phi_e);
            }
        }
        table.push((d, num));
    }
    let phi = table.pop().unwrap().1;
    Ok(CyclotomicCtx { n, phi })
}

/// Remainder of `f ∈ Z[q^{±1}]` modulo `Φ_N`, ascending coefficients of
/// length `φ(N)`.  Negative exponents are first cleared using `q^N ≡ 1`
/// (an identity after evaluation at primitive `N`-th roots of unity).
pub fn reduce_mod_cyclotomic(f: &LaurentPoly, n: u64) -> QResult<Vec<BigInt>> {
    let ctx = cyclotomic(n)?;
    reduce_with(&ctx, f)
}

/// As [`reduce_mod_cyclotomic`] with a precomputed context.
pub fn reduce_with(ctx: &CyclotomicCtx, f: &LaurentPoly) -> QResult<Vec<BigInt>> {
    let n = ctx.n as i64;
    let mut a = vec![BigInt::zero(); ctx.n as usize];
    for (e, c) in f.q_terms()? {
        a[e.rem_euclid(n) as usize] += c;
    }
    Ok(ctx.reduce_dense(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap().coeffs(), &coeffs(&[-1, 1])[..]);
        assert_eq!(cyclotomic(4).unwrap().coeffs(), &coeffs(&[1, 0, 1])[..]);
        assert_eq!(cyclotomic(12).unwrap().coeffs(), &coeffs(&[1, 0, -1, 0, 1])[..]);
        assert_eq!(cyclotomic(100).unwrap().degree(), 40);
        assert!(cyclotomic(0).is_err());
    }

    #[test]
    fn product_over_divisors_is_q_n_minus_1() {
        for n in [6u64, 10, 15, 36] {
            let mut p = LaurentPoly::one();
            for d in divisors(n) {
                p = &p * &cyclotomic(d).unwrap().to_laurent();
            }
            let want = LaurentPoly::parse_q_string(&format!("q^{n}-1")).unwrap();
            assert_eq!(p, want);
        }
    }

    #[test]
    fn reductions() {
        let q4 = LaurentPoly::q_monomial(4, 1);
        assert_eq!(reduce_mod_cyclotomic(&q4, 4).unwrap(), coeffs(&[1, 0]));
        let one = LaurentPoly::one();
        let r = reduce_mod_cyclotomic(&one, 100).unwrap();
        assert_eq!(r[0], BigInt::from(1));
        assert!(r[1..].iter().all(|c| c.is_zero()));
        let j02 = LaurentPoly::parse_q_string("-1*q^8+1*q^5+1*q^3").unwrap();
        // mod q^2+q+1: q^3 ≡ 1, so -q^2 + q^2 + 1 = 1.
        assert_eq!(reduce_mod_cyclotomic(&j02, 3).unwrap(), coeffs(&[1, 0]));
        assert!(reduce_mod_cyclotomic(&LaurentPoly::monomial(1, 1), 3).is_err());
    }
}
