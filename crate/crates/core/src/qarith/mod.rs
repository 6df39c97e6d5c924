//! Exact arithmetic core: Laurent polynomials in `t = q^{1/8}`, quantum
//! integers, word-sized modular images, cyclotomic reduction, and
//! multi-precision complex evaluation.

pub mod cyclotomic;
pub mod laurent;
pub mod modpoly;
pub mod modular;
pub mod mpfloat;
pub mod quantum;
pub mod wide;

pub use cyclotomic::{cyclotomic, reduce_mod_cyclotomic, CyclotomicCtx};
pub use laurent::LaurentPoly;
pub use modpoly::ModPoly;
pub use modular::{word_primes, Fp, ModContext};
pub use mpfloat::{root_of_unity, MpComplex, MpFloat};
pub use quantum::{q_multinomial, quantum_factorial, quantum_int};

/// Exact rationals (reduced, positive denominator).
pub type Rational = num_rational::BigRational;

use crate::error::QResult;

impl LaurentPoly {
    /// Value at a complex point `z` for the variable `q` (q-integral values only).
    pub fn eval_q_complex(&self, z: &MpComplex, prec: u32) -> QResult<MpComplex> {
        let terms = self.q_terms()?;
        let p = prec + 16;
        let mut acc = MpComplex::zero();
        if terms.is_empty() {
            return Ok(acc);
        }
        let zinv = MpComplex::one().div(z, p);
        let (lo, hi) = (terms[0].0, terms[terms.len() - 1].0);
        // Horner from the top exponent down to the bottom one.
        let mut idx = terms.len();
        let mut e = hi;
        loop {
            if idx > 0 && terms[idx - 1].0 == e {
                acc = acc.add(&MpComplex::from_bigint(&terms[idx - 1].1, p), p);
                idx -= 1;
            }
            if e == lo {
                break;
            }
            acc = acc.mul(z, p);
            e -= 1;
        }
        // acc = Σ c_e z^{e-lo}
        let scale = if lo >= 0 { z.pow(lo as u64, p) } else { zinv.pow((-lo) as u64, p) };
        let r = acc.mul(&scale, p);
        Ok(MpComplex { re: r.re.round(prec), im: r.im.round(prec) })
    }
}
