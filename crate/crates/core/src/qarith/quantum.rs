//! Quantum integers, factorials and multinomial coefficients.

use num_bigint::BigInt;

use super::laurent::LaurentPoly;
use crate::error::{QError, QResult};

/// `[n] = (q^{n/2} − q^{−n/2})/(q^{1/2} − q^{−1/2}) = Σ_{j=0}^{n−1} t^{4(n−1) − 8j}`.
pub fn quantum_int(n: i64) -> QResult<LaurentPoly> {
    if n < 0 {
        return Err(QError::InvalidArgument(format!("quantum integer of negative {n}")));
    }
    Ok(LaurentPoly::from_terms(
        (0..n).map(|j| (4 * (n - 1) - 8 * j, BigInt::from(1))),
    ))
}

/// `[n]! = Π_{k=1}^{n} [k]`, with `[0]! = 1`.
pub fn quantum_factorial(n: i64) -> QResult<LaurentPoly> {
    if n < 0 {
        return Err(QError::InvalidArgument(format!("quantum factorial of negative {n}")));
    }
    let mut acc = LaurentPoly::one();
    for k in 2..=n {
        acc = &acc * &quantum_int(k)?;
    }
    Ok(acc)
}

/// `[a]! / Π [a_i]!` for nonnegative parts summing to `a` (exact division).
pub fn q_multinomial(a: i64, parts: &[i64]) -> QResult<LaurentPoly> {
    if parts.iter().any(|&x| x < 0) {
        return Err(QError::InvalidArgument("negative multinomial part".into()));
    }
    if parts.iter().sum::<i64>() != a {
        return Err(QError::InvalidArgument(format!(
            "multinomial parts {parts:?} do not sum to {a}"
        )));
    }
    // Build the quotient part by part as a product of q-binomials, each an
    // exact quotient of factorials, to keep intermediate sizes small.
    let mut acc = LaurentPoly::one();
    let mut total = 0i64;
    for &x in parts {
        if x == 0 {
            continue;
        }
        total += x;
        // binom(total, x) = [total]! / ([x]! [total-x]!)
        let mut num = LaurentPoly::one();
        for k in (total - x + 1)..=total {
            num = &num * &quantum_int(k)?;
        }
        let b = num.exact_div(&quantum_factorial(x)?)?;
        acc = &acc * &b;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_int(0).unwrap(), LaurentPoly::zero());
        assert_eq!(quantum_int(2).unwrap(), t(&[(4, 1), (-4, 1)]));
        assert_eq!(quantum_int(3).unwrap(), t(&[(8, 1), (0, 1), (-8, 1)]));
        assert!(quantum_int(-1).is_err());
        for n in 1..12 {
            assert_eq!(quantum_int(n).unwrap().eval_at_one(), BigInt::from(n));
        }
    }

    #[test]
    fn quantum_factorials() {
        assert_eq!(quantum_factorial(0).unwrap(), LaurentPoly::one());
        assert_eq!(quantum_factorial(2).unwrap(), t(&[(4, 1), (-4, 1)]));
        assert_eq!(
            quantum_factorial(3).unwrap(),
            t(&[(12, 1), (4, 2), (-4, 2), (-12, 1)])
        );
        assert!(quantum_factorial(-2).is_err());
        let mut f = BigInt::from(1);
        for n in 1..10 {
            f *= n;
            assert_eq!(quantum_factorial(n).unwrap().eval_at_one(), f);
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(q_multinomial(2, &[1, 1]).unwrap(), t(&[(4, 1), (-4, 1)]));
        assert_eq!(q_multinomial(0, &[0, 0, 0]).unwrap(), LaurentPoly::one());
        let m = q_multinomial(4, &[2, 2]).unwrap();
        assert_eq!(m.invert_t(), m);
        assert_eq!(m.eval_at_one(), BigInt::from(6));
        assert!(q_multinomial(3, &[1, 1]).is_err());
        let direct = quantum_factorial(6)
            .unwrap()
            .exact_div(&(&(&quantum_factorial(1).unwrap() * &quantum_factorial(2).unwrap()) * &quantum_factorial(3).unwrap()))
            .unwrap();
        assert_eq!(q_multinomial(6, &[1, 2, 3]).unwrap(), direct);
    }
}
