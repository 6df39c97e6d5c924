//! Colored Jones polynomials of the 2-fusion knots `K(m1, m2)` from the
//! quantum spin-network state sum, exactly and modulo word-sized primes.
//!
//! Building blocks (`t = q^{1/8}`):
//! `μ(a) = (−1)^a q^{a(a+2)/4}`, `ν(c,a,b) = (−1)^{(a+b−c)/2} q^{(c(c+2)−a(a+2)−b(b+2))/8}`,
//! `U(a) = (−1)^a [a+1]`, `Θ(a,b,c)` and `Tet(a,b,c,d,e,f)`.  The state sum over the
//! lattice points of `nP` with `P = conv{(0,0),(1/2,−1/2),(1,0),(1,1)}` yields
//! `J_{K,n+1}(1/q)`; the public functions return `J_{K,n+1}(q)`.

mod engine;
pub mod shape;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{QError, QResult};
use crate::qarith::modular::ModContext;
use crate::qarith::{LaurentPoly, ModPoly};
pub use engine::{lattice_points, ModJonesEvaluator};
use shape::{tet_sums, Shape};

/// A 2-fusion knot `K(m1, m2)`; the pretzel knot `K_p` is `K(p, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KnotSpec {
    pub m1: i64,
    pub m2: i64,
    /// Set when the knot was specified as the pretzel knot `K_p`.
    pub pretzel: Option<i64>,
}

impl KnotSpec {
    /// The pretzel knot `K_p = K(p, 1)`.
    pub fn pretzel(p: i64) -> Self {
        KnotSpec {
            m1: p,
            m2: 1,
            pretzel: Some(p),
        }
    }

    /// The 2-fusion knot `K(m1, m2)`.
    pub fn fusion(m1: i64, m2: i64) -> Self {
        KnotSpec {
            m1,
            m2,
            pretzel: if m2 == 1 { Some(m1) } else { None },
        }
    }

    /// Writhe of the standard diagram, `2 m1 + 6 m2 + 2`.
    pub fn writhe(&self) -> i64 {
        2 * self.m1 + 6 * self.m2 + 2
    }

    /// Short label used for file names and reports (`p<p>` or `m<m1>_<m2>`).
    pub fn label(&self) -> String {
        match self.pretzel {
            Some(p) => format!("p{p}"),
            None => format!("m{}_{}", self.m1, self.m2),
        }
    }
}

impl std::fmt::Display for KnotSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.pretzel {
            Some(p) => write!(f, "K_{p} = K({p},1)"),
            None => write!(f, "K({},{})", self.m1, self.m2),
        }
    }
}

/// Converts a shape to the Laurent polynomial it denotes; fails if the
/// `(1 − q^i)` factors do not cancel to a polynomial.
pub fn shape_to_laurent(s: &Shape) -> QResult<LaurentPoly> {
    let s = s.clone().normalized();
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    let one_minus = |i: i64| {
        LaurentPoly::from_terms(vec![(0, BigInt::one()), (8 * i, -BigInt::one())])
    };
    let push = |i: i64, m: i32, num: &mut LaurentPoly, den: &mut LaurentPoly| {
        let f = one_minus(i);
        for _ in 0..m.unsigned_abs() {
            if m > 0 {
                *num = &*num * &f;
            } else {
                *den = &*den * &f;
            }
        }
    };
    for &(x, m) in &s.atoms {
        for i in 1..=x {
            push(i, m, &mut num, &mut den);
        }
    }
    push(1, s.onemq, &mut num, &mut den);
    let mut v = num.exact_div(&den)?.shift(s.texp);
    if s.neg {
        v = -v;
    }
    Ok(v)
}

fn is_admissible_triple(a: i64, b: i64, c: i64) -> bool {
    a >= 0
        && b >= 0
        && c >= 0
        && (a + b + c) % 2 == 0
        && a <= b + c
        && b <= a + c
        && c <= a + b
}

/// Whether every vertex triple of a coloring (1, 3 or 6 colors) is admissible.
/// One color (`U`) only needs to be a natural number; three colors form one
/// triple; six colors `(a,b,c,d,e,f)` form the four tetrahedron vertices
/// `(a,b,e)`, `(a,c,f)`, `(c,d,e)`, `(b,d,f)`.
pub fn admissible(colors: &[i64]) -> bool {
    match colors {
        [a] => *a >= 0,
        [a, b, c] => is_admissible_triple(*a, *b, *c),
        [a, b, c, d, e, f] => {
            is_admissible_triple(*a, *b, *e)
                && is_admissible_triple(*a, *c, *f)
                && is_admissible_triple(*c, *d, *e)
                && is_admissible_triple(*b, *d, *f)
        }
        _ => false,
    }
}

/// `μ(a)` as a signed monomial in `t`.
pub fn mu(a: i64) -> LaurentPoly {
    let s = Shape::mu(a);
    LaurentPoly::monomial(s.texp, if s.neg { -1 } else { 1 })
}

/// `ν(c, a, b)` as a signed monomial in `t`; zero when `a + b − c` is odd.
pub fn nu(c: i64, a: i64, b: i64) -> LaurentPoly {
    match Shape::nu(c, a, b) {
        Some(s) => LaurentPoly::monomial(s.texp, if s.neg { -1 } else { 1 }),
        None => LaurentPoly::zero(),
    }
}

/// `U(a) = (−1)^a [a+1]`; zero for negative `a`.
pub fn u_eval(a: i64) -> LaurentPoly {
    if a < 0 {
        return LaurentPoly::zero();
    }
    shape_to_laurent(&Shape::u(a)).expect("U is a polynomial")
}

/// `Θ(a, b, c)`; zero for non-admissible triples.
pub fn theta_eval(a: i64, b: i64, c: i64) -> LaurentPoly {
    if !is_admissible_triple(a, b, c) {
        return LaurentPoly::zero();
    }
    shape_to_laurent(&Shape::theta(a, b, c)).expect("Θ is a polynomial")
}

/// `Tet(a,b,c,d,e,f)`; zero when non-admissible or when `max T_i > min S_j`.
pub fn tet_eval(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> LaurentPoly {
    if !admissible(&[a, b, c, d, e, f]) {
        return LaurentPoly::zero();
    }
    let (s, t) = tet_sums(a, b, c, d, e, f);
    let lo = *t.iter().max().unwrap();
    let hi = *s.iter().min().unwrap();
    let mut acc = LaurentPoly::zero();
    for k in lo..=hi {
        acc = &acc + &shape_to_laurent(&Shape::tet_term(&s, &t, k)).expect("Tet summand");
    }
    acc
}

/// Reference evaluation of the state sum, term by term from the building
/// blocks with exact fraction arithmetic.  Quadratic in the number of lattice
/// points; intended for small colors and cross-checks.
pub fn colored_jones_reference(spec: &KnotSpec, n_dim: i64) -> QResult<LaurentPoly> {
    let n_dim = n_dim.abs();
    if n_dim <= 1 {
        return Ok(LaurentPoly::one());
    }
    let n = n_dim - 1;
    let w = spec.writhe();
    let mut num = LaurentPoly::zero();
    let mut den = LaurentPoly::one();
    for (k1, k2) in lattice_points(n) {
        let top = nu(2 * k1, n, n)
            .pow((2 * spec.m1 + 2 * spec.m2).unsigned_abs() as u32)
            .pipe_inv(2 * spec.m1 + 2 * spec.m2 < 0);
        let top2 = nu(n + 2 * k2, 2 * k1, n)
            .pow((2 * spec.m2 + 1).unsigned_abs() as u32)
            .pipe_inv(2 * spec.m2 + 1 < 0);
        let t = &(&(&top * &top2) * &(&u_eval(2 * k1) * &u_eval(n + 2 * k2)))
            * &tet_eval(n, 2 * k1, 2 * k1, n, n, n + 2 * k2);
        let d = &theta_eval(n, n, 2 * k1) * &theta_eval(n, 2 * k1, n + 2 * k2);
        num = &(&num * &d) + &(&t * &den);
        den = &den * &d;
    }
    // global factor μ(n)^{−w} / U(n)
    let m = mu(n).pow(w.unsigned_abs() as u32).pipe_inv(w > 0);
    let v = (&num * &m).exact_div(&(&den * &u_eval(n)))?;
    Ok(v.invert_t())
}

trait MonomialInverse {
    fn pipe_inv(self, invert: bool) -> Self;
}

impl MonomialInverse for LaurentPoly {
    /// Inverts a signed monomial when `invert` is set.
    fn pipe_inv(self, invert: bool) -> Self {
        if !invert {
            return self;
        }
        let terms = self.into_terms();
        assert_eq!(terms.len(), 1, "only monomials are inverted");
        let (e, c) = &terms[0];
        LaurentPoly::monomial(-e, c.clone())
    }
}

/// `J_{K, n_dim}(q)` exactly (`J_{K,0} = J_{K,1} = 1`, `J_{K,−n} = J_{K,n}`).
pub fn colored_jones(spec: &KnotSpec, n_dim: i64) -> QResult<LaurentPoly> {
    let n_dim = n_dim.abs();
    if n_dim <= 1 {
        return Ok(LaurentPoly::one());
    }
    let v = engine::state_sum_exact(spec, n_dim - 1)?;
    if !v.is_q_integral() {
        return Err(QError::Inconsistent(format!(
            "J_{{{spec},{n_dim}}} has exponents outside Z[q^±1]"
        )));
    }
    Ok(v)
}

/// `J_{K, n_dim}(q0) mod m` computed in word arithmetic.
pub fn colored_jones_mod(spec: &KnotSpec, n_dim: i64, ctx: &ModContext) -> QResult<u64> {
    let n_dim = n_dim.abs();
    if n_dim <= 1 {
        return Ok(1 % ctx.modulus());
    }
    ModJonesEvaluator::new(spec, ctx, n_dim)?.value(n_dim)
}

/// `J_{K, n_dim}(q) mod p` as a dense polynomial in `q`, computed with the
/// exact engine's algorithm in word arithmetic (`p < 2^62`).  Evaluating it at
/// many points is far cheaper than repeated calls to [`colored_jones_mod`].
pub fn colored_jones_modpoly(spec: &KnotSpec, n_dim: i64, p: u64) -> QResult<ModPoly> {
    let n_dim = n_dim.abs();
    if n_dim <= 1 {
        return Ok(ModPoly::one(p));
    }
    engine::state_sum_modpoly(spec, n_dim - 1, p)
}

/// Total degree span `max_deg − min_deg` (in `q`) of a nonzero polynomial.
pub fn degree_span(f: &LaurentPoly) -> QResult<i64> {
    match (f.q_min_degree()?, f.q_max_degree()?) {
        (Some(a), Some(b)) => Ok(b - a),
        _ => Ok(0),
    }
}

#[cfg(test)]
mod tests;
