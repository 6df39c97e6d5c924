//! Consistency checks for knot operators: Alexander polynomials and the loop
//! identities, the AJ specialization, the palindromy of the M-factors `ε_p`,
//! and the degree/height statistics of colored Jones polynomials.
//!
//! All identities are stated for the recurrence sequence `f_n = σ J_{K,n+1}`
//! (see [`crate::opkit::SEQUENCE_SIGN`]).  Because `P f = b` is linear, an
//! identity derived for `J` holds for `f` after replacing `b` by `σ b`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::data;
use crate::error::{QError, QResult};
use crate::fusion::{colored_jones, KnotSpec};
use crate::opkit::{InhomOperator, Specialization, TriPoly, SEQUENCE_SIGN};
use crate::qarith::{LaurentPoly, Rational};

/// The Alexander polynomial `Δ_p(t)` of the pretzel knot `K_p`, stored as a
/// Laurent polynomial in `M` (so that `Δ_p(M)` can enter operator identities).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderPoly {
    pub p: i64,
    poly: TriPoly,
}

impl AlexanderPoly {
    /// `Δ_p(M)`.
    pub fn in_m(&self) -> &TriPoly {
        &self.poly
    }

    /// `Δ_p(1)`.
    pub fn at_one(&self) -> BigInt {
        self.poly.iter().map(|(_, c)| c.clone()).sum()
    }

    /// `(exponent, coefficient)` pairs in ascending order.
    pub fn coefficients(&self) -> Vec<(i64, BigInt)> {
        self.poly.iter().map(|(k, c)| (k.1, c.clone())).collect()
    }
}

impl fmt::Display for AlexanderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.poly.to_string().replace('M', "t");
        write!(f, "{s}")
    }
}

fn laurent_m(terms: &[(i64, i64)]) -> TriPoly {
    TriPoly::from_terms(terms.iter().map(|&(e, c)| ((0, e, 0), BigInt::from(c))))
}

/// `Δ_p` from `Δ_{p+2} − (t + t^{−1}) Δ_{p+1} + Δ_p = 0`, with
/// `Δ_0 = t^{−3} − t^{−2} + 1 − t^2 + t^3` and
/// `Δ_1 = t^{−4} − t^{−3} + t^{−1} − 1 + t − t^3 + t^4`, run forward or backward.
pub fn alexander(p: i64) -> AlexanderPoly {
    let d0 = laurent_m(&[(-3, 1), (-2, -1), (0, 1), (2, -1), (3, 1)]);
    let d1 = laurent_m(&[(-4, 1), (-3, -1), (-1, 1), (0, -1), (1, 1), (3, -1), (4, 1)]);
    let s = laurent_m(&[(1, 1), (-1, 1)]);
    let poly = if p >= 0 {
        let (mut a, mut b) = (d0, d1);
        for _ in 0..p {
            let c = s.mul(&b).sub(&a);
            a = b;
            b = c;
        }
        a
    } else {
        // Δ_p = (t + t^{−1}) Δ_{p+1} − Δ_{p+2}
        let (mut a, mut b) = (d0, d1);
        for _ in 0..(-p) {
            let c = s.mul(&a).sub(&b);
            b = a;
            a = c;
        }
        a
    };
    AlexanderPoly { p, poly }
}

/// Outcome of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    /// Human-readable detail (the residual or the unit found).
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, holds: bool, detail: String) -> Self {
        Verdict {
            name: name.to_string(),
            holds,
            detail,
        }
    }
}

/// If `a = u · b` for a unit monomial `u = ±M^k`, returns `(sign, k)`.
fn unit_quotient(a: &TriPoly, b: &TriPoly) -> Option<(i64, i64)> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let (ka, ca) = a.iter().next_back().map(|(k, c)| (*k, c.clone()))?;
    let (kb, cb) = b.iter().next_back().map(|(k, c)| (*k, c.clone()))?;
    if ka.0 != kb.0 || ka.2 != kb.2 || ca.abs() != cb.abs() {
        return None;
    }
    let sign = if ca == cb { 1 } else { -1 };
    let k = ka.1 - kb.1;
    let u = TriPoly::monomial((0, k, 0), BigInt::from(sign));
    (u.mul(b) == *a).then_some((sign, k))
}

fn unit_text(u: Option<(i64, i64)>) -> String {
    match u {
        Some((s, 0)) => format!("{}1", if s < 0 { "-" } else { "" }),
        Some((s, k)) => format!("{}M^{k}", if s < 0 { "-" } else { "" }),
        None => "no unit".to_string(),
    }
}

/// The first loop identity `A(M,1,1) = σ Δ_p(M) b(M,1)` for `p ≠ −3`
/// (`σ` the sequence sign).  The detail reports the unit `u` with
/// `A(M,1,1) = u Δ_p(M) b(M,1)` when one exists.
pub fn check_loop(op: &InhomOperator, p: i64) -> QResult<Verdict> {
    let a = op.specialize(Specialization::L1Q1);
    let b = op.b_at_q1();
    if b.is_zero() {
        return Err(QError::InvalidArgument(format!(
            "b(M,1) vanishes for p = {p}; use the derivative identity"
        )));
    }
    let delta = alexander(p);
    let rhs = delta.in_m().mul(&b);
    let sigma = TriPoly::constant(SEQUENCE_SIGN);
    let holds = a == sigma.mul(&rhs);
    let unit = unit_quotient(&a, &rhs);
    Ok(Verdict::new(
        "loop",
        holds,
        format!(
            "A(M,1,1) = u·Δ_{p}(M)·b(M,1) with u = {}; expected u = {}",
            unit_text(unit),
            SEQUENCE_SIGN
        ),
    ))
}

/// The derivative loop identity used when `A(M,1,1) = b(M,1) = 0`:
/// `A_q(M,1,1)/Δ − A_L(M,1,1) M Δ'/Δ² = σ b_q(M,1)`, checked after
/// multiplying by `Δ²`.
pub fn check_loop_derivative(op: &InhomOperator, p: i64) -> QResult<Verdict> {
    let a0 = op.specialize(Specialization::L1Q1);
    let b0 = op.b_at_q1();
    if !a0.is_zero() || !b0.is_zero() {
        return Err(QError::InvalidArgument(
            "the derivative identity needs A(M,1,1) = b(M,1) = 0".into(),
        ));
    }
    let delta = alexander(p);
    let d = delta.in_m();
    let d_prime = d.d_m();
    let aq = op.specialize(Specialization::DqAtL1Q1);
    let al = op.specialize(Specialization::DlAtL1Q1);
    let bq = op.b_dq_at_q1();
    let m = TriPoly::var_m();
    let lhs = aq.mul(d).sub(&al.mul(&m).mul(&d_prime));
    let rhs = TriPoly::constant(SEQUENCE_SIGN).mul(&bq).mul(&d.mul(d));
    let residual = lhs.sub(&rhs);
    Ok(Verdict::new(
        "loop-derivative",
        residual.is_zero(),
        format!("residual {residual}"),
    ))
}

/// Picks the loop identity applicable to the operator.
pub fn check_loop_auto(op: &InhomOperator, p: i64) -> QResult<Verdict> {
    if op.b_at_q1().is_zero() && op.specialize(Specialization::L1Q1).is_zero() {
        check_loop_derivative(op, p)
    } else {
        check_loop(op, p)
    }
}

/// A classical A-polynomial in `Q[M², L]`.
pub fn classical_in_operator_m(classical: &TriPoly) -> QResult<TriPoly> {
    classical.halve_m()
}

/// AJ specialization `A(M, L, 1) = A_cl(M^{1/2}, L) · ε(M)`, with the classical
/// polynomial given in `Q[M², L]`.  The detail reports the unit relating both
/// sides when the identity holds only up to `±M^k`.
pub fn check_aj(op: &InhomOperator, classical: &TriPoly, eps: &TriPoly) -> QResult<Verdict> {
    let lhs = op.specialize(Specialization::Q1);
    let rhs = classical_in_operator_m(classical)?.mul(eps);
    let holds = lhs == rhs;
    let unit = unit_quotient(&lhs, &rhs);
    Ok(Verdict::new(
        "aj",
        holds,
        format!("A(M,L,1) = u·A_cl(M^(1/2),L)·ε(M) with u = {}", unit_text(unit)),
    ))
}

/// `A(M, L, 1) / ε(M)`: the classical A-polynomial predicted by the operator
/// (in the operator's `M`), or an error when `ε` does not divide.
pub fn aj_quotient(op: &InhomOperator, eps: &TriPoly) -> QResult<TriPoly> {
    op.specialize(Specialization::Q1).exact_div(eps)
}

/// The M-factor `ε_p` with its palindromy exponent `δ_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonFactor {
    pub p: i64,
    pub poly: TriPoly,
    pub delta: i64,
}

impl EpsilonFactor {
    /// The shipped data for `p ∈ {−5, …, 5}`.
    pub fn load(p: i64) -> QResult<Self> {
        Ok(EpsilonFactor {
            p,
            poly: data::epsilon(p)?,
            delta: data::epsilon_delta(p)?,
        })
    }

    /// `M`-degree of `ε_p`.
    pub fn degree(&self) -> i64 {
        self.poly.exponent_ranges().map_or(0, |r| r[1].1)
    }
}

/// `ε(M) / ε(1/M) = −M^δ`, i.e. `ε(M) = −M^δ ε(1/M)`.
pub fn check_epsilon_palindromy(eps: &EpsilonFactor) -> Verdict {
    let reflected = eps.poly.subs_m_power(-1).shift((0, eps.delta, 0));
    let holds = eps.poly == reflected.neg();
    let unit = unit_quotient(&eps.poly, &eps.poly.subs_m_power(-1));
    Verdict::new(
        "epsilon-palindromy",
        holds,
        format!(
            "ε_{}(M)/ε_{}(1/M) = {}; expected -M^{}",
            eps.p,
            eps.p,
            unit_text(unit),
            eps.delta
        ),
    )
}

/// `(min exponent, max exponent, max |coefficient|, Σ |coefficient|)` of a
/// polynomial in `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightStats {
    pub min_exp: i64,
    pub max_exp: i64,
    #[serde(serialize_with = "as_string")]
    pub max_abs_coeff: BigInt,
    #[serde(serialize_with = "as_string")]
    pub abs_coeff_sum: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Height statistics of a Laurent polynomial in `q` (`0` gives all zeros).
pub fn height_stats(f: &LaurentPoly) -> QResult<HeightStats> {
    let terms = f.q_terms()?;
    if terms.is_empty() {
        return Ok(HeightStats {
            min_exp: 0,
            max_exp: 0,
            max_abs_coeff: BigInt::zero(),
            abs_coeff_sum: BigInt::zero(),
        });
    }
    let mut max = BigInt::zero();
    let mut sum = BigInt::zero();
    for (_, c) in &terms {
        let a = c.abs();
        sum += &a;
        if a > max {
            max = a;
        }
    }
    Ok(HeightStats {
        min_exp: terms[0].0,
        max_exp: terms[terms.len() - 1].0,
        max_abs_coeff: max,
        abs_coeff_sum: sum,
    })
}

/// Degree model of `J_{K_2,n}`: maximum degree
/// `δ(n) = 37/8 n² + 3/4 n − 31/8 + ε(n)` with `ε(n) = 1/8, 0, 1/8, 1/2` for
/// `n ≡ 0, 1, 2, 3 (mod 4)`, and minimum degree `δ*(n) = 5(n − 1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DegreeModel;

impl DegreeModel {
    /// The periodic correction `ε(n)`.
    pub fn correction(n: i64) -> Rational {
        let (num, den) = match n.mod_floor(&4) {
            0 => (1, 8),
            1 => (0, 1),
            2 => (1, 8),
            _ => (1, 2),
        };
        Rational::new(num.into(), den.into())
    }

    /// The quadratic part `37/8 n² + 3/4 n − 31/8`.
    pub fn quadratic(n: i64) -> Rational {
        let n = Rational::from_integer(n.into());
        Rational::new(37.into(), 8.into()) * &n * &n + Rational::new(3.into(), 4.into()) * &n
            - Rational::new(31.into(), 8.into())
    }

    /// `δ(n)` as the quasi-polynomial (quadratic part plus correction).
    pub fn delta(n: i64) -> Rational {
        Self::quadratic(n) + Self::correction(n)
    }

    /// `⌊37/8 n² + 3/4 n − 31/8⌋`.
    pub fn delta_floor(n: i64) -> BigInt {
        Self::quadratic(n).floor().to_integer()
    }

    /// The variant with the signs of the linear term and of the correction
    /// flipped, `37/8 n² − 3/4 n − 31/8 − ε(n)`, which is what the computed
    /// polynomials follow.
    pub fn delta_sign_flipped(n: i64) -> Rational {
        let r = Rational::from_integer(n.into());
        Rational::new(37.into(), 8.into()) * &r * &r - Rational::new(3.into(), 4.into()) * &r
            - Rational::new(31.into(), 8.into())
            - Self::correction(n)
    }

    /// `δ*(n) = 5(n − 1)`.
    pub fn delta_star(n: i64) -> i64 {
        5 * (n - 1)
    }
}

/// One row of [`check_degrees`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub n: i64,
    pub min_exp: i64,
    pub max_exp: i64,
    pub delta_star: i64,
    /// `⌊37/8 n² + 3/4 n − 31/8⌋`.
    pub delta_floor: String,
    /// `37/8 n² + 3/4 n − 31/8 + ε(n)` (may be non-integral).
    pub delta_quasi: String,
    /// `37/8 n² − 3/4 n − 31/8 − ε(n)`.
    pub delta_sign_flipped: String,
    pub min_matches: bool,
    pub max_matches: bool,
    pub max_matches_sign_flipped: bool,
}

/// Measured degrees next to the degree model, plus a diagnosis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub rows: Vec<DegreeRow>,
    /// Whether `max_exp − ⌊…⌋` is the same for every row.
    pub constant_max_offset: Option<i64>,
    /// Whether the two expressions of `δ(n)` agree for every row.
    pub formulas_agree: bool,
}

/// Compares the measured extreme exponents of `J_{K,n}` with the degree model
/// (a claim about `K_2`; the measured polynomials are taken as the truth and
/// disagreements are reported, never patched).
pub fn check_degrees(spec: &KnotSpec, ns: impl IntoIterator<Item = i64>) -> QResult<DegreeReport> {
    let mut rows = Vec::new();
    for n in ns {
        let j = colored_jones(spec, n)?;
        let st = height_stats(&j)?;
        rows.push(degree_row(n, &st));
    }
    Ok(summarize_degrees(rows))
}

/// A [`DegreeRow`] from precomputed statistics.
pub fn degree_row(n: i64, st: &HeightStats) -> DegreeRow {
    let floor = DegreeModel::delta_floor(n);
    let quasi = DegreeModel::delta(n);
    DegreeRow {
        n,
        min_exp: st.min_exp,
        max_exp: st.max_exp,
        delta_star: DegreeModel::delta_star(n),
        delta_floor: floor.to_string(),
        delta_quasi: quasi.to_string(),
        delta_sign_flipped: DegreeModel::delta_sign_flipped(n).to_string(),
        min_matches: st.min_exp == DegreeModel::delta_star(n),
        max_matches: BigInt::from(st.max_exp) == floor,
        max_matches_sign_flipped: Rational::from_integer(st.max_exp.into())
            == DegreeModel::delta_sign_flipped(n),
    }
}

/// Aggregates rows into a [`DegreeReport`].
pub fn summarize_degrees(rows: Vec<DegreeRow>) -> DegreeReport {
    let offsets: Vec<Option<i64>> = rows
        .iter()
        .map(|r| {
            (BigInt::from(r.max_exp) - DegreeModel::delta_floor(r.n)).to_i64()
        })
        .collect();
    let constant_max_offset = match offsets.first() {
        Some(Some(o)) if offsets.iter().all(|x| *x == Some(*o)) => Some(*o),
        _ => None,
    };
    let formulas_agree = rows.iter().all(|r| {
        DegreeModel::delta(r.n) == Rational::from_integer(DegreeModel::delta_floor(r.n))
    });
    DegreeReport {
        rows,
        constant_max_offset,
        formulas_agree,
    }
}

/// Everything checkable for one operator, as a structured document.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub p: Option<i64>,
    pub checks: Vec<Verdict>,
}

impl ConsistencyReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Runs palindromy, the applicable loop identity, the AJ specialization (or
/// the `ε`-divisibility fallback) and the `ε` palindromy for an operator of
/// the pretzel knot `K_p`.
pub fn check_operator(op: &InhomOperator, p: i64) -> QResult<ConsistencyReport> {
    let mut checks = Vec::new();
    let pal = op.check_palindromic();
    checks.push(Verdict::new(
        "palindromy",
        pal.verdict,
        format!("t = {} ({}), sign {}, {} unmatched terms", pal.t, pal.parity(), pal.sign, pal.mismatches),
    ));
    checks.push(check_loop_auto(op, p)?);
    if let Ok(eps) = EpsilonFactor::load(p) {
        match data::classical_a(p) {
            Ok(cl) => checks.push(check_aj(op, &cl, &eps.poly)?),
            Err(_) => {
                let q = aj_quotient(op, &eps.poly);
                checks.push(Verdict::new(
                    "aj-divisibility",
                    q.is_ok(),
                    match q {
                        Ok(a) => format!("A(M,L,1)/ε_{p}(M) = {a}"),
                        Err(e) => format!("ε_{p} does not divide A(M,L,1): {e}"),
                    },
                ));
            }
        }
        checks.push(check_epsilon_palindromy(&eps));
    }
    Ok(ConsistencyReport { p: Some(p), checks })
}

/// Whether `Δ_p(1) = ±1`.
pub fn alexander_normalized(p: i64) -> bool {
    alexander(p).at_one().abs().is_one()
}

#[cfg(test)]
mod tests;
