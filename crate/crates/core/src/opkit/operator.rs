//! Inhomogeneous q-difference operators `(P, b)` with
//! `P = Σ_j a_j(M, q) L^j`, acting by `(L f)_n = f_{n+1}`, `(M f)_n = q^n f_n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::expr::{Key, TriPoly};
use crate::error::{QError, QResult};
use crate::fusion::KnotSpec;
use crate::qarith::modular::ModContext;
use crate::qarith::LaurentPoly;

/// File-format tag of serialized operators.
pub const OPERATOR_FORMAT: &str = "qknot-operator/1";

/// An inhomogeneous recurrence `P f = b`.
///
/// `P` is stored as a commutative polynomial whose monomial `q^e M^m L^l` stands
/// for the normally ordered operator `q^e M^m L^l` (all `M` to the left of `L`);
/// `b` has no `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomOperator {
    pub knot: Option<KnotSpec>,
    p: TriPoly,
    b: TriPoly,
}

/// Which specialization [`InhomOperator::specialize`] computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Specialization {
    /// `P(M, L, 1)`
    Q1,
    /// `P(M, 1, q)`
    L1,
    /// `P(M, 1, 1)`
    L1Q1,
    /// `∂P/∂q (M, 1, 1)`
    DqAtL1Q1,
    /// `∂P/∂L (M, 1, 1)`
    DlAtL1Q1,
}

/// Outcome of the palindromy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PalindromyReport {
    /// `2s`, where the index shift is `n → n + s`
    pub t: i64,
    /// sign `±` in `c_{α,β} = ± c_{m−α, l−β}`
    pub sign: i8,
    pub verdict: bool,
    /// Number of terms without a matching partner.
    pub mismatches: usize,
    /// Descriptions of (at most 20) unmatched terms.
    pub counterexamples: Vec<String>,
}

impl PalindromyReport {
    /// The shift `s = t/2` as a float (for display).
    pub fn shift(&self) -> f64 {
        self.t as f64 / 2.0
    }

    /// `"even"` or `"odd"`: the parity of `t = 2s`.
    pub fn parity(&self) -> &'static str {
        if self.t % 2 == 0 {
            "even"
        } else {
            "odd"
        }
    }
}

impl InhomOperator {
    /// Builds an operator from `P` and `b`; `P` must be nonzero, have no negative
    /// `L` powers, and `b` must not contain `L`.
    pub fn new(p: TriPoly, b: TriPoly, knot: Option<KnotSpec>) -> QResult<Self> {
        if p.is_zero() && !b.is_zero() {
            return Err(QError::InvalidArgument("P is zero but b is not".into()));
        }
        if p.iter().any(|(k, _)| k.0 < 0) {
            return Err(QError::InvalidArgument("negative power of L in P".into()));
        }
        if b.iter().any(|(k, _)| k.0 != 0) {
            return Err(QError::InvalidArgument("b must not contain L".into()));
        }
        Ok(InhomOperator { knot, p, b })
    }

    /// Parses `P` and `b` from expression text (`b` may be `"0"`).
    pub fn from_expressions(p: &str, b: &str, knot: Option<KnotSpec>) -> QResult<Self> {
        Self::new(TriPoly::parse(p)?, TriPoly::parse(b)?, knot)
    }

    pub fn p(&self) -> &TriPoly {
        &self.p
    }

    pub fn b(&self) -> &TriPoly {
        &self.b
    }

    /// Order `d` (largest power of `L`).
    pub fn order(&self) -> i64 {
        self.p.iter().map(|(k, _)| k.0).max().unwrap_or(0)
    }

    /// `a_j(M, q)` as a polynomial in `M`, `q`.
    pub fn coefficient(&self, j: i64) -> TriPoly {
        TriPoly::from_terms(
            self.p
                .iter()
                .filter(|(k, _)| k.0 == j)
                .map(|(k, c)| ((0, k.1, k.2), c.clone())),
        )
    }

    /// `P` terms `(l, m, e, c)` sorted descending by `(l, m, e)`.
    pub fn p_terms(&self) -> Vec<(i64, i64, i64, BigInt)> {
        self.p
            .iter()
            .rev()
            .map(|(k, c)| (k.0, k.1, k.2, c.clone()))
            .collect()
    }

    /// `b` terms `(m, e, c)` sorted descending by `(m, e)`.
    pub fn b_terms(&self) -> Vec<(i64, i64, BigInt)> {
        self.b.iter().rev().map(|(k, c)| (k.1, k.2, c.clone())).collect()
    }

    /// `(L-degree, M-degree, q-degree, largest |coefficient|)` of `P`.
    ///
    /// L- and M-degrees are spans `max − min`.  The q-degree is the largest
    /// q-exponent of `P` when the operator is rewritten to act on `J_{K,d}`
    /// indexed by the dimension `d = n + 1` (i.e. `M → q^{−1} M`) and the
    /// common power of `q` in `(P, b)` is removed.
    pub fn degrees(&self) -> (i64, i64, i64, BigInt) {
        match self.p.exponent_ranges() {
            Some(r) => {
                let emin = self
                    .p
                    .iter()
                    .chain(self.b.iter())
                    .map(|(k, _)| k.2 - k.1)
                    .min()
                    .unwrap();
                let emax = self.p.iter().map(|(k, _)| k.2 - k.1).max().unwrap();
                (r[0].1 - r[0].0, r[1].1 - r[1].0, emax - emin, self.p.height())
            }
            None => (0, 0, 0, BigInt::zero()),
        }
    }

    /// Span of the q-exponents of `P` in the stored (color-indexed) form.
    pub fn q_span(&self) -> i64 {
        self.p.exponent_ranges().map_or(0, |r| r[2].1 - r[2].0)
    }

    /// Canonical form: common factors `q^k`, `M^k` and the integer content of
    /// `(P, b)` removed, and the coefficient of the lexicographically greatest
    /// `(l, m, e)` monomial of `P` made positive.
    pub fn normalized(&self) -> InhomOperator {
        if self.p.is_zero() {
            return self.clone();
        }
        let mut mmin = i64::MAX;
        let mut emin = i64::MAX;
        for (k, _) in self.p.iter().chain(self.b.iter()) {
            mmin = mmin.min(k.1);
            emin = emin.min(k.2);
        }
        let g = self.p.content().gcd(&self.b.content());
        let (_, lead) = self.p.iter().next_back().unwrap();
        let g = if lead.is_negative() { -g } else { g };
        let fix = |t: &TriPoly| {
            TriPoly::from_terms(t.iter().map(|(k, c)| ((k.0, k.1 - mmin, k.2 - emin), c / &g)))
        };
        InhomOperator {
            knot: self.knot,
            p: fix(&self.p),
            b: fix(&self.b),
        }
    }

    /// Whether two operators agree after canonical normalization (the knot tag is ignored).
    pub fn canonically_equal(&self, other: &InhomOperator) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.p == b.p && a.b == b.b
    }

    /// `Σ_j a_j(q^n, q) f_{n+j} − b(q^n, q)`; zero iff the recurrence holds at `n`.
    pub fn apply<F>(&self, oracle: F, n: i64) -> QResult<LaurentPoly>
    where
        F: Fn(i64) -> QResult<LaurentPoly>,
    {
        let mut out = LaurentPoly::zero();
        for j in 0..=self.order() {
            let a = self.coefficient(j);
            if a.is_zero() {
                continue;
            }
            let f = oracle(n + j)?;
            out = &out + &(&eval_mn(&a, n) * &f);
        }
        Ok(&out - &eval_mn(&self.b, n))
    }

    /// The residual of [`apply`](Self::apply) modulo a prime, from modular values
    /// `f_{n+j}(q0)`.
    pub fn apply_mod<F>(&self, oracle: F, n: i64, ctx: &ModContext) -> QResult<u64>
    where
        F: Fn(i64) -> QResult<u64>,
    {
        let f = ctx.field();
        let mut out = 0u64;
        for j in 0..=self.order() {
            let a = self.coefficient(j);
            if a.is_zero() {
                continue;
            }
            let v = oracle(n + j)?;
            out = f.add(out, f.mul(eval_mn_mod(&a, n, ctx), v));
        }
        Ok(f.sub(out, eval_mn_mod(&self.b, n, ctx)))
    }

    /// Specializations of `P` used by the AJ and loop identities.
    pub fn specialize(&self, at: Specialization) -> TriPoly {
        match at {
            Specialization::Q1 => self.p.at_q1(),
            Specialization::L1 => self.p.at_l1(),
            Specialization::L1Q1 => self.p.at_l1().at_q1(),
            Specialization::DqAtL1Q1 => self.p.d_q().at_l1().at_q1(),
            Specialization::DlAtL1Q1 => self.p.d_l().at_l1().at_q1(),
        }
    }

    /// `b(M, 1)`.
    pub fn b_at_q1(&self) -> TriPoly {
        self.b.at_q1()
    }

    /// `∂b/∂q (M, 1)`.
    pub fn b_dq_at_q1(&self) -> TriPoly {
        self.b.d_q().at_q1()
    }

    /// Tests `c̃_{α,β} = ± c̃_{m−α, l−β}` for the coefficients `c̃` of
    /// `(P, b)` after the shift `n → n + s` (i.e. `M → q^s M`), where `m` and `l`
    /// are the `M`- and `L`-extents of `P`.  Shifts `s = t/2` with
    /// `|t| ≤ 2 (M-degree + L-degree)` are searched, starting at the natural
    /// candidate `s = −(l+2)/2` (the recurrence sequence `f_n = σ J_{n+1}` is
    /// symmetric about `n = −1`); the first success is reported, otherwise the
    /// candidate with the fewest unmatched terms.
    pub fn check_palindromic(&self) -> PalindromyReport {
        let Some(r) = self.p.exponent_ranges() else {
            return PalindromyReport {
                t: 0,
                sign: 1,
                verdict: true,
                mismatches: 0,
                counterexamples: Vec::new(),
            };
        };
        let lsum = r[0].0 + r[0].1;
        let msum = r[1].0 + r[1].1;
        let order = r[0].1 - r[0].0;
        let window = 2 * ((r[1].1 - r[1].0) + order);
        let mut ts: Vec<i64> = (-window..=window).collect();
        ts.sort_by_key(|t| ((t + order + 2).abs(), *t));
        let mut best: Option<PalindromyReport> = None;
        for t in ts {
            for sign in [1i8, -1] {
                let (mismatches, counterexamples) = self.palindromy_mismatches(t, sign, lsum, msum);
                let rep = PalindromyReport {
                    t,
                    sign,
                    verdict: mismatches == 0,
                    mismatches,
                    counterexamples,
                };
                if rep.verdict {
                    return rep;
                }
                if best
                    .as_ref()
                    .map_or(true, |b| rep.mismatches < b.mismatches)
                {
                    best = Some(rep);
                }
            }
        }
        best.unwrap()
    }

    fn palindromy_mismatches(&self, t: i64, sign: i8, lsum: i64, msum: i64) -> (usize, Vec<String>) {
        let mut bad = Vec::new();
        let mut count = 0usize;
        // doubled q-exponent after M → q^{t/2} M: 2e + t·m
        let mut check = |poly: &TriPoly, what: &str, bad: &mut Vec<String>| {
            let shifted: std::collections::HashMap<Key, &BigInt> = poly
                .iter()
                .map(|(k, c)| ((k.0, k.1, 2 * k.2 + t * k.1), c))
                .collect();
            let lrefl = if what == "P" { lsum } else { 0 };
            for (&(l, m, e2), c) in &shifted {
                let partner = (lrefl - l, msum - m, e2);
                let want: BigInt = if sign > 0 { (*c).clone() } else { -(*c).clone() };
                match shifted.get(&partner) {
                    Some(&d) if *d == want => {}
                    _ => {
                        count += 1;
                        if bad.len() < 20 {
                            bad.push(format!(
                                "{what}: coefficient {c} at (L^{l}, M^{m}, q^{}) has no partner {want} at (L^{}, M^{}, q^{})",
                                e2 as f64 / 2.0,
                                partner.0,
                                partner.1,
                                partner.2 as f64 / 2.0
                            ));
                        }
                    }
                }
            }
        };
        check(&self.p, "P", &mut bad);
        check(&self.b, "b", &mut bad);
        (count, bad)
    }

    /// Structured representation in the `qknot-operator/1` format.
    pub fn to_json(&self) -> Value {
        let p: Vec<Value> = self
            .p_terms()
            .into_iter()
            .map(|(l, m, e, c)| json!([l, m, e, c.to_string()]))
            .collect();
        let b: Vec<Value> = self
            .b_terms()
            .into_iter()
            .map(|(m, e, c)| json!([m, e, c.to_string()]))
            .collect();
        json!({
            "format": OPERATOR_FORMAT,
            "knot": self.knot,
            "order": self.order(),
            "P": p,
            "b": b,
        })
    }

    /// Pretty-printed `qknot-operator/1` document.
    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    /// Reads a `qknot-operator/1` document.
    pub fn parse_file(text: &str) -> QResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| QError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_json(&v)
    }

    /// Reads the structured representation.
    pub fn from_json(v: &Value) -> QResult<Self> {
        let bad = |m: &str| QError::Parse {
            line: 0,
            column: 0,
            message: m.to_string(),
        };
        if v.get("format").and_then(Value::as_str) != Some(OPERATOR_FORMAT) {
            return Err(bad("missing or unsupported format tag"));
        }
        let knot: Option<KnotSpec> = match v.get("knot") {
            None | Some(Value::Null) => None,
            Some(k) => Some(serde_json::from_value(k.clone()).map_err(|e| bad(&format!("knot: {e}")))?),
        };
        let int = |x: &Value| x.as_i64().ok_or_else(|| bad("exponent is not an integer"));
        let coef = |x: &Value| -> QResult<BigInt> {
            x.as_str()
                .ok_or_else(|| bad("coefficient must be a decimal string"))?
                .parse::<BigInt>()
                .map_err(|_| bad("coefficient is not an integer"))
        };
        let mut p = TriPoly::zero();
        for t in v.get("P").and_then(Value::as_array).ok_or_else(|| bad("missing P"))? {
            let a = t.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("P term must be [l,m,e,\"c\"]"))?;
            p.add_term((int(&a[0])?, int(&a[1])?, int(&a[2])?), coef(&a[3])?);
        }
        let mut b = TriPoly::zero();
        for t in v.get("b").and_then(Value::as_array).ok_or_else(|| bad("missing b"))? {
            let a = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("b term must be [m,e,\"c\"]"))?;
            b.add_term((0, int(&a[0])?, int(&a[1])?), coef(&a[2])?);
        }
        let op = Self::new(p, b, knot)?;
        if let Some(d) = v.get("order").and_then(Value::as_i64) {
            if d != op.order() {
                return Err(bad("declared order does not match P"));
            }
        }
        Ok(op)
    }
}

impl fmt::Display for InhomOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P = {}\nb = {}", self.p, self.b)
    }
}

/// `a(q^n, q)` for a polynomial `a(M, q)`, as a Laurent polynomial in `t`.
fn eval_mn(a: &TriPoly, n: i64) -> LaurentPoly {
    LaurentPoly::from_terms(a.iter().map(|(k, c)| (8 * (k.2 + n * k.1), c.clone())))
}

/// `a(q0^n, q0) mod m`.
fn eval_mn_mod(a: &TriPoly, n: i64, ctx: &ModContext) -> u64 {
    let f = ctx.field();
    let m = BigInt::from(ctx.modulus());
    let mut out = 0u64;
    for (k, c) in a.iter() {
        let r = c.mod_floor(&m);
        let r = u64::try_from(r).expect("reduced residue fits");
        out = f.add(out, f.mul(r, ctx.q_pow(k.2 + n * k.1)));
    }
    out
}

/// The identity-like operator `L − 1` with `b = 0`, handy in tests.
pub fn shift_minus_one() -> InhomOperator {
    InhomOperator::new(
        TriPoly::from_terms([((1, 0, 0), BigInt::one()), ((0, 0, 0), -BigInt::one())]),
        TriPoly::zero(),
        None,
    )
    .unwrap()
}
