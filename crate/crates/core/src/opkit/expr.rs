//! Commutative polynomials in `L`, `M`, `q` with integer coefficients and an
//! expression parser for them.
//!
//! Grammar (whitespace insignificant):
//! ```text
//! expr   := [+|-] term { (+|-) term }
//! term   := power { [*] power }          -- juxtaposition multiplies
//! power  := atom [ ^ exponent ]
//! atom   := integer | q | M | L | ( expr ) | { expr }
//! exponent := [+|-] integer | { [+|-] integer } | ( [+|-] integer )
//! ```
//! A tolerant pre-pass blanks common typesetting artifacts (`\\`, `\left`,
//! `\right`, `\,`, `\;`, `&`) and maps `\cdot` to `*`, keeping column positions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, QResult};

/// Exponent key `(l, m, e)` of the monomial `q^e M^m L^l`.
pub type Key = (i64, i64, i64);

/// A polynomial `Σ c · q^e M^m L^l`; negative exponents of `q` and `M` are allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TriPoly {
    terms: BTreeMap<Key, BigInt>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0, 0), BigInt::one())
    }

    /// `c · q^e M^m L^l` for `key = (l, m, e)`.
    pub fn monomial(key: Key, c: BigInt) -> Self {
        let mut p = TriPoly::zero();
        p.add_term(key, c);
        p
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial((0, 0, 0), c.into())
    }

    pub fn var_q() -> Self {
        Self::monomial((0, 0, 1), BigInt::one())
    }

    pub fn var_m() -> Self {
        Self::monomial((0, 1, 0), BigInt::one())
    }

    pub fn var_l() -> Self {
        Self::monomial((1, 0, 0), BigInt::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Key, BigInt)>>(it: I) -> Self {
        let mut p = TriPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    /// Adds `c` to the coefficient at `key`, dropping zeros.
    pub fn add_term(&mut self, key: Key, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(l, m, e)` order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Key, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: Key) -> BigInt {
        self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, o: &TriPoly) -> TriPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &TriPoly) -> TriPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &TriPoly) -> TriPoly {
        let mut r = TriPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> TriPoly {
        TriPoly::from_terms(self.terms.iter().map(|(k, x)| (*k, x * c)))
    }

    pub fn pow(&self, k: u32) -> TriPoly {
        let mut r = TriPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies by the monomial `q^e M^m L^l`.
    pub fn shift(&self, (l, m, e): Key) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| ((k.0 + l, k.1 + m, k.2 + e), c.clone()))
                .collect(),
        }
    }

    /// If `self` is a single monomial, its key and coefficient.
    pub fn as_monomial(&self) -> Option<(Key, BigInt)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((*k, c.clone()))
        } else {
            None
        }
    }

    /// gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Minimum and maximum of each exponent, `[(lmin,lmax),(mmin,mmax),(emin,emax)]`.
    pub fn exponent_ranges(&self) -> Option<[(i64, i64); 3]> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut r = [(first.0, first.0), (first.1, first.1), (first.2, first.2)];
        for k in it {
            for (i, v) in [k.0, k.1, k.2].into_iter().enumerate() {
                r[i].0 = r[i].0.min(v);
                r[i].1 = r[i].1.max(v);
            }
        }
        Some(r)
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Substitutes `q = 1`.
    pub fn at_q1(&self) -> TriPoly {
        TriPoly::from_terms(self.terms.iter().map(|(k, c)| ((k.0, k.1, 0), c.clone())))
    }

    /// Substitutes `L = 1`.
    pub fn at_l1(&self) -> TriPoly {
        TriPoly::from_terms(self.terms.iter().map(|(k, c)| ((0, k.1, k.2), c.clone())))
    }

    /// Substitutes `M = 1`.
    pub fn at_m1(&self) -> TriPoly {
        TriPoly::from_terms(self.terms.iter().map(|(k, c)| ((k.0, 0, k.2), c.clone())))
    }

    /// Partial derivative in `q`.
    pub fn d_q(&self) -> TriPoly {
        TriPoly::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| ((k.0, k.1, k.2 - 1), c * BigInt::from(k.2))),
        )
    }

    /// Partial derivative in `L`.
    pub fn d_l(&self) -> TriPoly {
        TriPoly::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| ((k.0 - 1, k.1, k.2), c * BigInt::from(k.0))),
        )
    }

    /// Partial derivative in `M`.
    pub fn d_m(&self) -> TriPoly {
        TriPoly::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| ((k.0, k.1 - 1, k.2), c * BigInt::from(k.1))),
        )
    }

    /// Substitutes `M → M^k` (`k` may be negative).
    pub fn subs_m_power(&self, k: i64) -> TriPoly {
        TriPoly::from_terms(self.terms.iter().map(|(key, c)| ((key.0, key.1 * k, key.2), c.clone())))
    }

    /// Halves all `M` exponents; fails if any is odd.
    pub fn halve_m(&self) -> QResult<TriPoly> {
        if self.terms.keys().any(|k| k.1 % 2 != 0) {
            return Err(QError::InvalidArgument(
                "polynomial is not a polynomial in M^2".into(),
            ));
        }
        Ok(TriPoly::from_terms(
            self.terms.iter().map(|(k, c)| ((k.0, k.1 / 2, k.2), c.clone())),
        ))
    }

    /// Exact division by a nonzero polynomial, by repeated elimination of the
    /// lexicographically greatest term.
    pub fn exact_div(&self, d: &TriPoly) -> QResult<TriPoly> {
        let (dk, dc) = d
            .terms
            .iter()
            .next_back()
            .map(|(k, c)| (*k, c.clone()))
            .ok_or_else(|| QError::InvalidArgument("division by zero polynomial".into()))?;
        if self.is_zero() {
            return Ok(TriPoly::zero());
        }
        // Exponent ranges are additive in every variable, which bounds the
        // quotient and guarantees termination.
        let (sr, dr) = (self.exponent_ranges().unwrap(), d.exponent_ranges().unwrap());
        let lo = [sr[0].0 - dr[0].0, sr[1].0 - dr[1].0, sr[2].0 - dr[2].0];
        let hi = [sr[0].1 - dr[0].1, sr[1].1 - dr[1].1, sr[2].1 - dr[2].1];
        let mut rem = self.clone();
        let mut quo = TriPoly::zero();
        while let Some((rk, rc)) = rem.terms.iter().next_back().map(|(k, c)| (*k, c.clone())) {
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return Err(QError::InexactDivision("coefficient not divisible".into()));
            }
            let qk = (rk.0 - dk.0, rk.1 - dk.1, rk.2 - dk.2);
            let inside = [qk.0, qk.1, qk.2]
                .iter()
                .enumerate()
                .all(|(i, &v)| lo[i] <= v && v <= hi[i]);
            if !inside || qk.0 < 0 {
                return Err(QError::InexactDivision("remainder is nonzero".into()));
            }
            let t = TriPoly::monomial(qk, qc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
            if quo.len() > 1_000_000 {
                return Err(QError::InexactDivision("quotient does not terminate".into()));
            }
        }
        Ok(quo)
    }

    /// Parses an expression in the grammar above.
    pub fn parse(text: &str) -> QResult<TriPoly> {
        Parser::new(text).parse_all()
    }
}

impl fmt::Display for TriPoly {
    /// Expanded form, terms in descending `(l, m, e)` order, e.g. `3*q^2*M*L^2-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, m, e), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (name, k) in [("q", *e), ("M", *m), ("L", *l)] {
                match k {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{k}")),
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(char),
    Op(char),
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    err: Option<QError>,
    end: (usize, usize),
}

fn preprocess(text: &str) -> String {
    let mut s = text.to_string();
    for pat in ["\\\\", "\\left", "\\right", "\\,", "\\;", "\\!", "&"] {
        s = s.replace(pat, &" ".repeat(pat.len()));
    }
    s.replace("\\cdot", "*    ")
}

impl Parser {
    fn new(text: &str) -> Parser {
        let text = preprocess(text);
        let mut toks = Vec::new();
        let mut err = None;
        let (mut line, mut col) = (1usize, 1usize);
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(digits.parse().unwrap()), line, col));
                col += i - start;
                continue;
            }
            match c {
                'q' | 'M' | 'L' => toks.push((Tok::Sym(c), line, col)),
                '+' | '-' | '*' | '^' | '(' | ')' | '{' | '}' => toks.push((Tok::Op(c), line, col)),
                _ => {
                    if err.is_none() {
                        err = Some(QError::Parse {
                            line,
                            column: col,
                            message: format!("unexpected character '{c}'"),
                        });
                    }
                }
            }
            col += 1;
            i += 1;
        }
        Parser {
            toks,
            pos: 0,
            err,
            end: (line, col),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> QResult<T> {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or(self.end);
        Err(QError::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn parse_all(mut self) -> QResult<TriPoly> {
        if let Some(e) = self.err.take() {
            return Err(e);
        }
        if self.toks.is_empty() {
            return self.error("empty expression");
        }
        let v = self.expr()?;
        if self.pos != self.toks.len() {
            return self.error("unexpected token");
        }
        Ok(v)
    }

    fn expr(&mut self) -> QResult<TriPoly> {
        let mut acc = TriPoly::zero();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Op('+')) => self.pos += 1,
            Some(Tok::Op('-')) => {
                sign = -1;
                self.pos += 1
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some(Tok::Op('+')) => {
                    sign = 1;
                    self.pos += 1
                }
                Some(Tok::Op('-')) => {
                    sign = -1;
                    self.pos += 1
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> QResult<TriPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Int(_)) | Some(Tok::Sym(_)) | Some(Tok::Op('(')) | Some(Tok::Op('{')) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> QResult<TriPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        match base.as_monomial() {
            Some((k, c)) if c.abs().is_one() && k.0 == 0 => {
                Ok(TriPoly::monomial((0, k.1 * e, k.2 * e), c.pow((-e) as u32)))
            }
            _ => self.error("negative powers are only allowed for monomials in q and M"),
        }
    }

    fn exponent(&mut self) -> QResult<i64> {
        let close = match self.peek() {
            Some(Tok::Op('{')) => Some('}'),
            Some(Tok::Op('(')) => Some(')'),
            _ => None,
        };
        if close.is_some() {
            self.pos += 1;
        }
        let mut sign = 1i64;
        match self.peek() {
            Some(Tok::Op('-')) => {
                sign = -1;
                self.pos += 1
            }
            Some(Tok::Op('+')) => self.pos += 1,
            _ => {}
        }
        let v = match self.peek() {
            Some(Tok::Int(v)) => {
                let v = i64::try_from(v.clone()).or_else(|_| self.error("exponent too large"))?;
                self.pos += 1;
                v
            }
            _ => return self.error("expected an integer exponent"),
        };
        if v > 100_000 {
            return self.error("exponent too large");
        }
        if let Some(c) = close {
            if self.peek() != Some(&Tok::Op(c)) {
                return self.error(format!("expected '{c}'"));
            }
            self.pos += 1;
        }
        Ok(sign * v)
    }

    fn atom(&mut self) -> QResult<TriPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(TriPoly::constant(v))
            }
            Some(Tok::Sym(c)) => {
                self.pos += 1;
                Ok(match c {
                    'q' => TriPoly::var_q(),
                    'M' => TriPoly::var_m(),
                    _ => TriPoly::var_l(),
                })
            }
            Some(Tok::Op(open @ ('(' | '{'))) => {
                self.pos += 1;
                let v = self.expr()?;
                let close = if open == '(' { ')' } else { '}' };
                if self.peek() != Some(&Tok::Op(close)) {
                    return self.error(format!("expected '{close}'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => self.error("expected a number, a variable or '('"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> TriPoly {
        TriPoly::parse(s).unwrap()
    }

    #[test]
    fn expands_products() {
        // q^6 M^2 (q^2 M + 1) = q^8 M^3 + q^6 M^2
        let v = p("q^6*M^2*(q^2*M+1)");
        assert_eq!(v.len(), 2);
        assert_eq!(v.coeff((0, 3, 8)), BigInt::from(1));
        assert_eq!(v.coeff((0, 2, 6)), BigInt::from(1));
        assert_eq!(p("(q-1) (q+1)"), p("q^2-1"));
        assert_eq!(p("2 q^{3} M"), p("2*q^3*M"));
        assert_eq!(p("-(-1+M)^3 (1+M)^2"), p("-(M-1)*(M-1)*(M-1)*(M+1)*(M+1)"));
        assert_eq!(p("q^-2*q^2"), TriPoly::one());
        assert_eq!(p("q^{-2}"), TriPoly::monomial((0, 0, -2), BigInt::one()));
        assert_eq!(p("L^2 \\\\ + \\left( M \\right)"), p("L^2+M"));
    }

    #[test]
    fn reports_errors_with_positions() {
        match TriPoly::parse("q +\n  x") {
            Err(QError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match TriPoly::parse("(q+1") {
            Err(QError::Parse { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(TriPoly::parse("(q+1)^-1").is_err());
        assert!(TriPoly::parse("").is_err());
        assert!(TriPoly::parse("q^").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3*q^2*M*L^2-1", "0", "-q^-3+M^-1*L", "q^8 M^3 - 7 L + 2"] {
            let v = p(s);
            assert_eq!(p(&v.to_string()), v);
        }
    }

    #[test]
    fn specializations_and_division() {
        let v = p("(q^2 M - 1)(L - q)");
        assert_eq!(v.at_q1(), p("(M-1)(L-1)"));
        assert_eq!(v.at_l1(), p("(q^2 M - 1)(1-q)"));
        assert_eq!(v.d_l(), p("q^2 M - 1"));
        assert_eq!(v.exact_div(&p("L-q")).unwrap(), p("q^2 M - 1"));
        assert!(v.exact_div(&p("L-2")).is_err());
        assert_eq!(p("M^4 + 2 M^2").halve_m().unwrap(), p("M^2 + 2 M"));
        assert!(p("M^3").halve_m().is_err());
    }
}
