//! The sequence on which knot operators act.
//!
//! Operators are written in the color index `n` of the state sum (`M = q^n`
//! multiplies the term of dimension `n + 1`), and the recurrence `P f = b`
//! holds for `f_n = σ · J_{K, n+1}(q)` with the global sign `σ = −1`
//! ([`SEQUENCE_SIGN`]).  Both choices are fixed by the published operators for
//! `K_{±2}`, which satisfy `P f = b` for every integer `n` exactly in this
//! normalization (with `J_{K,−d} = J_{K,d}`; the value at `d = 0` never
//! enters).  Consequently `f` is symmetric about `n = −1`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::QResult;
use crate::fusion::{colored_jones, KnotSpec, ModJonesEvaluator};
use crate::qarith::LaurentPoly;

/// Global sign `σ` of the recurrence sequence relative to `J`.
pub const SEQUENCE_SIGN: i64 = -1;

/// Representation dimension whose colored Jones polynomial gives `f_n`
/// (palindromic extension: `J_{−d} = J_d`).
pub fn jones_dimension(n: i64) -> i64 {
    (n + 1).abs()
}

/// Converts a colored Jones polynomial `J_{K,n+1}` to the sequence term `f_n`.
pub fn term_from_jones(j: LaurentPoly) -> LaurentPoly {
    if SEQUENCE_SIGN < 0 {
        -j
    } else {
        j
    }
}

/// Converts `J_{K,n+1}(q0) mod m` to `f_n(q0) mod m`.
pub fn term_from_jones_mod(j: u64, m: u64) -> u64 {
    if SEQUENCE_SIGN < 0 && j != 0 {
        m - j
    } else {
        j
    }
}

/// Memoized exact sequence `f_n = σ J_{K,n+1}` of a knot.
pub struct JonesSequence {
    spec: KnotSpec,
    cache: Mutex<HashMap<i64, LaurentPoly>>,
}

impl JonesSequence {
    pub fn new(spec: KnotSpec) -> Self {
        JonesSequence {
            spec,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Uses a caller-supplied source of `J_{K,d}` (e.g. a disk cache).
    pub fn with_values<I: IntoIterator<Item = (i64, LaurentPoly)>>(spec: KnotSpec, known: I) -> Self {
        let s = Self::new(spec);
        s.cache.lock().unwrap().extend(known);
        s
    }

    pub fn spec(&self) -> &KnotSpec {
        &self.spec
    }

    /// `J_{K,d}` (memoized).
    pub fn jones(&self, d: i64) -> QResult<LaurentPoly> {
        let d = d.abs();
        if let Some(v) = self.cache.lock().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let v = colored_jones(&self.spec, d)?;
        self.cache.lock().unwrap().insert(d, v.clone());
        Ok(v)
    }

    /// `f_n`.
    pub fn term(&self, n: i64) -> QResult<LaurentPoly> {
        Ok(term_from_jones(self.jones(jones_dimension(n))?))
    }
}

/// `f_n(q0) mod m` from a modular evaluator (built for dimensions up to at
/// least `|n + 1|`).
pub fn term_mod(ev: &ModJonesEvaluator, n: i64) -> QResult<u64> {
    let j = ev.value(jones_dimension(n))?;
    Ok(term_from_jones_mod(j, ev.context().modulus()))
}
