//! The trivariate ansatz solved from the exact q-expansion of the equations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg::{dot, Echelon};
use super::modular::{assemble, verify_held_out, SequenceOracle};
use super::ratrec;
use super::{AnsatzKind, GuessConfig, GuessResult, Member, Provenance, StructureSet, Unknown};
use crate::error::{QError, QResult};
use crate::fusion::KnotSpec;
use crate::qarith::{word_primes, Fp, LaurentPoly, ModContext};

/// Exact sequence values `f_0, …, f_N` used as an oracle for held-out checks.
struct ValuesOracle<'a> {
    values: &'a [LaurentPoly],
}

impl SequenceOracle for ValuesOracle<'_> {
    fn values_mod(&self, ctx: &ModContext, lo: i64, hi: i64) -> QResult<Vec<u64>> {
        (lo..=hi)
            .map(|n| {
                self.values
                    .get(n as usize)
                    .ok_or_else(|| QError::InvalidArgument(format!("no value for index {n}")))?
                    .eval_mod(ctx)
            })
            .collect()
    }

    fn exact(&self, n: i64) -> Option<QResult<LaurentPoly>> {
        Some(
            self.values
                .get(usize::try_from(n).ok()?)
                .cloned()
                .ok_or_else(|| QError::InvalidArgument(format!("no value for index {n}"))),
        )
    }
}

/// Dense q-expansion `(min exponent, integer coefficients)` of each value.
fn dense_values(values: &[LaurentPoly]) -> QResult<Vec<(i64, Vec<BigInt>)>> {
    values.iter().map(|v| v.q_dense()).collect()
}

/// All equations of the system as sparse-free closures over `(n, E)`.
struct Rows<'a> {
    unknowns: &'a [Unknown],
    dense: &'a [(i64, Vec<BigInt>)],
}

impl Rows<'_> {
    /// Exponent range of the equation at index `n`.
    fn range(&self, n: i64) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for u in self.unknowns {
            for m in &u.members {
                let (a, g, off, len) = match *m {
                    Member::P { alpha, beta, gamma, .. } => {
                        let (min, c) = &self.dense[(n + beta) as usize];
                        if c.is_empty() {
                            continue;
                        }
                        (alpha, gamma, *min, c.len() as i64)
                    }
                    Member::B { alpha, gamma, .. } => (alpha, gamma, 0, 1),
                };
                lo = lo.min(g + n * a + off);
                hi = hi.max(g + n * a + off + len - 1);
            }
        }
        (lo, hi)
    }

    /// The equation "coefficient of q^e at index n" modulo `f`'s prime.
    fn row(&self, f: &Fp, n: i64, e: i64, out: &mut [u64]) {
        for (slot, u) in out.iter_mut().zip(self.unknowns) {
            let mut s = 0u64;
            for m in &u.members {
                let (v, sign) = match *m {
                    Member::P { alpha, beta, gamma, sign } => {
                        let (min, c) = &self.dense[(n + beta) as usize];
                        let k = e - gamma - n * alpha - min;
                        if k < 0 || k >= c.len() as i64 {
                            continue;
                        }
                        (big_mod(&c[k as usize], f.modulus()), sign)
                    }
                    Member::B { alpha, gamma, sign } => {
                        if e != gamma + n * alpha {
                            continue;
                        }
                        (f.neg(1), sign)
                    }
                };
                s = if sign > 0 { f.add(s, v) } else { f.sub(s, v) };
            }
            *slot = s;
        }
    }
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(r).unwrap()
}

/// Solves modulo one prime; returns (nullspace dimension, free column, vector).
fn solve_prime(rows: &Rows, ns: &[i64], ncols: usize, prime: u64) -> QResult<(usize, usize, Vec<u64>)> {
    let f = Fp::new(prime);
    let mut ech = Echelon::new(f, ncols);
    let mut buf = vec![0u64; ncols];
    let all: Vec<(i64, i64)> = ns
        .iter()
        .flat_map(|&n| {
            let (lo, hi) = rows.range(n);
            (lo..=hi).map(move |e| (n, e))
        })
        .collect();
    // insert rows until the rank has not grown for a while, then test the
    // candidate nullspace against the remaining rows and absorb violators
    let mut idle = 0usize;
    let mut pos = 0usize;
    while pos < all.len() && (idle < 64 || ech.rank() == 0) {
        let (n, e) = all[pos];
        rows.row(&f, n, e, &mut buf);
        if ech.insert(&buf) {
            idle = 0;
        } else {
            idle += 1;
        }
        pos += 1;
    }
    loop {
        let basis = ech.nullspace();
        if basis.is_empty() {
            return Err(QError::Reconstruction(
                "the system has only the zero solution: the structure set is too small".into(),
            ));
        }
        let mut violated = false;
        for &(n, e) in &all[pos..] {
            rows.row(&f, n, e, &mut buf);
            if basis.iter().any(|v| dot(&f, &buf, v) != 0) {
                ech.insert(&buf);
                violated = true;
            }
        }
        if !violated {
            let free = ech.free_columns();
            return Ok((free.len(), free[0], ech.null_vector(free[0])));
        }
    }
}

/// Guesses `(P, b)` with the trivariate ansatz from exact values
/// `values[n] = f_n` (`n = 0, 1, …`).
///
/// Every equation "coefficient of `q^E` in `Σ c_{α,β,γ} q^{γ+nα} g_{n+β} −
/// Σ d_{α,γ} q^{γ+nα}`" over the training indices is used.  The rational
/// system is solved modulo word primes (canonical nullspace vector: smallest
/// free column in the `(β, α, γ)` order, normalized to one there), lifted by
/// Chinese remaindering and rational reconstruction until two successive
/// prime sets agree, and the result is then checked exactly on every
/// training and held-out index.
pub fn guess_flat(
    values: &[LaurentPoly],
    sset: &StructureSet,
    cfg: &GuessConfig,
    knot: Option<KnotSpec>,
) -> QResult<GuessResult> {
    if sset.kind != AnsatzKind::Trivariate {
        return Err(QError::InvalidArgument("guess_flat needs a trivariate structure set".into()));
    }
    if sset.symmetry.is_some() {
        return Err(QError::InvalidArgument(
            "the symmetric reduction is only supported by the bivariate ansatz".into(),
        ));
    }
    let unknowns = sset.unknowns();
    if unknowns.is_empty() {
        return Err(QError::InvalidArgument("empty structure set".into()));
    }
    let order = sset.order();
    let s = cfg.shift;
    // g_n = f_{n+s} for n ≥ max(0, −s)
    let g0 = (-s).max(0);
    let gvals: Vec<LaurentPoly> = values.iter().skip((g0 + s) as usize).cloned().collect();
    let dense_all = dense_values(&gvals)?;
    // pad so that g index = position + g0
    let mut dense = vec![(0i64, Vec::new()); g0 as usize];
    dense.extend(dense_all);
    let first = g0 + cfg.held_out as i64;
    let last = dense.len() as i64 - 1 - order;
    if last < first {
        return Err(QError::InvalidArgument(format!(
            "{} values are too few for order {order} with {} held out",
            values.len(),
            cfg.held_out
        )));
    }
    let ns: Vec<i64> = (first..=last).collect();
    let rows = Rows { unknowns: &unknowns, dense: &dense };
    let mut primes = cfg.primes.clone();
    let mut images: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut reference: Option<(usize, usize)> = None;
    let mut prev: Option<Vec<BigInt>> = None;
    let mut i = 0;
    let coeffs = loop {
        if i >= primes.len() {
            if primes.len() >= cfg.max_primes.max(cfg.primes.len()) {
                return Err(QError::Reconstruction(format!(
                    "rational coefficients not stable after {} primes",
                    primes.len()
                )));
            }
            let extra = word_primes(primes.len() + 8).into_iter().find(|p| !primes.contains(p)).unwrap();
            primes.push(extra);
        }
        let (dim, free, v) = solve_prime(&rows, &ns, unknowns.len(), primes[i])?;
        match reference {
            None => reference = Some((dim, free)),
            Some(r) if r != (dim, free) => {
                return Err(QError::Inconsistent(format!(
                    "nullspace structure differs between primes ({r:?} vs {:?})",
                    (dim, free)
                )))
            }
            _ => {}
        }
        images.push((primes[i], v));
        i += 1;
        let cur = lift_vector(&images);
        match (&cur, &prev) {
            (Some(c), _) if cfg.primes.len() == 1 => break c.clone(),
            (Some(c), Some(p)) if c == p => break c.clone(),
            _ => {}
        }
        prev = cur;
    };
    let per_unknown: Vec<Vec<BigInt>> = coeffs.into_iter().map(|c| vec![c]).collect();
    let op = assemble(&unknowns, &per_unknown, false, 0, s, knot)?;
    // exact check on all training indices (in f-coordinates)
    let oracle = ValuesOracle { values };
    let training: Vec<i64> = ns.iter().map(|n| n + s).collect();
    let tv = verify_held_out(&op, &oracle, &training, cfg.seed)?;
    if !tv.passed() {
        return Err(QError::Verification(format!(
            "reconstructed operator violates training equations at n = {:?}",
            tv.failures
        )));
    }
    let held: Vec<i64> = (g0..first).map(|n| n + s).collect();
    let verification = verify_held_out(&op, &oracle, &held, cfg.seed)?;
    let (dim, _) = reference.unwrap();
    Ok(GuessResult {
        operator: op,
        nullspace_dim: dim,
        alternatives: dim - 1,
        verification,
        provenance: Provenance {
            primes: images.iter().map(|x| x.0).collect(),
            points: Vec::new(),
            rows: (first + s, last + s),
            unknowns: unknowns.len(),
            seed: cfg.seed,
        },
    })
}

fn lift_vector(images: &[(u64, Vec<u64>)]) -> Option<Vec<BigInt>> {
    let n = images[0].1.len();
    let mut modulus = BigInt::one();
    let mut acc = vec![BigInt::zero(); n];
    for (p, v) in images {
        for (a, &c) in acc.iter_mut().zip(v) {
            *a = ratrec::crt_pair(a, &modulus, c, *p);
        }
        modulus *= BigInt::from(*p);
    }
    let mut den = BigInt::one();
    let mut fr = Vec::with_capacity(n);
    for a in &acc {
        let (num, d) = ratrec::rational_reconstruct(a, &modulus)?;
        den = den.lcm(&d);
        fr.push((num, d));
    }
    Some(fr.into_iter().map(|(num, d)| num * (&den / d)).collect())
}
