//! The bivariate ansatz solved pointwise modulo word primes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::linalg::Echelon;
use super::polyfp::{rational_reconstruct, UPoly};
use super::ratrec;
use super::{GuessConfig, GuessResult, Member, Provenance, StructureSet, Unknown, Verification};
use crate::error::{QError, QResult};
use crate::fusion::{KnotSpec, ModJonesEvaluator};
use crate::opkit::sequence::{term_mod, JonesSequence};
use crate::opkit::{InhomOperator, TriPoly};
use crate::qarith::{word_primes, Fp, LaurentPoly, ModContext};

/// A sequence `f_n` that can be evaluated modulo a prime at `q = q0`.
pub trait SequenceOracle: Sync {
    /// `f_{lo}, …, f_{hi}` at the context's point.
    fn values_mod(&self, ctx: &ModContext, lo: i64, hi: i64) -> QResult<Vec<u64>>;

    /// `f_n` exactly, when available.
    fn exact(&self, _n: i64) -> Option<QResult<LaurentPoly>> {
        None
    }
}

/// The recurrence sequence `f_n = σ J_{K,n+1}` of a knot.
pub struct KnotOracle {
    pub seq: JonesSequence,
    /// Whether held-out indices are verified exactly (requires exact `J`).
    pub exact_checks: bool,
}

impl KnotOracle {
    pub fn new(spec: KnotSpec) -> Self {
        KnotOracle {
            seq: JonesSequence::new(spec),
            exact_checks: true,
        }
    }
}

impl SequenceOracle for KnotOracle {
    fn values_mod(&self, ctx: &ModContext, lo: i64, hi: i64) -> QResult<Vec<u64>> {
        let dmax = (lo + 1).abs().max((hi + 1).abs()).max(2);
        let ev = ModJonesEvaluator::new(self.seq.spec(), ctx, dmax)?;
        (lo..=hi).map(|n| term_mod(&ev, n)).collect()
    }

    fn exact(&self, n: i64) -> Option<QResult<LaurentPoly>> {
        self.exact_checks.then(|| self.seq.term(n))
    }
}

/// Adapts a closure `(n, ctx) ↦ f_n(q0) mod m` (plus an optional exact form).
pub struct FnOracle<F, G = fn(i64) -> QResult<LaurentPoly>> {
    pub modular: F,
    pub exact: Option<G>,
}

impl<F> FnOracle<F>
where
    F: Fn(i64, &ModContext) -> QResult<u64> + Sync,
{
    pub fn new(modular: F) -> Self {
        FnOracle { modular, exact: None }
    }
}

impl<F, G> SequenceOracle for FnOracle<F, G>
where
    F: Fn(i64, &ModContext) -> QResult<u64> + Sync,
    G: Fn(i64) -> QResult<LaurentPoly> + Sync,
{
    fn values_mod(&self, ctx: &ModContext, lo: i64, hi: i64) -> QResult<Vec<u64>> {
        (lo..=hi).map(|n| (self.modular)(n, ctx)).collect()
    }

    fn exact(&self, n: i64) -> Option<QResult<LaurentPoly>> {
        self.exact.as_ref().map(|g| g(n))
    }
}

/// Shared row layout of one guessing problem.
struct Layout {
    unknowns: Vec<Unknown>,
    order: i64,
    /// `x = q^{1/2}` (odd symmetry shift) or `x = q`.
    half: bool,
    /// Exponent of `x` multiplying `α` in the symmetric rescaling `c = c̃ · x^{−wα}`.
    w: i64,
    /// First training index of `g_n = f_{n+s}` and number of rows.
    row0: i64,
    nrows: usize,
    shift: i64,
    max_alpha: i64,
}

impl Layout {
    fn new(sset: &StructureSet, cfg: &GuessConfig) -> Self {
        let unknowns = sset.unknowns();
        let t = sset.symmetry.map_or(0, |s| s.t);
        let half = t.rem_euclid(2) == 1;
        let w = if half { t } else { t / 2 };
        let row0 = cfg.held_out as i64 + (-cfg.shift).max(0);
        let nrows = unknowns.len() + cfg.extra_rows;
        Layout {
            order: sset.order(),
            half,
            w,
            row0,
            nrows,
            shift: cfg.shift,
            max_alpha: sset.m_degree(),
            unknowns,
        }
    }

    /// Last sequence index (in `g`) needed.
    fn last_index(&self) -> i64 {
        self.row0 + self.nrows as i64 - 1 + self.order
    }
}

/// Solution at one evaluation point.
struct PointSolution {
    x0: u64,
    dim: usize,
    free: usize,
    vec: Vec<u64>,
}

fn pow_table(f: &Fp, base: u64, n: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(n + 1);
    let mut acc = 1u64;
    for _ in 0..=n {
        v.push(acc);
        acc = f.mul(acc, base);
    }
    v
}

fn solve_point(
    oracle: &dyn SequenceOracle,
    lay: &Layout,
    m: u64,
    t0: u64,
) -> QResult<PointSolution> {
    let ctx = ModContext::from_t0(m, t0)?;
    let f = *ctx.field();
    let q0 = ctx.q0();
    let x0 = if lay.half { f.pow(t0, 4) } else { q0 };
    if q0 == 1 || q0 == m - 1 || x0 == 1 || x0 == m - 1 {
        return Err(QError::Degenerate("evaluation point ±1".into()));
    }
    let vals = oracle.values_mod(&ctx, lay.row0 + lay.shift, lay.last_index() + lay.shift)?;
    let g = |n: i64| vals[(n - lay.row0) as usize];
    // x0^{−wα}
    let xw = {
        let base = if lay.w >= 0 {
            f.inv(f.pow(x0, lay.w as u64)).unwrap()
        } else {
            f.pow(x0, (-lay.w) as u64)
        };
        pow_table(&f, base, lay.max_alpha as usize)
    };
    let mut ech = Echelon::new(f, lay.unknowns.len());
    let mut row = vec![0u64; lay.unknowns.len()];
    for r in 0..lay.nrows {
        let n = lay.row0 + r as i64;
        let qn = ctx.q_pow(n);
        let qa = pow_table(&f, qn, lay.max_alpha as usize);
        for (u, unk) in lay.unknowns.iter().enumerate() {
            let mut s = 0u64;
            for mem in &unk.members {
                let (alpha, v, sign) = match *mem {
                    Member::P { alpha, beta, sign, .. } => (alpha, g(n + beta), sign),
                    Member::B { alpha, sign, .. } => (alpha, f.neg(1), sign),
                };
                let term = f.mul(f.mul(xw[alpha as usize], qa[alpha as usize]), v);
                s = if sign > 0 { f.add(s, term) } else { f.sub(s, term) };
            }
            row[u] = s;
        }
        ech.insert(&row);
    }
    let free = ech.free_columns();
    let dim = free.len();
    if dim == 0 {
        return Ok(PointSolution { x0, dim, free: usize::MAX, vec: Vec::new() });
    }
    let fc = free[0];
    Ok(PointSolution { x0, dim, free: fc, vec: ech.null_vector(fc) })
}

/// Index of the normalizing unknown: the `P` coefficient with the largest `β`
/// and then the smallest `α` among those that are nonzero.
fn choose_pivot(lay: &Layout, v: &[u64]) -> usize {
    let mut best: Option<((i64, i64), usize)> = None;
    for (u, unk) in lay.unknowns.iter().enumerate() {
        if v[u] == 0 {
            continue;
        }
        for mem in &unk.members {
            if let Member::P { alpha, beta, .. } = *mem {
                let key = (beta, -alpha);
                if best.map_or(true, |b| key > b.0) {
                    best = Some((key, u));
                }
            }
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| v.iter().position(|&x| x != 0).unwrap())
}

/// Reconstructs polynomial coefficient functions (common denominator cleared,
/// common factor removed, pivot monic) from point values; `None` if the data
/// do not yet determine them.
fn reconstruct_functions(f: &Fp, pts: &[(u64, Vec<u64>)], pivot: usize, checks: usize) -> Option<Vec<UPoly>> {
    if pts.len() < checks + 3 {
        return None;
    }
    let (train, test) = pts.split_at(pts.len() - checks);
    let xs: Vec<u64> = train.iter().map(|p| p.0).collect();
    let z = UPoly::node_polynomial(&xs, f);
    let nunk = pts[0].1.len();
    let mut fracs = Vec::with_capacity(nunk);
    for u in 0..nunk {
        let ys: Vec<u64> = train.iter().map(|p| p.1[u]).collect();
        let g = UPoly::interpolate(&xs, &ys, f);
        let (r, t) = rational_reconstruct(&g, &z, 2, f)?;
        if r.deg() + t.deg() + 2 > xs.len() as i64 {
            return None;
        }
        fracs.push((r, t));
    }
    // common denominator
    let mut den = UPoly::constant(1);
    for (_, t) in &fracs {
        let g = den.gcd(t, f);
        den = den.mul(&t.divrem(&g, f).0, f);
    }
    let mut polys: Vec<UPoly> = fracs
        .iter()
        .map(|(r, t)| r.mul(&den.divrem(t, f).0, f))
        .collect();
    let mut g = UPoly::zero();
    for p in &polys {
        g = if g.is_zero() { p.monic(f) } else { g.gcd(p, f) };
    }
    if g.is_zero() {
        return None;
    }
    for p in polys.iter_mut() {
        *p = p.divrem(&g, f).0;
    }
    let lc = f.inv(polys[pivot].lead())?;
    for p in polys.iter_mut() {
        *p = p.scale(lc, f);
    }
    // held-back points
    for (x, v) in test {
        let pv = polys[pivot].eval(f, *x);
        if pv == 0 {
            return None;
        }
        let inv = f.inv(pv).unwrap();
        for (u, p) in polys.iter().enumerate() {
            if f.mul(p.eval(f, *x), inv) != v[u] {
                return None;
            }
        }
    }
    Some(polys)
}

/// Per-prime result.
struct PrimeRun {
    prime: u64,
    points: Vec<u64>,
    polys: Vec<UPoly>,
    dim: usize,
    free: usize,
}

fn run_prime(
    oracle: &dyn SequenceOracle,
    lay: &Layout,
    cfg: &GuessConfig,
    prime: u64,
    stream: u64,
) -> QResult<PrimeRun> {
    let f = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut seen = std::collections::HashSet::new();
    let mut pts: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut reference: Option<(usize, usize, usize)> = None; // (dim, free, pivot)
    let limit = cfg.point_limit();
    let mut tried = 0usize;
    loop {
        let mut cands = Vec::new();
        while cands.len() < cfg.batch.max(1) {
            let t0 = rng.gen_range(2..prime - 1);
            let q0 = f.pow(t0, 8);
            let x0 = if lay.half { f.pow(t0, 4) } else { q0 };
            if seen.insert(x0) {
                cands.push(t0);
            }
        }
        tried += cands.len();
        let sols: Vec<QResult<PointSolution>> =
            cands.par_iter().map(|&t0| solve_point(oracle, lay, prime, t0)).collect();
        for s in sols {
            let s = match s {
                Ok(s) => s,
                Err(QError::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            };
            if s.dim == 0 {
                return Err(QError::Reconstruction(format!(
                    "no nonzero solution at q-point {} mod {prime}: the structure set is too small",
                    s.x0
                )));
            }
            let (dim, free, pivot) = *reference.get_or_insert_with(|| (s.dim, s.free, choose_pivot(lay, &s.vec)));
            if s.dim != dim || s.free != free {
                // a special point (nullspace jumps) is skipped; a persistent
                // change is reported below through the point limit
                if s.dim > dim {
                    continue;
                }
                return Err(QError::Inconsistent(format!(
                    "nullspace dimension {} at one point but {dim} at another",
                    s.dim
                )));
            }
            if s.vec[pivot] == 0 {
                continue;
            }
            let inv = f.inv(s.vec[pivot]).unwrap();
            let v: Vec<u64> = s.vec.iter().map(|&x| f.mul(x, inv)).collect();
            pts.push((s.x0, v));
        }
        if let Some((dim, free, pivot)) = reference {
            if let Some(polys) = reconstruct_functions(&f, &pts, pivot, 2) {
                return Ok(PrimeRun {
                    prime,
                    points: pts.iter().map(|p| p.0).collect(),
                    polys,
                    dim,
                    free,
                });
            }
        }
        if pts.len() >= limit || tried >= 4 * limit + 64 {
            return Err(QError::Reconstruction(format!(
                "coefficient functions not determined by {} points modulo {prime}",
                pts.len()
            )));
        }
    }
}

/// Integer coefficient vectors (one per unknown, ascending in `x`) from the
/// per-prime images, or `None` when the images do not yet determine them.
fn lift(runs: &[PrimeRun]) -> Option<Vec<Vec<BigInt>>> {
    let first = &runs[0];
    if runs
        .iter()
        .any(|r| r.polys.len() != first.polys.len() || r.polys.iter().zip(&first.polys).any(|(a, b)| a.deg() != b.deg()))
    {
        return None;
    }
    let mut modulus = BigInt::one();
    let mut acc: Vec<Vec<BigInt>> = first.polys.iter().map(|p| vec![BigInt::zero(); p.0.len()]).collect();
    for r in runs {
        for (u, p) in r.polys.iter().enumerate() {
            for (k, &c) in p.0.iter().enumerate() {
                acc[u][k] = ratrec::crt_pair(&acc[u][k], &modulus, c, r.prime);
            }
        }
        modulus *= BigInt::from(r.prime);
    }
    let mut fracs = Vec::new();
    let mut den = BigInt::one();
    for row in &acc {
        let mut fr = Vec::new();
        for a in row {
            let (n, d) = ratrec::rational_reconstruct(a, &modulus)?;
            den = den.lcm(&d);
            fr.push((n, d));
        }
        fracs.push(fr);
    }
    Some(
        fracs
            .into_iter()
            .map(|row| row.into_iter().map(|(n, d)| n * (&den / d)).collect())
            .collect(),
    )
}

/// Assembles `(P, b)` in the original sequence's coordinates from integer
/// coefficient polynomials of the unknowns.
pub(super) fn assemble(
    unknowns: &[Unknown],
    coeffs: &[Vec<BigInt>],
    half: bool,
    w: i64,
    shift: i64,
    knot: Option<KnotSpec>,
) -> QResult<InhomOperator> {
    // exponents of x, collected per (l, m)
    let mut p_terms: BTreeMap<(i64, i64, i64), BigInt> = BTreeMap::new();
    let mut b_terms: BTreeMap<(i64, i64, i64), BigInt> = BTreeMap::new();
    for (unk, cs) in unknowns.iter().zip(coeffs) {
        for (k, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for mem in &unk.members {
                let (target, l, alpha, gamma, sign) = match *mem {
                    Member::P { alpha, beta, gamma, sign } => (&mut p_terms, beta, alpha, gamma, sign),
                    Member::B { alpha, gamma, sign } => (&mut b_terms, 0, alpha, gamma, sign),
                };
                let x_exp = k as i64 - w * alpha + if half { 2 * gamma } else { gamma };
                let v = if sign > 0 { c.clone() } else { -c.clone() };
                *target.entry((l, alpha, x_exp)).or_insert_with(BigInt::zero) += v;
            }
        }
    }
    let xmin = p_terms.keys().chain(b_terms.keys()).map(|k| k.2).min().unwrap_or(0);
    let conv = |m: BTreeMap<(i64, i64, i64), BigInt>| -> QResult<TriPoly> {
        let mut out = Vec::new();
        for ((l, a, e), c) in m {
            if c.is_zero() {
                continue;
            }
            let mut e = e - xmin;
            if half {
                if e % 2 != 0 {
                    return Err(QError::Reconstruction(
                        "half-integral q-exponent after the symmetric shift".into(),
                    ));
                }
                e /= 2;
            }
            // back from g_n = f_{n+s}: M_g = q^{−s} M_f, i.e. q^e M^α → q^{e − sα} M^α
            out.push(((l, a, e - shift * a), c));
        }
        Ok(TriPoly::from_terms(out))
    };
    let p = conv(p_terms)?;
    let b = conv(b_terms)?;
    Ok(InhomOperator::new(p, b, knot)?.normalized())
}

/// Held-out verification: exact when the oracle supports it, otherwise modulo
/// a fresh prime at a few fresh points.
pub(super) fn verify_held_out(
    op: &InhomOperator,
    oracle: &dyn SequenceOracle,
    indices: &[i64],
    seed: u64,
) -> QResult<Verification> {
    if indices.is_empty() {
        return Ok(Verification { indices: Vec::new(), exact: true, failures: Vec::new() });
    }
    if oracle.exact(indices[0]).is_some() {
        let mut failures = Vec::new();
        for &n in indices {
            let r = op.apply(|k| oracle.exact(k).unwrap(), n)?;
            if !r.is_zero() {
                failures.push(n);
            }
        }
        return Ok(Verification { indices: indices.to_vec(), exact: true, failures });
    }
    let prime = *word_primes(6).last().unwrap();
    let f = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xdead_beef);
    let lo = *indices.iter().min().unwrap();
    let hi = indices.iter().max().unwrap() + op.order();
    let mut failures = Vec::new();
    let mut done = 0;
    while done < 3 {
        let t0 = rng.gen_range(2..prime - 1);
        let ctx = ModContext::from_t0(prime, t0)?;
        if f.pow(t0, 8) == 1 {
            continue;
        }
        let vals = match oracle.values_mod(&ctx, lo, hi) {
            Ok(v) => v,
            Err(QError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        for &n in indices {
            let r = op.apply_mod(|k| Ok(vals[(k - lo) as usize]), n, &ctx)?;
            if r != 0 && !failures.contains(&n) {
                failures.push(n);
            }
        }
        done += 1;
    }
    Ok(Verification { indices: indices.to_vec(), exact: false, failures })
}

/// Guesses `(P, b)` with the bivariate ansatz over `sset`.
///
/// For each prime and evaluation point the linear system
/// `Σ c_{α,β} q0^{nα} g_{n+β} − Σ d_α q0^{nα} = 0` (rows `n`) is solved modulo
/// the prime; the canonical nullspace vector (smallest free column in the
/// `(β, α)` order) is normalized at a corner unknown, points are added in
/// batches until every unknown is recovered as a rational function of `q`
/// (checked on held-back points), and the integer coefficients follow by
/// Chinese remaindering and rational reconstruction, accepted once two
/// successive prime sets agree.
pub fn guess_modular(
    oracle: &dyn SequenceOracle,
    sset: &StructureSet,
    cfg: &GuessConfig,
    knot: Option<KnotSpec>,
) -> QResult<GuessResult> {
    if sset.kind != super::AnsatzKind::Bivariate {
        return Err(QError::InvalidArgument("guess_modular needs a bivariate structure set".into()));
    }
    if cfg.primes.is_empty() {
        return Err(QError::InvalidArgument("at least one prime is required".into()));
    }
    let lay = Layout::new(sset, cfg);
    if lay.unknowns.is_empty() {
        return Err(QError::InvalidArgument("empty structure set".into()));
    }
    let mut primes = cfg.primes.clone();
    let mut runs: Vec<PrimeRun> = Vec::new();
    let mut prev: Option<Vec<Vec<BigInt>>> = None;
    let mut i = 0usize;
    let coeffs = loop {
        if i >= primes.len() {
            if primes.len() >= cfg.max_primes.max(cfg.primes.len()) {
                return Err(QError::Reconstruction(format!(
                    "integer coefficients not stable after {} primes",
                    primes.len()
                )));
            }
            let extra = word_primes(primes.len() + 8)
                .into_iter()
                .find(|p| !primes.contains(p))
                .unwrap();
            primes.push(extra);
        }
        let run = run_prime(oracle, &lay, cfg, primes[i], i as u64)?;
        if let Some(r0) = runs.first() {
            if run.dim != r0.dim || run.free != r0.free {
                return Err(QError::Inconsistent(format!(
                    "nullspace structure differs between primes {} and {}",
                    r0.prime, run.prime
                )));
            }
        }
        runs.push(run);
        i += 1;
        let cur = lift(&runs);
        let single = cfg.primes.len() == 1;
        match (&cur, &prev) {
            (Some(c), _) if single => break c.clone(),
            (Some(c), Some(p)) if c == p => break c.clone(),
            _ => {}
        }
        prev = cur;
    };
    let op = assemble(&lay.unknowns, &coeffs, lay.half, lay.w, lay.shift, knot)?;
    // training equations at a fresh point of the first prime
    check_training(&op, oracle, &lay, primes[0], cfg.seed)?;
    let held: Vec<i64> = (0..cfg.held_out as i64).map(|n| n + (-cfg.shift).max(0) + cfg.shift).collect();
    let verification = verify_held_out(&op, oracle, &held, cfg.seed)?;
    let dim = runs[0].dim;
    Ok(GuessResult {
        operator: op,
        nullspace_dim: dim,
        alternatives: dim - 1,
        verification,
        provenance: Provenance {
            primes: runs.iter().map(|r| r.prime).collect(),
            points: runs.iter().map(|r| r.points.clone()).collect(),
            rows: (lay.row0 + lay.shift, lay.row0 + lay.shift + lay.nrows as i64 - 1),
            unknowns: lay.unknowns.len(),
            seed: cfg.seed,
        },
    })
}

fn check_training(op: &InhomOperator, oracle: &dyn SequenceOracle, lay: &Layout, prime: u64, seed: u64) -> QResult<()> {
    let f = Fp::new(prime);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a1e);
    let lo = lay.row0 + lay.shift;
    let hi = lo + lay.nrows as i64 - 1;
    loop {
        let t0 = rng.gen_range(2..prime - 1);
        if f.pow(t0, 8) == 1 {
            continue;
        }
        let ctx = ModContext::from_t0(prime, t0)?;
        let vals = match oracle.values_mod(&ctx, lo, hi + op.order()) {
            Ok(v) => v,
            Err(QError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        for n in lo..=hi {
            if op.apply_mod(|k| Ok(vals[(k - lo) as usize]), n, &ctx)? != 0 {
                return Err(QError::Verification(format!(
                    "reconstructed operator violates the training equation at n = {n}"
                )));
            }
        }
        return Ok(());
    }
}
