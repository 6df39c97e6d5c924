//! Kashaev invariants: exact cyclotomic remainders, linear-time evaluation at
//! `q = e^{2πi/N}` from a recurrence, the growth rates `a_N` and a fit of
//! their convergence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QError, QResult};
use crate::fusion::{colored_jones, KnotSpec};
use crate::opkit::{InhomOperator, SEQUENCE_SIGN};
use crate::qarith::cyclotomic::{cyclotomic, reduce_with};
use crate::qarith::mpfloat::mp_pi;
use crate::qarith::{root_of_unity, LaurentPoly, MpComplex, MpFloat};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 212;

/// Which colored Jones polynomial is evaluated at `e^{2πi/N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `J_{K,N}(e^{2πi/N})`, the value of the cyclotomic remainder
    /// `τ_{K,N} = J_{K,N} mod Φ_N`; the canonical choice.
    Dimension,
    /// `J_{K,N−1}(e^{2πi/N})`.  The cyclotomic expansion makes this equal to
    /// `1` for every knot, so it only serves as a cross-check.
    Shifted,
}

impl Convention {
    /// Dimension `d` with `⟨K⟩_N = J_{K,d}(e^{2πi/N})`.
    pub fn dimension(self, n: u64) -> i64 {
        match self {
            Convention::Dimension => n as i64,
            Convention::Shifted => n as i64 - 1,
        }
    }
}

/// Block size of the two-level power tables of a rotated context.
const BLOCK: i64 = 256;

/// Powers of `q = ζ_N · e^{iθ}` where `ζ_N = e^{2πi/N}` and `θ` is an
/// optional tiny rotation angle (`q = ζ_N` when absent).
#[derive(Clone, Debug)]
pub struct RootOfUnityCtx {
    n: u64,
    prec: u32,
    zeta: Vec<MpComplex>,
    /// `(w^k for 0 ≤ k < BLOCK, w^{h·BLOCK} for 0 ≤ h ≤ span/BLOCK)` with
    /// `w = ζ_N e^{iθ}`, when rotated.
    rotated: Option<(Vec<MpComplex>, Vec<MpComplex>)>,
}

impl RootOfUnityCtx {
    /// `q = e^{2πi/N}` at `prec` bits.
    pub fn new(n: u64, prec: u32) -> QResult<Self> {
        if n == 0 {
            return Err(QError::InvalidArgument("N must be positive".into()));
        }
        let zeta = (0..n).map(|k| root_of_unity(k as i64, n, prec + 8)).collect();
        Ok(RootOfUnityCtx {
            n,
            prec,
            zeta,
            rotated: None,
        })
    }

    /// `q = e^{2πi/N} · e^{iθ}` with `θ = ± 2π / (N · 2^bits)`, supporting
    /// `q^x` for `|x| ≤ span`.
    pub fn rotated(n: u64, prec: u32, bits: u32, sign: i64, span: i64) -> QResult<Self> {
        let mut c = Self::new(n, prec)?;
        let p = prec + 24;
        let two_pi = mp_pi(p).mul_pow2(1);
        let theta = two_pi
            .div(&MpFloat::from_i64(n as i64), p)
            .mul_pow2(-(bits as i64));
        let theta = if sign < 0 { theta.neg() } else { theta };
        let w = root_of_unity(1, n, p).mul(&expi_small(&theta, p), p);
        let mut lo = Vec::with_capacity(BLOCK as usize);
        let mut acc = MpComplex::one();
        for _ in 0..BLOCK {
            lo.push(acc.clone());
            acc = acc.mul(&w, p);
        }
        let step = acc; // w^BLOCK
        let mut hi = Vec::new();
        let mut acc = MpComplex::one();
        for _ in 0..=(span.abs() / BLOCK) {
            hi.push(acc.clone());
            acc = acc.mul(&step, p);
        }
        c.rotated = Some((lo, hi));
        Ok(c)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `q^x`.
    pub fn q_pow(&self, x: i64) -> MpComplex {
        match &self.rotated {
            None => self.zeta[x.rem_euclid(self.n as i64) as usize].clone(),
            Some((lo, hi)) => {
                let a = x.abs();
                let h = (a / BLOCK) as usize;
                assert!(h < hi.len(), "q^{x} outside the table span");
                let z = hi[h].mul(&lo[(a % BLOCK) as usize], self.prec + 16);
                // |q| = 1, so q^{−a} is the conjugate of q^a
                if x < 0 {
                    MpComplex { re: z.re, im: z.im.neg() }
                } else {
                    z
                }
            }
        }
    }
}

/// `e^{iφ}` by its Taylor series (intended for `|φ| ≪ 1`).
fn expi_small(phi: &MpFloat, prec: u32) -> MpComplex {
    let p = prec + 8;
    let mut re = MpFloat::from_i64(1);
    let mut im = MpFloat::zero();
    let mut term = MpFloat::from_i64(1);
    let stop = -((prec + 4) as f64) * std::f64::consts::LN_2;
    for k in 1..10_000i64 {
        term = term.mul(phi, p).div(&MpFloat::from_i64(k), p);
        if term.is_zero() || term.ln_abs() < stop {
            break;
        }
        // i^k: 1, i, −1, −i
        match k % 4 {
            1 => im = im.add(&term, p),
            2 => re = re.sub(&term, p),
            3 => im = im.sub(&term, p),
            _ => re = re.add(&term, p),
        }
    }
    MpComplex {
        re: re.round(prec),
        im: im.round(prec),
    }
}

/// The cyclotomic remainder `J mod Φ_N` (ascending coefficients, length `φ(N)`).
pub fn tau_from_jones(j: &LaurentPoly, n: u64) -> QResult<Vec<BigInt>> {
    let ctx = cyclotomic(n)?;
    reduce_with(&ctx, j)
}

/// `τ_{K,N}`: the remainder of `J_{K,N}(q)` modulo `Φ_N(q)`, exactly.
pub fn tau_direct(spec: &KnotSpec, n: u64) -> QResult<Vec<BigInt>> {
    if n == 0 {
        return Err(QError::InvalidArgument("N must be positive".into()));
    }
    let j = colored_jones(spec, n as i64)?;
    tau_from_jones(&j, n)
}

/// `Σ c_k q^k` at `q = e^{2πi/N}`.
pub fn eval_remainder(tau: &[BigInt], ctx: &RootOfUnityCtx) -> MpComplex {
    let p = ctx.prec + 16;
    let mut acc = MpComplex::zero();
    for (k, c) in tau.iter().enumerate() {
        if c.sign() != num_bigint::Sign::NoSign {
            acc = acc.add(&ctx.q_pow(k as i64).mul_bigint(c, p), p);
        }
    }
    round(acc, ctx.prec)
}

fn round(z: MpComplex, prec: u32) -> MpComplex {
    MpComplex {
        re: z.re.round(prec),
        im: z.im.round(prec),
    }
}

/// `J_{K,d}(e^{2πi/N})` from the exact polynomial (desk-scale `d` only).
pub fn kashaev_exact(spec: &KnotSpec, n: u64, conv: Convention, prec: u32) -> QResult<MpComplex> {
    let j = colored_jones(spec, conv.dimension(n))?;
    let ctx = RootOfUnityCtx::new(n, prec)?;
    Ok(eval_remainder(&tau_from_jones(&j, n)?, &ctx))
}

/// `a_N = 2π log|v| / N`.
pub fn growth_rate(v: &MpComplex, n: u64) -> f64 {
    2.0 * std::f64::consts::PI * v.ln_abs() / n as f64
}

/// Settings of [`kashaev_recurrence`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KashaevConfig {
    pub precision: u32,
    pub convention: Convention,
    /// The rotation `e^{±2πi/(N 2^b)}` used at degenerate steps has
    /// `b = precision/2 + rotation_margin`.
    pub rotation_margin: u32,
    /// Also run at doubled precision and report the difference as the error.
    pub error_estimate: bool,
    /// Extra working bits per step on top of `precision`, absorbing the
    /// amplification of rounding errors along the stepping.
    pub guard_bits_per_step: f64,
}

impl Default for KashaevConfig {
    fn default() -> Self {
        KashaevConfig {
            precision: DEFAULT_PRECISION,
            convention: Convention::Dimension,
            rotation_margin: 16,
            error_estimate: true,
            guard_bits_per_step: 0.75,
        }
    }
}

/// One evaluated Kashaev invariant.
#[derive(Clone, Debug)]
pub struct KashaevValue {
    pub n: u64,
    pub value: MpComplex,
    pub a_n: f64,
    /// `|a_N(prec) − a_N(2 prec)|`, when estimated.
    pub err: Option<f64>,
    /// Step indices at which the leading coefficient vanished.
    pub degenerate_steps: Vec<i64>,
    /// Retained precision of the reported value, in bits.
    pub precision: u32,
    /// Largest working precision used, in bits.
    pub working_precision: u32,
}

impl KashaevValue {
    /// `N,a_N,re,im,err` (the error column is empty when not estimated).
    pub fn csv_row(&self) -> String {
        let (re, im) = self.value.to_f64_pair();
        format!(
            "{},{:.10},{:e},{:e},{}",
            self.n,
            self.a_n,
            re,
            im,
            self.err.map_or(String::new(), |e| format!("{e:e}"))
        )
    }
}

/// Header line of [`KashaevValue::csv_row`].
pub const CSV_HEADER: &str = "N,a_N,re,im,err";

/// Operator coefficients grouped by `(j, m)`: `a_j(M, q) = Σ_m M^m c_{j,m}(q)`.
struct Grouped {
    order: i64,
    /// `(j, m, [(e, c)])`
    p: Vec<(i64, i64, Vec<(i64, BigInt)>)>,
    /// `(m, [(e, c)])`
    b: Vec<(i64, Vec<(i64, BigInt)>)>,
}

fn group(op: &InhomOperator) -> Grouped {
    let mut p: BTreeMap<(i64, i64), Vec<(i64, BigInt)>> = BTreeMap::new();
    for (l, m, e, c) in op.p_terms() {
        p.entry((l, m)).or_default().push((e, c));
    }
    let mut b: BTreeMap<i64, Vec<(i64, BigInt)>> = BTreeMap::new();
    for (m, e, c) in op.b_terms() {
        b.entry(m).or_default().push((e, c));
    }
    Grouped {
        order: op.order(),
        p: p.into_iter().map(|((j, m), v)| (j, m, v)).collect(),
        b: b.into_iter().collect(),
    }
}

fn eval_q_sum(terms: &[(i64, BigInt)], ctx: &RootOfUnityCtx, p: u32) -> MpComplex {
    let mut acc = MpComplex::zero();
    for (e, c) in terms {
        acc = acc.add(&ctx.q_pow(*e).mul_bigint(c, p), p);
    }
    acc
}

/// Result of one stepping pass.
struct Pass {
    value: MpComplex,
    /// Steps whose leading coefficient vanished.
    degenerate: Vec<i64>,
}

/// A polynomial in `M` with evaluated coefficients, `M^low · Σ_k c_k M^k`.
struct MPoly {
    low: i64,
    dense: Vec<MpComplex>,
}

impl MPoly {
    fn new(terms: &[(i64, MpComplex)]) -> Self {
        let low = terms.iter().map(|(m, _)| *m).min().unwrap_or(0);
        let high = terms.iter().map(|(m, _)| *m).max().unwrap_or(0);
        let mut dense = vec![MpComplex::zero(); (high - low + 1) as usize];
        for (m, c) in terms {
            dense[(m - low) as usize] = c.clone();
        }
        MPoly { low, dense }
    }

    /// Value at `M = q^n` by Horner's rule.
    fn at(&self, n: i64, ctx: &RootOfUnityCtx, p: u32) -> MpComplex {
        let m = ctx.q_pow(n);
        let mut acc = MpComplex::zero();
        for c in self.dense.iter().rev() {
            acc = acc.mul(&m, p).add(c, p);
        }
        if self.low != 0 {
            acc = acc.mul(&ctx.q_pow(n * self.low), p);
        }
        acc
    }
}

/// The operator at a fixed `q`: `a_j(M)` for `j = 0..=d` and `b(M)`.
struct Evaluated {
    a: Vec<MPoly>,
    b: MPoly,
}

impl Evaluated {
    fn new(g: &Grouped, ctx: &RootOfUnityCtx, p: u32) -> Self {
        let a = (0..=g.order)
            .map(|j| {
                let terms: Vec<(i64, MpComplex)> = g
                    .p
                    .iter()
                    .filter(|(jj, _, _)| *jj == j)
                    .map(|(_, m, t)| (*m, eval_q_sum(t, ctx, p)))
                    .collect();
                MPoly::new(&terms)
            })
            .collect();
        let b: Vec<(i64, MpComplex)> = g.b.iter().map(|(m, t)| (*m, eval_q_sum(t, ctx, p))).collect();
        Evaluated { a, b: MPoly::new(&b) }
    }
}

/// Whether `z` is below `2^{−prec/2}` in magnitude.
fn negligible(z: &MpComplex, prec: u32) -> bool {
    z.is_zero() || z.ln_abs() < -(prec as f64) * 0.5 * std::f64::consts::LN_2
}

/// Steps `n ≤ target − d` at which the leading coefficient `a_d(q^n, q)`
/// vanishes at `q = ζ_N`, found at low precision.  Nonzero values are
/// products of a few factors `ζ^k − 1`, hence far above the threshold.
fn degenerate_steps(g: &Grouped, n: u64, target: i64) -> QResult<Vec<i64>> {
    let prec = 96;
    let ctx = RootOfUnityCtx::new(n, prec)?;
    let p = prec + 16;
    let d = g.order;
    let lead: Vec<(i64, MpComplex)> = g
        .p
        .iter()
        .filter(|(j, _, _)| *j == d)
        .map(|(_, m, t)| (*m, eval_q_sum(t, &ctx, p)))
        .collect();
    let lead = MPoly::new(&lead);
    let mut out = Vec::new();
    for step in 0..=(target - d) {
        if negligible(&lead.at(step, &ctx, p), prec) {
            out.push(step);
        }
    }
    Ok(out)
}

/// Steps `f_{n+d} = (b − Σ_{j<d} a_j f_{n+j}) / a_d` at `q` from the seeds
/// `f_0, …, f_{d−1}` up to `f_target`.
fn step(g: &Grouped, seeds: &[MpComplex], target: i64, ctx: &RootOfUnityCtx) -> Pass {
    let p = ctx.prec + 16;
    let d = g.order;
    let ev = Evaluated::new(g, ctx, p);
    let mut window: Vec<MpComplex> = seeds.to_vec();
    let mut degenerate = Vec::new();
    if target < d {
        return Pass {
            value: window[target as usize].clone(),
            degenerate,
        };
    }
    for n in 0..=(target - d) {
        let mut rhs = ev.b.at(n, ctx, p);
        for j in 0..d as usize {
            rhs = rhs.sub(&ev.a[j].at(n, ctx, p).mul(&window[j], p), p);
        }
        let lead = &ev.a[d as usize].at(n, ctx, p);
        let next = if negligible(lead, ctx.prec) {
            degenerate.push(n);
            MpComplex::zero()
        } else {
            rhs.div(lead, p)
        };
        window.remove(0);
        window.push(round(next, p));
    }
    Pass {
        value: window[d as usize - 1].clone(),
        degenerate,
    }
}

fn seeds_at(seeds: &[LaurentPoly], ctx: &RootOfUnityCtx) -> QResult<Vec<MpComplex>> {
    let p = ctx.prec + 16;
    let mut out = Vec::with_capacity(seeds.len());
    for s in seeds {
        let mut acc = MpComplex::zero();
        for (e, c) in s.q_terms()? {
            acc = acc.add(&ctx.q_pow(e).mul_bigint(&c, p), p);
        }
        // the stepped sequence is f_n = σ J_{n+1}
        out.push(if SEQUENCE_SIGN < 0 { acc.neg() } else { acc });
    }
    Ok(out)
}

/// Largest `|x|` for which a pass up to `f_target` evaluates `q^x`.
fn exponent_span(g: &Grouped, seeds: &[LaurentPoly], target: i64) -> QResult<i64> {
    let max_m = g
        .p
        .iter()
        .map(|(_, m, _)| m.abs())
        .chain(g.b.iter().map(|(m, _)| m.abs()))
        .max()
        .unwrap_or(0);
    let mut max_e = g
        .p
        .iter()
        .flat_map(|(_, _, t)| t.iter().map(|(e, _)| e.abs()))
        .chain(g.b.iter().flat_map(|(_, t)| t.iter().map(|(e, _)| e.abs())))
        .max()
        .unwrap_or(0);
    for s in seeds {
        for (e, _) in s.q_terms()? {
            max_e = max_e.max(e.abs());
        }
    }
    Ok(target.max(0) * max_m + max_e)
}

/// Result of one evaluation at a fixed precision.
struct Evaluation {
    value: MpComplex,
    degenerate: Vec<i64>,
    working_precision: u32,
}

/// Working precision for `prec` retained bits: stepping amplifies rounding
/// errors by a factor growing exponentially in the number of steps, so the
/// guard grows linearly with the target.
fn working_precision(prec: u32, target: i64, cfg: &KashaevConfig) -> u32 {
    prec + (cfg.guard_bits_per_step * target.max(0) as f64).ceil() as u32 + 32
}

fn evaluate_once(
    g: &Grouped,
    seeds: &[LaurentPoly],
    n: u64,
    cfg: &KashaevConfig,
    prec: u32,
) -> QResult<Evaluation> {
    // ⟨K⟩_N = J_{K,d}(ζ) = σ f_{d−1}
    let target = cfg.convention.dimension(n) - 1;
    if target < 0 {
        // J_{K,0} = 1
        return Ok(Evaluation {
            value: MpComplex::one(),
            degenerate: Vec::new(),
            working_precision: prec,
        });
    }
    let sigma = |z: MpComplex| if SEQUENCE_SIGN < 0 { z.neg() } else { z };
    let wp = working_precision(prec, target, cfg);
    let degenerate = if target < g.order {
        Vec::new()
    } else {
        degenerate_steps(g, n, target)?
    };
    if degenerate.is_empty() {
        let ctx = RootOfUnityCtx::new(n, wp)?;
        let pass = step(g, &seeds_at(seeds, &ctx)?, target, &ctx);
        if pass.degenerate.is_empty() {
            return Ok(Evaluation {
                value: round(sigma(pass.value), prec),
                degenerate: pass.degenerate,
                working_precision: wp,
            });
        }
    }
    // Degenerate steps: evaluate at q = ζ e^{±iθ} with extra precision and
    // average, which removes the odd orders of the rotation; the remaining
    // error is O(θ²) relative to the derivative scale.
    let bits = prec / 2 + cfg.rotation_margin;
    let xp = wp + bits + 32;
    let span = exponent_span(g, seeds, target)?;
    let mut sum = MpComplex::zero();
    for sign in [1, -1] {
        let rctx = RootOfUnityCtx::rotated(n, xp, bits, sign, span)?;
        let pass_r = step(g, &seeds_at(seeds, &rctx)?, target, &rctx);
        if !pass_r.degenerate.is_empty() {
            return Err(QError::Numeric(format!(
                "leading coefficient still vanishes after rotation at N = {n}"
            )));
        }
        sum = sum.add(&pass_r.value, xp);
    }
    let half = MpFloat::from_f64(0.5);
    Ok(Evaluation {
        value: round(sigma(sum.scale(&half, xp)), prec),
        degenerate,
        working_precision: xp,
    })
}

/// `⟨K⟩_N` from a recurrence `P f = b` for `f_n = σ J_{K,n+1}`, in `O(N)`
/// arithmetic operations.  `seeds` are the exact `J_{K,1}, …, J_{K,d}`
/// (`d` the order).  Steps where the leading coefficient vanishes at the root
/// of unity are handled by evaluating at slightly rotated points.
pub fn kashaev_recurrence(
    op: &InhomOperator,
    seeds: &[LaurentPoly],
    n: u64,
    cfg: &KashaevConfig,
) -> QResult<KashaevValue> {
    let g = group(op);
    if seeds.len() as i64 != g.order || g.order == 0 {
        return Err(QError::InvalidArgument(format!(
            "need {} seeds for an operator of order {}",
            g.order, g.order
        )));
    }
    if n == 0 {
        return Err(QError::InvalidArgument("N must be positive".into()));
    }
    let first = evaluate_once(&g, seeds, n, cfg, cfg.precision)?;
    let a = growth_rate(&first.value, n);
    let (ev, err, precision) = if cfg.error_estimate {
        let second = evaluate_once(&g, seeds, n, cfg, 2 * cfg.precision)?;
        let a2 = growth_rate(&second.value, n);
        (second, Some((a - a2).abs()), 2 * cfg.precision)
    } else {
        (first, None, cfg.precision)
    };
    let a_n = growth_rate(&ev.value, n);
    if !a_n.is_finite() {
        return Err(QError::Numeric(format!("⟨K⟩_{n} evaluated to zero")));
    }
    Ok(KashaevValue {
        n,
        value: ev.value,
        a_n,
        err: match err {
            Some(e) if e.is_finite() => Some(e),
            Some(_) => Some(f64::INFINITY),
            None => None,
        },
        degenerate_steps: ev.degenerate,
        precision,
        working_precision: ev.working_precision,
    })
}

/// Exact seeds `J_{K,1}, …, J_{K,d}` for an operator of order `d`.
pub fn exact_seeds(spec: &KnotSpec, order: i64) -> QResult<Vec<LaurentPoly>> {
    (1..=order).map(|d| colored_jones(spec, d)).collect()
}

/// [`kashaev_recurrence`] for every `N` in the range (in parallel).
pub fn a_sequence(
    op: &InhomOperator,
    seeds: &[LaurentPoly],
    ns: impl IntoIterator<Item = u64>,
    cfg: &KashaevConfig,
) -> QResult<Vec<KashaevValue>> {
    let ns: Vec<u64> = ns.into_iter().collect();
    ns.par_iter()
        .map(|&n| kashaev_recurrence(op, seeds, n, cfg))
        .collect()
}

/// Least-squares fit `c0 + c1 log(n)/n + c2/n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    /// Smallest and largest `n` used.
    pub window: (u64, u64),
    pub points: usize,
}

/// Fits `c0 + c1 log(n)/n + c2/n` to the points with `n` inside `window`
/// (inclusive), by the normal equations.
pub fn volume_fit(points: &[(u64, f64)], window: (u64, u64)) -> QResult<VolumeFit> {
    let pts: Vec<(u64, f64)> = points
        .iter()
        .copied()
        .filter(|&(n, _)| n >= window.0 && n <= window.1 && n > 0)
        .collect();
    if pts.len() < 3 {
        return Err(QError::InvalidArgument(
            "a fit needs at least 3 points in the window".into(),
        ));
    }
    let basis = |n: u64| {
        let x = n as f64;
        [1.0, x.ln() / x, 1.0 / x]
    };
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(n, y) in &pts {
        let phi = basis(n);
        for i in 0..3 {
            atb[i] += phi[i] * y;
            for j in 0..3 {
                ata[i][j] += phi[i] * phi[j];
            }
        }
    }
    let c = solve3(ata, atb).ok_or_else(|| {
        QError::Numeric("rank-deficient fit window".into())
    })?;
    let ss: f64 = pts
        .iter()
        .map(|&(n, y)| {
            let phi = basis(n);
            let r = y - (c[0] * phi[0] + c[1] * phi[1] + c[2] * phi[2]);
            r * r
        })
        .sum();
    Ok(VolumeFit {
        c0: c[0],
        c1: c[1],
        c2: c[2],
        residual: (ss / pts.len() as f64).sqrt(),
        window: (pts.iter().map(|p| p.0).min().unwrap(), pts.iter().map(|p| p.0).max().unwrap()),
        points: pts.len(),
    })
}

/// Gaussian elimination with partial pivoting for a 3×3 system.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= scale * 1e-13 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests;
