//! Guessing inhomogeneous q-difference recurrences from sequence values.
//!
//! Two ansätze are supported:
//! * **bivariate** `Σ_{(α,β)∈S} c_{α,β}(q) M^α L^β` with unknowns in `Q(q)`,
//!   solved pointwise modulo word primes at many values of `q`
//!   ([`guess_modular`]); the coefficient functions are recovered by rational
//!   function interpolation, then Chinese remaindering and rational
//!   reconstruction;
//! * **trivariate** `Σ_{(α,β,γ)∈S} c_{α,β,γ} q^γ M^α L^β` with rational
//!   unknowns, solved from the exact q-expansion of the equations
//!   ([`guess_flat`]).
//!
//! In both, the inhomogeneous part `b(M, q)` contributes its own unknowns to
//! the same linear system.

mod flat;
pub mod linalg;
mod modular;
pub mod polyfp;
pub mod ratrec;

use serde::{Deserialize, Serialize};

pub use flat::guess_flat;
pub use modular::{guess_modular, FnOracle, KnotOracle, SequenceOracle};

use crate::opkit::InhomOperator;
use crate::qarith::word_primes;

/// Minimal number of sequence values needed by the bivariate ansatz for a
/// recurrence of order `o` and coefficient degree `d`.
pub fn min_values_needed(o: u64, d: u64, inhomogeneous: bool) -> u64 {
    if inhomogeneous {
        (o + 2) * (d + 2) - 2
    } else {
        (o + 1) * (d + 2) - 1
    }
}

/// Which ansatz a structure set feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnsatzKind {
    /// Points `(α, β)`, coefficients in `Q(q)`.
    Bivariate,
    /// Points `(α, β, γ)`, coefficients in `Q`.
    Trivariate,
}

/// Unknowns for the inhomogeneous part: `b = Σ_{α ≤ m_max, γ ≤ q_max} d_{α,γ} q^γ M^α`
/// (`q_max` is unused by the bivariate ansatz, whose `d_α` lie in `Q(q)`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InhomPart {
    pub m_max: i64,
    pub q_max: i64,
}

/// Palindromic reduction data: after `n → n + t/2` the coefficients satisfy
/// `c̃_{α,β} = sign · c̃_{m−α, l−β}` (and `b̃_α = sign · b̃_{m−α}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    pub t: i64,
    pub sign: i8,
    pub m_degree: i64,
    pub l_degree: i64,
}

/// The finite exponent support of an ansatz.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSet {
    pub kind: AnsatzKind,
    /// `(α, β, γ)` = (M-, L-, q-exponent); `γ = 0` for bivariate sets.
    pub points: Vec<(i64, i64, i64)>,
    pub inhom: Option<InhomPart>,
    pub symmetry: Option<Symmetry>,
}

/// One coefficient in the unknown's orbit: `sign ·` the unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Member {
    /// Coefficient of `q^γ M^α L^β` in `P`.
    P { alpha: i64, beta: i64, gamma: i64, sign: i8 },
    /// Coefficient of `q^γ M^α` in `b`.
    B { alpha: i64, gamma: i64, sign: i8 },
}

/// A free unknown of the linear system with the coefficients it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub members: Vec<Member>,
}

impl StructureSet {
    /// Bivariate set from `(α, β)` points.
    pub fn bivariate<I: IntoIterator<Item = (i64, i64)>>(points: I, inhom_m_max: Option<i64>) -> Self {
        let mut pts: Vec<(i64, i64, i64)> = points.into_iter().map(|(a, b)| (a, b, 0)).collect();
        pts.sort_unstable();
        pts.dedup();
        StructureSet {
            kind: AnsatzKind::Bivariate,
            points: pts,
            inhom: inhom_m_max.map(|m| InhomPart { m_max: m, q_max: 0 }),
            symmetry: None,
        }
    }

    /// Bivariate rectangle `0 ≤ α ≤ d`, `0 ≤ β ≤ o`; the inhomogeneous part
    /// (when requested) has M-degree `d`.
    pub fn rectangle(o: i64, d: i64, inhomogeneous: bool) -> Self {
        let pts = (0..=d).flat_map(|a| (0..=o).map(move |b| (a, b)));
        Self::bivariate(pts, inhomogeneous.then_some(d))
    }

    /// Trivariate box `α ≤ d`, `β ≤ o`, `γ ≤ g`, with `b` bounded by `inhom`.
    pub fn trivariate_box(o: i64, d: i64, g: i64, inhom: Option<InhomPart>) -> Self {
        let mut pts = Vec::new();
        for a in 0..=d {
            for b in 0..=o {
                for c in 0..=g {
                    pts.push((a, b, c));
                }
            }
        }
        StructureSet {
            kind: AnsatzKind::Trivariate,
            points: pts,
            inhom,
            symmetry: None,
        }
    }

    /// Largest `β`.
    pub fn order(&self) -> i64 {
        self.points.iter().map(|p| p.1).max().unwrap_or(0)
    }

    /// Largest `α` over `P` and `b`.
    pub fn m_degree(&self) -> i64 {
        let a = self.points.iter().map(|p| p.0).max().unwrap_or(0);
        a.max(self.inhom.map_or(0, |i| i.m_max))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Free unknowns, ordered by `(β, α, γ)` of their first member (`b`
    /// unknowns after `P` unknowns with the same key).  With a symmetry,
    /// each unknown carries its whole orbit.
    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out: Vec<((i64, i64, i64, u8), Unknown)> = Vec::new();
        let sym = self.symmetry;
        let set: std::collections::HashSet<(i64, i64, i64)> = self.points.iter().copied().collect();
        for &(a, b, g) in &self.points {
            let mut members = vec![Member::P { alpha: a, beta: b, gamma: g, sign: 1 }];
            if let Some(s) = sym {
                let partner = (s.m_degree - a, s.l_degree - b, g);
                if partner < (a, b, g) || !set.contains(&partner) {
                    continue;
                }
                if partner != (a, b, g) {
                    members.push(Member::P { alpha: partner.0, beta: partner.1, gamma: g, sign: s.sign });
                } else if s.sign < 0 {
                    // a self-paired coefficient with sign −1 must vanish
                    continue;
                }
            }
            out.push(((b, a, g, 0), Unknown { members }));
        }
        if let Some(inh) = self.inhom {
            let gmax = if self.kind == AnsatzKind::Bivariate { 0 } else { inh.q_max };
            for a in 0..=inh.m_max {
                for g in 0..=gmax {
                    let mut members = vec![Member::B { alpha: a, gamma: g, sign: 1 }];
                    if let Some(s) = sym {
                        let pa = s.m_degree - a;
                        if pa < a || pa > inh.m_max || pa < 0 {
                            continue;
                        }
                        if pa != a {
                            members.push(Member::B { alpha: pa, gamma: g, sign: s.sign });
                        } else if s.sign < 0 {
                            continue;
                        }
                    }
                    out.push(((0, a, g, 1), Unknown { members }));
                }
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out.into_iter().map(|(_, u)| u).collect()
    }
}

/// Identifies `c_{α,β}` with `±c_{m−α, l−β}` after the shift `n → n + t/2`,
/// where `m`, `l` are the M- and L-extents of the set (sign `+` for even `t`,
/// `−` for odd `t`).  Points without a partner in the set are dropped.
pub fn symmetry_reduce(sset: &StructureSet, t: i64) -> StructureSet {
    let amin = sset.points.iter().map(|p| p.0).min().unwrap_or(0);
    let bmin = sset.points.iter().map(|p| p.1).min().unwrap_or(0);
    let mut s = sset.clone();
    // normalize so both extents start at zero
    for p in &mut s.points {
        p.0 -= amin;
        p.1 -= bmin;
    }
    let m_degree = s.points.iter().map(|p| p.0).max().unwrap_or(0);
    let l_degree = s.points.iter().map(|p| p.1).max().unwrap_or(0);
    let set: std::collections::HashSet<(i64, i64, i64)> = s.points.iter().copied().collect();
    s.points.retain(|&(a, b, g)| set.contains(&(m_degree - a, l_degree - b, g)));
    if let Some(inh) = &mut s.inhom {
        inh.m_max = inh.m_max.min(m_degree);
    }
    s.symmetry = Some(Symmetry {
        t,
        sign: if t.rem_euclid(2) == 0 { 1 } else { -1 },
        m_degree,
        l_degree,
    });
    s
}

/// Parameters of a guessing run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuessConfig {
    /// Word primes used first (more are added on reconstruction failure, up to `max_primes`).
    pub primes: Vec<u64>,
    pub max_primes: usize,
    /// Upper limit on evaluation points per prime.
    pub q_points: usize,
    /// Optional bound on the q-degree of the coefficients; caps `q_points` at `2·bound + 12`.
    pub q_degree_bound: Option<i64>,
    /// Number of evaluation points added between reconstruction attempts.
    pub batch: usize,
    /// Equations beyond the number of unknowns.
    pub extra_rows: usize,
    /// Sequence indices `0..held_out` withheld from the system and verified afterwards.
    pub held_out: usize,
    /// Index shift `s`: the ansatz is applied to `g_n = f_{n+s}` and the
    /// result translated back.
    pub shift: i64,
    pub seed: u64,
}

impl Default for GuessConfig {
    fn default() -> Self {
        GuessConfig {
            primes: word_primes(2),
            max_primes: 4,
            q_points: 1200,
            q_degree_bound: None,
            batch: 8,
            extra_rows: 8,
            held_out: 3,
            shift: 0,
            seed: 0x5eed,
        }
    }
}

impl GuessConfig {
    fn point_limit(&self) -> usize {
        match self.q_degree_bound {
            Some(b) => self.q_points.min((2 * b.max(0) + 12) as usize),
            None => self.q_points,
        }
    }
}

/// Outcome of the held-out checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub indices: Vec<i64>,
    /// Whether the held-out indices were checked in exact arithmetic (otherwise
    /// modulo a fresh prime at fresh points).
    pub exact: bool,
    pub failures: Vec<i64>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Where a guess came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub primes: Vec<u64>,
    /// Evaluation points (values of the interpolation variable) per prime.
    pub points: Vec<Vec<u64>>,
    /// Training indices `n` (first, last) in the original sequence.
    pub rows: (i64, i64),
    pub unknowns: usize,
    pub seed: u64,
}

/// A guessed operator with its diagnostics.
#[derive(Clone, Debug)]
pub struct GuessResult {
    pub operator: InhomOperator,
    /// Nullspace dimension of the linear systems.
    pub nullspace_dim: usize,
    /// Number of further independent solutions not selected (`nullspace_dim − 1`).
    pub alternatives: usize,
    pub verification: Verification,
    pub provenance: Provenance,
}

#[cfg(test)]
mod tests;
