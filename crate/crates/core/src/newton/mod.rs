//! Structure sets from Newton polygons of classical A-polynomials.
//!
//! The AJ relation pairs `A(M^{1/2}, L)` with the operator variable `M`, so a
//! classical polynomial in `Q[M², L]` has its M-exponents halved first.  The
//! support of a recurrence operator is then contained in the polygon widened
//! in the M-direction by the translation `τ` (the Minkowski sum with the
//! segment `[0, τ] × {0}`); `τ` is found by trial and error
//! ([`translation_search`]).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{QError, QResult};
use crate::fusion::KnotSpec;
use crate::guess::{guess_modular, symmetry_reduce, GuessConfig, GuessResult, SequenceOracle, StructureSet};
use crate::opkit::TriPoly;

/// A classical A-polynomial `A(M, L)` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalAPoly {
    pub poly: TriPoly,
}

impl ClassicalAPoly {
    /// Parses an expression in `M` and `L`.
    pub fn parse(text: &str) -> QResult<Self> {
        let poly = TriPoly::parse(text)?;
        if poly.iter().any(|(k, _)| k.2 != 0) {
            return Err(QError::InvalidArgument("a classical A-polynomial has no q".into()));
        }
        Ok(ClassicalAPoly { poly })
    }

    /// Whether only even powers of `M` occur.
    pub fn in_m_squared(&self) -> bool {
        self.poly.iter().all(|(k, _)| k.1 % 2 == 0)
    }

    /// Support points `(M-exponent, L-exponent)`, M-exponents halved when the
    /// polynomial lies in `Q[M², L]`.
    pub fn support(&self) -> Vec<(i64, i64)> {
        let h = if self.in_m_squared() { 2 } else { 1 };
        self.poly.iter().map(|(k, _)| (k.1 / h, k.0)).collect()
    }
}

/// A convex lattice polygon in the `(M-exponent, L-exponent)` plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// Hull vertices, counter-clockwise, starting at the lexicographically smallest.
    pub vertices: Vec<(i64, i64)>,
    /// All lattice points of the closed polygon, sorted.
    pub points: Vec<(i64, i64)>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Convex hull (monotone chain; collinear points dropped).
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p: Vec<(i64, i64)> = points.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn inside(hull: &[(i64, i64)], q: (i64, i64)) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == q,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            cross(a, b, q) == 0 && q.0 >= a.0.min(b.0) && q.0 <= a.0.max(b.0) && q.1 >= a.1.min(b.1) && q.1 <= a.1.max(b.1)
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], q) >= 0),
    }
}

impl NewtonPolygon {
    /// Polygon spanned by support points.
    pub fn from_support(support: &[(i64, i64)]) -> QResult<Self> {
        if support.is_empty() {
            return Err(QError::InvalidArgument("the zero polynomial has no Newton polygon".into()));
        }
        let vertices = convex_hull(support);
        let (m0, m1) = (vertices.iter().map(|v| v.0).min().unwrap(), vertices.iter().map(|v| v.0).max().unwrap());
        let (l0, l1) = (vertices.iter().map(|v| v.1).min().unwrap(), vertices.iter().map(|v| v.1).max().unwrap());
        let mut points = Vec::new();
        for m in m0..=m1 {
            for l in l0..=l1 {
                if inside(&vertices, (m, l)) {
                    points.push((m, l));
                }
            }
        }
        Ok(NewtonPolygon { vertices, points })
    }

    /// `(L-span, M-span)`.
    pub fn spans(&self) -> (i64, i64) {
        let span = |f: fn(&(i64, i64)) -> i64| {
            self.vertices.iter().map(f).max().unwrap() - self.vertices.iter().map(f).min().unwrap()
        };
        (span(|v| v.1), span(|v| v.0))
    }

    /// Reflected in the M-direction when necessary so that the highest L-row
    /// lies at smaller M than the lowest L-row (the orientation of the knot
    /// operators), and translated to start at `M = 0`, `L = 0`.
    pub fn oriented(&self) -> NewtonPolygon {
        let lmax = self.points.iter().map(|p| p.1).max().unwrap();
        let lmin = self.points.iter().map(|p| p.1).min().unwrap();
        let mid = |l: i64| {
            let row: Vec<i64> = self.points.iter().filter(|p| p.1 == l).map(|p| p.0).collect();
            row.iter().sum::<i64>() as f64 / row.len() as f64
        };
        let flip = mid(lmax) > mid(lmin);
        let mmin = self.points.iter().map(|p| p.0).min().unwrap();
        let mmax = self.points.iter().map(|p| p.0).max().unwrap();
        let map = |(m, l): (i64, i64)| if flip { (mmax - m, l - lmin) } else { (m - mmin, l - lmin) };
        let pts: Vec<(i64, i64)> = self.vertices.iter().map(|&v| map(v)).collect();
        NewtonPolygon::from_support(&pts).expect("nonempty")
    }

    /// Shifted by `(τ, 0)`.
    pub fn translate(&self, tau: i64) -> NewtonPolygon {
        NewtonPolygon {
            vertices: self.vertices.iter().map(|&(m, l)| (m + tau, l)).collect(),
            points: self.points.iter().map(|&(m, l)| (m + tau, l)).collect(),
        }
    }
}

/// The Newton polygon of a classical A-polynomial (M-exponents halved for
/// polynomials in `M²`).
pub fn newton_polygon(a: &ClassicalAPoly) -> QResult<NewtonPolygon> {
    NewtonPolygon::from_support(&a.support())
}

/// Bivariate structure set: the lattice points of the polygon swept by the
/// translations `(k, 0)`, `0 ≤ k ≤ τ`, moved to start at `M = 0`, with an
/// inhomogeneous part of the same M-degree.
pub fn structure_set(poly: &NewtonPolygon, tau: i64) -> StructureSet {
    let mut pts = BTreeSet::new();
    for &(m, l) in &poly.points {
        for k in 0..=tau.max(0) {
            pts.insert((m + k, l));
        }
    }
    let m0 = pts.iter().map(|p| p.0).min().unwrap_or(0);
    let l0 = pts.iter().map(|p| p.1).min().unwrap_or(0);
    let pts: Vec<(i64, i64)> = pts.into_iter().map(|(m, l)| (m - m0, l - l0)).collect();
    let mdeg = pts.iter().map(|p| p.0).max().unwrap_or(0);
    StructureSet::bivariate(pts, Some(mdeg))
}

/// The palindromic shift parameter `t` (shift `n → n + t/2`) of an operator
/// of order `l` acting on the knot sequence `f_n = σ J_{K,n+1}`, which is
/// symmetric about `n = −1`.
pub fn jones_symmetry_t(order: i64) -> i64 {
    -(order + 2)
}

/// Per-translation diagnostics of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationAttempt {
    pub tau: i64,
    pub unknowns: usize,
    pub outcome: String,
}

/// Tries `τ` in increasing order and returns the first for which the
/// modular guess succeeds and passes its held-out checks.  With `symmetric`
/// the palindromic reduction for the knot sequence is applied.
pub fn translation_search(
    oracle: &dyn SequenceOracle,
    poly: &NewtonPolygon,
    taus: std::ops::RangeInclusive<i64>,
    cfg: &GuessConfig,
    symmetric: bool,
    knot: Option<KnotSpec>,
) -> QResult<(i64, GuessResult, Vec<TranslationAttempt>)> {
    let mut log = Vec::new();
    for tau in taus {
        let mut sset = structure_set(poly, tau);
        if symmetric {
            sset = symmetry_reduce(&sset, jones_symmetry_t(sset.order()));
        }
        let unknowns = sset.unknowns().len();
        match guess_modular(oracle, &sset, cfg, knot) {
            Ok(r) if r.verification.passed() => {
                log.push(TranslationAttempt { tau, unknowns, outcome: "success".into() });
                return Ok((tau, r, log));
            }
            Ok(r) => log.push(TranslationAttempt {
                tau,
                unknowns,
                outcome: format!("held-out verification failed at {:?}", r.verification.failures),
            }),
            Err(e) => log.push(TranslationAttempt { tau, unknowns, outcome: e.to_string() }),
        }
    }
    let summary: Vec<String> = log.iter().map(|a| format!("τ={}: {}", a.tau, a.outcome)).collect();
    Err(QError::Reconstruction(format!("no translation succeeded ({})", summary.join("; "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_and_monomial() {
        let sq = NewtonPolygon::from_support(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(sq.points, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let s = structure_set(&sq, 0);
        assert_eq!(s.points.iter().map(|p| (p.0, p.1)).collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let mono = NewtonPolygon::from_support(&[(3, 2)]).unwrap();
        assert_eq!(mono.points, vec![(3, 2)]);
        assert!(NewtonPolygon::from_support(&[]).is_err());
    }

    #[test]
    fn translation_preserves_point_count() {
        let p = NewtonPolygon::from_support(&[(0, 2), (5, 1), (9, 0), (2, 0)]).unwrap();
        for tau in 0..5 {
            assert_eq!(p.translate(tau).points.len(), p.points.len());
        }
    }

    #[test]
    fn halving_and_orientation() {
        let a = ClassicalAPoly::parse("1 + L*M^10").unwrap();
        assert!(a.in_m_squared());
        let p = newton_polygon(&a).unwrap().oriented();
        assert_eq!(p.vertices, vec![(0, 1), (5, 0)]);
    }
}
