//! Embedded reference data: the published operators for `K_{±2}`, the
//! M-factors `ε_p` with their palindromy exponents, and classical
//! A-polynomials.  Files are shipped verbatim and pinned by SHA-256 checksums
//! (see `data/SHA256SUMS`).

use crate::error::{QError, QResult};
use crate::fusion::KnotSpec;
use crate::opkit::{InhomOperator, TriPoly};

/// `(file name, contents)` of every embedded data file.
pub const FILES: &[(&str, &str)] = &[
    ("A_m2.expr", include_str!("../data/A_m2.expr")),
    ("b_m2.expr", include_str!("../data/b_m2.expr")),
    ("A_2.expr", include_str!("../data/A_2.expr")),
    ("b_2.expr", include_str!("../data/b_2.expr")),
    ("classical_A_m3.expr", include_str!("../data/classical_A_m3.expr")),
    ("classical_A_3.expr", include_str!("../data/classical_A_3.expr")),
    ("epsilon.txt", include_str!("../data/epsilon.txt")),
    ("epsilon_delta.txt", include_str!("../data/epsilon_delta.txt")),
    ("polygons.txt", include_str!("../data/polygons.txt")),
];

/// Checksum manifest for [`FILES`].
pub const SHA256SUMS: &str = include_str!("../data/SHA256SUMS");

fn file(name: &str) -> &'static str {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| *c)
        .expect("embedded data file")
}

/// The published operator `(A_p, b_p)` for `p = ±2`.
pub fn published_operator(p: i64) -> QResult<InhomOperator> {
    let (a, b) = match p {
        -2 => (file("A_m2.expr"), file("b_m2.expr")),
        2 => (file("A_2.expr"), file("b_2.expr")),
        _ => {
            return Err(QError::Unavailable(format!(
                "no embedded operator for p = {p}; supply an operator file"
            )))
        }
    };
    InhomOperator::from_expressions(a, b, Some(KnotSpec::pretzel(p)))
}

/// The M-factor `ε_p(M)` for `p ∈ {−5, …, 5}`.
pub fn epsilon(p: i64) -> QResult<TriPoly> {
    for line in file("epsilon.txt").lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let (k, expr) = line
            .split_once(':')
            .ok_or_else(|| QError::Parse {
                line: 0,
                column: 0,
                message: "malformed epsilon line".into(),
            })?;
        if k.trim().parse::<i64>().ok() == Some(p) {
            return TriPoly::parse(expr);
        }
    }
    Err(QError::Unavailable(format!("no M-factor for p = {p}")))
}

/// The palindromy exponent `δ_p` for `p ∈ {−5, …, 5}`.
pub fn epsilon_delta(p: i64) -> QResult<i64> {
    if !(-5..=5).contains(&p) {
        return Err(QError::Unavailable(format!("no palindromy exponent for p = {p}")));
    }
    let line = file("epsilon_delta.txt")
        .lines()
        .find(|l| !l.starts_with('#') && !l.trim().is_empty())
        .expect("exponent list");
    let v: Vec<i64> = line.split_whitespace().map(|x| x.parse().unwrap()).collect();
    Ok(v[(p + 5) as usize])
}

/// The classical A-polynomial `A_p(M, L)` (in `Q[M², L]`) for `p = ±3`.
pub fn classical_a(p: i64) -> QResult<TriPoly> {
    match p {
        -3 => TriPoly::parse(file("classical_A_m3.expr")),
        3 => TriPoly::parse(file("classical_A_3.expr")),
        _ => Err(QError::Unavailable(format!(
            "no embedded classical A-polynomial for p = {p}"
        ))),
    }
}

/// Support points `(M-exponent, L-exponent)` of the classical A-polynomial
/// `A_p(M^{1/2}, L)` (i.e. in the operator's `M` variable) for the knots whose
/// polygon is shipped as data, `p ∈ {−2, …, 2}`.
pub fn polygon_support(p: i64) -> QResult<Vec<(i64, i64)>> {
    for line in file("polygons.txt").lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let Some((k, pts)) = line.split_once(':') else { continue };
        if k.trim().parse::<i64>().ok() != Some(p) {
            continue;
        }
        let mut out = Vec::new();
        for pair in pts.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = pair.split_once(',').ok_or_else(|| QError::Parse {
                line: 0,
                column: 0,
                message: format!("malformed polygon point '{pair}'"),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<i64>().map_err(|_| QError::Parse {
                    line: 0,
                    column: 0,
                    message: format!("malformed polygon point '{pair}'"),
                })
            };
            out.push((parse(a)?, parse(b)?));
        }
        return Ok(out);
    }
    Err(QError::Unavailable(format!("no polygon data for p = {p}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opkit::JonesSequence;
    use sha2::{Digest, Sha256};

    #[test]
    fn checksums_match_manifest() {
        let mut listed = 0;
        for line in SHA256SUMS.lines().filter(|l| !l.trim().is_empty()) {
            let (sum, name) = line.split_once("  ").expect("sha256sum format");
            let (_, body) = FILES
                .iter()
                .find(|(n, _)| *n == name.trim())
                .unwrap_or_else(|| panic!("{name} listed but not embedded"));
            assert_eq!(hex::encode(Sha256::digest(body.as_bytes())), sum, "{name}");
            listed += 1;
        }
        assert_eq!(listed, FILES.len());
    }

    #[test]
    fn published_operators_parse_and_are_palindromic() {
        for (p, order, tpar, sign) in [(-2, 3, -5, -1), (2, 6, -8, 1)] {
            let op = published_operator(p).unwrap();
            assert_eq!(op.order(), order);
            let pal = op.check_palindromic();
            assert!(pal.verdict, "p = {p}: {:?}", pal.counterexamples);
            assert_eq!((pal.t, pal.sign), (tpar, sign));
            // round trip through the operator file format
            let back = InhomOperator::parse_file(&op.serialize()).unwrap();
            assert_eq!(back, op);
        }
        assert!(published_operator(3).is_err());
    }

    #[test]
    fn published_operators_annihilate_small_terms() {
        for p in [-2, 2] {
            let op = published_operator(p).unwrap();
            let seq = JonesSequence::new(KnotSpec::pretzel(p));
            for n in -6..6 {
                let r = op.apply(|k| seq.term(k), n).unwrap();
                assert!(r.is_zero(), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn epsilon_data_and_exponents() {
        let deltas: Vec<i64> = (-5..=5).map(|p| epsilon_delta(p).unwrap()).collect();
        assert_eq!(deltas, vec![68, 39, 18, 5, 1, 1, 1, 3, 15, 36, 65]);
        for p in -5..=5 {
            assert!(!epsilon(p).unwrap().is_zero());
        }
        assert!(epsilon(6).is_err() && epsilon_delta(-6).is_err());
    }

    #[test]
    fn polygon_data_is_available_for_small_knots() {
        for p in -2..=2 {
            assert!(polygon_support(p).unwrap().len() >= 2);
        }
        assert!(polygon_support(3).is_err());
    }
}
