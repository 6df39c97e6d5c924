use super::*;
use crate::data::{polygon_support, published_operator};

fn m_poly(terms: &[(i64, i64)]) -> TriPoly {
    laurent_m(terms)
}

#[test]
fn alexander_initial_conditions_and_recursion() {
    assert_eq!(alexander(0).in_m(), &m_poly(&[(-3, 1), (-2, -1), (0, 1), (2, -1), (3, 1)]));
    assert_eq!(
        alexander(1).in_m(),
        &m_poly(&[(-4, 1), (-3, -1), (-1, 1), (0, -1), (1, 1), (3, -1), (4, 1)])
    );
    let s = m_poly(&[(1, 1), (-1, 1)]);
    assert_eq!(alexander(2).in_m(), &s.mul(alexander(1).in_m()).sub(alexander(0).in_m()));
    // one backward step gives the (2,5) torus knot, two give 2t^{-1} - 3 + 2t
    assert_eq!(alexander(-1).in_m(), &m_poly(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]));
    assert_eq!(alexander(-2).in_m(), &m_poly(&[(-1, 2), (0, -3), (1, 2)]));
    for p in -12..=12 {
        let a = alexander(p);
        assert!(alexander_normalized(p), "Δ_{p}(1) = {}", a.at_one());
        // recursion holds everywhere
        let lhs = alexander(p + 2).in_m().sub(&s.mul(alexander(p + 1).in_m())).add(a.in_m());
        assert!(lhs.is_zero());
        // symmetric under t -> 1/t
        assert_eq!(a.in_m().subs_m_power(-1), *a.in_m());
    }
    assert_eq!(alexander(-2).to_string(), "2*t-3+2*t^-1");
}

#[test]
fn loop_identity_for_published_operators() {
    for p in [-2, 2] {
        let op = published_operator(p).unwrap();
        let v = check_loop(&op, p).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(v.detail.contains("u = -1"), "{}", v.detail);
        // the wrong Alexander polynomial is rejected
        assert!(!check_loop(&op, -p).unwrap().holds);
    }
}

/// `P = (q^2 M L − L + q^9 M^6 − q^8 M^5)`, `b = q^2 M^2 − q^5 M^4`: the
/// minimal operator of `K_{−1}`.
fn k_minus_one() -> InhomOperator {
    InhomOperator::from_expressions("q^2*M*L-L+q^9*M^6-q^8*M^5", "-q^5*M^4+q^2*M^2", None).unwrap()
}

#[test]
fn loop_identities_on_a_guessed_operator() {
    let op = k_minus_one();
    assert!(check_loop(&op, -1).unwrap().holds);
    // (L − 1)·(P, b) has A(M,1,1) = b(M,1) = 0 and must satisfy the
    // derivative identity with the same Alexander polynomial.
    let mut p2 = TriPoly::zero();
    for (k, c) in op.p().iter() {
        // L·q^e M^m L^l = q^{e+m} M^m L^{l+1}
        p2.add_term((k.0 + 1, k.1, k.2 + k.1), c.clone());
        p2.add_term(*k, -c.clone());
    }
    let mut b2 = TriPoly::zero();
    for (k, c) in op.b().iter() {
        b2.add_term((0, k.1, k.2 + k.1), c.clone());
        b2.add_term(*k, -c.clone());
    }
    let op2 = InhomOperator::new(p2, b2, None).unwrap();
    assert!(check_loop(&op2, -1).is_err());
    let v = check_loop_derivative(&op2, -1).unwrap();
    assert!(v.holds, "{v:?}");
    assert!(check_loop_auto(&op2, -1).unwrap().holds);
    assert!(!check_loop_derivative(&op2, 0).unwrap().holds);
    // the composed operator still annihilates the sequence
    let seq = crate::opkit::JonesSequence::new(KnotSpec::pretzel(-1));
    for n in -4..6 {
        assert!(op2.apply(|k| seq.term(k), n).unwrap().is_zero());
    }
}

#[test]
fn epsilon_palindromy_for_all_eleven() {
    for p in -5..=5 {
        let e = EpsilonFactor::load(p).unwrap();
        let v = check_epsilon_palindromy(&e);
        assert!(v.holds, "p = {p}: {}", v.detail);
        // the exponent equals the degree (ε has nonzero constant term)
        assert_eq!(e.degree(), e.delta, "p = {p}");
    }
    // a wrong exponent fails
    let mut e = EpsilonFactor::load(2).unwrap();
    e.delta += 1;
    assert!(!check_epsilon_palindromy(&e).holds);
}

#[test]
fn epsilon_minus_two_matches_its_factorization() {
    // ε_{−2}(M) = −(−1+M)^3 (1+M)^2
    let e = EpsilonFactor::load(-2).unwrap();
    let f = TriPoly::parse("-(-1+M)^3*(1+M)^2").unwrap();
    assert_eq!(e.poly, f);
}

#[test]
fn aj_quotient_reproduces_the_shipped_polygons() {
    for p in [-2, 2] {
        let op = published_operator(p).unwrap();
        let eps = EpsilonFactor::load(p).unwrap();
        let a = aj_quotient(&op, &eps.poly).unwrap();
        let mut support: Vec<(i64, i64)> = a.iter().map(|(k, _)| (k.1, k.0)).collect();
        let mmin = support.iter().map(|s| s.0).min().unwrap();
        let lmin = support.iter().map(|s| s.1).min().unwrap();
        for s in &mut support {
            *s = (s.0 - mmin, s.1 - lmin);
        }
        let mmax = support.iter().map(|s| s.0).max().unwrap();
        let lmax = support.iter().map(|s| s.1).max().unwrap();
        // orientation of the data: top L row at low M, i.e. (M, L) -> (mmax − M, L)
        let mut oriented: Vec<(i64, i64)> = support.iter().map(|&(m, l)| (mmax - m, l)).collect();
        let mut shipped = polygon_support(p).unwrap();
        oriented.sort();
        shipped.sort();
        let mut plain = support.clone();
        plain.sort();
        assert!(oriented == shipped || plain == shipped, "p = {p}: {oriented:?} vs {shipped:?}");
        assert_eq!(lmax, if p == -2 { 3 } else { 6 });
        assert_eq!(mmax, if p == -2 { 7 } else { 55 });
        // the full AJ check with the derived classical polynomial (in M^2) holds
        let classical = a.subs_m_power(2);
        assert!(check_aj(&op, &classical, &eps.poly).unwrap().holds);
        // and fails with a wrong ε
        let wrong = EpsilonFactor::load(-p).unwrap();
        assert!(aj_quotient(&op, &wrong.poly).is_err() || !check_aj(&op, &classical, &wrong.poly).unwrap().holds);
    }
}

#[test]
fn aj_trivial_case() {
    let op = crate::opkit::shift_minus_one();
    let classical = TriPoly::parse("L-1").unwrap();
    assert!(check_aj(&op, &classical, &TriPoly::one()).unwrap().holds);
}

#[test]
fn classical_polynomials_have_the_expected_spans() {
    let am3 = crate::data::classical_a(-3).unwrap();
    let r = am3.exponent_ranges().unwrap();
    assert_eq!(r[0].1 - r[0].0, 6);
    let a3 = crate::data::classical_a(3).unwrap();
    let r = a3.exponent_ranges().unwrap();
    assert_eq!(r[0].1 - r[0].0, 9);
    // both live in Q[M^2, L]
    assert!(am3.halve_m().is_ok() && a3.halve_m().is_ok());
}

#[test]
fn height_stats_examples() {
    let one = LaurentPoly::one();
    let st = height_stats(&one).unwrap();
    assert_eq!((st.min_exp, st.max_exp), (0, 0));
    assert_eq!((st.max_abs_coeff, st.abs_coeff_sum), (BigInt::one(), BigInt::one()));
    let f = LaurentPoly::parse_q_string("-1*q^8+1*q^5+1*q^3").unwrap();
    let st = height_stats(&f).unwrap();
    assert_eq!((st.min_exp, st.max_exp), (3, 8));
    assert_eq!(st.max_abs_coeff, BigInt::one());
    assert_eq!(st.abs_coeff_sum, BigInt::from(3));
}

#[test]
fn degree_model_basics() {
    assert_eq!(DegreeModel::delta_star(1), 0);
    assert_eq!(DegreeModel::delta_star(70), 345);
    // n ≡ 1 (mod 4) has no correction
    assert_eq!(DegreeModel::correction(5), Rational::zero());
    let rep = check_degrees(&KnotSpec::pretzel(2), 1..=6).unwrap();
    assert_eq!(rep.rows.len(), 6);
    // the minimum degree follows 5(n − 1) exactly
    assert!(rep.rows.iter().all(|r| r.min_matches), "{:?}", rep.rows);
    // the maximum follows the sign-flipped quasi-polynomial, not the printed one
    assert!(rep.rows.iter().all(|r| r.max_matches_sign_flipped), "{:?}", rep.rows);
    assert!(rep.rows.iter().skip(1).all(|r| !r.max_matches));
    assert_eq!(DegreeModel::delta_sign_flipped(70), Rational::from_integer(22606.into()));
}
