use super::*;
use crate::qarith::modular::{word_primes, Fp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lp(s: &str) -> LaurentPoly {
    LaurentPoly::parse_q_string(s).unwrap()
}

#[test]
fn monomial_blocks() {
    assert!(mu(0).is_one());
    assert_eq!(mu(2), LaurentPoly::monomial(16, 1));
    assert_eq!(mu(1), LaurentPoly::monomial(6, -1));
    for a in 0..6 {
        assert!(nu(a, a, 0).is_one());
    }
    assert!(nu(1, 1, 1).is_zero());
}

#[test]
fn theta_and_tet_small_values() {
    assert!(theta_eval(0, 0, 0).is_one());
    assert!(theta_eval(1, 1, 1).is_zero());
    assert!(theta_eval(4, 1, 1).is_zero());
    assert!(tet_eval(0, 0, 0, 0, 0, 0).is_one());
    // Θ(a, a, 0) = U(a) up to the sign convention of the normalization
    for a in 0..5 {
        assert_eq!(theta_eval(a, a, 0), u_eval(a));
    }
    assert_eq!(u_eval(1), LaurentPoly::monomial(4, -1) + LaurentPoly::monomial(-4, -1));
}

#[test]
fn tet_symmetry_under_pair_swap() {
    for (a, b, c, d, e, f) in [(2, 2, 2, 2, 2, 2), (1, 1, 2, 2, 1, 1), (3, 1, 3, 1, 2, 4), (2, 4, 2, 4, 2, 2)] {
        assert_eq!(tet_eval(a, b, c, d, e, f), tet_eval(d, c, b, a, e, f));
    }
}

fn brute_force_points(n: i64) -> Vec<(i64, i64)> {
    // membership in the convex hull of n·{(0,0),(1/2,-1/2),(1,0),(1,1)}:
    // the point must lie left of (or on) every counter-clockwise edge.
    let v = [(0, 0), (n, -n), (2 * n, 0), (2 * n, 2 * n)]; // doubled coordinates
    let mut out = Vec::new();
    for k1 in -1..=n + 1 {
        for k2 in -n - 1..=n + 1 {
            let (x, y) = (2 * k1, 2 * k2);
            let inside = (0..4).all(|i| {
                let (ax, ay) = v[i];
                let (bx, by) = v[(i + 1) % 4];
                (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= 0
            });
            if inside {
                out.push((k1, k2));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn lattice_points_match_hull_membership() {
    assert_eq!(lattice_points(0), vec![(0, 0)]);
    let mut p1 = lattice_points(1);
    p1.sort();
    assert_eq!(p1, vec![(0, 0), (1, 0), (1, 1)]);
    assert_eq!(lattice_points(2).len(), 7);
    for n in 1..8 {
        let mut p = lattice_points(n);
        p.sort();
        assert_eq!(p, brute_force_points(n), "n = {n}");
    }
}

#[test]
fn trefoil_family_small_colors() {
    let k0 = KnotSpec::pretzel(0);
    assert!(colored_jones(&k0, 1).unwrap().is_one());
    assert!(colored_jones(&k0, 0).unwrap().is_one());
    assert_eq!(colored_jones(&k0, 2).unwrap(), lp("-1*q^8+1*q^5+1*q^3"));
    assert_eq!(colored_jones(&k0, -2).unwrap(), colored_jones(&k0, 2).unwrap());
}

#[test]
fn fast_engine_matches_reference() {
    for (m1, m2) in [(-3, 1), (-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1), (3, 1), (1, 2), (-1, -1), (2, -2)] {
        let spec = KnotSpec::fusion(m1, m2);
        for n in 1..=5 {
            let a = colored_jones(&spec, n).unwrap();
            let b = colored_jones_reference(&spec, n).unwrap();
            assert_eq!(a, b, "K({m1},{m2}), n = {n}");
            assert!(a.is_q_integral());
        }
    }
}

#[test]
fn jones_polynomial_at_one_is_one() {
    for p in -4..=4 {
        for n in 1..=8 {
            let j = colored_jones(&KnotSpec::pretzel(p), n).unwrap();
            assert_eq!(j.eval_at_one(), 1.into(), "p={p} n={n}");
        }
    }
}

#[test]
fn modular_matches_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let primes = word_primes(3);
    let exact: Vec<Vec<LaurentPoly>> = [-2i64, 0, 2]
        .iter()
        .map(|&p| (0..=15).map(|n| colored_jones(&KnotSpec::pretzel(p), n).unwrap()).collect())
        .collect();
    let mut checked = 0;
    while checked < 10 {
        let m = primes[checked % primes.len()];
        let t0 = rng.gen_range(2..m - 1);
        let ctx = ModContext::from_t0(m, t0).unwrap();
        for (pi, &p) in [-2i64, 0, 2].iter().enumerate() {
            let ev = match ModJonesEvaluator::new(&KnotSpec::pretzel(p), &ctx, 15) {
                Ok(ev) => ev,
                Err(_) => continue,
            };
            for n in 0..=15 {
                assert_eq!(ev.value(n).unwrap(), exact[pi][n as usize].eval_mod(&ctx).unwrap());
            }
        }
        checked += 1;
    }
    // small prime, explicit t0
    let ctx = ModContext::from_t0(101, 3).unwrap();
    let v = colored_jones_mod(&KnotSpec::pretzel(0), 2, &ctx).unwrap();
    let f = Fp::new(101);
    let q0 = f.pow(3, 8);
    let want = (f.pow(q0, 5) + f.pow(q0, 3) + 101 - f.pow(q0, 8)) % 101;
    assert_eq!(v, want);
    assert_eq!(colored_jones_mod(&KnotSpec::pretzel(4), 1, &ctx).unwrap(), 1);
}

#[test]
fn shapes_convert_to_polynomials() {
    assert_eq!(shape_to_laurent(&Shape::qint(3)).unwrap(), lp("q+1+q^-1"));
    assert_eq!(
        shape_to_laurent(&Shape::multinomial(2, &[1, 1])).unwrap(),
        LaurentPoly::monomial(4, 1) + LaurentPoly::monomial(-4, 1)
    );
}

#[test]
fn dense_modular_matches_exact() {
    let p = word_primes(1)[0];
    let f = Fp::new(p);
    for m in [-3i64, 2] {
        let spec = KnotSpec::pretzel(m);
        for n in 0..=12 {
            let exact = colored_jones(&spec, n).unwrap();
            let mp = colored_jones_modpoly(&spec, n, p).unwrap();
            let want: Vec<(i64, u64)> = exact
                .q_terms()
                .unwrap()
                .into_iter()
                .map(|(e, c)| (e, f.from_i64(i64::try_from(c.clone() % BigInt::from(p)).unwrap())))
                .collect();
            assert_eq!(mp, ModPoly::from_terms(p, &want), "p={m} n={n}");
        }
    }
}
