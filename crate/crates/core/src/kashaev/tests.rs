use super::*;
use crate::data::published_operator;
use crate::opkit::shift_minus_one;
use num_traits::{One, Zero};

fn close(a: &MpComplex, b: &MpComplex, rel_bits: i32) -> bool {
    let d = a.sub(b, 256);
    d.is_zero() || d.ln_abs() - b.ln_abs() < -(rel_bits as f64) * std::f64::consts::LN_2
}

#[test]
fn trivial_remainders() {
    for p in [-2, 0, 2] {
        let t = tau_direct(&KnotSpec::pretzel(p), 1).unwrap();
        assert_eq!(t, vec![BigInt::one()]);
    }
    // J_{0,2} = −q^8 + q^5 + q^3: −3 modulo q + 1, and 1 modulo q^2 + q + 1
    let t = tau_direct(&KnotSpec::pretzel(0), 2).unwrap();
    assert_eq!(t, vec![BigInt::from(-3)]);
    let j = colored_jones(&KnotSpec::pretzel(0), 2).unwrap();
    assert_eq!(tau_from_jones(&j, 3).unwrap(), vec![BigInt::one(), BigInt::zero()]);
}

#[test]
fn constant_sequence_has_invariant_one() {
    let op = shift_minus_one();
    let cfg = KashaevConfig::default();
    for n in [1u64, 2, 7, 50] {
        let v = kashaev_recurrence(&op, &[LaurentPoly::one()], n, &cfg).unwrap();
        assert!(close(&v.value, &MpComplex::one(), 150), "N = {n}");
        assert!(v.a_n.abs() < 1e-15, "{} {:?}", v.a_n, v.value);
    }
}

#[test]
fn recurrence_matches_exact_values() {
    let cfg = KashaevConfig {
        precision: 160,
        ..KashaevConfig::default()
    };
    for p in [-2i64, 2] {
        let spec = KnotSpec::pretzel(p);
        let op = published_operator(p).unwrap();
        let seeds = exact_seeds(&spec, op.order()).unwrap();
        for n in [3u64, 9, 16, 23, 30] {
            for conv in [Convention::Shifted, Convention::Dimension] {
                let cfg = KashaevConfig { convention: conv, ..cfg };
                let v = kashaev_recurrence(&op, &seeds, n, &cfg).unwrap();
                let exact = kashaev_exact(&spec, n, conv, 2 * cfg.precision).unwrap();
                assert!(
                    close(&v.value, &exact, cfg.precision as i32 - 10),
                    "p = {p}, N = {n}, {conv:?}: {:?} vs {:?}",
                    v.value.to_f64_pair(),
                    exact.to_f64_pair()
                );
                assert!(v.err.unwrap() < 1e-20);
            }
        }
    }
}

#[test]
fn shifted_convention_is_trivial() {
    // J_{K,N−1}(ζ_N) = 1 for every knot
    for p in [-2i64, 0, 2] {
        for n in [5u64, 12, 21] {
            let v = kashaev_exact(&KnotSpec::pretzel(p), n, Convention::Shifted, 128).unwrap();
            assert!(close(&v, &MpComplex::one(), 120), "p = {p}, N = {n}");
        }
    }
}

#[test]
fn recurrence_matches_the_remainder_up_to_sixty() {
    let spec = KnotSpec::pretzel(2);
    let op = published_operator(2).unwrap();
    let seeds = exact_seeds(&spec, op.order()).unwrap();
    let cfg = KashaevConfig::default();
    for n in [41u64, 60] {
        let tau = tau_direct(&spec, n).unwrap();
        assert_eq!(tau.len(), crate::qarith::cyclotomic::cyclotomic(n).unwrap().degree());
        let ctx = RootOfUnityCtx::new(n, 2 * cfg.precision).unwrap();
        let exact = eval_remainder(&tau, &ctx);
        let v = kashaev_recurrence(&op, &seeds, n, &cfg).unwrap();
        assert!(close(&v.value, &exact, cfg.precision as i32 - 10), "N = {n}");
        assert!(v.err.unwrap() < 1e-40);
    }
}

#[test]
fn doubling_the_precision_stays_within_the_error_bound() {
    let spec = KnotSpec::pretzel(2);
    let op = published_operator(2).unwrap();
    let seeds = exact_seeds(&spec, op.order()).unwrap();
    for n in [150u64, 331] {
        let lo = kashaev_recurrence(&op, &seeds, n, &KashaevConfig { precision: 96, ..Default::default() }).unwrap();
        let hi = kashaev_recurrence(&op, &seeds, n, &KashaevConfig { precision: 192, ..Default::default() }).unwrap();
        let bound = lo.err.unwrap().max(1e-25);
        assert!((lo.a_n - hi.a_n).abs() <= bound, "N = {n}: {} vs {}", lo.a_n, hi.a_n);
    }
}

#[test]
fn degenerate_steps_are_detected_where_expected() {
    // the leading coefficient of A_2 contains q^7 M − 1, which vanishes at
    // step N − 7: reached only in the dimension convention.  The shifted
    // convention evaluates to exactly 1.
    let spec = KnotSpec::pretzel(2);
    let op = published_operator(2).unwrap();
    let seeds = exact_seeds(&spec, op.order()).unwrap();
    let base = KashaevConfig {
        precision: 128,
        error_estimate: false,
        ..KashaevConfig::default()
    };
    let shifted = KashaevConfig {
        convention: Convention::Shifted,
        ..base
    };
    let v = kashaev_recurrence(&op, &seeds, 20, &shifted).unwrap();
    assert!(v.degenerate_steps.is_empty());
    assert!(close(&v.value, &MpComplex::one(), 100));
    let cfg = base;
    let v = kashaev_recurrence(&op, &seeds, 20, &cfg).unwrap();
    assert_eq!(v.degenerate_steps, vec![13]);
}

#[test]
fn fit_recovers_exact_models() {
    let pts: Vec<(u64, f64)> = (10..200)
        .map(|n| {
            let x = n as f64;
            (n, 1.0 + 2.0 * x.ln() / x + 3.0 / x)
        })
        .collect();
    let f = volume_fit(&pts, (0, u64::MAX)).unwrap();
    assert!((f.c0 - 1.0).abs() < 1e-9 && (f.c1 - 2.0).abs() < 1e-8 && (f.c2 - 3.0).abs() < 1e-7);
    assert!(f.residual < 1e-12);
    assert_eq!((f.window, f.points), ((10, 199), 190));
    let pts: Vec<(u64, f64)> = (10..40).map(|n| (n, 2.5)).collect();
    let f = volume_fit(&pts, (0, 100)).unwrap();
    assert!((f.c0 - 2.5).abs() < 1e-10 && f.c1.abs() < 1e-8 && f.c2.abs() < 1e-8);
    assert!(volume_fit(&pts, (10, 11)).is_err());
}

#[test]
fn csv_rows_have_five_fields() {
    let op = shift_minus_one();
    let v = kashaev_recurrence(&op, &[LaurentPoly::one()], 5, &KashaevConfig::default()).unwrap();
    assert_eq!(v.csv_row().split(',').count(), 5);
    assert_eq!(CSV_HEADER.split(',').count(), 5);
}
