use num_bigint::BigInt;

use super::*;
use crate::fusion::KnotSpec;
use crate::opkit::{InhomOperator, TriPoly};
use crate::qarith::{LaurentPoly, ModContext};

#[test]
fn value_counts() {
    assert_eq!(min_values_needed(1, 1, false), 5);
    assert_eq!(min_values_needed(3, 12, true), 68);
    assert_eq!(min_values_needed(0, 0, false), 1);
}

#[test]
fn symmetric_orbits() {
    let rect = StructureSet::rectangle(2, 4, false);
    assert_eq!(rect.len(), 15);
    assert_eq!(symmetry_reduce(&rect, 2).unknowns().len(), 8);
    let center = StructureSet::bivariate([(0, 0)], None);
    assert_eq!(symmetry_reduce(&center, 0).unknowns().len(), 1);
}

fn small_cfg() -> GuessConfig {
    GuessConfig {
        held_out: 2,
        ..GuessConfig::default()
    }
}

#[test]
fn geometric_sequence() {
    // f_n = q^n satisfies f_{n+1} = q f_n
    let oracle = FnOracle {
        modular: |n: i64, ctx: &ModContext| Ok(ctx.q_pow(n)),
        exact: Some(|n: i64| Ok(LaurentPoly::q_monomial(n, 1))),
    };
    let sset = StructureSet::bivariate([(0, 0), (1, 0), (0, 1)], None);
    let r = guess_modular(&oracle, &sset, &small_cfg(), None).unwrap();
    let want = InhomOperator::from_expressions("L - q", "0", None).unwrap();
    assert!(r.operator.canonically_equal(&want), "{}", r.operator);
    assert_eq!(r.nullspace_dim, 1);
    assert!(r.verification.passed() && r.verification.exact);
}

#[test]
fn constant_sequence_flat() {
    let values = vec![LaurentPoly::one(); 8];
    let sset = StructureSet::trivariate_box(1, 0, 0, None);
    let r = guess_flat(&values, &sset, &small_cfg(), None).unwrap();
    let want = InhomOperator::from_expressions("L - 1", "0", None).unwrap();
    assert!(r.operator.canonically_equal(&want), "{}", r.operator);
}

#[test]
fn inhomogeneous_flat_and_modular_agree() {
    // f_n = (1 − q^n)/(1 − q) satisfies f_{n+1} − f_n = q^n and, minimally,
    // the order-zero relation (q − 1) f_n = q^n − 1
    let f = |n: i64| -> LaurentPoly {
        LaurentPoly::from_terms((0..n).map(|k| (8 * k, BigInt::from(1))))
    };
    let values: Vec<LaurentPoly> = (0..12).map(f).collect();
    let flat = guess_flat(
        &values,
        &StructureSet::trivariate_box(1, 0, 0, Some(InhomPart { m_max: 1, q_max: 0 })),
        &small_cfg(),
        None,
    )
    .unwrap();
    // the box has no room in q, so the first-order relation is found
    let want = InhomOperator::from_expressions("L - 1", "M", None).unwrap();
    assert!(flat.operator.canonically_equal(&want), "{}", flat.operator);
    let want = InhomOperator::from_expressions("q - 1", "M - 1", None).unwrap();
    let oracle = FnOracle {
        modular: move |n: i64, ctx: &ModContext| f(n).eval_mod(ctx),
        exact: Some(move |n: i64| Ok(f(n))),
    };
    let sset = StructureSet::bivariate([(0, 0), (0, 1)], Some(1));
    let m = guess_modular(&oracle, &sset, &small_cfg(), None).unwrap();
    assert!(m.operator.canonically_equal(&want), "{}", m.operator);
}

#[test]
fn guessing_is_deterministic() {
    let oracle = KnotOracle::new(KnotSpec::pretzel(-1));
    let sset = StructureSet::rectangle(1, 6, true);
    let cfg = small_cfg();
    let a = guess_modular(&oracle, &sset, &cfg, None).unwrap();
    let b = guess_modular(&oracle, &sset, &cfg, None).unwrap();
    assert_eq!(a.operator, b.operator);
    assert_eq!(a.provenance, b.provenance);
    assert!(a.verification.passed());
    let _ = TriPoly::zero();
}
