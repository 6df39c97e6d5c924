//! Python bindings: exact colored Jones polynomials, the embedded
//! recurrences and their checks, and Kashaev invariants.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qknot::consistency::check_operator as check_operator_core;
use qknot::data::published_operator as published_operator_core;
use qknot::fusion::{colored_jones as colored_jones_core, KnotSpec};
use qknot::kashaev::{kashaev_recurrence, volume_fit as volume_fit_core, KashaevConfig};
use qknot::opkit::{jones_dimension, InhomOperator, SEQUENCE_SIGN};
use qknot::qarith::LaurentPoly;
use qknot::QError;

fn py_err(e: QError) -> PyErr {
    match e {
        QError::InvalidArgument(_) | QError::Parse { .. } | QError::Unavailable(_) => {
            PyValueError::new_err(e.to_string())
        }
        QError::Numeric(_) | QError::Degenerate(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn knot(p: Option<i64>, m1: Option<i64>, m2: Option<i64>) -> PyResult<KnotSpec> {
    match (p, m1, m2) {
        (Some(p), None, None) => Ok(KnotSpec::pretzel(p)),
        (None, Some(m1), Some(m2)) => Ok(KnotSpec::fusion(m1, m2)),
        _ => Err(PyValueError::new_err("give either p or both m1 and m2")),
    }
}

fn parse_operator(text: &str) -> PyResult<InhomOperator> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    InhomOperator::from_json(&v).map_err(py_err)
}

/// `J_{K,n}` as a list of `(exponent, coefficient)` pairs in increasing
/// exponent order (`n` is the dimension of the coloring).
#[pyfunction]
#[pyo3(signature = (n, p=None, m1=None, m2=None))]
fn colored_jones(
    n: i64,
    p: Option<i64>,
    m1: Option<i64>,
    m2: Option<i64>,
) -> PyResult<Vec<(i64, num_bigint::BigInt)>> {
    let j = colored_jones_core(&knot(p, m1, m2)?, n).map_err(py_err)?;
    j.q_terms().map_err(py_err)
}

/// `J_{K,n}` in the canonical text form `c*q^e+…`.
#[pyfunction]
#[pyo3(signature = (n, p=None, m1=None, m2=None))]
fn jones_string(n: i64, p: Option<i64>, m1: Option<i64>, m2: Option<i64>) -> PyResult<String> {
    let j = colored_jones_core(&knot(p, m1, m2)?, n).map_err(py_err)?;
    j.to_q_string().map_err(py_err)
}

/// The embedded recurrence of the pretzel knot `K_p` (`p = ±2`) as an
/// operator document.
#[pyfunction]
fn published_operator(p: i64) -> PyResult<String> {
    let op = published_operator_core(p).map_err(py_err)?;
    Ok(op.to_json().to_string())
}

/// Indices `n` in `lo..=hi` where the operator does not annihilate the
/// colored Jones sequence (empty when it holds everywhere).
#[pyfunction]
#[pyo3(signature = (operator, lo, hi, p=None))]
fn verify(operator: &str, lo: i64, hi: i64, p: Option<i64>) -> PyResult<Vec<i64>> {
    let op = parse_operator(operator)?;
    let spec = p
        .map(KnotSpec::pretzel)
        .or(op.knot)
        .ok_or_else(|| PyValueError::new_err("the operator names no knot; pass p"))?;
    let term = |k: i64| -> qknot::QResult<LaurentPoly> {
        let j = colored_jones_core(&spec, jones_dimension(k))?;
        Ok(if SEQUENCE_SIGN < 0 { -j } else { j })
    };
    let mut failures = Vec::new();
    for n in lo..=hi {
        if !op.apply(term, n).map_err(py_err)?.is_zero() {
            failures.push(n);
        }
    }
    Ok(failures)
}

/// Consistency checks of an operator for `K_p`, as `(name, holds, detail)`.
#[pyfunction]
fn check_operator(operator: &str, p: i64) -> PyResult<Vec<(String, bool, String)>> {
    let op = parse_operator(operator)?;
    let report = check_operator_core(&op, p).map_err(py_err)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| (c.name, c.holds, c.detail))
        .collect())
}

/// Kashaev invariant `⟨K_p⟩_N` from the embedded recurrence, as
/// `(re, im, a_N, err)`; `err` is `None` without the error estimate.
#[pyfunction]
#[pyo3(signature = (p, n, precision=128, error_estimate=true))]
fn kashaev(
    p: i64,
    n: u64,
    precision: u32,
    error_estimate: bool,
) -> PyResult<(f64, f64, f64, Option<f64>)> {
    let op = published_operator_core(p).map_err(py_err)?;
    let spec = KnotSpec::pretzel(p);
    let seeds = (1..=op.order())
        .map(|d| colored_jones_core(&spec, d))
        .collect::<qknot::QResult<Vec<_>>>()
        .map_err(py_err)?;
    let cfg = KashaevConfig {
        precision,
        error_estimate,
        ..KashaevConfig::default()
    };
    let v = kashaev_recurrence(&op, &seeds, n, &cfg).map_err(py_err)?;
    let (re, im) = v.value.to_f64_pair();
    Ok((re, im, v.a_n, v.err))
}

/// Least-squares fit of `c0 + c1 log(N)/N + c2/N` to `(N, a_N)` points with
/// `lo <= N <= hi`; returns `(c0, c1, c2)`.
#[pyfunction]
fn volume_fit(points: Vec<(u64, f64)>, lo: u64, hi: u64) -> PyResult<(f64, f64, f64)> {
    let f = volume_fit_core(&points, (lo, hi)).map_err(py_err)?;
    Ok((f.c0, f.c1, f.c2))
}

#[pymodule]
fn qknot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(colored_jones, m)?)?;
    m.add_function(wrap_pyfunction!(jones_string, m)?)?;
    m.add_function(wrap_pyfunction!(published_operator, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(check_operator, m)?)?;
    m.add_function(wrap_pyfunction!(kashaev, m)?)?;
    m.add_function(wrap_pyfunction!(volume_fit, m)?)?;
    Ok(())
}
