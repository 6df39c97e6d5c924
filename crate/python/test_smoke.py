"""Smoke test of the Python bindings.

Build and install them first:
    pip install --no-build-isolation -e crates/py
then run
    python -m pytest python/
"""

import json
import math

import qknot_py as qk


def test_colored_jones_of_small_colors():
    assert qk.colored_jones(1, p=0) == [(0, 1)]
    assert qk.colored_jones(2, p=0) == [(3, 1), (5, 1), (8, -1)]
    assert qk.jones_string(2, p=0) == "-1*q^8+1*q^5+1*q^3"
    assert qk.colored_jones(3, p=1) == qk.colored_jones(3, m1=1, m2=1)


def test_big_coefficients_are_python_ints():
    terms = qk.colored_jones(40, p=2)
    assert all(isinstance(c, int) for _, c in terms)
    assert max(abs(c) for _, c in terms) > 2**20


def test_embedded_operator_annihilates_the_sequence():
    doc = qk.published_operator(-2)
    assert json.loads(doc)["format"] == "qknot-operator/1"
    assert qk.verify(doc, -4, 10) == []
    assert qk.verify(doc, 0, 3, p=2) != []


def test_consistency_checks_hold():
    doc = qk.published_operator(2)
    checks = qk.check_operator(doc, 2)
    assert checks
    assert all(holds for _, holds, _ in checks)


def test_kashaev_invariant():
    re, im, a_n, err = qk.kashaev(2, 100)
    assert abs(a_n - 3.2230917567) < 1e-9
    assert err is not None and err < 1e-12
    assert math.isclose(math.log(math.hypot(re, im)) * 2 * math.pi / 100, a_n, rel_tol=1e-9)


def test_volume_fit_recovers_a_model():
    pts = [(n, 2.0 + 3.0 * math.log(n) / n - 1.5 / n) for n in range(50, 200)]
    c0, c1, c2 = qk.volume_fit(pts, 50, 199)
    assert abs(c0 - 2.0) < 1e-9 and abs(c1 - 3.0) < 1e-7 and abs(c2 + 1.5) < 1e-6


def test_errors_become_python_exceptions():
    try:
        qk.colored_jones(2)
    except ValueError:
        pass
    else:
        raise AssertionError("missing knot accepted")
    try:
        qk.published_operator(7)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown operator accepted")
