import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsedom.young import (CertificateNotFound, certify_y_class, check_invariants, conjugate,
                             equivalence_constants, luxemburg, make_young, parse_young, tabulate)

# mpmath findroot at 30 digits: t log(e + t) = 1 and = 2
LLOG1_INV_1 = 0.795702811082363121597416649494
LLOG1_INV_2 = 1.41046352320479036268712615493

REGISTERED = [
    ("power", {"r": 1.0}),
    ("power", {"r": 2.5}),
    ("llog", {"alpha": 1.0}),
    ("llog", {"alpha": 2.0}),
    ("llog_loglog", {"alpha": 1.0, "beta": 1.5}),
    ("plog", {"p": 2.0, "q": 1.0}),
    ("exp_minus_one", {}),
    ("exp_power", {"s": 2.0}),
]


def test_power_eval():
    assert make_young("power", r=2).eval(3.0) == 9.0


def test_llog_zero_and_inverse():
    A = make_young("llog", alpha=1)
    assert A.eval(0.0) == 0.0
    assert A.inverse(1.0) == pytest.approx(LLOG1_INV_1, rel=1e-12)


@pytest.mark.parametrize("name,params", REGISTERED)
def test_invariants_hold(name, params):
    A = make_young(name, **params)
    assert all(check_invariants(A).values())


@pytest.mark.parametrize("name,params", REGISTERED)
def test_inverse_roundtrip(name, params):
    A = make_young(name, **params)
    t = np.logspace(-3, 2, 41)
    assert np.allclose(A.eval(A.inverse(t)), t, rtol=1e-9)


@pytest.mark.parametrize("name,params", REGISTERED)
def test_log_forms_agree(name, params):
    A = make_young(name, **params)
    u = np.linspace(-3.0, 3.0, 25)
    assert np.allclose(A.log_eval(u), np.log(A.eval(np.exp(u))), rtol=1e-10, atol=1e-12)
    assert np.allclose(A.log_excess(u), A.log_eval(u) - u, rtol=1e-9, atol=1e-12)
    assert np.allclose(A.log_inverse(u), np.log(A.inverse(np.exp(u))), rtol=1e-8, atol=1e-10)


def test_log_excess_large_argument():
    # log A(e^u) - u cancels catastrophically at u = 1e18; the excess form does not
    A = make_young("llog", alpha=1.0)
    assert A.log_excess(1e18) == pytest.approx(math.log(1e18), rel=1e-12)


@pytest.mark.parametrize("name,params", [("power", {"r": 0.5}), ("llog", {"alpha": -1}),
                                         ("nope", {}), ("power", {"q": 2})])
def test_bad_parameters_rejected(name, params):
    with pytest.raises(ValueError):
        make_young(name, **params)


def test_parse_young():
    A = parse_young("llog_loglog:alpha=1,beta=1.5")
    assert A.params["alpha"] == 1.0 and A.params["beta"] == 1.5
    with pytest.raises(ValueError):
        parse_young("llog:alpha")


def test_conjugate_scaled_square():
    A = make_young("power", r=2.0, scale=0.5)
    t = np.linspace(0.0, 5.0, 11)
    assert np.allclose(conjugate(A).eval(t), t**2 / 2, rtol=1e-14)


def test_conjugate_of_identity_is_limiting():
    Ab = conjugate(make_young("power", r=1.0))
    assert not Ab.finite
    assert Ab.eval(0.5) == 0.0
    assert Ab.eval(1.5) == math.inf


def test_power_conjugate_matches_legendre():
    A = make_young("power", r=3.0)
    s = np.linspace(0.0, 20.0, 200001)
    for t in (0.5, 1.0, 2.0, 4.0):
        assert conjugate(A).eval(t) == pytest.approx(np.max(s * t - s**3), rel=1e-6)


def test_llog_conjugate_equivalent_to_exp():
    A = make_young("llog", alpha=1.0)
    assert A.conjugate_form == "equivalent-form"
    num = tabulate(conjugate(A))
    lo, hi = equivalence_constants(num, make_young("exp_power", s=1.0), np.logspace(0, 3, 50))
    assert 0.25 <= lo <= hi <= 4.0


def test_luxemburg_constant_function():
    A = make_young("llog", alpha=1.0)
    v = np.full(16, 3.0)
    assert float(luxemburg(v, A)) == pytest.approx(3.0 / LLOG1_INV_1, rel=1e-11)
    assert float(luxemburg(v, make_young("power", r=1.0))) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.parametrize("r", [1.0, 1.5, 2.0, 4.0])
def test_luxemburg_power_is_lr_average(r):
    rng = np.random.default_rng(7)
    v = rng.lognormal(0.0, 1.0, (50, 32))
    w = rng.random((50, 32)) + 0.1
    got = luxemburg(v, make_young("power", r=r), w)
    ref = ((v**r * w).sum(axis=-1) / w.sum(axis=-1)) ** (1 / r)
    assert np.allclose(got, ref, rtol=1e-8)


def test_luxemburg_half_indicator_llog():
    v = np.r_[np.ones(8), np.zeros(8)]
    # (1/2) A(1/lambda) = 1  =>  lambda = 1 / A^{-1}(2)
    assert float(luxemburg(v, make_young("llog", alpha=1.0))) == pytest.approx(
        1 / LLOG1_INV_2, rel=1e-11)


def test_luxemburg_rejects_nonfinite():
    with pytest.raises(ValueError):
        luxemburg(np.array([1.0, np.nan]), make_young("power", r=2))


def test_luxemburg_zero_and_limiting():
    assert float(luxemburg(np.zeros(4), make_young("llog", alpha=1))) == 0.0
    Ab = conjugate(make_young("power", r=1.0))
    assert float(luxemburg(np.array([0.2, 3.0, 1.0]), Ab)) == 3.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.0, 1e3), min_size=1, max_size=40),
       st.sampled_from(REGISTERED), st.floats(0.01, 100.0))
def test_luxemburg_homogeneous_and_feasible(vals, reg, c):
    A = make_young(reg[0], **reg[1])
    v = np.asarray(vals)
    n = float(luxemburg(v, A))
    assert float(luxemburg(c * v, A)) == pytest.approx(c * n, rel=1e-9, abs=1e-300)
    if n > 0:
        # the returned value is the upper end of the search bracket
        assert np.mean(A.eval(v / n)) <= 1.0 + 1e-12
        assert np.mean(A.eval(v / (n * (1 - 1e-9)))) > 1.0 - 1e-6


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.0, 50.0), min_size=2, max_size=30))
def test_luxemburg_monotone_in_young_function(vals):
    # A <= B pointwise implies ||f||_A <= ||f||_B
    v = np.asarray(vals)
    a = float(luxemburg(v, make_young("power", r=1.0)))
    b = float(luxemburg(v, make_young("llog", alpha=1.0)))
    assert a <= b * (1 + 1e-12)


def test_y_class_power():
    cert = certify_y_class(make_young("power", r=2.0), 2.0, 2.0)
    assert cert.c_p0 == pytest.approx(1.0) and cert.c_p1 == pytest.approx(1.0)
    assert cert.t_A == 1.0


def test_y_class_llog_is_finite():
    cert = certify_y_class(make_young("llog", alpha=1.0), 1.0, 1.0)
    assert np.isfinite(cert.c_p0) and np.isfinite(cert.c_p1)


def test_y_class_rejects_faster_growth():
    with pytest.raises(CertificateNotFound):
        certify_y_class(make_young("power", r=2.0), 3.0, 3.0)


def test_custom_young_checked():
    A = make_young("custom", evaluator=lambda t: t**2 + t)
    assert A.eval(2.0) == 6.0
    with pytest.raises(ValueError):
        make_young("custom", evaluator=lambda t: np.sqrt(t))
