import numpy as np
import pytest

from sparsedom.verify import LEMMAS, LemmaContext, holder_constant, lemma_suite
from sparsedom.young import make_young


@pytest.fixture(scope="module")
def ctx():
    return LemmaContext(depth=7, draws=150)


@pytest.fixture(scope="module")
def reports(ctx):
    return {r.name: r for r in lemma_suite(ctx=ctx)}


def test_all_checks_pass_at_small_depth(reports):
    assert set(reports) == set(LEMMAS)
    bad = {k: r.summary() for k, r in reports.items() if not r.passed}
    assert not bad


def test_displayed_constants_are_hard_bounds(reports):
    for name in ("kolmogorov", "carleson", "holder", "holder_multi", "orlicz_fs", "fk_family"):
        assert reports[name].bound == 1.0
    assert reports["reverse_holder"].bound == pytest.approx(1.05)


def test_kolmogorov_indicator_closed_form():
    # f = 1 on a fraction s of Q: ||f||_p = s^(1/p), weak-q norm = s^(1/q)
    v = np.zeros(64)
    v[:16] = 1.0
    s = 0.25
    k = np.arange(1, 65) / 64
    for p, q in ((1.0, 2.0), (0.5, 1.0)):
        lp = (v**p).mean() ** (1 / p)
        weak = (v * k ** (1 / q)).max()
        assert lp == pytest.approx(s ** (1 / p))
        assert weak == pytest.approx(s ** (1 / q))
        assert lp <= (q / (q - p)) ** (1 / p) * weak


def test_holder_equality_case_within_round_off(reports):
    # the power(2) pair attains equality, so the constant sits at 1 up to round-off
    assert reports["holder"].constant <= 1.0
    assert reports["holder"].constant > 0.99


def test_holder_constant_two_powers():
    # 1/2 + 1/2 = 1: the L^2 x L^2 -> L^1 Holder constant is 1
    P2 = make_young("power", r=2.0)
    assert holder_constant([P2, P2], make_young("power", r=1.0)) == pytest.approx(1.0, rel=1e-6)


def test_unknown_check_rejected():
    with pytest.raises(ValueError):
        lemma_suite(["nope"], depth=5)


def test_threads_do_not_change_reports():
    names = ["kolmogorov", "holder", "weak11", "subset_decay"]
    a = lemma_suite(names, ctx=LemmaContext(depth=6, draws=50))
    b = lemma_suite(names, ctx=LemmaContext(depth=6, draws=50), threads=3)
    for x, y in zip(a, b):
        assert x.name == y.name
        assert np.array_equal(x.lhs, y.lhs) and np.array_equal(x.rhs, y.rhs)


def test_context_seed_changes_draws():
    a = lemma_suite(["holder"], ctx=LemmaContext(depth=6, draws=30, seed=0))[0]
    b = lemma_suite(["holder"], ctx=LemmaContext(depth=6, draws=30, seed=1))[0]
    assert not np.array_equal(a.lhs, b.lhs)
