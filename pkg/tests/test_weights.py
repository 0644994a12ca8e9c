import numpy as np
import pytest

from sparsedom.dyadic import Grid
from sparsedom.fields import Weight, power_weight
from sparsedom.weights import (a1_constant, ap_constant, fujii_wilson, reverse_holder_check,
                               rh_exponent, subset_decay_check, weak_ainfty, weight_constants)


def _one(grid):
    return Weight(grid, np.ones(grid.shape))


def _two_level(grid, a, b):
    v = np.full(grid.shape, float(b))
    v[: grid.N // 2] = a
    return Weight(grid, v)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
@pytest.mark.parametrize("mode", ["dyadic", "shifted"])
def test_unit_weight_constants(p, mode):
    w = _one(Grid(2, 4))
    assert ap_constant(w, p, mode) == pytest.approx(1.0, rel=1e-14)
    assert a1_constant(w, mode) == pytest.approx(1.0, rel=1e-14)


def test_unit_weight_fujii_wilson_dyadic():
    assert fujii_wilson(_one(Grid(1, 8)), "dyadic") == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_two_level_weight_closed_form(p):
    grid = Grid(1, 6)
    a, b = 1.0, 9.0
    w = _two_level(grid, a, b)
    q = 1 - p / (p - 1)
    root = (a + b) / 2 * ((a**q + b**q) / 2) ** (p - 1)
    # in the dyadic lattice only the root straddles the jump
    assert ap_constant(w, p, "dyadic") == pytest.approx(max(1.0, root), rel=1e-13)
    assert a1_constant(w, "dyadic") == pytest.approx((a + b) / 2 / a, rel=1e-14)


@pytest.mark.parametrize("c", [0.25, 3.0, 1e4])
def test_constants_scale_invariant(c):
    grid = Grid(1, 7)
    w = power_weight(grid, 0.5)
    cw = Weight(grid, c * w.values)
    assert ap_constant(cw, 2.0) == pytest.approx(ap_constant(w, 2.0), rel=1e-12)
    assert a1_constant(cw) == pytest.approx(a1_constant(w), rel=1e-12)
    assert fujii_wilson(cw) == pytest.approx(fujii_wilson(w), rel=1e-12)
    assert weak_ainfty(cw) == pytest.approx(weak_ainfty(w), rel=1e-12)


def test_a1_singular_power_weight_stable():
    a = a1_constant(power_weight(Grid(1, 9), -0.5))
    b = a1_constant(power_weight(Grid(1, 10), -0.5))
    assert np.isfinite(a) and abs(a / b - 1) < 0.2


def test_ap_rejects_p_le_one():
    with pytest.raises(ValueError):
        ap_constant(_one(Grid(1, 3)), 1.0)


def test_weight_constants_bundle():
    w = power_weight(Grid(1, 7), -0.5)
    wc = weight_constants(w)
    assert wc.tau_n == 2.0
    assert wc.rh_exponent == rh_exponent(wc.a_inf_weak, 1)
    # weak A_inf never exceeds Fujii-Wilson (w(2Q) >= w(Q)), and A_inf <= A_1
    assert wc.a_inf_weak <= wc.a_inf_fw * (1 + 1e-12)
    assert wc.a_inf_fw <= wc.a_1 * (1 + 1e-12)


def test_reverse_holder_unit_weight():
    rep = reverse_holder_check(_one(Grid(1, 7)))
    assert rep.passed
    assert np.allclose(rep.lhs, 1.0) and np.allclose(rep.rhs, 2.0)
    assert rep.constant == pytest.approx(0.5)


def test_reverse_holder_two_level_root_children():
    grid = Grid(1, 6)
    a, b = 1.0, 3.0
    w = _two_level(grid, a, b)
    rep = reverse_holder_check(w, "dyadic")
    r = rh_exponent(weak_ainfty(w, "dyadic"), 1)
    assert rep.passed
    # the cube [1/4, 1/2) has 2Q = [1/8, 5/8), which straddles the jump
    k = next(i for i in range(rep.lhs.size)
             if rep.params["side_cells"][i] == grid.N // 4 and rep.rhs[i] > 2 * a + 1e-9)
    assert rep.lhs[k] == pytest.approx(a, rel=1e-14)
    assert rep.rhs[k] == pytest.approx(2 * (3 * a + b) / 4, rel=1e-14)
    assert r > 1


def test_reverse_holder_spike_is_diagnostic():
    grid = Grid(1, 8)
    v = np.ones(grid.shape)
    v[77] = 1e6
    rep = reverse_holder_check(Weight(grid, v))
    # reported either way; the constant is finite
    assert np.isfinite(rep.constant)


def test_subset_decay_unit_weight():
    rep = subset_decay_check(_one(Grid(1, 6)), trials=500)
    assert np.all(rep.lhs <= 2 * rep.params["rho"] + 1e-15)
    assert rep.constant <= 1.0 + 1e-12


def test_subset_decay_power_weight_finite():
    rep = subset_decay_check(power_weight(Grid(1, 8), -0.5), trials=10_000, seed=1)
    assert np.isfinite(rep.constant) and rep.constant > 0
    assert np.all(rep.lhs <= rep.rhs * (1 + 1e-12))
