import itertools

import numpy as np
import pytest

from sparsedom.dyadic import Cube, Grid, SparseFamily
from sparsedom.fields import ScalarField, constant, log_singular, random_field
from sparsedom.kernels import CommutatorSpec
from sparsedom.sparse import (SparseBuildError, build_sparse_family, default_corpus,
                              domination_check, domination_report, sparse_eval, sparse_sum)
from sparsedom.young import luxemburg, make_young


@pytest.fixture(scope="module")
def built():
    out = {}
    for m in (0, 1, 2):
        c = default_corpus(8, m)
        out[m] = (c, build_sparse_family(c.kernel, c.spec, c.f, c.Q0, c.A))
    return out


def test_zero_input_gives_single_cube():
    c = default_corpus(7, 1)
    zero = constant(c.grid, 0.0)
    rep = build_sparse_family(c.kernel, c.spec, zero, c.Q0, c.A, C_T=1.0)
    assert rep.family.cubes == [c.Q0]
    assert rep.alphas == [1.0]
    assert domination_report(c.kernel, c.spec, zero, c.A, rep) == 0.0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_family_is_half_sparse_with_exact_counts(built, m):
    c, rep = built[m]
    assert rep.verify()
    assert rep.selection_ok()
    for nd in rep.nodes:
        assert 2 * nd.p_cells <= nd.cube.n_cells
    assert rep.depth <= c.grid.depth - c.Q0.level
    # each tripled lattice family is sparse with the 3^-n loss
    for j, fam in rep.lattices.items():
        assert fam.measured_eta() >= 0.5 / 3 ** c.grid.n - 1e-15


def test_children_nested_in_parent(built):
    _, rep = built[1]
    for nd in rep.nodes:
        for P in nd.children:
            assert nd.cube.contains(P) and P != nd.cube


def test_build_rejects_bad_support():
    c = default_corpus(7, 0)
    with pytest.raises(ValueError):
        build_sparse_family(c.kernel, c.spec, constant(c.grid), c.Q0, c.A, C_T=1.0)
    with pytest.raises(ValueError):
        build_sparse_family(c.kernel, c.spec, c.f, Cube(0, 1, (0,), c.grid), c.A, C_T=1.0)


def test_build_alpha_cap():
    c = default_corpus(7, 0)
    with pytest.raises(SparseBuildError):
        # a tiny C_T inflates the grand maximal ratio past any cap
        build_sparse_family(c.kernel, c.spec, c.f, c.Q0, c.A, C_T=1e-12, max_alpha=4.0)


def test_sparse_eval_empty_family():
    grid = Grid(1, 5)
    f = random_field(grid, seed=1)
    out = sparse_eval(SparseFamily(grid), make_young("power", r=1.0), CommutatorSpec(()), f, ())
    assert np.all(out.values == 0.0)


def test_sparse_eval_single_cube_m0():
    grid = Grid(1, 6)
    Q = Cube(0, 2, (1,), grid)
    fam = SparseFamily(grid)
    fam.add(Q)
    f = random_field(grid, seed=2)
    A = make_young("llog", alpha=1.0)
    out = sparse_eval(fam, A, CommutatorSpec(()), f, ()).values
    norm = float(luxemburg(Q.restrict(f.values).ravel(), A))
    assert np.allclose(out[Q.slices], norm, rtol=1e-15)
    assert np.all(out[~Q.mask()] == 0.0)


def test_sparse_eval_single_cube_m1():
    grid = Grid(1, 6)
    Q = Cube(0, 1, (1,), grid)
    fam = SparseFamily(grid)
    fam.add(Q)
    f = random_field(grid, seed=3)
    b = log_singular(grid, 0.7)
    spec = CommutatorSpec((b,))
    A = make_young("power", r=2.0)
    bq = Q.restrict(b.values)
    fq = Q.restrict(f.values)
    osc = bq - bq.mean()
    # power(2) Luxemburg norm is the root mean square
    got1 = sparse_eval(fam, A, spec, f, (1,)).values[Q.slices]
    assert np.allclose(got1, np.abs(osc) * np.sqrt(np.mean(fq**2)), rtol=1e-11)
    got0 = sparse_eval(fam, A, spec, f, (0,)).values[Q.slices]
    assert np.allclose(got0, np.sqrt(np.mean((osc * fq) ** 2)), rtol=1e-11)
    with pytest.raises(ValueError):
        sparse_eval(fam, A, spec, f, (0, 1))


def test_sparse_sum_adds_all_gammas(built):
    c, rep = built[1]
    tot = sparse_sum(rep, c.A, c.spec, c.f).values
    ref = sum(sparse_eval(S, c.A, c.spec, c.f, g).values
              for S in rep.lattices.values() for g in itertools.product((0, 1), repeat=1))
    assert np.allclose(tot, ref, rtol=1e-14)


@pytest.mark.parametrize("m", [0, 1])
def test_domination_constant_stable_across_depths(m):
    vals = []
    for J in (7, 8):
        c = default_corpus(J, m)
        vals.append(domination_report(c.kernel, c.spec, c.f, c.A, Q0=c.Q0))
    assert all(np.isfinite(vals)) and max(vals) <= 2 * min(vals)


def test_domination_check_report(built):
    c, rep = built[0]
    chk = domination_check(c.kernel, c.spec, c.f, c.A, rep)
    assert chk.lhs.size == c.Q0.n_cells
    assert np.all(chk.rhs > 0)
    assert "C_T" in chk.notes


def test_default_corpus_shapes():
    c = default_corpus(6, 2, n=2)
    assert c.grid.n == 2 and len(c.spec.fields()) == 2
    assert c.kernel.name == "homogeneous2d"
    with pytest.raises(ValueError):
        default_corpus(6, 4)


def test_build_is_deterministic():
    c = default_corpus(7, 1)
    a = build_sparse_family(c.kernel, c.spec, c.f, c.Q0, c.A, C_T=5.0)
    b = build_sparse_family(c.kernel, c.spec, c.f, c.Q0, c.A, C_T=5.0)
    assert a.family.cubes == b.family.cubes and a.alphas == b.alphas
    assert isinstance(c.f, ScalarField)
