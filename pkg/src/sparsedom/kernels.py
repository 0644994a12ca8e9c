"""Kernels, Hörmander constants, operators, commutators and grand maximal operators.

Operators are discretized with a principal-value surrogate: for a cell x,
``Tf(x) = sum_{y != x} K(x, y) f(y) h**n`` with x, y the cell centers, so
only the diagonal cell is dropped.  Convolution kernels are stored as a
table of ``K`` on all cell displacements; everything else is evaluated in
row chunks.
"""
from __future__ import annotations

import csv
import functools
import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import signal
from scipy.sparse import linalg as sparse_linalg

from .dyadic import Block, Cube, Grid, descendant_blocks, family_blocks
from .fields import ScalarField
from .young import YoungFunction, luxemburg

__all__ = [
    "Kernel",
    "CommutatorSpec",
    "make_kernel",
    "parse_kernel",
    "kernel_from_csv",
    "size_check",
    "apply",
    "apply_adjoint",
    "commutator_apply",
    "local_potential",
    "grand_maximal_local",
    "grand_local_window",
    "grand_maximal",
    "hormander_constant",
    "operator_norm",
    "omega_modulus",
]

_CHUNK = 1 << 22  # matrix entries per row chunk


@dataclass(frozen=True, eq=False)
class Kernel:
    """K(x, y) off the diagonal, with size constant ``C_K``.

    ``func`` takes broadcastable point arrays of shape ``(..., n)``.  A
    convolution kernel also carries ``profile(d)`` with ``K(x, y) = profile(x - y)``.
    A tabulated kernel carries the full cell matrix ``table`` for one grid.
    """

    name: str
    n: int
    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    C_K: float
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    table: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    @property
    def convolution(self) -> bool:
        return self.profile is not None

    def __call__(self, x, y):
        return self.func(np.asarray(x, float), np.asarray(y, float))


@dataclass(frozen=True)
class CommutatorSpec:
    """Symbols b = (b_1, ..., b_m) and the active subset sigma (all by default)."""

    b: tuple = ()
    sigma: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if self.sigma is not None:
            s = tuple(sorted(set(int(i) for i in self.sigma)))
            if any(i < 0 or i >= len(self.b) for i in s):
                raise ValueError(f"subset {self.sigma} not inside 0..{len(self.b) - 1}")
            object.__setattr__(self, "sigma", s)

    @classmethod
    def iterate(cls, b: ScalarField, m: int) -> "CommutatorSpec":
        return cls((b,) * m)

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(range(self.m)) if self.sigma is None else self.sigma

    def subset(self, sigma: Sequence[int]) -> "CommutatorSpec":
        return CommutatorSpec(self.b, tuple(sigma))

    def fields(self) -> list[np.ndarray]:
        return [self.b[i].values for i in self.active]


# ---------------------------------------------------------------------------
# built-in kernels


def _norm(d):
    return np.sqrt((d * d).sum(axis=-1))


def _hilbert(d):
    d = d[..., 0]
    with np.errstate(divide="ignore"):
        return np.where(d != 0, 1.0 / np.where(d != 0, d, 1.0), 0.0)


def _hilbert_osc(amp):
    def prof(d):
        d = d[..., 0]
        a = np.abs(d)
        safe = np.where(a > 0, a, 1.0)
        return np.where(a > 0, (1.0 + amp * np.cos(np.log(safe))) / np.where(d != 0, d, 1.0), 0.0)
    return prof


def _omega_mesh(spec, M: int) -> np.ndarray:
    th = 2 * np.pi * np.arange(M) / M
    if isinstance(spec, str):
        table = {
            "cos2": np.cos(2 * th),
            "sin2": np.sin(2 * th),
            "sin": np.sin(th),
            "cos": np.cos(th),
        }
        if spec not in table:
            raise ValueError(f"unknown angular profile {spec!r}")
        return table[spec]
    return np.asarray(spec, float)


def _homogeneous(omega: np.ndarray):
    M = omega.size
    ext = np.append(omega, omega[0])

    def prof(d):
        r2 = (d * d).sum(axis=-1)
        th = np.mod(np.arctan2(d[..., 1], d[..., 0]), 2 * np.pi) * (M / (2 * np.pi))
        k = np.minimum(th.astype(np.int64), M - 1)
        t = th - k
        om = (1 - t) * ext[k] + t * ext[k + 1]
        return np.where(r2 > 0, om / np.where(r2 > 0, r2, 1.0), 0.0)
    return prof


def _conv(name, n, prof, C_K, params):
    return Kernel(name, n, lambda x, y: prof(x - y), C_K, profile=prof, params=params)


def make_kernel(name: str, **params) -> Kernel:
    """Registry: ``hilbert``, ``hilbert_osc(amp)``, ``homogeneous2d(omega, mesh)``, ``zero``."""
    if name == "hilbert":
        return _conv(name, 1, _hilbert, 1.0, {})
    if name == "hilbert_osc":
        amp = float(params.get("amp", 0.5))
        if not 0 <= amp < 1:
            raise ValueError("hilbert_osc needs 0 <= amp < 1")
        return _conv(name, 1, _hilbert_osc(amp), 1.0 + amp, {"amp": amp})
    if name == "homogeneous2d":
        M = int(params.get("mesh", 256))
        om = _omega_mesh(params.get("omega", "cos2"), M)
        if abs(om.mean()) > 1e-8 * max(1.0, np.abs(om).max()):
            warnings.warn("angular profile is not mean-zero; the cancellation condition fails",
                          stacklevel=2)
        return _conv(name, 2, _homogeneous(om), float(np.abs(om).max()),
                     {"omega": params.get("omega", "cos2"), "mesh": M, "omega_values": om})
    if name == "zero":
        n = int(params.get("n", 1))
        return _conv(name, n, lambda d: np.zeros(d.shape[:-1]), 0.0, {"n": n})
    raise ValueError(f"unknown kernel {name!r}")


def parse_kernel(text: str) -> Kernel:
    """``"hilbert"``, ``"hilbert_osc:amp=0.25"``, ``"homogeneous2d:omega=sin2"``."""
    name, _, rest = text.partition(":")
    params: dict = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        k, eq, v = item.partition("=")
        if not eq:
            raise ValueError(f"bad kernel parameter {item!r}")
        try:
            params[k.strip()] = float(v) if k.strip() != "mesh" else int(v)
        except ValueError:
            params[k.strip()] = v.strip()
    return make_kernel(name.strip(), **params)


def kernel_from_csv(path, grid: Grid, name: str = "csv") -> Kernel:
    """Tabulated kernel: a ``size x size`` matrix of K(cell_i, cell_j), flat C order.

    The diagonal is ignored.  ``C_K`` is measured from the table.
    """
    with open(path, newline="") as fh:
        rows = [[float(v) for v in r] for r in csv.reader(fh) if r]
    T = np.array(rows, dtype=float)
    if T.shape != (grid.size, grid.size):
        raise ValueError(f"K-matrix must be {grid.size}x{grid.size}, got {T.shape}")
    T = T.copy()
    np.fill_diagonal(T, 0.0)
    pts = grid.centers().reshape(-1, grid.n)
    dist = _norm(pts[:, None, :] - pts[None, :, :])
    C_K = float((np.abs(T) * dist**grid.n).max())
    T.setflags(write=False)
    flat = {tuple(np.round(p / grid.h - 0.5).astype(int)): k for k, p in enumerate(pts)}

    def func(x, y):
        ix = np.round(np.asarray(x) / grid.h - 0.5).astype(int)
        iy = np.round(np.asarray(y) / grid.h - 0.5).astype(int)
        fx = np.vectorize(lambda *c: flat[c])(*np.moveaxis(ix, -1, 0))
        fy = np.vectorize(lambda *c: flat[c])(*np.moveaxis(iy, -1, 0))
        return T[fx, fy]

    return Kernel(name, grid.n, func, C_K, table=T, params={"path": str(path)})


def size_check(K: Kernel, grid: Grid, samples: int = 10_000, seed: int = 0) -> float:
    """max |K(x,y)| |x-y|^n / C_K over random off-diagonal cell pairs (<= 1 expected)."""
    rng = np.random.default_rng(seed)
    pts = grid.centers().reshape(-1, grid.n)
    i = rng.integers(grid.size, size=samples)
    j = rng.integers(grid.size, size=samples)
    keep = i != j
    x, y = pts[i[keep]], pts[j[keep]]
    v = np.abs(_kvals_points(K, grid, i[keep], j[keep], x, y)) * _norm(x - y) ** grid.n
    if K.C_K == 0:
        return 0.0 if not v.any() else math.inf
    return float(v.max() / K.C_K)


# ---------------------------------------------------------------------------
# tabulation


@functools.lru_cache(maxsize=32)
def _disp_table(K: Kernel, grid: Grid) -> np.ndarray:
    """profile over all cell displacements; index ``d + N - 1`` per axis."""
    N, h = grid.N, grid.h
    d = np.arange(-(N - 1), N) * h
    if grid.n == 1:
        pts = d[:, None]
    else:
        X, Y = np.meshgrid(d, d, indexing="ij")
        pts = np.stack([X, Y], axis=-1)
    tab = np.array(K.profile(pts), dtype=float)
    tab[(N - 1,) * grid.n] = 0.0
    tab.setflags(write=False)
    return tab


def _flat_to_idx(grid: Grid, flat: np.ndarray) -> list[np.ndarray]:
    if grid.n == 1:
        return [flat]
    return list(np.divmod(flat, grid.N))


def _kvals(K: Kernel, grid: Grid, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Matrix K(cell x, cell y) for flat cell indices xs (rows), ys (columns)."""
    xs = np.asarray(xs)
    ys = np.asarray(ys)
    if K.table is not None:
        return K.table[np.ix_(xs, ys)]
    if K.convolution:
        tab = _disp_table(K, grid)
        N = grid.N
        ix = _flat_to_idx(grid, xs)
        iy = _flat_to_idx(grid, ys)
        return tab[tuple(a[:, None] - b[None, :] + N - 1 for a, b in zip(ix, iy))]
    pts = grid.centers().reshape(-1, grid.n)
    out = np.array(K.func(pts[xs][:, None, :], pts[ys][None, :, :]), dtype=float)
    out[xs[:, None] == ys[None, :]] = 0.0
    return out


def _kvals_points(K, grid, i, j, x, y):
    # paired (not outer) evaluation for cells i[k], j[k]
    if K.table is not None:
        return K.table[i, j]
    if K.convolution:
        return np.asarray(K.profile(x - y), float)
    return np.asarray(K.func(x, y), float)


def _row_chunks(grid: Grid):
    step = max(1, _CHUNK // grid.size)
    for a in range(0, grid.size, step):
        yield np.arange(a, min(a + step, grid.size))


# ---------------------------------------------------------------------------
# operators


def _check(K: Kernel, grid: Grid):
    if K.n != grid.n:
        raise ValueError(f"kernel {K.name} is {K.n}-dimensional, grid is {grid.n}-dimensional")


def apply(K: Kernel, f: ScalarField) -> ScalarField:
    """Tf(x) = sum_{y != x} K(x, y) f(y) h^n."""
    grid = f.grid
    _check(K, grid)
    vol = grid.cell_volume
    if K.convolution:
        tab = _disp_table(K, grid)
        if grid.n == 1:
            out = np.convolve(tab, f.values, mode="valid")
        else:
            out = signal.convolve2d(tab, f.values, mode="valid")
        return ScalarField(grid, out * vol)
    fv = f.values.ravel()
    out = np.empty(grid.size)
    for rows in _row_chunks(grid):
        out[rows] = _kvals(K, grid, rows, np.arange(grid.size)) @ fv
    return ScalarField(grid, out.reshape(grid.shape) * vol)


def apply_adjoint(K: Kernel, f: ScalarField) -> ScalarField:
    """T^t f(x) = sum_{y != x} K(y, x) f(y) h^n."""
    grid = f.grid
    _check(K, grid)
    vol = grid.cell_volume
    if K.convolution:
        tab = _disp_table(K, grid)[(slice(None, None, -1),) * grid.n]
        if grid.n == 1:
            out = np.convolve(tab, f.values, mode="valid")
        else:
            out = signal.convolve2d(tab, f.values, mode="valid")
        return ScalarField(grid, out * vol)
    fv = f.values.ravel()
    out = np.empty(grid.size)
    for rows in _row_chunks(grid):
        out[rows] = _kvals(K, grid, np.arange(grid.size), rows).T @ fv
    return ScalarField(grid, out.reshape(grid.shape) * vol)


def commutator_apply(K: Kernel, spec: CommutatorSpec, f: ScalarField) -> ScalarField:
    """T_b f(x) = sum_{y != x} prod_{i in sigma} (b_i(x) - b_i(y)) K(x, y) f(y) h^n.

    Evaluated directly at kernel level (the product is formed before the sum).
    """
    bs = [b.ravel() for b in spec.fields()]
    if not bs:
        return apply(K, f)
    grid = f.grid
    _check(K, grid)
    cols = np.arange(grid.size)
    fv = f.values.ravel()
    out = np.empty(grid.size)
    for rows in _row_chunks(grid):
        M = _kvals(K, grid, rows, cols)
        for b in bs:
            M = M * (b[rows][:, None] - b[None, :])
        out[rows] = M @ fv
    return ScalarField(grid, out.reshape(grid.shape) * grid.cell_volume)


# ---------------------------------------------------------------------------
# local potentials and grand maximal operators


def _gather_padded(gp: np.ndarray, start, side: int, count) -> np.ndarray:
    sl = tuple(slice(a, a + c * side) for a, c in zip(start, count))
    sub = gp[sl]
    if len(count) == 1:
        return sub.reshape(count[0], side)
    c0, c1 = count
    return sub.reshape(c0, side, c1, side).transpose(0, 2, 1, 3).reshape(c0, c1, side * side)


def _local_disp(grid: Grid, side: int, off) -> list[np.ndarray]:
    """Per-axis displacement index (xi - y) + N - 1 for cells of P and of P + off*side."""
    a = np.arange(side)
    N = grid.N
    per = [np.clip(a[:, None] - a[None, :] - o * side + N - 1, 0, 2 * N - 2) for o in off]
    if grid.n == 1:
        return per
    d0, d1 = per
    # rows (a0, a1) flattened, columns (b0, b1) flattened
    return [np.repeat(np.repeat(d0, side, axis=0), side, axis=1),
            np.tile(d1, (side, side))]


@functools.lru_cache(maxsize=64)
def _window(K: Kernel, grid: Grid, side: int, off: tuple[int, ...]) -> np.ndarray:
    tab = _disp_table(K, grid)
    w = tab[tuple(_local_disp(grid, side, off))]
    w.setflags(write=False)
    return w


def local_potential(K: Kernel, g: np.ndarray, blk: Block, origin=None) -> np.ndarray:
    """T(g chi_{3P}) at the cells of P, for every cube P of the block.

    ``g`` is a full-grid array, or a window whose first cell is the absolute
    cell ``origin`` (block starts are then relative to the window; g is taken
    as zero outside it).  Returns an array shaped like ``blk.gather``.
    """
    grid = blk.grid
    _check(K, grid)
    s, n = blk.side, grid.n
    g = np.asarray(g, float)
    origin = (0,) * n if origin is None else tuple(origin)
    gp = np.pad(g, s)
    out = np.zeros((*blk.count, s**n))
    cells = s**n
    for off in itertools.product((-1, 0, 1), repeat=n):
        start = tuple(a + s + o * s for a, o in zip(blk.start, off))
        G = _gather_padded(gp, start, s, blk.count)
        if not G.any():
            continue
        if K.convolution:
            if cells * cells <= _CHUNK:
                out += G @ _window(K, grid, s, off).T
            else:
                tab = _disp_table(K, grid)
                idx = _local_disp(grid, s, off)
                step = max(1, _CHUNK // cells)
                for r0 in range(0, cells, step):
                    r = slice(r0, min(r0 + step, cells))
                    out[..., r] += G @ tab[tuple(i[r] for i in idx)].T
        else:
            out += _generic_window(K, blk, off, G, origin)
    return out * grid.cell_volume


def _generic_window(K: Kernel, blk: Block, off, G: np.ndarray, origin) -> np.ndarray:
    grid = blk.grid
    s = blk.side
    res = np.zeros_like(G)
    for q in itertools.product(*[range(c) for c in blk.count]):
        lo = [a + k * s + o for a, k, o in zip(blk.start, q, origin)]
        nlo = [a + o * s for a, o in zip(lo, off)]
        xs = _cells(grid, lo, s)
        ys_local = _cells(grid, nlo, s, clip=True)
        ok = ys_local >= 0
        if not ok.any():
            continue
        Kq = np.zeros((xs.size, ys_local.size))
        Kq[:, ok] = _kvals(K, grid, xs, ys_local[ok])
        res[q] = Kq @ G[q]
    return res


def _cells(grid: Grid, lo, s, clip=False) -> np.ndarray:
    ax = [np.arange(a, a + s) for a in lo]
    if grid.n == 1:
        i = ax[0]
        return np.where((i >= 0) & (i < grid.N), i, -1) if clip else i
    I, J = np.meshgrid(ax[0], ax[1], indexing="ij")
    I, J = I.ravel(), J.ravel()
    flat = I * grid.N + J
    if clip:
        return np.where((I >= 0) & (I < grid.N) & (J >= 0) & (J < grid.N), flat, -1)
    return flat


def grand_maximal_local(K: Kernel, f: ScalarField, Q0: Cube) -> ScalarField:
    """M_{T,Q0} f(x) = sup_{x in Q subset Q0} max_{xi in Q} |T(f chi_{3Q0 minus 3Q})(xi)|.

    Q ranges over the standard dyadic subcubes of Q0.  The result is zero
    outside Q0.
    """
    if Q0.lattice != 0:
        raise ValueError("grand_maximal_local needs a standard dyadic Q0")
    R = Q0.dilate3()
    if not R.inside():
        raise ValueError("3Q0 leaves the root domain")
    out = np.zeros(f.grid.shape)
    out[R.slices] = grand_local_window(K, np.array(f.values[R.slices]), Q0)
    return ScalarField(f.grid, out)


def grand_local_window(K: Kernel, g: np.ndarray, Q0: Cube) -> np.ndarray:
    """:func:`grand_maximal_local` on the window 3Q0 (``g`` = f restricted to 3Q0)."""
    grid = Q0.grid
    origin = Q0.dilate3().lo
    blocks = [Block(grid, b.lattice, b.level, b.side,
                    tuple(a - o for a, o in zip(b.start, origin)), b.count)
              for b in descendant_blocks(Q0)]
    U = np.zeros(g.shape)
    top = blocks[0]
    U[top.region] = top.scatter(local_potential(K, g, top, origin))
    out = np.zeros(g.shape)
    for blk in blocks[1:]:
        V = local_potential(K, g, blk, origin)
        val = np.abs(blk.gather(U) - V).max(axis=-1)
        region = blk.region
        np.maximum(out[region], blk.spread(val), out=out[region])
    return out


def grand_maximal(K: Kernel, f: ScalarField, mode: str = "shifted",
                  max_side: int | None = None) -> ScalarField:
    """M_T f(x) = sup_{Q containing x} max_{xi in Q} |T(f chi_{complement of 3Q})(xi)|.

    Cubes of side above ``max_side`` cells are skipped when given.
    """
    grid = f.grid
    Tf = apply(K, f).values
    g = np.asarray(f.values, float)
    out = np.zeros(grid.shape)
    N = grid.N
    for blk in family_blocks(grid, mode):
        if max_side is not None and blk.side > max_side:
            continue
        s = blk.side
        if all(c == 1 and a - s <= 0 and a + 2 * s >= N for a, c in zip(blk.start, blk.count)):
            continue
        V = local_potential(K, g, blk)
        val = np.abs(blk.gather(Tf) - V).max(axis=-1)
        region = blk.region
        np.maximum(out[region], blk.spread(val), out=out[region])
    return ScalarField(grid, out)


# ---------------------------------------------------------------------------
# Hörmander constants


def _probe_starts(N: int, s: int, kmin: int, per_axis: int) -> list[int]:
    grow = (2**kmin - 1) * s // 2
    lo, hi = grow, N - s - grow
    if hi < lo:
        return []
    centre = (N - s) // 2
    pts = np.unique(np.linspace(lo, hi, per_axis).round().astype(int))
    pts = sorted(set(int(p) for p in pts) | {min(max(centre, lo), hi)})
    return pts


def hormander_constant(K: Kernel, grid: Grid, A: YoungFunction, m: float = 1.0,
                       max_cubes: int = 8, min_annuli: int = 3) -> tuple[float, float]:
    """(H_1, H_2): sup over probed Q and x, z in Q/2 of
    sum_k |2^k Q| m^k ||(K(x,.) - K(z,.)) chi_{2^k Q minus 2^{k-1} Q}||_{A, 2^k Q}
    (and the transposed kernel for H_2), truncated once 2^k Q leaves the root.
    """
    _check(K, grid)
    if m < 1:
        raise ValueError("weight exponent m must be >= 1")
    N, n = grid.N, grid.n
    per_axis = max(1, math.ceil(max_cubes ** (1.0 / n)))
    sizes = []
    s = 4
    while s * 2**min_annuli <= N:
        sizes.append(s)
        s *= 2
    if not sizes:
        raise ValueError(f"grid too coarse: need at least {4 * 2**min_annuli} cells per axis "
                         f"for {min_annuli} annuli around a 4-cell cube")
    H = [0.0, 0.0]
    vol = grid.cell_volume
    for s in sizes:
        starts = _probe_starts(N, s, min_annuli, per_axis)
        for lo in itertools.islice(itertools.product(starts, repeat=n), max_cubes):
            half = sorted({s // 4, s // 2, 3 * s // 4 - 1})
            pcells = [np.array([a + t for t in half]) for a in lo]
            P = _cells_from_axes(grid, pcells)
            pairs = [(a, b) for a in range(P.size) for b in range(a + 1, P.size)]
            ia = P[[p[0] for p in pairs]]
            ib = P[[p[1] for p in pairs]]
            tot = np.zeros((2, len(pairs)))
            k = 1
            while True:
                grow = (2**k - 1) * s // 2
                big = [a - grow for a in lo]
                side = 2**k * s
                if any(b < 0 or b + side > N for b in big):
                    break
                inner = [a - (2 ** (k - 1) - 1) * s // 2 for a in lo]
                ys = _cells(grid, big, side)
                ann = np.ones(ys.size, dtype=bool)
                yi = _flat_to_idx(grid, ys)
                inside = np.ones(ys.size, dtype=bool)
                for d in range(n):
                    inside &= (yi[d] >= inner[d]) & (yi[d] < inner[d] + side // 2)
                ann &= ~inside
                for o in range(2):
                    if o == 0:
                        Ka, Kb = _kvals(K, grid, ia, ys), _kvals(K, grid, ib, ys)
                    else:
                        Ka, Kb = _kvals(K, grid, ys, ia).T, _kvals(K, grid, ys, ib).T
                    diff = np.where(ann[None, :], np.abs(Ka - Kb), 0.0)
                    tot[o] += side**n * vol * m**k * luxemburg(diff, A)
                k += 1
            if k - 1 < min_annuli:
                continue
            H[0] = max(H[0], float(tot[0].max()))
            H[1] = max(H[1], float(tot[1].max()))
    return H[0], H[1]


def _cells_from_axes(grid: Grid, axes) -> np.ndarray:
    if grid.n == 1:
        return axes[0]
    I, J = np.meshgrid(axes[0], axes[1], indexing="ij")
    return (I * grid.N + J).ravel()


# ---------------------------------------------------------------------------
# operator norm and angular modulus


@functools.lru_cache(maxsize=32)
def operator_norm(K: Kernel, grid: Grid, rtol: float = 1e-10, seed: int = 0) -> float:
    """||T||_{L^2 -> L^2} of the discrete operator (Lanczos on T^t T, fixed start).

    Convolution kernels are applied by FFT inside the iteration; the estimate
    is insensitive to the round-off this introduces.
    """
    _check(K, grid)
    shape = grid.shape
    if K.convolution:
        tab = _disp_table(K, grid)
        flip = tab[(slice(None, None, -1),) * grid.n]
        vol = grid.cell_volume

        def normal(v):
            u = signal.fftconvolve(tab, v.reshape(shape), mode="valid") * vol
            return (signal.fftconvolve(flip, u, mode="valid") * vol).ravel()
    else:
        def normal(v):
            u = apply(K, ScalarField(grid, v.reshape(shape)))
            return apply_adjoint(K, u).values.ravel()
    if grid.size <= 2:
        e = np.eye(grid.size)
        M = np.stack([normal(c) for c in e], axis=1)
        return float(math.sqrt(max(np.linalg.eigvalsh(0.5 * (M + M.T)).max(), 0.0)))
    op = sparse_linalg.LinearOperator((grid.size, grid.size), matvec=normal, dtype=float)
    v0 = np.random.default_rng(seed).standard_normal(grid.size)
    lam = sparse_linalg.eigsh(op, k=1, which="LA", v0=v0, tol=rtol, return_eigenvectors=False)
    return float(math.sqrt(max(float(lam[0]), 0.0)))


def omega_modulus(omega: np.ndarray, A: YoungFunction, t: float) -> float:
    """sup_{|y| <= t} ||Omega(. + y) - Omega(.)||_{A, circle} on a uniform angular mesh.

    Rotations are by whole mesh steps; the circle carries normalized measure.
    """
    om = np.asarray(omega, float)
    M = om.size
    if abs(om.mean()) > 1e-8 * max(1.0, np.abs(om).max()):
        warnings.warn("Omega is not mean-zero; the cancellation condition fails", stacklevel=2)
    kmax = min(int(math.floor(t * M / (2 * np.pi) + 1e-12)), M // 2)
    if kmax < 1:
        return 0.0
    diffs = np.stack([np.abs(np.roll(om, -k) - om) for k in range(1, kmax + 1)]
                     + [np.abs(np.roll(om, k) - om) for k in range(1, kmax + 1)])
    return float(luxemburg(diffs, A).max())
