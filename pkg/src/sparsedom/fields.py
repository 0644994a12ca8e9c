"""Cell-averaged fields and weights, integration, distribution and BMO.

A field stores one value per grid cell; integrals are exact cell sums times
the cell volume.  The built-in corpus uses cell averages computed in closed
form where the function is singular (log|x - x0| and |x - x0|**a).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _quad

from .dyadic import Cube, Grid, family_blocks

__all__ = [
    "ScalarField",
    "Weight",
    "integrate",
    "distribution",
    "bmo_norm",
    "mean_oscillation",
    "constant",
    "indicator",
    "bump",
    "alternating",
    "log_singular",
    "power_weight",
    "random_field",
    "to_csv",
    "from_csv",
]


@dataclass(frozen=True, eq=False)
class ScalarField:
    """One finite value per cell of ``grid`` (array of shape ``grid.shape``)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def _wrap(self, v):
        return ScalarField(self.grid, v)

    def _other(self, o):
        if isinstance(o, ScalarField):
            if o.grid != self.grid:
                raise ValueError("fields live on different grids")
            return o.values
        return o

    def __add__(self, o):
        return self._wrap(self.values + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.values - self._other(o))

    def __rsub__(self, o):
        return self._wrap(self._other(o) - self.values)

    def __mul__(self, o):
        return self._wrap(self.values * self._other(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return self._wrap(self.values / self._other(o))

    def __neg__(self):
        return self._wrap(-self.values)

    def __abs__(self):
        return self._wrap(np.abs(self.values))

    def __pow__(self, p):
        return self._wrap(self.values**p)

    def max(self) -> float:
        return float(self.values.max())

    def min(self) -> float:
        return float(self.values.min())


class Weight(ScalarField):
    """Strictly positive field used as a measure density."""

    def __post_init__(self):
        super().__post_init__()
        if not np.all(self.values > 0):
            raise ValueError("weights must be strictly positive")

    def _wrap(self, v):
        return ScalarField(self.grid, v)


# ---------------------------------------------------------------------------
# integration


def integrate(f: ScalarField, Q: Cube | None = None, mu: Weight | None = None) -> float:
    """Cell-sum integral of f over Q (whole root if None), optionally against mu.

    The sum is correctly rounded (``math.fsum``), hence order independent.
    """
    v = f.values if mu is None else f.values * mu.values
    if Q is not None:
        v = Q.restrict(v)
    return math.fsum(v.ravel().tolist()) * f.grid.cell_volume


def distribution(g: ScalarField, w: Weight | None, lam: float) -> float:
    """w-measure of the cell set {|g| > lam}."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    sel = np.abs(g.values) > lam
    dens = np.ones_like(g.values) if w is None else w.values
    return math.fsum(dens[sel].tolist()) * g.grid.cell_volume


def mean_oscillation(vals: np.ndarray) -> np.ndarray:
    """(1/|Q|) sum |b - <b>_Q| along the last axis."""
    m = vals.mean(axis=-1, keepdims=True)
    return np.abs(vals - m).mean(axis=-1)


def bmo_norm(b: ScalarField, mode: str = "shifted") -> float:
    """Sup of the mean oscillation over every cube of the lattice family."""
    best = 0.0
    for blk in family_blocks(b.grid, mode):
        if blk.side == 1:
            continue
        best = max(best, float(mean_oscillation(blk.gather(b.values)).max()))
    return best


# ---------------------------------------------------------------------------
# corpus


def constant(grid: Grid, c: float = 1.0) -> ScalarField:
    return ScalarField(grid, np.full(grid.shape, float(c)))


def _overlap(grid: Grid, lo: float, hi: float) -> np.ndarray:
    e = np.arange(grid.N + 1) * grid.h
    return np.clip(np.minimum(e[1:], hi) - np.maximum(e[:-1], lo), 0.0, None) / grid.h


def indicator(grid: Grid, lo, hi) -> ScalarField:
    """Cell averages of the indicator of the box [lo, hi) (physical units)."""
    lo = np.broadcast_to(np.asarray(lo, float), (grid.n,))
    hi = np.broadcast_to(np.asarray(hi, float), (grid.n,))
    parts = [_overlap(grid, a, b) for a, b in zip(lo, hi)]
    v = parts[0] if grid.n == 1 else np.multiply.outer(parts[0], parts[1])
    return ScalarField(grid, v)


def bump(grid: Grid, center=None, radius: float | None = None) -> ScalarField:
    """Smooth cos^2 bump sampled at cell centers."""
    L = grid.N * grid.h
    c = np.broadcast_to(np.asarray(L / 2 if center is None else center, float), (grid.n,))
    r = L / 4 if radius is None else float(radius)
    x = grid.centers()
    d = np.sqrt(((x - c) ** 2).sum(axis=-1)) / r
    return ScalarField(grid, np.where(d < 1, np.cos(0.5 * np.pi * d) ** 2, 0.0))


def alternating(grid: Grid) -> ScalarField:
    """+1 on the left half of the root, -1 on the right half (first axis)."""
    v = np.ones(grid.shape)
    v[grid.N // 2:] = -1.0
    return ScalarField(grid, v)


def random_field(grid: Grid, seed: int = 0, kind: str = "normal") -> ScalarField:
    rng = np.random.default_rng(seed)
    if kind == "normal":
        v = rng.standard_normal(grid.shape)
    elif kind == "uniform":
        v = rng.random(grid.shape)
    elif kind == "binary":
        v = (rng.random(grid.shape) < 0.5).astype(float)
    else:
        raise ValueError(f"unknown random field kind {kind!r}")
    return ScalarField(grid, v)


# radial antiderivatives R(rho) = int_0^rho g(r) r dr for the 2D corner formula
def _radial_power(a):
    return lambda rho: rho ** (a + 2) / (a + 2)


def _radial_log(rho):
    return 0.5 * rho**2 * math.log(rho) - 0.25 * rho**2 if rho > 0 else 0.0


def _corner(a: float, b: float, R) -> float:
    """Integral over [0,a]x[0,b] of a radial function with the singularity at 0."""
    if a <= 0 or b <= 0:
        return 0.0
    th = math.atan2(b, a)
    i1 = _quad.quad(lambda t: R(a / math.cos(t)), 0.0, th, epsabs=0, epsrel=1e-13)[0]
    i2 = _quad.quad(lambda t: R(b / math.sin(t)), th, 0.5 * math.pi, epsabs=0, epsrel=1e-13)[0]
    return i1 + i2


def _radial_cell_averages(grid: Grid, x0, g, R, antideriv_1d) -> np.ndarray:
    h = grid.h
    e = np.arange(grid.N + 1) * h
    if grid.n == 1:
        x0 = float(np.ravel(x0)[0])
        F = antideriv_1d(e - x0)
        return np.diff(F) / h
    x0 = np.broadcast_to(np.asarray(x0, float), (2,))
    # tensor Gauss-Legendre for cells away from x0
    nodes, wts = np.polynomial.legendre.leggauss(8)
    nodes = 0.5 * (nodes + 1.0)
    wts = 0.5 * wts
    xs = e[:-1, None] + h * nodes[None, :]
    dx = xs - x0[0]
    dy = xs - x0[1]
    r = np.sqrt(dx[:, None, :, None] ** 2 + dy[None, :, None, :] ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = g(r)
    out = np.einsum("ijkl,k,l->ij", vals, wts, wts)
    # cells touching x0: split into corner rectangles and integrate in polar form
    ix = np.nonzero((e[:-1] <= x0[0]) & (x0[0] <= e[1:]))[0]
    iy = np.nonzero((e[:-1] <= x0[1]) & (x0[1] <= e[1:]))[0]
    for i in ix:
        for j in iy:
            a0, a1 = x0[0] - e[i], e[i + 1] - x0[0]
            b0, b1 = x0[1] - e[j], e[j + 1] - x0[1]
            tot = sum(_corner(a, b, R) for a in (a0, a1) for b in (b0, b1))
            out[i, j] = tot / h**2
    return out


def log_singular(grid: Grid, x0=None) -> ScalarField:
    """Cell averages of log|x - x0| (a standard BMO function)."""
    L = grid.N * grid.h
    x0 = L / 2 if x0 is None else x0

    def F(t):
        at = np.abs(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(at > 0, t * np.log(at) - t, 0.0)

    v = _radial_cell_averages(grid, x0, np.log, _radial_log, F)
    return ScalarField(grid, v)


def power_weight(grid: Grid, a: float, x0=None) -> Weight:
    """Cell averages of |x - x0|**a, a > -n (a power weight)."""
    if not a > -grid.n:
        raise ValueError("power weight needs a > -n to be locally integrable")
    L = grid.N * grid.h
    x0 = L / 2 if x0 is None else x0

    def G(t):
        return np.sign(t) * np.abs(t) ** (a + 1) / (a + 1)

    v = _radial_cell_averages(grid, x0, lambda r: r**a, _radial_power(a), G)
    return Weight(grid, v)


# ---------------------------------------------------------------------------
# CSV


def to_csv(f: ScalarField, path) -> None:
    """Write ``cell,value``; cells are flat row-major (C order) indices."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cell", "value"])
        for k, v in enumerate(f.values.ravel()):
            w.writerow([k, repr(float(v))])


def from_csv(path, grid: Grid, weight: bool = False) -> ScalarField:
    """Read a field written by :func:`to_csv` (cells may appear in any order)."""
    v = np.full(grid.size, np.nan)
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows)
        if [h.strip() for h in header] != ["cell", "value"]:
            raise ValueError(f"expected header 'cell,value', got {header}")
        for row in rows:
            if not row:
                continue
            v[int(row[0])] = float(row[1])
    if np.any(np.isnan(v)):
        raise ValueError("CSV does not cover every cell of the grid")
    return (Weight if weight else ScalarField)(grid, v.reshape(grid.shape))
