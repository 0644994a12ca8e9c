"""Dyadic grids, cubes, shifted lattices, stopping times and sparse families.

Geometry lives on a uniform grid of ``2**J`` cells per axis covering the root
cube ``[0, 2**L)^n``.  Cubes are value records ``(lattice, level, index)``:

* lattice 0 is the standard dyadic lattice; a cube at level ``l`` has side
  ``2**(J-l)`` cells and occupies ``[i*s, (i+1)*s)`` on each axis;
* lattices ``1 .. 3**n`` hold the tripled cubes ``3Q``.  They are indexed by
  the middle cube ``Q``: ``3Q`` occupies ``[(i-1)*s, (i+2)*s)``.  Two tripled
  cubes belong to the same lattice iff their left corners agree modulo 3 (in
  cell units) on every axis, which makes each class closed under halving.

Per-level work is organized in :class:`Block` objects: all cubes of one level
of one lattice that fit inside the root, as a regular array of equal cubes.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "Grid",
    "Cube",
    "Block",
    "lattice_blocks",
    "family_blocks",
    "descendant_blocks",
    "shifted_lattices",
    "cz_stopping",
    "SparseFamily",
    "SparseCheck",
    "verify_sparse",
]


@dataclass(frozen=True, order=True)
class Grid:
    """Uniform grid with ``2**depth`` cells per axis on ``[0, 2**log_side)^n``."""

    n: int
    depth: int
    log_side: int = 0

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def N(self) -> int:
        return 1 << self.depth

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def h(self) -> float:
        return 2.0 ** (self.log_side - self.depth)

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    def axis_centers(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) * self.h

    def centers(self) -> np.ndarray:
        """Cell centers, shape ``(*shape, n)``."""
        c = self.axis_centers()
        if self.n == 1:
            return c[:, None]
        X, Y = np.meshgrid(c, c, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def root(self) -> "Cube":
        return Cube(0, 0, (0,) * self.n, self)

    def refine(self, k: int = 1) -> "Grid":
        return Grid(self.n, self.depth + k, self.log_side)


def _shifted_id(index: Sequence[int], s: int) -> int:
    # lattice of 3Q: left corners (i-1)*s taken modulo 3 on each axis
    return 1 + sum((((i - 1) * s) % 3) * 3**d for d, i in enumerate(index))


@dataclass(frozen=True, order=True)
class Cube:
    """Cube of lattice ``lattice`` at ``level`` with integer ``index``.

    For lattice 0 the index is the usual dyadic index; for lattices >= 1 it is
    the index of the middle dyadic cube ``Q`` of the tripled cube ``3Q``.
    """

    lattice: int
    level: int
    index: tuple[int, ...]
    grid: Grid = field(repr=False)

    def __post_init__(self):
        g = self.grid
        object.__setattr__(self, "index", tuple(int(i) for i in self.index))
        if len(self.index) != g.n:
            raise ValueError("index length must equal the grid dimension")
        if not 0 <= self.level <= g.depth:
            raise ValueError(f"level {self.level} outside 0..{g.depth}")
        if self.lattice < 0 or self.lattice > 3**g.n:
            raise ValueError(f"lattice id {self.lattice} outside 0..{3**g.n}")
        if self.lattice > 0 and self.lattice != self._shifted_id():
            raise ValueError("index does not belong to the requested shifted lattice")

    def _shifted_id(self) -> int:
        return _shifted_id(self.index, self.base_side)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def base_side(self) -> int:
        return 1 << (self.grid.depth - self.level)

    @property
    def side_cells(self) -> int:
        return self.base_side * (3 if self.lattice else 1)

    @property
    def side(self) -> float:
        return self.side_cells * self.grid.h

    @property
    def n_cells(self) -> int:
        return self.side_cells**self.n

    @property
    def volume(self) -> float:
        return self.side**self.n

    @property
    def lo(self) -> tuple[int, ...]:
        s = self.base_side
        off = 1 if self.lattice else 0
        return tuple((i - off) * s for i in self.index)

    @property
    def hi(self) -> tuple[int, ...]:
        return tuple(a + self.side_cells for a in self.lo)

    def inside(self) -> bool:
        return all(a >= 0 for a in self.lo) and all(b <= self.grid.N for b in self.hi)

    @property
    def slices(self) -> tuple[slice, ...]:
        return tuple(slice(a, b) for a, b in zip(self.lo, self.hi))

    def restrict(self, arr: np.ndarray) -> np.ndarray:
        return arr[self.slices]

    def mask(self) -> np.ndarray:
        m = np.zeros(self.grid.shape, dtype=bool)
        m[self.slices] = True
        return m

    def contains(self, other: "Cube") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def contains_cell(self, cell: Sequence[int]) -> bool:
        return all(a <= c < b for a, b, c in zip(self.lo, self.hi, cell))

    def children(self) -> list["Cube"]:
        if self.level >= self.grid.depth:
            return []
        if self.lattice == 0:
            kids = itertools.product(*[(2 * i, 2 * i + 1) for i in self.index])
        else:
            kids = itertools.product(*[(2 * i - 1, 2 * i + 2) for i in self.index])
        return [Cube(self.lattice, self.level + 1, tuple(k), self.grid) for k in kids]

    def parent(self) -> "Cube | None":
        if self.level == 0:
            return None
        if self.lattice == 0:
            idx = tuple(i // 2 for i in self.index)
        else:
            idx = tuple((i + 1) // 2 if (i % 2) == 1 else (i - 2) // 2 for i in self.index)
        return Cube(self.lattice, self.level - 1, idx, self.grid)

    def dilate3(self) -> "Cube":
        """The tripled cube 3Q as a member of its shifted lattice."""
        if self.lattice != 0:
            raise ValueError("dilate3 is defined for standard dyadic cubes")
        return Cube(_shifted_id(self.index, self.base_side), self.level, self.index, self.grid)

    def middle(self) -> "Cube":
        """For a tripled cube, the dyadic cube Q with 3Q = self."""
        if self.lattice == 0:
            return self
        return Cube(0, self.level, self.index, self.grid)

    def block(self) -> "Block":
        """A one-cube block (for batched kernels)."""
        return Block(self.grid, self.lattice, self.level, self.side_cells, self.lo, (1,) * self.n)


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class Block:
    """Regular array of equal cubes ``start + q*side`` (``q < count``) on each axis."""

    grid: Grid
    lattice: int
    level: int
    side: int
    start: tuple[int, ...]
    count: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def n_cubes(self) -> int:
        return int(np.prod(self.count))

    @property
    def region(self) -> tuple[slice, ...]:
        return tuple(slice(a, a + c * self.side) for a, c in zip(self.start, self.count))

    def gather(self, arr: np.ndarray) -> np.ndarray:
        """Values of each cube: shape ``(*count, side**n)``."""
        sub = arr[self.region]
        s = self.side
        if self.n == 1:
            return sub.reshape(self.count[0], s)
        c0, c1 = self.count
        return sub.reshape(c0, s, c1, s).transpose(0, 2, 1, 3).reshape(c0, c1, s * s)

    def spread(self, vals: np.ndarray) -> np.ndarray:
        """Broadcast per-cube values back onto the cells of the region."""
        out = np.repeat(vals, self.side, axis=0)
        if self.n == 2:
            out = np.repeat(out, self.side, axis=1)
        return out

    def scatter(self, cellvals: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`gather`: ``(*count, side**n)`` to region layout."""
        s = self.side
        if self.n == 1:
            return cellvals.reshape(self.count[0] * s)
        c0, c1 = self.count
        return cellvals.reshape(c0, c1, s, s).transpose(0, 2, 1, 3).reshape(c0 * s, c1 * s)

    def sums(self, prefix: np.ndarray) -> np.ndarray:
        """Per-cube sums from a zero-padded prefix-sum table (see ``prefix_sums``)."""
        s = self.side
        if self.n == 1:
            a = self.start[0]
            e = prefix[a:a + (self.count[0] + 1) * s:s]
            return np.diff(e)
        a0, a1 = self.start
        c0, c1 = self.count
        P = prefix[a0:a0 + (c0 + 1) * s:s, a1:a1 + (c1 + 1) * s:s]
        return P[1:, 1:] - P[:-1, 1:] - P[1:, :-1] + P[:-1, :-1]

    def cube(self, q: Sequence[int]) -> Cube:
        if self.lattice == 0:
            idx = tuple(a // self.side + k for a, k in zip(self.start, q))
        else:
            s0 = self.side // 3
            idx = tuple((a + k * self.side) // s0 + 1 for a, k in zip(self.start, q))
        return Cube(self.lattice, self.level, idx, self.grid)

    def cubes(self) -> list[Cube]:
        return [self.cube(q) for q in itertools.product(*[range(c) for c in self.count])]


def prefix_sums(arr: np.ndarray) -> np.ndarray:
    """Zero-padded cumulative sums along every axis."""
    out = np.zeros(tuple(d + 1 for d in arr.shape))
    if arr.ndim == 1:
        np.cumsum(arr, out=out[1:])
    else:
        out[1:, 1:] = arr.cumsum(axis=0).cumsum(axis=1)
    return out


def lattice_blocks(grid: Grid, lattice: int) -> list[Block]:
    """Blocks of one lattice from coarse to fine (only cubes inside the root)."""
    N, n = grid.N, grid.n
    out = []
    if lattice == 0:
        for lvl in range(grid.depth + 1):
            s = N >> lvl
            out.append(Block(grid, 0, lvl, s, (0,) * n, (1 << lvl,) * n))
        return out
    labels = [((lattice - 1) // 3**d) % 3 for d in range(n)]
    for lvl in range(grid.depth + 1):
        s = N >> lvl
        side = 3 * s
        if side > N:
            continue
        start, count = [], []
        for t in labels:
            u = (t * (s % 3)) % 3
            a0 = s * u
            start.append(a0)
            count.append((N - a0) // side)
        if min(count) <= 0:
            continue
        out.append(Block(grid, lattice, lvl, side, tuple(start), tuple(count)))
    return out


def family_blocks(grid: Grid, mode: str = "shifted") -> list[Block]:
    """All blocks of the cube family: ``dyadic`` (lattice 0) or ``shifted`` (all)."""
    if mode == "dyadic":
        return lattice_blocks(grid, 0)
    if mode == "shifted":
        return [b for j in range(3**grid.n + 1) for b in lattice_blocks(grid, j)]
    raise ValueError(f"unknown cube family mode {mode!r}")


def descendant_blocks(Q: Cube) -> list[Block]:
    """Blocks of the same-lattice descendants of ``Q`` (including ``Q``), coarse to fine."""
    out = []
    side, lvl = Q.side_cells, Q.level
    k = 1
    while lvl <= Q.grid.depth and side >= (3 if Q.lattice else 1) and side % (3 if Q.lattice else 1) == 0:
        out.append(Block(Q.grid, Q.lattice, lvl, side, Q.lo, (k,) * Q.n))
        if side % 2 or lvl == Q.grid.depth:
            break
        side //= 2
        lvl += 1
        k *= 2
    return out


def shifted_lattices(grid: Grid) -> list[list[Block]]:
    """The 3**n lattices of tripled cubes, each as a coarse-to-fine block list."""
    return [lattice_blocks(grid, j) for j in range(1, 3**grid.n + 1)]


# ---------------------------------------------------------------------------
# Calderon-Zygmund stopping


def cz_stopping(g, Q0: Cube, height: float) -> list[Cube]:
    """Maximal dyadic subcubes P of Q0 with average of g over P above ``height``."""
    vals = np.asarray(getattr(g, "values", g), dtype=float)
    sub = Q0.restrict(vals)
    if np.any(sub < 0):
        raise ValueError("cz_stopping needs a non-negative function")
    taken = np.zeros(Q0.grid.shape, dtype=bool)
    prefix = prefix_sums(np.where(Q0.mask(), vals, 0.0))
    out = []
    for blk in descendant_blocks(Q0):
        sums = blk.sums(prefix)
        ncell = blk.side**blk.n
        free = ~blk.gather(taken)[..., 0]
        sel = (sums > height * ncell) & free
        if not sel.any():
            continue
        for q in zip(*np.nonzero(sel)):
            out.append(blk.cube(q))
        region = blk.region
        taken[region] |= blk.spread(sel)
    return out


# ---------------------------------------------------------------------------
# sparse families


@dataclass
class SparseFamily:
    """Cubes with pairwise disjoint subsets ``E_Q`` stored as local bitmaps."""

    grid: Grid
    eta: float = 0.5
    cubes: list[Cube] = field(default_factory=list)
    sets: list[np.ndarray] = field(default_factory=list)

    def add(self, Q: Cube, E: np.ndarray | None = None) -> None:
        if Q.grid != self.grid:
            raise ValueError("cube from another grid")
        if E is None:
            E = np.ones((Q.side_cells,) * Q.n, dtype=bool)
        E = np.asarray(E, dtype=bool)
        if E.shape != (Q.side_cells,) * Q.n:
            raise ValueError("E_Q bitmap must have the shape of Q")
        self.cubes.append(Q)
        self.sets.append(E)

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self) -> Iterator[tuple[Cube, np.ndarray]]:
        return iter(zip(self.cubes, self.sets))

    def measured_eta(self) -> float:
        if not self.cubes:
            return 1.0
        return min(int(E.sum()) / Q.n_cells for Q, E in self)

    def by_lattice(self) -> dict[int, "SparseFamily"]:
        out: dict[int, SparseFamily] = {}
        for Q, E in self:
            fam = out.setdefault(Q.lattice, SparseFamily(self.grid, self.eta))
            fam.add(Q, E)
        return out

    def sorted(self) -> "SparseFamily":
        order = sorted(range(len(self)), key=lambda k: (self.cubes[k].lattice, self.cubes[k].level,
                                                       self.cubes[k].index))
        fam = SparseFamily(self.grid, self.eta)
        for k in order:
            fam.add(self.cubes[k], self.sets[k])
        return fam

    def to_csv(self, path) -> None:
        """Columns: lattice, level, index (';'-joined), side_cells, cells_Q, cells_E."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["lattice", "level", "index", "side_cells", "cells_Q", "cells_E"])
            for Q, E in self:
                w.writerow([Q.lattice, Q.level, ";".join(map(str, Q.index)), Q.side_cells,
                            Q.n_cells, int(E.sum())])


@dataclass(frozen=True)
class SparseCheck:
    passed: bool
    witness: tuple = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def verify_sparse(family: SparseFamily, eta: float) -> SparseCheck:
    """Exact cell-level check of E_Q in Q, |E_Q| >= eta|Q| and disjointness."""
    eta_q = Fraction(eta)
    owner = np.full(family.grid.shape, -1, dtype=np.int64)
    for k, (Q, E) in enumerate(family):
        if E.shape != (Q.side_cells,) * Q.n:
            return SparseCheck(False, (Q,), "E_Q not contained in Q")
        if Fraction(int(E.sum())) < eta_q * Q.n_cells:
            return SparseCheck(False, (Q,), f"|E_Q| = {int(E.sum())} < eta |Q| = {float(eta_q * Q.n_cells)}")
        if not Q.inside():
            return SparseCheck(False, (Q,), "cube outside the root domain")
        local = owner[Q.slices]
        clash = local[E]
        if np.any(clash >= 0):
            other = family.cubes[int(clash[clash >= 0][0])]
            return SparseCheck(False, (other, Q), "E sets overlap")
        local[E] = k
    return SparseCheck(True)
