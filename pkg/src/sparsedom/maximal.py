"""Maximal operators on the lattice cube families.

Every operator is a per-level sweep: for each block (one level of one
lattice) a per-cube statistic is computed in a single vectorized pass and
broadcast back to the cells with a running maximum.  ``mode="dyadic"`` uses
the standard lattice only; ``mode="shifted"`` adds the 3**n lattices of
tripled cubes.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .dyadic import family_blocks
from .fields import ScalarField, mean_oscillation
from .young import YoungFunction, luxemburg

__all__ = [
    "sweep",
    "maximal",
    "m_delta",
    "m_sharp",
    "m_sharp_delta",
    "orlicz_maximal",
]


def sweep(grid, values: np.ndarray, stat: Callable[[np.ndarray], np.ndarray],
          mode: str = "shifted", init: np.ndarray | None = None,
          min_side: int = 1) -> np.ndarray:
    """Per-cell max over cubes Q containing the cell of ``stat(values on Q)``."""
    out = np.zeros(grid.shape) if init is None else np.array(init, dtype=float)
    for blk in family_blocks(grid, mode):
        if blk.side < min_side:
            continue
        vals = stat(blk.gather(values))
        region = blk.region
        np.maximum(out[region], blk.spread(vals), out=out[region])
    return out


def maximal(f: ScalarField, mode: str = "shifted") -> ScalarField:
    """Hardy-Littlewood maximal function over the cube family."""
    a = np.abs(f.values)
    return ScalarField(f.grid, sweep(f.grid, a, lambda v: v.mean(axis=-1), mode, init=a))


def m_delta(f: ScalarField, delta: float, mode: str = "shifted") -> ScalarField:
    """M_delta f = (M |f|^delta)^(1/delta)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if delta == 1:
        return maximal(abs(f), mode)
    a = np.abs(f.values) ** delta
    m = sweep(f.grid, a, lambda v: v.mean(axis=-1), mode, init=a)
    return ScalarField(f.grid, m ** (1.0 / delta))


def m_sharp(f: ScalarField, mode: str = "shifted") -> ScalarField:
    """Sharp maximal function, oscillation about the cube mean."""
    return ScalarField(f.grid, sweep(f.grid, f.values, mean_oscillation, mode, min_side=2))


def m_sharp_delta(f: ScalarField, delta: float, mode: str = "shifted") -> ScalarField:
    """M#_delta f = (M#(|f|^delta))^(1/delta)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    a = np.abs(f.values) ** delta if delta != 1 else np.abs(f.values)
    m = sweep(f.grid, a, mean_oscillation, mode, min_side=2)
    return ScalarField(f.grid, m ** (1.0 / delta) if delta != 1 else m)


def orlicz_maximal(f: ScalarField, A: YoungFunction, mode: str = "shifted",
                   weight: ScalarField | None = None) -> ScalarField:
    """M_A f(x) = sup over cubes containing x of the Luxemburg norm of f."""
    a = np.abs(f.values)
    if weight is None:
        m = sweep(f.grid, a, lambda v: luxemburg(v, A), mode)
    else:
        out = np.zeros(f.grid.shape)
        for blk in family_blocks(f.grid, mode):
            vals = luxemburg(blk.gather(a), A, blk.gather(weight.values))
            region = blk.region
            np.maximum(out[region], blk.spread(vals), out=out[region])
        m = out
    return ScalarField(f.grid, m)
