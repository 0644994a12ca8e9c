"""Weight constants (A_p, A_1, Fujii-Wilson A_inf, weak A_inf) and weight lemmas.

Constants are suprema over the cube family (``mode="shifted"`` by default).
For the A_inf-type constants the local maximal function M(w chi_Q) on Q is
taken over the same-lattice subcubes of Q together with single cells, which
is exact for the standard lattice and the natural analogue on the others.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import Block, family_blocks, lattice_blocks, prefix_sums
from .fields import Weight
from .report import CheckReport

__all__ = [
    "WeightConstants",
    "ap_constant",
    "a1_constant",
    "fujii_wilson",
    "weak_ainfty",
    "rh_exponent",
    "weight_constants",
    "local_maximal_integrals",
    "reverse_holder_check",
    "subset_decay_check",
]


@dataclass(frozen=True)
class WeightConstants:
    a_p: float
    p: float
    a_1: float
    a_inf_fw: float
    a_inf_weak: float
    rh_exponent: float
    tau_n: float


def _lattices(n: int, mode: str) -> list[int]:
    if mode == "dyadic":
        return [0]
    if mode == "shifted":
        return list(range(3**n + 1))
    raise ValueError(f"unknown cube family mode {mode!r}")


def ap_constant(w: Weight, p: float, mode: str = "shifted") -> float:
    """sup_Q <w>_Q <w^(1-p')>_Q^(p-1)."""
    if not p > 1:
        raise ValueError("ap_constant needs p > 1; use a1_constant for p = 1")
    q = 1.0 - p / (p - 1.0)
    wq = w.values**q
    best = 0.0
    for blk in family_blocks(w.grid, mode):
        a = blk.gather(w.values).mean(axis=-1)
        b = blk.gather(wq).mean(axis=-1)
        best = max(best, float((a * b ** (p - 1.0)).max()))
    return best


def a1_constant(w: Weight, mode: str = "shifted") -> float:
    """sup_Q <w>_Q / min_Q w (grid minimum stands in for the essential infimum)."""
    best = 0.0
    for blk in family_blocks(w.grid, mode):
        g = blk.gather(w.values)
        best = max(best, float((g.mean(axis=-1) / g.min(axis=-1)).max()))
    return best


def local_maximal_integrals(w: Weight, mode: str = "shifted"):
    """Yield ``(block, V, W)`` with V = int_Q M(w chi_Q) and W = w(Q) per cube."""
    vol = w.grid.cell_volume
    vals = w.values
    for j in _lattices(w.grid.n, mode):
        m = vals.copy()
        for blk in reversed(lattice_blocks(w.grid, j)):
            g = blk.gather(vals)
            region = blk.region
            np.maximum(m[region], blk.spread(g.mean(axis=-1)), out=m[region])
            yield blk, blk.gather(m).sum(axis=-1) * vol, g.sum(axis=-1) * vol


def fujii_wilson(w: Weight, mode: str = "shifted") -> float:
    """[w]_{A_inf} = sup_Q (1/w(Q)) int_Q M(w chi_Q)."""
    return max(float((V / W).max()) for _, V, W in local_maximal_integrals(w, mode))


def _double_box_sums(blk: Block, prefix: np.ndarray, N: int):
    """w(2Q) for each cube of the block (2Q clipped to the root) and kept fraction."""
    s = blk.side
    half = s // 2
    los, his, fracs = [], [], []
    for a, c in zip(blk.start, blk.count):
        starts = a + s * np.arange(c)
        lo = starts - half
        hi = starts + s + half
        clo, chi = np.clip(lo, 0, N), np.clip(hi, 0, N)
        los.append(clo)
        his.append(chi)
        fracs.append((chi - clo) / (2.0 * s))
    if blk.n == 1:
        sums = prefix[his[0]] - prefix[los[0]]
        frac = fracs[0]
    else:
        P = prefix
        sums = (P[np.ix_(his[0], his[1])] - P[np.ix_(los[0], his[1])]
                - P[np.ix_(his[0], los[1])] + P[np.ix_(los[0], los[1])])
        frac = np.multiply.outer(fracs[0], fracs[1])
    return sums, frac


def weak_ainfty(w: Weight, mode: str = "shifted") -> float:
    """sup_Q (1/w(2Q)) int_Q M(w chi_Q), 2Q clipped to the root.

    Cubes whose doubled cube loses more than half its volume to clipping, and
    cubes of odd side (2Q not cell-aligned), are excluded.
    """
    prefix = prefix_sums(w.values) * w.grid.cell_volume
    best = 0.0
    for blk, V, _ in local_maximal_integrals(w, mode):
        if blk.side % 2:
            continue
        w2, frac = _double_box_sums(blk, prefix, w.grid.N)
        ok = frac >= 0.5
        if ok.any():
            best = max(best, float((V[ok] / w2[ok]).max()))
    return best


def rh_exponent(weak: float, n: int) -> float:
    """r(w) = 1 + 1/(tau_n [w]^weak) with tau_n = 2^n."""
    return 1.0 + 1.0 / (2.0**n * weak)


def weight_constants(w: Weight, p: float = 2.0, mode: str = "shifted") -> WeightConstants:
    weak = weak_ainfty(w, mode)
    return WeightConstants(
        a_p=ap_constant(w, p, mode),
        p=p,
        a_1=a1_constant(w, mode),
        a_inf_fw=fujii_wilson(w, mode),
        a_inf_weak=weak,
        rh_exponent=rh_exponent(weak, w.grid.n),
        tau_n=2.0**w.grid.n,
    )


def reverse_holder_check(w: Weight, mode: str = "shifted", tol: float = 0.05) -> CheckReport:
    """(<w^r>_Q)^(1/r) <= (2/|2Q|) int_{2Q} w for every cube with 2Q inside the root."""
    n = w.grid.n
    r = rh_exponent(weak_ainfty(w, mode), n)
    prefix = prefix_sums(w.values) * w.grid.cell_volume
    wr = w.values**r
    lhs, rhs, side, level = [], [], [], []
    for blk in family_blocks(w.grid, mode):
        if blk.side % 2:
            continue
        w2, frac = _double_box_sums(blk, prefix, w.grid.N)
        ok = frac >= 1.0
        if not ok.any():
            continue
        left = blk.gather(wr).mean(axis=-1) ** (1.0 / r)
        right = 2.0 * w2 / (2.0 * blk.side * w.grid.h) ** n
        lhs.append(left[ok])
        rhs.append(right[ok])
        side.append(np.full(int(ok.sum()), blk.side))
        level.append(np.full(int(ok.sum()), blk.lattice))
    return CheckReport(
        "reverse_holder",
        np.concatenate(lhs) if lhs else np.zeros(0),
        np.concatenate(rhs) if rhs else np.zeros(0),
        params={"side_cells": np.concatenate(side) if side else np.zeros(0),
                "lattice": np.concatenate(level) if level else np.zeros(0)},
        bound=1.0 + tol,
        notes=f"r(w) = {r!r}",
    )


def subset_decay_check(w: Weight, trials: int = 10_000, seed: int = 0,
                       mode: str = "shifted") -> CheckReport:
    """Fit the smallest c with w(E)/w(Q) <= 2 (|E|/|Q|)^(1/(c [w]_A_inf)) over random (Q, E)."""
    rng = np.random.default_rng(seed)
    fw = fujii_wilson(w, mode)
    blocks = [b for b in family_blocks(w.grid, mode) if b.side > 1]
    rho = np.empty(trials)
    omega = np.empty(trials)
    for t in range(trials):
        blk = blocks[rng.integers(len(blocks))]
        q = tuple(int(rng.integers(c)) for c in blk.count)
        Q = blk.cube(q)
        vals = Q.restrict(w.values).ravel()
        density = rng.random()
        E = rng.random(vals.size) < density
        rho[t] = E.sum() / vals.size
        omega[t] = vals[E].sum() / vals.sum()
    need = np.zeros(trials)
    sel = (rho > 0) & (rho < 1) & (omega > 0)
    need[sel] = np.log(rho[sel]) / (fw * np.log(omega[sel] / 2.0))
    c = float(need.max()) if trials else 0.0
    # report at the fitted c: lhs = w(E)/w(Q), rhs = 2 rho^(1/(c fw))
    expo = 1.0 / (c * fw) if c > 0 else np.inf
    with np.errstate(divide="ignore"):
        rhs = 2.0 * np.where(rho > 0, rho**expo if np.isfinite(expo) else (rho >= 1).astype(float), 0.0)
    return CheckReport("subset_decay", omega, rhs, params={"rho": rho}, constant=c,
                       notes=f"fitted c; [w]_Ainf = {fw!r}")

